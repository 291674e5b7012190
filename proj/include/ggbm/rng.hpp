#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace ggbm {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}
} // namespace detail

// xoshiro256++ with splitmix64 seeding. Each (seed, stream) pair yields an
// independent deterministic stream, so parallel path simulation is
// reproducible regardless of the thread count.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}

    Rng(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
        for (auto& w : state_) w = detail::splitmix64(sm);
        bool all_zero = true;
        for (auto w : state_) all_zero = all_zero && w == 0;
        if (all_zero) state_[0] = 1;
    }

    static Rng for_path(std::uint64_t seed, std::uint64_t path_index) {
        return Rng(seed, path_index);
    }

    std::uint64_t next_u64() {
        auto& s = state_;
        std::uint64_t result = detail::rotl(s[0] + s[3], 23) + s[0];
        std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = detail::rotl(s[3], 45);
        return result;
    }

    // Uniform on the open interval (0, 1): 53-bit mantissa shifted off 0.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    // Standard normal via Box-Muller with a cached spare (deterministic
    // consumption of exactly two uniforms per pair).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        double rad = std::sqrt(-2.0 * std::log(u1));
        double ang = 6.283185307179586476925286766559 * u2;
        spare_ = rad * std::sin(ang);
        have_spare_ = true;
        return rad * std::cos(ang);
    }

    // Exponential(1).
    double exponential() { return -std::log(uniform01()); }

private:
    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace ggbm
