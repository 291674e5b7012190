#include "ggbm/parallel.hpp"

#include "ggbm/errors.hpp"

#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ggbm {

int resolve_threads(int requested) {
    int n = requested;
    if (n <= 0) {
        if (const char* env = std::getenv("GGBM_THREADS")) {
            try {
                n = std::stoi(env);
            } catch (const std::exception&) {
                throw domain_error("parallel: GGBM_THREADS is not an integer");
            }
        }
    }
    if (n <= 0) n = 1;
    if (n > 256) n = 256;
    return n;
}

void parallel_for(std::int64_t n, int threads,
                  const std::function<void(std::int64_t, std::int64_t)>& block_fn) {
    if (n <= 0) return;
    if (threads > n) threads = static_cast<int>(n);
    if (threads <= 1) {
        block_fn(0, n);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(static_cast<size_t>(threads));
    std::exception_ptr first_error = nullptr;
    std::mutex error_mutex;
    for (int w = 0; w < threads; ++w) {
        std::int64_t begin = n * w / threads;
        std::int64_t end = n * (w + 1) / threads;
        workers.emplace_back([&, begin, end]() {
            try {
                block_fn(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lk(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : workers) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

double pairwise_sum(const double* data, std::size_t n) {
    if (n <= 64) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

} // namespace ggbm
