#pragma once

#include <stdexcept>
#include <string>

namespace ggbm {

// Base class for all library errors. Messages are single-line and prefixed
// with the area they come from ("kernels: ...", "lapinv: ...") so the CLI can
// surface them machine-parsably.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid parameters or misuse of an operation (maps to CLI exit code 2).
class domain_error : public error {
public:
    explicit domain_error(const std::string& msg) : error(msg) {}
};

// Numerical failure: non-convergence, overflow of the representable range,
// inversion admissibility violations (maps to CLI exit code 3).
class numeric_error : public error {
public:
    explicit numeric_error(const std::string& msg) : error(msg) {}
};

// A density grid could not reach the required mass within its expansion cap,
// or produced an inadmissible density.
class grid_error : public numeric_error {
public:
    explicit grid_error(const std::string& msg) : numeric_error(msg) {}
};

// Raised when a pointwise density value is requested for a kernel whose
// operational-time law is a point mass (the Standard kernel: h(u,t)=delta(u-t)).
// Callers that can handle the degenerate branch catch this or test the kernel
// family up front; the message names the atom location.
class degenerate_density : public domain_error {
public:
    explicit degenerate_density(const std::string& msg) : domain_error(msg) {}
};

// Calibration-specific failure (flat objective, empty bracket misuse).
class calibration_error : public numeric_error {
public:
    explicit calibration_error(const std::string& msg) : numeric_error(msg) {}
};

// File/format problems (maps to CLI exit code 4).
class io_error : public error {
public:
    explicit io_error(const std::string& msg) : error(msg) {}
};

} // namespace ggbm
