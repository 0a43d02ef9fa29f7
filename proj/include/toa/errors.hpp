#ifndef TOA_ERRORS_HPP
#define TOA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace toa {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Momentum-grid problems: coverage violations, size-cap refusals.
class grid_error : public error {
public:
    using error::error;
};

// A grid too coarse for the requested oscillation; refused instead of aliased.
class nyquist_error : public error {
public:
    using error::error;
};

// Phase undefined: modulus underflow inside the support window.
class phase_error : public error {
public:
    using error::error;
};

// Stationary-point search failures: tau = 0, no sign change, degenerate point.
class stationary_error : public error {
public:
    using error::error;
};

// Inadequate or malformed tau window.
class window_error : public error {
public:
    using error::error;
};

// Refusals from validity guards (edge decay, small-p divergence, opaque barrier).
class guard_error : public error {
public:
    using error::error;
};

// Unexpected numerical garbage (NaN, excessive imaginary residue).
class numeric_error : public error {
public:
    using error::error;
};

// Scenario-configuration parse or validation failure.
class config_error : public error {
public:
    using error::error;
};

class io_error : public error {
public:
    using error::error;
};

}  // namespace toa

#endif
