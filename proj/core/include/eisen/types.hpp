#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace eisen {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Every quadrature/series-backed operation returns its value together with an
// absolute error bound so callers can propagate accuracy through formulas.
struct SfResult {
    cplx value;
    double abs_error = 0.0;
};

struct PrecisionConfig {
    double target_abs_tol = 1e-13;
    double target_rel_tol = 1e-12;
    int max_terms = 200000;

    void validate() const {
        if (!(target_abs_tol > 0) || !(target_rel_tol > 0) || max_terms < 1)
            throw std::invalid_argument("PrecisionConfig: tolerances must be positive, max_terms >= 1");
    }
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct PoleError : DomainError {
    using DomainError::DomainError;
};

// Requested accuracy could not be certified.
struct AccuracyError : std::runtime_error {
    double achieved;
    explicit AccuracyError(const std::string& what, double achieved_tol = 0.0)
        : std::runtime_error(what), achieved(achieved_tol) {}
};

// Result is dominated by a nearly-singular denominator; carries its magnitude.
struct ConditioningError : AccuracyError {
    double denominator_magnitude;
    ConditioningError(const std::string& what, double denom_mag)
        : AccuracyError(what), denominator_magnitude(denom_mag) {}
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace eisen
