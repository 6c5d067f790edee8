#pragma once

#include <functional>

#include "eisen/geometry.hpp"
#include "eisen/types.hpp"

namespace eisen::eisenstein {

struct EvaluationPoint {
    double x;
    double y;      // > 0
    double theta;  // [0, 2pi)
};

struct EvalResult {
    cplx value;
    double abs_error = 0.0;
    long terms_used = 0;
};

struct EvaluatorConfig {
    int fourier_modes = 0;      // 0 = choose automatically
    double lattice_cutoff = 0;  // 0 = choose from tol (oracles only)
    double tol = 1e-10;

    void validate() const {
        if (fourier_modes < 0 || !(tol > 0))
            throw std::invalid_argument("EvaluatorConfig: modes >= 0, tol > 0");
    }
};

// Full lattice sum e^{in theta} y^s sum_{(c,d) != 0} u^n |cz+d|^{-2s} with
// u = (cz+d)/|cz+d|; absolutely convergent for Re s > 1. Tail bound by
// packing/integral comparison.
EvalResult lattice_sum_oracle(const EvaluationPoint& p, int n, cplx s,
                              const EvaluatorConfig& cfg = {});

// Same sum over gcd(c,d) = 1, one representative per +-(c,d), including the
// (0,1) term y^s. This is the constant-term-normalized series for Re s > 1.
EvalResult coprime_sum_oracle(const EvaluationPoint& p, int n, cplx s,
                              const EvaluatorConfig& cfg = {});

// Constant-term-normalized weight-n level-1 series by its Fourier-Whittaker
// expansion; usable on and off the critical line (|Re s - 1/2| <= 1.5).
EvalResult eval_level1(const EvaluationPoint& p, int n, cplx s,
                       const EvaluatorConfig& cfg = {});

// Level-q series at general s via the divisor reduction to level 1.
EvalResult eval_levelq_s(long long q, const geometry::Cusp& a, const EvaluationPoint& p,
                         int n, cplx s, const EvaluatorConfig& cfg = {});

// Critical-line wrapper, s = 1/2 + it.
EvalResult eval_levelq(long long q, const geometry::Cusp& a, const EvaluationPoint& p,
                       int n, double t, const EvaluatorConfig& cfg = {});

// Constant term of E_{a,n} at cusp b in zone coordinates:
// e^{in theta} (delta_{ab} y^s + phi_{ab}(s) alpha(n,s) y^{1-s}).
cplx constant_term(long long q, const geometry::Cusp& a, const geometry::Cusp& b,
                   int n, double t, double y, double theta);
cplx constant_term_s(long long q, const geometry::Cusp& a, const geometry::Cusp& b,
                     int n, cplx s, double y, double theta);

// Trapezoid extraction of the m-th x-Fourier coefficient of a 1-periodic
// evaluator; spectrally accurate for smooth integrands.
cplx fourier_coefficient_numeric(const std::function<cplx(const EvaluationPoint&)>& f,
                                 int m, double y, double theta, int quad_points);

// 1 + y^{1/2} sum_{0 < |cz+d|^2 <= X} |cz+d|^{-1}, X = (1+|t|+|n|)^{1+eps}.
double afe_majorant(const EvaluationPoint& p, int n, double t, double eps);

// #{(c,d) != 0 : |cz+d|^2 <= X}.
long long count_lattice_points(const EvaluationPoint& p, double X);

// Numerical raising operator R = e^{2 i theta}(i y d_x + y d_y + (1/2i) d_theta),
// central differences with step h.
cplx raising_operator_numeric(const std::function<cplx(const EvaluationPoint&)>& f,
                              const EvaluationPoint& p, double h);

}  // namespace eisen::eisenstein
