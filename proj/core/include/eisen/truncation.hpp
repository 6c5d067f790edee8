#pragma once

#include "eisen/eisenstein.hpp"
#include "eisen/geometry.hpp"
#include "eisen/types.hpp"

namespace eisen::truncation {

struct TruncationPolicy {
    double base_T;
    double boosted_T;
    TruncationPolicy();

    double T_for_height(double h) const;
};

double truncation_T_for_height(double h);

enum class NormMethod { ClosedForm, Quadrature };

struct NormEstimate {
    double value;
    double abs_error;
    NormMethod method;
};

// Lambda^T E_{a,n}: the series itself below height T, the series minus its
// zone constant term above.
eisenstein::EvalResult truncated_eval(long long q, const geometry::Cusp& a, int n, double t,
                                      const eisenstein::EvaluationPoint& p, double T,
                                      const eisenstein::EvaluatorConfig& cfg = {});

// ||Lambda^T E_{a,n}(., 1/2+it)||^2 in closed form:
//   2 log T - sum_b (d/ds)(alpha phi_{ab}) conj(alpha phi_{ab})
//           + [conj(w) T^{2it} - w T^{-2it}] / (2it),  w = alpha phi_{aa}.
// The t -> 0 limit is 0 (E vanishes identically at the central point).
double maass_selberg_closed_form(long long q, const geometry::Cusp& a, int n, double t, double T);

struct QuadratureConfig {
    int x_panels = 10;
    int y_panels = 8;
    double y_split = 3.2;     // translate pieces cut here; zone strips take over
    double mode_eta_hi = 4.0; // numeric mode integration stops here
    int mode_x_points = 32;
    double tol = 1e-4;
};

// Independent fundamental-domain quadrature of the same norm; supported for
// q in {1, 2, 3}.
NormEstimate p_norm_quadrature(long long q, const geometry::Cusp& a, int n, double t, double T,
                               const QuadratureConfig& qcfg = {},
                               const eisenstein::EvaluatorConfig& cfg = {});

// Maass-Selberg value over (1 + log(1+|n/2|) + log(1+|t|)).
double norm_bound_ratio(long long q, const geometry::Cusp& a, int n, double t);

// I(V) = int_1^V |1 + y^{-2it} alpha phi_{aa}|^2 dy/y in closed form.
double constant_term_integral(double V, long long q, const geometry::Cusp& a, int n, double t);

// sup over y in [1, V] of |1 + y^{-2it} alpha phi_{aa}|, from the attained
// argument range of -2t log y.
double constant_term_sup(double V, long long q, const geometry::Cusp& a, int n, double t);

struct RatioCheck {
    double ratio;
    bool degenerate;  // I(T) = 0 within tolerance
};
RatioCheck constant_term_ratio_check(long long q, const geometry::Cusp& a, int n, double t,
                                     double T, double Tprime);

enum class LowerBoundRegime { SmallT, MidT, LargeT, DegenerateCentral };

struct RegimeReport {
    double surrogate;   // I(T) + (1 - |phi_aa|)
    LowerBoundRegime regime;
    double target;      // 1 or t^2 per regime
    double ratio;       // surrogate / target (0/0 -> 1 for the degenerate point)
    bool pass;          // ratio >= 0.05
};
RegimeReport p_norm_lower_bound_check(long long q, const geometry::Cusp& a, int n, double t);

}  // namespace eisen::truncation
