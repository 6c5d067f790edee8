#pragma once

#include <vector>

#include "eisen/geometry.hpp"
#include "eisen/types.hpp"

namespace eisen::scattering {

struct SpectralParameter {
    double t;
    int n;          // even weight
    long long q;    // squarefree level

    cplx s() const { return {0.5, t}; }
    double lambda() const { return 0.25 + t * t; }

    void validate() const {
        if (n % 2 != 0) throw DomainError("SpectralParameter: weight must be even");
        if (!geometry::is_squarefree(q)) throw DomainError("SpectralParameter: level must be squarefree");
    }
};

// Small dense complex matrix, row-major; dimension 2^omega(q) <= 16 here.
struct CMatrix {
    int n = 0;
    std::vector<cplx> a;

    CMatrix() = default;
    explicit CMatrix(int dim) : n(dim), a(size_t(dim) * dim, cplx(0)) {}
    cplx& at(int i, int j) { return a[size_t(i) * n + j]; }
    const cplx& at(int i, int j) const { return a[size_t(i) * n + j]; }

    CMatrix mul(const CMatrix& o) const;
    CMatrix conj_transpose() const;
    static CMatrix identity(int dim);
    double max_norm_minus_identity() const;
    double max_abs_asymmetry() const;
};

struct ScatteringMatrix {
    long long level;
    cplx s;
    std::vector<geometry::Cusp> cusps;  // divisor order, matches row/col indexing
    CMatrix entries;
};

// psi at general complex s (completed-zeta form); restricts on the critical
// line to sqrt(pi) Gamma(it) zeta(2it) / (Gamma(1/2+it) zeta(1+2it)).
SfResult psi_general(cplx s, const PrecisionConfig& cfg = {});

// psi(1/2 + it) on the critical line; t = 0 is a removable limit handled by
// psi_factor_limit_at_half. |t| < 1e-8 raises ConditioningError.
SfResult psi_factor(double t, const PrecisionConfig& cfg = {});

// lim_{t->0} psi(1/2+it); the simple poles of Gamma(it) and zeta(1+2it)
// cancel to -1.
cplx psi_factor_limit_at_half();

// d/ds log psi(s) = digamma(s-1/2) - digamma(s) + 2 z'/z(2s-1) - 2 z'/z(2s).
SfResult psi_log_deriv_s(cplx s, const PrecisionConfig& cfg = {});

// alpha(n, s) = prod_{k=0}^{|n|/2-1} (1-s+k)/(s+k); empty product for n = 0.
cplx alpha(int n, cplx s);

// d/ds alpha = -alpha * sum_k (1+2k)/((1-s+k)(s+k)).
cplx alpha_s_derivative(int n, cplx s);

// d/dt alpha(n, 1/2+it) = i * alpha_s_derivative.
cplx alpha_t_derivative(int n, double t);

// N_p(s) = (p^{2s}-1)^{-1} [[p-1, p^s-p^{1-s}], [p^s-p^{1-s}, p-1]].
CMatrix local_factor(long long p, cplx s);

// Phi(s) = psi(s) (x)_{p|q} N_p(s); rows/cols reindexed to divisor order.
// psi_perturbation is a fault-injection hook used by the harness.
ScatteringMatrix scattering_matrix(long long q, cplx s, const PrecisionConfig& cfg = {},
                                   cplx psi_perturbation = cplx(0));

// Closed-form entry phi_{a,b}(s); must match the tensor-product entry.
SfResult phi_entry(long long q, const geometry::Cusp& a, const geometry::Cusp& b, cplx s,
                   const PrecisionConfig& cfg = {});

// d/ds phi_{a,b}(s), assembled from the analytic log-derivative.
SfResult phi_entry_s_derivative(long long q, const geometry::Cusp& a, const geometry::Cusp& b,
                                cplx s, const PrecisionConfig& cfg = {});

// d/dt phi_{a,b}(1/2 + it) = i * phi_entry_s_derivative.
SfResult phi_entry_t_derivative(long long q, const geometry::Cusp& a, const geometry::Cusp& b,
                                double t, const PrecisionConfig& cfg = {});

}  // namespace eisen::scattering
