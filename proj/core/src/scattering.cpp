#include "eisen/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "eisen/specfun.hpp"

namespace eisen::scattering {

namespace sf = eisen::specfun;

CMatrix CMatrix::mul(const CMatrix& o) const {
    CMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            cplx v = at(i, k);
            if (v == cplx(0)) continue;
            for (int j = 0; j < n; ++j) r.at(i, j) += v * o.at(k, j);
        }
    return r;
}

CMatrix CMatrix::conj_transpose() const {
    CMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.at(i, j) = std::conj(at(j, i));
    return r;
}

CMatrix CMatrix::identity(int dim) {
    CMatrix r(dim);
    for (int i = 0; i < dim; ++i) r.at(i, i) = 1.0;
    return r;
}

double CMatrix::max_norm_minus_identity() const {
    double m = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m = std::max(m, std::abs(at(i, j) - (i == j ? cplx(1) : cplx(0))));
    return m;
}

double CMatrix::max_abs_asymmetry() const {
    double m = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m = std::max(m, std::abs(at(i, j) - at(j, i)));
    return m;
}

SfResult psi_general(cplx s, const PrecisionConfig& cfg) {
    if (s == cplx(0.5, 0.0)) throw PoleError("psi: removable singularity at s = 1/2; use the limit");
    SfResult znum = sf::zeta(2.0 * s - 1.0, cfg);
    SfResult zden = sf::zeta(2.0 * s, cfg);
    cplx gr = std::exp(sf::log_gamma(s - 0.5) - sf::log_gamma(s));
    cplx v = std::sqrt(kPi) * gr * znum.value / zden.value;
    double rel = znum.abs_error / std::abs(znum.value) + zden.abs_error / std::abs(zden.value) + 5e-15;
    return {v, std::abs(v) * rel};
}

SfResult psi_factor(double t, const PrecisionConfig& cfg) {
    if (t == 0.0) throw PoleError("psi_factor: t = 0 is the limit point; use psi_factor_limit_at_half");
    if (std::abs(t) < 1e-8)
        throw ConditioningError("psi_factor: |t| too small for direct evaluation", std::abs(t));
    return psi_general(cplx(0.5, t), cfg);
}

cplx psi_factor_limit_at_half() {
    // Gamma(it) ~ 1/(it) and zeta(1+2it) ~ 1/(2it); with zeta(0) = -1/2 the
    // residues cancel to -1.
    return cplx(-1.0, 0.0);
}

SfResult psi_log_deriv_s(cplx s, const PrecisionConfig& cfg) {
    SfResult za = sf::zeta_log_deriv(2.0 * s - 1.0, cfg);
    SfResult zb = sf::zeta_log_deriv(2.0 * s, cfg);
    cplx v = sf::digamma(s - 0.5) - sf::digamma(s) + 2.0 * za.value - 2.0 * zb.value;
    return {v, 2.0 * za.abs_error + 2.0 * zb.abs_error + 1e-13};
}

cplx alpha(int n, cplx s) {
    if (n % 2 != 0) throw DomainError("alpha: weight must be even");
    int half = std::abs(n) / 2;
    cplx r(1.0);
    for (int k = 0; k < half; ++k) {
        cplx den = s + double(k);
        if (std::abs(den) < 1e-300) throw PoleError("alpha: pole at s = -" + std::to_string(k));
        r *= (1.0 - s + double(k)) / den;
    }
    return r;
}

cplx alpha_s_derivative(int n, cplx s) {
    int half = std::abs(n) / 2;
    cplx sum(0.0);
    for (int k = 0; k < half; ++k) {
        cplx den = (1.0 - s + double(k)) * (s + double(k));
        if (std::abs(den) < 1e-300) throw PoleError("alpha_s_derivative: pole");
        sum += double(1 + 2 * k) / den;
    }
    return -alpha(n, s) * sum;
}

cplx alpha_t_derivative(int n, double t) {
    return cplx(0.0, 1.0) * alpha_s_derivative(n, cplx(0.5, t));
}

CMatrix local_factor(long long p, cplx s) {
    cplx p2s = std::exp(2.0 * s * std::log(double(p)));
    if (std::abs(p2s - 1.0) < 1e-14) throw PoleError("local_factor: p^{2s} = 1");
    cplx ps = std::exp(s * std::log(double(p)));
    cplx p1s = double(p) / ps;  // p^{1-s}
    CMatrix m(2);
    cplx inv = 1.0 / (p2s - 1.0);
    m.at(0, 0) = m.at(1, 1) = (double(p) - 1.0) * inv;
    m.at(0, 1) = m.at(1, 0) = (ps - p1s) * inv;
    return m;
}

ScatteringMatrix scattering_matrix(long long q, cplx s, const PrecisionConfig& cfg,
                                   cplx psi_perturbation) {
    if (!geometry::is_squarefree(q)) throw DomainError("scattering_matrix: level must be squarefree");
    cplx psi;
    double psi_err = 0;
    if (s == cplx(0.5, 0.0)) {
        psi = psi_factor_limit_at_half();
    } else {
        SfResult r = psi_general(s, cfg);
        psi = r.value;
        psi_err = r.abs_error;
    }
    psi += psi_perturbation;

    auto primes = geometry::prime_factors(q);
    CMatrix m(1);
    m.at(0, 0) = psi;
    for (long long p : primes) {
        CMatrix f = local_factor(p, s);
        CMatrix m2(m.n * 2);
        for (int i = 0; i < m.n; ++i)
            for (int j = 0; j < m.n; ++j)
                for (int bi = 0; bi < 2; ++bi)
                    for (int bj = 0; bj < 2; ++bj)
                        m2.at(i + bi * m.n, j + bj * m.n) = m.at(i, j) * f.at(bi, bj);
        m = std::move(m2);
    }

    // reindex from prime-bit order to divisor-sorted order
    auto cusps = geometry::cusps_of_level(q);
    int dim = int(cusps.size());
    std::vector<int> bit_index(dim);
    for (int i = 0; i < dim; ++i) {
        int idx = 0;
        for (size_t k = 0; k < primes.size(); ++k)
            if (cusps[i].divisor % primes[k] == 0) idx |= (1 << k);
        bit_index[i] = idx;
    }
    CMatrix out(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) out.at(i, j) = m.at(bit_index[i], bit_index[j]);
    (void)psi_err;
    return {q, s, cusps, out};
}

namespace {

enum class PrimeClass { Matched, Mixed };

PrimeClass classify_prime(long long p, long long va, long long vb) {
    bool ia = (va % p == 0), ib = (vb % p == 0);
    return (ia == ib) ? PrimeClass::Matched : PrimeClass::Mixed;
}

}  // namespace

SfResult phi_entry(long long q, const geometry::Cusp& a, const geometry::Cusp& b, cplx s,
                   const PrecisionConfig& cfg) {
    SfResult psi = (s == cplx(0.5, 0.0)) ? SfResult{psi_factor_limit_at_half(), 0.0}
                                         : psi_general(s, cfg);
    cplx v = psi.value;
    for (long long p : geometry::prime_factors(q)) {
        cplx p2s = std::exp(2.0 * s * std::log(double(p)));
        if (std::abs(p2s - 1.0) < 1e-14) throw PoleError("phi_entry: p^{2s} = 1");
        cplx num;
        if (classify_prime(p, a.divisor, b.divisor) == PrimeClass::Matched) {
            num = double(p) - 1.0;
        } else {
            cplx ps = std::exp(s * std::log(double(p)));
            num = ps - double(p) / ps;
        }
        v *= num / (p2s - 1.0);
    }
    return {v, std::abs(v) * (psi.abs_error / std::max(1e-300, std::abs(psi.value)) + 1e-14)};
}

SfResult phi_entry_s_derivative(long long q, const geometry::Cusp& a, const geometry::Cusp& b,
                                cplx s, const PrecisionConfig& cfg) {
    SfResult phi = phi_entry(q, a, b, s, cfg);
    SfResult psil = psi_log_deriv_s(s, cfg);
    cplx logd = psil.value;
    for (long long p : geometry::prime_factors(q)) {
        double lp = std::log(double(p));
        cplx p2s = std::exp(2.0 * s * lp);
        logd -= 2.0 * lp * p2s / (p2s - 1.0);
        if (classify_prime(p, a.divisor, b.divisor) == PrimeClass::Mixed) {
            cplx ps = std::exp(s * lp);
            cplx p1s = double(p) / ps;
            logd += lp * (ps + p1s) / (ps - p1s);
        }
    }
    cplx v = phi.value * logd;
    return {v, std::abs(v) * 1e-11 + phi.abs_error * std::abs(logd) + psil.abs_error * std::abs(phi.value)};
}

SfResult phi_entry_t_derivative(long long q, const geometry::Cusp& a, const geometry::Cusp& b,
                                double t, const PrecisionConfig& cfg) {
    if (t == 0.0) throw DomainError("phi_entry_t_derivative: t must be nonzero");
    SfResult d = phi_entry_s_derivative(q, a, b, cplx(0.5, t), cfg);
    return {cplx(0.0, 1.0) * d.value, d.abs_error};
}

}  // namespace eisen::scattering
