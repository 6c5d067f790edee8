#include "eisen/eisenstein.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "eisen/scattering.hpp"
#include "eisen/specfun.hpp"

namespace eisen::eisenstein {

namespace sf = eisen::specfun;
namespace geom = eisen::geometry;
namespace scat = eisen::scattering;

namespace {

constexpr double kTwoPi = 2.0 * kPi;

// u^n for |u| = 1 by repeated squaring; u^{-1} = conj(u).
cplx unit_pow(cplx u, long n) {
    if (n < 0) { u = std::conj(u); n = -n; }
    cplx r(1.0), b = u;
    while (n > 0) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

cplx cpow_real(double base, cplx e) { return std::exp(e * std::log(base)); }

double shortest_vector_norm(cplx z) {
    double best = 1e300;
    for (long c = -2; c <= 2; ++c)
        for (long d = -2; d <= 2; ++d) {
            if (c == 0 && d == 0) continue;
            best = std::min(best, std::abs(double(c) * z + double(d)));
        }
    return best;
}

// sum over lattice points with |cz+d| > R of |cz+d|^{-2 sigma}, bounded by a
// disk-packing comparison with the integral.
double lattice_tail_bound(cplx z, double R, double sigma) {
    double ell = shortest_vector_norm(z);
    double r0 = std::max(R - ell, ell);
    double a = (8.0 / (ell * ell)) *
               (std::pow(r0, 2.0 - 2.0 * sigma) / (2.0 * sigma - 2.0) +
                (ell / 2.0) * std::pow(r0, 1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0));
    return a;
}

struct LatticeSumSpec {
    bool coprime_half = false;  // gcd = 1, one representative per +-
};

// ---- Euler-Maclaurin machinery for the shifted one-dimensional sums ----
// term(u) = u^a conj(u)^b with a = n/2 - s, b = -n/2 - s; Im(u) fixed != 0.

struct PowPair {
    cplx a, b;
    cplx f(cplx u) const { return std::exp(a * std::log(u) + b * std::log(std::conj(u))); }
    cplx f1(cplx u) const {  // d/dx along real shifts
        return a * std::exp((a - 1.0) * std::log(u) + b * std::log(std::conj(u))) +
               b * std::exp(a * std::log(u) + (b - 1.0) * std::log(std::conj(u)));
    }
    cplx f3(cplx u) const {
        cplx lu = std::log(u), lv = std::log(std::conj(u));
        cplx t0 = a * (a - 1.0) * (a - 2.0) * std::exp((a - 3.0) * lu + b * lv);
        cplx t1 = 3.0 * a * (a - 1.0) * b * std::exp((a - 2.0) * lu + (b - 1.0) * lv);
        cplx t2 = 3.0 * a * b * (b - 1.0) * std::exp((a - 1.0) * lu + (b - 2.0) * lv);
        cplx t3 = b * (b - 1.0) * (b - 2.0) * std::exp(a * lu + (b - 3.0) * lv);
        return t0 + t1 + t2 + t3;
    }
};

// 16-point Gauss-Legendre nodes on [0, 1]
constexpr std::array<double, 16> kGL16x = {
    0.005299532504175031, 0.027712488463383712, 0.06718439880608412, 0.12229779582249845,
    0.19106187779867811,  0.27099161117138630,  0.35919822461037054, 0.45249374508118123,
    0.54750625491881877,  0.64080177538962946,  0.72900838882861370, 0.80893812220132189,
    0.87770220417750155,  0.93281560119391588,  0.97228751153661629, 0.99470046749582497};
constexpr std::array<double, 16> kGL16w = {
    0.013576229705877047, 0.031126761969323946, 0.047579255841246392, 0.062314485627766936,
    0.074797994408288368, 0.084578259697501269, 0.091301707522461794, 0.094725305227534248,
    0.094725305227534248, 0.091301707522461794, 0.084578259697501269, 0.074797994408288368,
    0.062314485627766936, 0.047579255841246392, 0.031126761969323946, 0.013576229705877047};

// int_D^infty (w + x)^a (conj w + x)^b dx via x = D + S (1 - rho^2)/rho^2
cplx pow_tail_integral(const PowPair& pp, cplx w, double D) {
    double S = std::max(1.0, D);
    cplx acc(0.0);
    const int panels = 6;
    for (int pnl = 0; pnl < panels; ++pnl) {
        double r0 = double(pnl) / panels, r1 = double(pnl + 1) / panels;
        for (int i = 0; i < 16; ++i) {
            double rho = r0 + (r1 - r0) * kGL16x[i];
            if (rho < 1e-14) continue;
            double x = D + S * (1.0 - rho * rho) / (rho * rho);
            double jac = 2.0 * S / (rho * rho * rho);
            acc += kGL16w[i] * (r1 - r0) * pp.f(w + x) * jac;
        }
    }
    return acc;
}

// S_n(zeta; s) = sum_{k in Z} (zeta + k)^a (conj zeta + k)^b, Im zeta != 0.
cplx shifted_line_sum(cplx zeta, const PowPair& pp) {
    long k0 = std::lround(-zeta.real());
    const int K = 36;
    cplx acc(0.0);
    for (long k = k0 - K; k <= k0 + K; ++k) acc += pp.f(zeta + double(k));
    // Euler-Maclaurin tails on both sides
    {
        double D = double(k0 + K + 1);
        cplx u = zeta + D;
        acc += pow_tail_integral(pp, zeta, D) + 0.5 * pp.f(u) - pp.f1(u) / 12.0 +
               pp.f3(u) / 720.0;
    }
    {
        // left tail via k -> -k: terms (zeta - k), same pair with conjugated roles
        double D = double(-(k0 - K - 1));
        cplx w = -zeta;  // (zeta - k) = -( (-zeta) + k ), n even kills the sign
        cplx u = w + D;
        acc += pow_tail_integral(pp, w, D) + 0.5 * pp.f(u) - pp.f1(u) / 12.0 +
               pp.f3(u) / 720.0;
    }
    return acc;
}

// closed form of int (v+i)^a (v-i)^b dv = pi 2^{2-2s} Gamma(2s-1)/(Gamma(s-n/2) Gamma(s+n/2))
cplx line_integral_constant(int n, cplx s) {
    cplx log_num = std::log(kPi) + (2.0 - 2.0 * s) * std::log(2.0) + sf::log_gamma(2.0 * s - 1.0);
    cplx la, lb;
    try {
        la = sf::log_gamma(s - double(n) / 2.0);
        lb = sf::log_gamma(s + double(n) / 2.0);
    } catch (const PoleError&) {
        return cplx(0.0);  // 1/Gamma vanishes at the pole
    }
    return std::exp(log_num - la - lb);
}

// accelerated evaluation: per-row sums by Euler-Maclaurin, row tail replaced
// by its integral main term with the exact c-Dirichlet series; the remainder
// beyond the main terms is exponentially small in C y. The coprime rows are
// G(z)/zeta(2s) with G(z) = sum_{c>0} S_n(c z), an exact rearrangement.
EvalResult lattice_sum_em(const EvaluationPoint& p, int n, cplx s,
                          const EvaluatorConfig& cfg, LatticeSumSpec spec) {
    cplx z(p.x, p.y);
    PowPair pp{double(n) / 2.0 - s, -double(n) / 2.0 - s};
    long C = long(std::ceil(std::max(24.0, 30.0 / p.y)));
    (void)cfg;

    cplx G(0.0);
    long terms = 0;
    for (long c = 1; c <= C; ++c) {
        G += shifted_line_sum(double(c) * z, pp);
        terms += 2 * 36 + 2;
    }
    cplx An = line_integral_constant(n, s);
    cplx series = sf::zeta(2.0 * s - 1.0).value;
    for (long c = 1; c <= C; ++c) series -= std::exp((1.0 - 2.0 * s) * std::log(double(c)));
    G += An * std::exp((1.0 - 2.0 * s) * std::log(p.y)) * series;

    cplx acc;
    if (spec.coprime_half) {
        acc = 1.0 + G / sf::zeta(2.0 * s).value;  // 1 is the (0,1) term
    } else {
        acc = 2.0 * sf::zeta(2.0 * s).value + 2.0 * G;
    }
    cplx pref = cpow_real(p.y, s) * std::polar(1.0, double(n) * p.theta);
    double err = std::abs(pref) *
                 (std::abs(acc) * 2e-11 + 2.0 * std::exp(-2.0 * kPi * double(C) * p.y));
    return {pref * acc, err, terms};
}

EvalResult lattice_sum_impl(const EvaluationPoint& p, int n, cplx s,
                            const EvaluatorConfig& cfg, LatticeSumSpec spec) {
    cfg.validate();
    if (n % 2 != 0) throw DomainError("lattice sum: weight must be even");
    if (s.real() <= 1.05)
        throw DomainError("lattice sum: outside region of absolute convergence (Re s <= 1.05)");
    if (!(p.y > 0)) throw DomainError("lattice sum: y must be positive");

    if (cfg.lattice_cutoff <= 0) return lattice_sum_em(p, n, s, cfg, spec);

    // plain cutoff mode: partial sum over |cz+d| <= R plus a packing tail bound
    cplx z(p.x, p.y);
    double sigma = s.real();
    double R = cfg.lattice_cutoff;
    double R2 = R * R;

    cplx acc(0.0);
    long terms = 0;
    long cmax = long(std::floor(R / p.y)) + 1;
    long clo = spec.coprime_half ? 0 : -cmax;
    for (long c = clo; c <= cmax; ++c) {
        double cy = double(c) * p.y;
        if (cy * cy > R2) continue;
        double rad = std::sqrt(std::max(0.0, R2 - cy * cy));
        long dlo = long(std::floor(-double(c) * p.x - rad));
        long dhi = long(std::ceil(-double(c) * p.x + rad));
        for (long d = dlo; d <= dhi; ++d) {
            if (c == 0 && d == 0) continue;
            if (spec.coprime_half) {
                if (c == 0 && d != 1) continue;  // (0,1) only
                if (c > 0 && std::gcd(std::abs(c), std::abs(d)) != 1) continue;
            }
            cplx u = double(c) * z + double(d);
            double norm2 = std::norm(u);
            if (norm2 > R2) continue;
            double au = std::sqrt(norm2);
            cplx term = unit_pow(u / au, n) * std::exp(-s * std::log(norm2));
            acc += term;
            ++terms;
        }
    }
    double tail = lattice_tail_bound(z, R, sigma);
    cplx pref = cpow_real(p.y, s) * std::polar(1.0, double(n) * p.theta);
    return {pref * acc, std::abs(pref) * tail, terms};
}

// divisor sum sigma_e(m) = sum_{d|m} d^e for complex e
cplx divisor_sigma(long m, cplx e) {
    cplx acc(0.0);
    for (long d = 1; d * d <= m; ++d) {
        if (m % d != 0) continue;
        acc += cpow_real(double(d), e);
        long q = m / d;
        if (q != d) acc += cpow_real(double(q), e);
    }
    return acc;
}

std::vector<long long> divisors_of(long long v) {
    std::vector<long long> out;
    for (long long d = 1; d <= v; ++d)
        if (v % d == 0) out.push_back(d);
    return out;
}

int moebius(long long v) {
    int m = 1;
    for (long long p = 2; p * p <= v; ++p) {
        if (v % p == 0) {
            v /= p;
            if (v % p == 0) return 0;
            m = -m;
        }
    }
    if (v > 1) m = -m;
    return m;
}

}  // namespace

EvalResult lattice_sum_oracle(const EvaluationPoint& p, int n, cplx s,
                              const EvaluatorConfig& cfg) {
    return lattice_sum_impl(p, n, s, cfg, {false});
}

EvalResult coprime_sum_oracle(const EvaluationPoint& p, int n, cplx s,
                              const EvaluatorConfig& cfg) {
    return lattice_sum_impl(p, n, s, cfg, {true});
}

EvalResult eval_level1(const EvaluationPoint& p, int n, cplx s, const EvaluatorConfig& cfg) {
    cfg.validate();
    if (n % 2 != 0) throw DomainError("eval_level1: weight must be even");
    if (!(p.y > 0)) throw DomainError("eval_level1: y must be positive");
    if (std::abs(s.real() - 0.5) > 1.5)
        throw DomainError("eval_level1: |Re s - 1/2| <= 1.5 supported");

    // E(., 1/2) vanishes identically: the scattering matrix is -I at the
    // central point, so the functional equation forces E = -E.
    if (s == cplx(0.5, 0.0)) return {cplx(0.0), 1e-300, 0};

    // weight reflection: E_{-n}(x, y, theta) = E_n(-x, y, -theta)
    if (n < 0) {
        EvalResult r = eval_level1({-p.x, p.y, -p.theta}, -n, s, cfg);
        return r;
    }

    double t = s.imag();
    cplx theta_factor = std::polar(1.0, double(n) * p.theta);
    cplx unit(1.0);
    double x = p.x, y = p.y;

    // internal reduction keeps the expansion argument in the bulk; E is
    // invariant up to the unit angular factor tracked here.
    if (y < 0.8) {
        geom::ReductionResult red =
            geom::reduce_to_fundamental_domain(geom::iwasawa_compose({p.x, p.y, 0.0}));
        cplx z0(p.x, p.y);
        cplx u = red.gamma.c * z0 + red.gamma.d;
        unit = unit_pow(u / std::abs(u), n);
        geom::IwasawaCoordinates ic = geom::iwasawa_decompose(red.reduced);
        x = ic.x;
        y = ic.y;
    } else {
        x = x - std::floor(x + 0.5);  // cheap periodicity normalization
    }

    cplx phi_s = scat::psi_general(s).value;
    cplx al = scat::alpha(n, s);
    cplx cterm = cpow_real(y, s) + phi_s * al * cpow_real(y, 1.0 - s);

    int M = cfg.fourier_modes;
    if (M <= 0) {
        double need = (-std::log(cfg.tol) + 4.0) / (kTwoPi * y);
        double bulk = 15.0 + std::ceil(3.0 * (std::abs(t) + double(n)) / (kTwoPi * y));
        M = int(std::max(need, bulk));
    }
    M = std::max(M, 4);

    // mode coefficients: b_0 = pi^s m^{s-1} sigma_{1-2s}(m) / (Gamma(s) zeta(2s));
    // raising n -> n+2 multiplies by (1+n/2-s) for m > 0 and -1/(s+n/2) for m < 0.
    cplx log_pref = s * std::log(kPi) - sf::log_gamma(s);
    cplx zeta2s = sf::zeta(2.0 * s).value;
    cplx raise_pos(1.0), raise_neg(1.0);
    for (int j = 0; j < n; j += 2) {
        raise_pos *= (1.0 + double(j) / 2.0 - s);
        raise_neg *= -1.0 / (s + double(j) / 2.0);
    }

    cplx modes(0.0);
    double werr_acc = 0.0;
    double last_mag = 0.0;
    cplx mu = s - 0.5;
    long terms = 0;
    for (int m = 1; m <= M; ++m) {
        cplx b0 = std::exp(log_pref) * cpow_real(double(m), s - 1.0) *
                  divisor_sigma(m, 1.0 - 2.0 * s) / zeta2s;
        double zarg = 2.0 * kTwoPi * double(m) * y;  // 4 pi m y
        SfResult wpos = sf::whittaker_w(-double(n) / 2.0, mu, zarg);
        SfResult wneg = (n == 0) ? wpos : sf::whittaker_w(double(n) / 2.0, mu, zarg);
        cplx e_pos = std::polar(1.0, kTwoPi * double(m) * x);
        cplx term_pos = b0 * raise_pos * wpos.value * e_pos;
        cplx term_neg = b0 * raise_neg * wneg.value * std::conj(e_pos);
        modes += term_pos + term_neg;
        werr_acc += std::abs(b0 * raise_pos) * wpos.abs_error +
                    std::abs(b0 * raise_neg) * wneg.abs_error;
        last_mag = std::abs(term_pos) + std::abs(term_neg);
        terms += 2;
    }
    // geometric tail estimate from the decay of the last included mode
    double decay = std::exp(-kTwoPi * y);
    double tail = last_mag * decay / std::max(1e-15, 1.0 - decay);

    cplx val = theta_factor * unit * (cterm + modes);
    double err = werr_acc + tail + 1e-13 * std::abs(val);
    return {val, err, terms};
}

EvalResult eval_levelq_s(long long q, const geom::Cusp& a, const EvaluationPoint& p,
                         int n, cplx s, const EvaluatorConfig& cfg) {
    if (!geom::is_squarefree(q)) throw DomainError("eval_levelq: level must be squarefree");
    if (a.level != q || q % a.divisor != 0) throw DomainError("eval_levelq: cusp/level mismatch");
    if (q == 1) return eval_level1(p, n, s, cfg);
    if (s == cplx(0.5, 0.0)) return {cplx(0.0), 1e-300, 0};

    long long v = a.divisor, w = a.width;
    cplx pref(1.0);
    for (long long pr : geom::prime_factors(q))
        pref /= (1.0 - cpow_real(double(pr), -2.0 * s));
    pref *= double(moebius(v)) * std::exp(-s * std::log(double(q) * double(v)));

    cplx acc(0.0);
    double err = 0.0;
    long terms = 0;
    for (long long beta : divisors_of(v)) {
        for (long long gam : divisors_of(w)) {
            int mu = moebius(beta * gam);
            if (mu == 0) continue;
            double scale = double(beta) * double(gam);
            cplx coeff = double(mu) * cpow_real(double(beta) / double(gam), s);
            EvalResult e1 = eval_level1({scale * p.x, scale * p.y, p.theta}, n, s, cfg);
            acc += coeff * e1.value;
            err += std::abs(coeff) * e1.abs_error;
            terms += e1.terms_used;
        }
    }
    return {pref * acc, std::abs(pref) * err, terms};
}

EvalResult eval_levelq(long long q, const geom::Cusp& a, const EvaluationPoint& p,
                       int n, double t, const EvaluatorConfig& cfg) {
    return eval_levelq_s(q, a, p, n, cplx(0.5, t), cfg);
}

cplx constant_term_s(long long q, const geom::Cusp& a, const geom::Cusp& b,
                     int n, cplx s, double y, double theta) {
    if (!(y > 0)) throw DomainError("constant_term: y must be positive");
    cplx phi = scat::phi_entry(q, a, b, s).value;
    cplx al = scat::alpha(n, s);
    cplx delta = (a.divisor == b.divisor) ? cplx(1.0) : cplx(0.0);
    return std::polar(1.0, double(n) * theta) *
           (delta * cpow_real(y, s) + phi * al * cpow_real(y, 1.0 - s));
}

cplx constant_term(long long q, const geom::Cusp& a, const geom::Cusp& b,
                   int n, double t, double y, double theta) {
    return constant_term_s(q, a, b, n, cplx(0.5, t), y, theta);
}

cplx fourier_coefficient_numeric(const std::function<cplx(const EvaluationPoint&)>& f,
                                 int m, double y, double theta, int quad_points) {
    if (quad_points < 8 * (std::abs(m) + 1))
        throw DomainError("fourier_coefficient_numeric: quad_points >= 8(|m|+1) required");
    cplx acc(0.0);
    for (int k = 0; k < quad_points; ++k) {
        double x = double(k) / quad_points;
        acc += f({x, y, theta}) * std::polar(1.0, -kTwoPi * double(m) * x);
    }
    return acc / double(quad_points);
}

double afe_majorant(const EvaluationPoint& p, int n, double t, double eps) {
    if (!(eps > 0)) throw DomainError("afe_majorant: eps must be positive");
    double X = std::pow(1.0 + std::abs(t) + std::abs(double(n)), 1.0 + eps);
    cplx z(p.x, p.y);
    double acc = 0.0;
    long cmax = long(std::floor(std::sqrt(X) / p.y)) + 1;
    for (long c = -cmax; c <= cmax; ++c) {
        for (long d = long(std::floor(-c * p.x - std::sqrt(X))) - 1;
             d <= long(std::ceil(-c * p.x + std::sqrt(X))) + 1; ++d) {
            if (c == 0 && d == 0) continue;
            double n2 = std::norm(double(c) * z + double(d));
            if (n2 <= X && n2 > 0) acc += 1.0 / std::sqrt(n2);
        }
    }
    return 1.0 + std::sqrt(p.y) * acc;
}

long long count_lattice_points(const EvaluationPoint& p, double X) {
    if (X < 0) throw DomainError("count_lattice_points: X must be nonnegative");
    cplx z(p.x, p.y);
    long long count = 0;
    long cmax = long(std::floor(std::sqrt(X) / p.y)) + 1;
    for (long c = -cmax; c <= cmax; ++c) {
        double cy = double(c) * p.y;
        if (cy * cy > X) continue;
        double rad = std::sqrt(std::max(0.0, X - cy * cy));
        for (long d = long(std::floor(-c * p.x - rad)) - 1;
             d <= long(std::ceil(-c * p.x + rad)) + 1; ++d) {
            if (c == 0 && d == 0) continue;
            if (std::norm(double(c) * z + double(d)) <= X) ++count;
        }
    }
    return count;
}

cplx raising_operator_numeric(const std::function<cplx(const EvaluationPoint&)>& f,
                              const EvaluationPoint& p, double h) {
    if (!(h > 0)) throw DomainError("raising_operator_numeric: h must be positive");
    auto dx = (f({p.x + h, p.y, p.theta}) - f({p.x - h, p.y, p.theta})) / (2.0 * h);
    auto dy = (f({p.x, p.y + h, p.theta}) - f({p.x, p.y - h, p.theta})) / (2.0 * h);
    auto dth = (f({p.x, p.y, p.theta + h}) - f({p.x, p.y, p.theta - h})) / (2.0 * h);
    cplx i(0.0, 1.0);
    return std::polar(1.0, 2.0 * p.theta) * (i * p.y * dx + p.y * dy + dth / (2.0 * i));
}

}  // namespace eisen::eisenstein
