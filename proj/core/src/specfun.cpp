#include "eisen/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace eisen::specfun {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

bool is_nonpositive_integer(cplx s) {
    return s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::floor(s.real());
}

// log(sin(pi z)), stable for large |Im z|. Written through exp factors so the
// intermediate never overflows before |Im z| ~ 1e8.
cplx log_sin_pi(cplx z) {
    if (z.imag() >= 0.0) {
        // sin(pi z) = e^{-i pi z} (e^{2 i pi z} - 1) / (2i)
        const cplx iz(0.0, 1.0);
        cplx w = std::exp(cplx(0.0, kTwoPi) * z);  // |w| <= 1
        return -cplx(0.0, kPi) * z + std::log(w - 1.0) - std::log(2.0 * iz);
    }
    return std::conj(log_sin_pi(std::conj(z)));
}

// Lanczos coefficients, g = 7, n = 9.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

cplx log_gamma_lanczos(cplx s) {
    // valid for Re s >= 1/2
    cplx x = kLanczos[0];
    for (int k = 1; k < 9; ++k) x += kLanczos[k] / (s - 1.0 + double(k));
    cplx t = s + 6.5;
    return 0.5 * std::log(kTwoPi) + (s - 0.5) * std::log(t) - t + std::log(x);
}

constexpr std::array<double, 15> kBernoulli2n = {
    // B_2 .. B_30
    1.0 / 6,        -1.0 / 30,      1.0 / 42,        -1.0 / 30,
    5.0 / 66,       -691.0 / 2730,  7.0 / 6,         -3617.0 / 510,
    43867.0 / 798,  -174611.0 / 330, 854513.0 / 138, -236364091.0 / 2730,
    8553103.0 / 6,  -23749461029.0 / 870, 8615841276005.0 / 14322};

// Euler-Maclaurin core: value, derivative and a remainder bound for both.
struct EmResult {
    cplx value;
    cplx deriv;
    double value_err;
    double deriv_err;
};

EmResult zeta_euler_maclaurin(cplx s, int N, int J) {
    EmResult r{cplx(0), cplx(0), 0.0, 0.0};
    for (int k = 1; k < N; ++k) {
        double lk = std::log(double(k));
        cplx p = std::exp(-s * lk);
        r.value += p;
        r.deriv += -lk * p;
    }
    double lN = std::log(double(N));
    cplx NmS = std::exp(-s * lN);  // N^{-s}
    cplx sm1 = s - 1.0;
    r.value += NmS * double(N) / sm1 + 0.5 * NmS;
    r.deriv += NmS * double(N) * (-lN / sm1 - 1.0 / (sm1 * sm1)) - 0.5 * lN * NmS;

    // correction terms  B_{2j}/(2j)! * (s)_{2j-1} * N^{-s-2j+1}
    cplx poch = s;                    // (s)_1
    cplx poch_dl = cplx(1.0);         // d/ds of pochhammer
    double fact = 2.0;                // (2j)! running
    double invN2 = 1.0 / (double(N) * double(N));
    cplx Npow = NmS * double(N) * invN2;  // N^{-s-1}
    double sigma = s.real();
    for (int j = 1; j <= J; ++j) {
        double B = kBernoulli2n[j - 1];
        cplx term = (B / fact) * poch * Npow;
        cplx dterm = (B / fact) * (poch_dl * Npow - poch * lN * Npow);
        r.value += term;
        r.deriv += dterm;
        // remainder bound from the first omitted term
        if (j == J || std::abs(term) < 1e-300) {
            cplx poch_next = poch * (s + double(2 * j - 1)) * (s + double(2 * j));
            double Bn = kBernoulli2n[std::min(j, 14)];
            double fact_next = fact * (2 * j + 1) * (2 * j + 2);
            double tail = std::abs(Bn / fact_next * poch_next) * std::abs(Npow) * invN2;
            double growth = std::abs((s + double(2 * j + 1)) / (sigma + double(2 * j + 1)));
            r.value_err = tail * growth;
            r.deriv_err = tail * growth * (lN + 2.0 * (2 * j + 2) / std::max(1.0, sigma + 2 * j + 1));
            break;
        }
        // advance pochhammer by two factors and its derivative
        cplx a = s + double(2 * j - 1), b = s + double(2 * j);
        poch_dl = poch_dl * a * b + poch * (a + b);
        poch = poch * a * b;
        fact *= (2 * j + 1) * (2 * j + 2);
        Npow *= invN2;
    }
    return r;
}

EmResult zeta_adaptive(cplx s, const PrecisionConfig& cfg) {
    cfg.validate();
    if (s == cplx(1.0, 0.0)) throw PoleError("zeta: pole at s = 1");
    if (s.real() < -1.0 - 1e-12)
        throw DomainError("zeta: implemented for Re s > -1");
    double tau = std::abs(s.imag());
    int N = std::max(16, int(std::ceil(0.6 * tau)) + 12);
    int J = 12;
    for (int round = 0; round < 4; ++round) {
        EmResult r = zeta_euler_maclaurin(s, N, J);
        double tol = cfg.target_abs_tol + cfg.target_rel_tol * std::abs(r.value);
        if (r.value_err <= tol || 2 * N > cfg.max_terms) return r;
        N *= 2;
    }
    return zeta_euler_maclaurin(s, N, J);
}

}  // namespace

cplx log_gamma(cplx s) {
    if (is_nonpositive_integer(s))
        throw PoleError("log_gamma: pole at s = " + std::to_string(int(s.real())));
    if (s.real() >= 0.5) return log_gamma_lanczos(s);
    // reflection: log Gamma(s) = log pi - log sin(pi s) - log Gamma(1-s)
    return std::log(kPi) - log_sin_pi(s) - log_gamma_lanczos(1.0 - s);
}

cplx gamma(cplx s) { return std::exp(log_gamma(s)); }

cplx digamma(cplx s) {
    if (is_nonpositive_integer(s))
        throw PoleError("digamma: pole at s = " + std::to_string(int(s.real())));
    cplx acc(0.0);
    cplx w = s;
    if (w.real() < 0.5) {
        // psi(s) = psi(1-s) - pi cot(pi s)
        const cplx i(0.0, 1.0);
        cplx cot;
        if (std::abs(w.imag()) > 20.0) {
            cot = (w.imag() > 0) ? -i : i;
        } else {
            cot = std::cos(kPi * w) / std::sin(kPi * w);
        }
        return digamma(1.0 - w) - kPi * cot;
    }
    while (w.real() < 9.0) {
        acc -= 1.0 / w;
        w += 1.0;
    }
    cplx inv = 1.0 / w, inv2 = inv * inv;
    cplx r = std::log(w) - 0.5 * inv;
    cplx p = inv2;
    for (int j = 1; j <= 7; ++j) {
        r -= kBernoulli2n[j - 1] / (2.0 * j) * p;
        p *= inv2;
    }
    return acc + r;
}

SfResult zeta(cplx s, const PrecisionConfig& cfg) {
    EmResult r = zeta_adaptive(s, cfg);
    return {r.value, r.value_err};
}

SfResult zeta_deriv(cplx s, const PrecisionConfig& cfg) {
    EmResult r = zeta_adaptive(s, cfg);
    return {r.deriv, r.deriv_err};
}

SfResult zeta_log_deriv(cplx s, const PrecisionConfig& cfg) {
    EmResult r = zeta_adaptive(s, cfg);
    double zmag = std::abs(r.value);
    if (zmag < 1e-8)
        throw ConditioningError("zeta_log_deriv: zeta(s) nearly vanishes", zmag);
    cplx v = r.deriv / r.value;
    double err = (r.deriv_err + std::abs(v) * r.value_err) / zmag;
    return {v, err};
}

namespace {

// Trapezoid on int_0^inf e^{-y cosh u} cosh(nu u) du. The integrand is even in
// u and decays double-exponentially, so trapezoid with halving converges
// spectrally.
SfResult bessel_k_quadrature(cplx nu, double y, const PrecisionConfig& cfg) {
    double re_nu = std::abs(nu.real());
    double L = -std::log(cfg.target_abs_tol) + 8.0;
    double U = std::acosh(std::max(2.0, 1.0 + L / y));
    while (y * std::cosh(U) - re_nu * U < y + L) U += 0.5;

    auto integrand = [&](double u) { return std::exp(-y * std::cosh(u)) * std::cosh(nu * u); };
    double h = 0.5 / (1.0 + std::abs(nu.imag()) / 4.0);
    int n = int(std::ceil(U / h));
    h = U / n;
    auto trap = [&](double hh, int nn) {
        cplx acc = 0.5 * (integrand(0.0) + integrand(U));
        for (int k = 1; k < nn; ++k) acc += integrand(k * hh);
        return acc * hh;
    };
    cplx prev = trap(h, n);
    double delta = 1e300;
    for (int it = 0; it < 12; ++it) {
        n *= 2;
        h *= 0.5;
        cplx cur = trap(h, n);
        delta = std::abs(cur - prev);
        prev = cur;
        if (delta <= cfg.target_rel_tol * std::abs(cur) + cfg.target_abs_tol * std::exp(-y))
            break;
    }
    double trunc = std::exp(-(y * std::cosh(U) - re_nu * U)) * 2.0;
    return {prev, delta + trunc};
}

// Power series route: K_nu = (pi/2) (I_{-nu} - I_nu) / sin(pi nu).
// Used only when pi |Im nu| / 2 > y + 5, which keeps sin(pi nu) large.
SfResult bessel_k_series(cplx nu, double y, const PrecisionConfig& cfg) {
    auto I_series = [&](cplx v) {
        cplx inv_gamma = std::exp(-log_gamma(v + 1.0));
        cplx term = std::exp(v * std::log(y / 2.0)) * inv_gamma;
        cplx sum = term;
        double q = y * y / 4.0;
        for (int k = 1; k < cfg.max_terms; ++k) {
            term *= q / (double(k) * (v + double(k)));
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-320) break;
        }
        return sum;
    };
    cplx im = I_series(-nu), ip = I_series(nu);
    cplx s = std::sin(kPi * nu);
    cplx val = kPi / 2.0 * (im - ip) / s;
    double err = 1e-14 * (std::abs(im) + std::abs(ip)) / std::abs(s);
    return {val, err};
}

}  // namespace

SfResult bessel_k_complex_order(cplx nu, double y, const PrecisionConfig& cfg) {
    if (!(y > 0)) throw DomainError("bessel_k: requires y > 0");
    cfg.validate();
    if (y + 5.0 >= kPi * std::abs(nu.imag()) / 2.0)
        return bessel_k_quadrature(nu, y, cfg);
    return bessel_k_series(nu, y, cfg);
}

SfResult bessel_k_imag_order(double t, double y, const PrecisionConfig& cfg) {
    SfResult r = bessel_k_complex_order(cplx(0.0, t), y, cfg);
    return {cplx(r.value.real(), 0.0), r.abs_error + std::abs(r.value.imag())};
}

namespace {

// Laplace integral for W_{kappa,mu}(z), valid Re(mu - kappa + 1/2) > 0:
//   W = e^{-z/2} z^kappa / Gamma(a) * int_0^inf e^{-t} t^{a-1} (1+t/z)^{b} dt,
// a = mu - kappa + 1/2, b = mu + kappa - 1/2. The contour is rotated by phi
// when |Im mu| is large to keep the integrand from oscillating against Gamma.
SfResult whittaker_w_laplace(double kappa, cplx mu, double z, const PrecisionConfig& cfg) {
    cplx a = mu - kappa + 0.5;
    cplx b = mu + kappa - 0.5;
    if (a.real() <= 0.1)
        throw DomainError("whittaker_w: Laplace representation needs Re(mu - kappa + 1/2) > 0");
    double phi = (std::abs(mu.imag()) > 3.0) ? 1.3 : 0.0;
    cplx eiphi = std::polar(1.0, phi);
    double cphi = std::cos(phi);
    double L = -36.0 / a.real();
    double U = std::log(46.0 / cphi);

    auto sum_h = [&](double h) {
        cplx acc = 0.0;
        for (double u = L; u <= U; u += h) {
            cplx t = std::exp(u) * eiphi;
            acc += std::exp(-t + a * u + b * std::log(1.0 + t / z));
        }
        return acc * h;
    };
    double h = 0.04 / (1.0 + std::abs(mu.imag()) / 12.0);
    cplx s1 = sum_h(h);
    cplx s2 = sum_h(h / 2.0);
    double delta = std::abs(s1 - s2);
    if (delta > 1e-8 * std::abs(s2)) {
        s1 = s2;
        s2 = sum_h(h / 4.0);
        delta = std::abs(s1 - s2);
    }
    cplx pre = std::exp(-z / 2.0 + kappa * std::log(z) - log_gamma(a) + a * cplx(0.0, phi));
    cplx val = pre * s2;
    double err = std::abs(pre) * delta + 1e-15 * std::abs(val);
    return {val, err};
}

// Solve W'' = (1/4 - kappa/z + (mu^2 - 1/4)/z^2) W inward from an asymptotic
// seed at large z0. Fallback path when the recurrence loses too many digits.
SfResult whittaker_w_ode(double kappa, cplx mu, double z, const PrecisionConfig& cfg) {
    (void)cfg;
    double scale = 2.0 * (std::norm(mu) + (std::abs(kappa) + 1.0) * (std::abs(kappa) + 1.0));
    double z0 = std::max({60.0, 2.0 * z, scale});
    z0 = std::min(z0, 4000.0);

    // asymptotic series seed with optimal truncation
    cplx S = 1.0, Sp = 0.0, c = 1.0;
    double best = 1e300;
    for (int k = 1; k <= 40; ++k) {
        c *= (mu * mu - cplx((kappa - k + 0.5)) * (kappa - k + 0.5)) / double(k);
        double mag = std::abs(c) * std::pow(z0, -k);
        if (mag > best) break;
        best = mag;
        S += c * std::pow(z0, -k);
        Sp += -double(k) * c * std::pow(z0, -k - 1);
    }
    cplx lead = std::exp(-z0 / 2.0 + kappa * std::log(z0));
    cplx W = lead * S;
    cplx Wp = lead * ((-0.5 + kappa / z0) * S + Sp);
    double seed_rel = best + 1e-15;

    auto q = [&](double zz) { return 0.25 - kappa / zz + (mu * mu - 0.25) / (zz * zz); };
    auto rk4 = [&](double h_step, cplx& w, cplx& wp, double zz) {
        auto f = [&](double zc, cplx wv, cplx wpv) { return std::make_pair(wpv, q(zc) * wv); };
        auto [k1w, k1p] = f(zz, w, wp);
        auto [k2w, k2p] = f(zz + h_step / 2, w + h_step / 2 * k1w, wp + h_step / 2 * k1p);
        auto [k3w, k3p] = f(zz + h_step / 2, w + h_step / 2 * k2w, wp + h_step / 2 * k2p);
        auto [k4w, k4p] = f(zz + h_step, w + h_step * k3w, wp + h_step * k3p);
        w += h_step / 6 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        wp += h_step / 6 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    };
    double span = z0 - z;
    int n = std::max(1000, int(span / 0.01));
    n = std::min(n, 600000);
    double h = -span / n;
    double zz = z0;
    for (int i = 0; i < n; ++i) {
        rk4(h, W, Wp, zz);
        zz += h;
    }
    double err = std::abs(W) * (seed_rel + span * std::pow(std::abs(h), 4) * 10.0 + 1e-13);
    return {W, err};
}

bool near_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

}  // namespace

SfResult whittaker_w(double kappa, cplx mu, double z, const PrecisionConfig& cfg) {
    if (!(z > 0)) throw DomainError("whittaker_w: requires z > 0");
    cfg.validate();
    if (mu.real() < 0) mu = -mu;  // W is even in mu

    if (!near_integer(kappa)) {
        if (kappa <= 0.4) return whittaker_w_laplace(kappa, mu, z, cfg);
        return whittaker_w_ode(kappa, mu, z, cfg);
    }
    long k = std::lround(kappa);
    if (k <= -1) return whittaker_w_laplace(double(k), mu, z, cfg);

    // seeds: W_0 from K, W_1 from the K-derivative relation
    SfResult k0 = bessel_k_complex_order(mu, z / 2.0, cfg);
    double root = std::sqrt(z / kPi);
    cplx w0 = root * k0.value;
    double e0 = root * k0.abs_error;
    if (k == 0) return {w0, e0};

    SfResult km = bessel_k_complex_order(mu - 1.0, z / 2.0, cfg);
    SfResult kp = bessel_k_complex_order(mu + 1.0, z / 2.0, cfg);
    // W_0'(z) = K/(2 sqrt(pi z)) - sqrt(z/pi)/4 (K_{mu-1} + K_{mu+1}) at z/2
    cplx w0p = k0.value / (2.0 * std::sqrt(kPi * z)) - root / 4.0 * (km.value + kp.value);
    double e0p = k0.abs_error / (2.0 * std::sqrt(kPi * z)) + root / 4.0 * (km.abs_error + kp.abs_error);
    cplx w1 = (z / 2.0) * w0 - z * w0p;
    double e1 = (z / 2.0) * e0 + z * e0p;
    if (k == 1) return {w1, e1};

    // upward recurrence with first-order error propagation
    cplx fm = w0, f = w1;
    double em = e0, ef = e1;
    for (long j = 1; j < k; ++j) {
        cplx c2 = mu * mu - cplx((j - 0.5)) * (j - 0.5);
        cplx fp = (z - 2.0 * j) * f + c2 * fm;
        double ep = std::abs(z - 2.0 * j) * ef + std::abs(c2) * em +
                    1e-16 * (std::abs((z - 2.0 * j) * f) + std::abs(c2 * fm));
        fm = f; f = fp; em = ef; ef = ep;
    }
    if (ef > 1e-8 * std::abs(f) + cfg.target_abs_tol * 1e6) {
        // more than half the digit budget lost; recompute independently
        return whittaker_w_ode(double(k), mu, z, cfg);
    }
    return {f, ef};
}

}  // namespace eisen::specfun
