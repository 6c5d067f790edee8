#include "eisen/truncation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "eisen/scattering.hpp"

namespace eisen::truncation {

namespace geom = eisen::geometry;
namespace eis = eisen::eisenstein;
namespace scat = eisen::scattering;

namespace {
constexpr double kTwoPi = 2.0 * kPi;

// 8-point Gauss-Legendre on [-1, 1]
constexpr std::array<double, 4> kGLx = {0.1834346424956498, 0.5255324099163290,
                                        0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGLw = {0.3626837833783620, 0.3137066458778873,
                                        0.2223810344533745, 0.1012285362903763};

template <typename F>
double gauss_panel(F&& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double acc = 0;
    for (int i = 0; i < 4; ++i) {
        acc += kGLw[i] * (f(c + h * kGLx[i]) + f(c - h * kGLx[i]));
    }
    return acc * h;
}

template <typename F>
double gauss_panels(F&& f, double a, double b, int n) {
    double acc = 0, h = (b - a) / n;
    for (int i = 0; i < n; ++i) acc += gauss_panel(f, a + i * h, a + (i + 1) * h);
    return acc;
}

cplx alphaphi_aa(long long q, const geom::Cusp& a, int n, cplx s) {
    return scat::alpha(n, s) * scat::phi_entry(q, a, a, s).value;
}

}  // namespace

TruncationPolicy::TruncationPolicy()
    : base_T(std::exp(kTwoPi)), boosted_T(4.0 * std::exp(kTwoPi)) {}

double TruncationPolicy::T_for_height(double h) const {
    if (!(h > 0)) throw DomainError("T_for_height: height must be positive");
    if (h >= base_T / 2.0 && h <= 2.0 * base_T) return boosted_T;
    return base_T;
}

double truncation_T_for_height(double h) { return TruncationPolicy{}.T_for_height(h); }

eis::EvalResult truncated_eval(long long q, const geom::Cusp& a, int n, double t,
                               const eis::EvaluationPoint& p, double T,
                               const eis::EvaluatorConfig& cfg) {
    if (!(T >= 1.0)) throw DomainError("truncated_eval: T >= 1 required");
    geom::GroupElement g = geom::iwasawa_compose({p.x, p.y, p.theta});
    geom::HeightResult h = geom::height(g, q);
    eis::EvalResult e = eis::eval_levelq(q, a, p, n, t, cfg);
    if (h.height <= T) return e;
    geom::GroupElement zone =
        geom::scaling_matrix(h.cusp).inverse() * h.witness * g;
    geom::IwasawaCoordinates zc = geom::iwasawa_decompose(zone);
    cplx c = eis::constant_term(q, a, h.cusp, n, t, zc.y, zc.theta);
    return {e.value - c, e.abs_error + 1e-14 * std::abs(c), e.terms_used};
}

double maass_selberg_closed_form(long long q, const geom::Cusp& a, int n, double t, double T) {
    if (!(T >= 1.0)) throw DomainError("maass_selberg: T >= 1 required");
    if (std::abs(t) < 1e-7) return 0.0;  // E(., 1/2) vanishes identically

    cplx s(0.5, t);
    cplx second(0.0);
    for (const auto& b : geom::cusps_of_level(q)) {
        cplx w = scat::alpha(n, s) * scat::phi_entry(q, a, b, s).value;
        cplx wp = scat::alpha_s_derivative(n, s) * scat::phi_entry(q, a, b, s).value +
                  scat::alpha(n, s) * scat::phi_entry_s_derivative(q, a, b, s).value;
        second += wp * std::conj(w);
    }
    cplx waa = alphaphi_aa(q, a, n, s);
    cplx Tit = std::polar(1.0, 2.0 * t * std::log(T));  // T^{2it}
    cplx third = (std::conj(waa) * Tit - waa * std::conj(Tit)) / cplx(0.0, 2.0 * t);
    cplx total = 2.0 * std::log(T) - second + third;
    return total.real();
}

namespace {

// Coset representatives gamma_j of Gamma_0(q)\SL2(Z); the fundamental domain
// is the union of gamma_j^{-1} F_1.
std::vector<geom::GroupElement> coset_reps(long long q) {
    using G = geom::GroupElement;
    G S{0, -1, 1, 0}, T{1, 1, 0, 1};
    if (q == 1) return {G::identity()};
    if (q == 2) return {G::identity(), S, S * T};
    if (q == 3) return {G::identity(), S, S * T, S * T * T};
    throw DomainError("p_norm_quadrature: supported levels are q in {1, 2, 3}");
}

}  // namespace

NormEstimate p_norm_quadrature(long long q, const geom::Cusp& a, int n, double t, double T,
                               const QuadratureConfig& qcfg, const eis::EvaluatorConfig& cfg) {
    auto reps = coset_reps(q);
    double YP = qcfg.y_split;

    auto E2 = [&](const geom::GroupElement& g) {
        geom::IwasawaCoordinates ic = geom::iwasawa_decompose(g);
        eis::EvalResult r = eis::eval_levelq(q, a, {ic.x, ic.y, ic.theta}, n, t, cfg);
        return std::norm(r.value);
    };

    // compact 2-D part: per coset translate, over F_1 cut at y = YP
    double partA = 0.0, partA_err = 0.0;
    for (const auto& rep : reps) {
        geom::GroupElement gj_inv = rep.inverse();
        auto run = [&](int nx, int ny) {
            auto inner_at = [&](double x) {
                double ylow = (x * x < 1.0) ? std::sqrt(1.0 - x * x) : 1.0;
                if (ylow >= YP) return 0.0;
                auto fy = [&](double logy) {
                    double y = std::exp(logy);
                    geom::GroupElement g =
                        gj_inv * geom::iwasawa_compose({x, y, 0.0});
                    return E2(g) / y;  // dy/y^2 = dlogy / y
                };
                return gauss_panels(fy, std::log(ylow), std::log(YP), ny);
            };
            return gauss_panels(inner_at, -0.5, 0.5, nx);
        };
        double coarse = run(qcfg.x_panels / 2, qcfg.y_panels / 2);
        double fine = run(qcfg.x_panels, qcfg.y_panels);
        partA += fine;
        partA_err += std::abs(fine - coarse) / 7.0;
    }

    // zone strips: per cusp b, eta in [YP / w_b, T]
    double partB = 0.0, partB_err = 0.0;
    for (const auto& b : geom::cusps_of_level(q)) {
        double eta0 = YP / double(b.width);
        cplx s(0.5, t);
        cplx w = scat::phi_entry(q, a, b, s).value * scat::alpha(n, s);
        bool diag = (a.divisor == b.divisor);

        // constant-term mass: |delta e^{itu} + w e^{-itu}|^2 du on u = log eta
        auto cmass = [&](double u) {
            cplx v = (diag ? std::polar(1.0, t * u) : cplx(0.0)) +
                     w * std::polar(1.0, -t * u);
            return std::norm(v);
        };
        double u0 = std::log(eta0), u1 = std::log(T);
        int cpan = std::max(24, int(std::ceil(std::abs(t) * (u1 - u0) * 2.0)));
        double cpart = gauss_panels(cmass, u0, u1, cpan);
        double cpart2 = gauss_panels(cmass, u0, u1, 2 * cpan);
        partB += cpart2;
        partB_err += std::abs(cpart2 - cpart);

        // nonconstant modes, numerically: x-average of |E|^2 minus |c|^2
        geom::GroupElement sb = geom::scaling_matrix(b);
        auto mode_mass = [&](double eta) {
            double avg = 0.0;
            for (int k = 0; k < qcfg.mode_x_points; ++k) {
                double x = (k + 0.5) / qcfg.mode_x_points;
                geom::GroupElement g = sb * geom::iwasawa_compose({x, eta, 0.0});
                avg += E2(g);
            }
            avg /= qcfg.mode_x_points;
            double cm = std::norm((diag ? std::exp(s * std::log(eta)) : cplx(0.0)) +
                                  w * std::exp((1.0 - s) * std::log(eta)));
            return std::max(0.0, avg - cm) / (eta * eta);
        };
        if (eta0 < qcfg.mode_eta_hi) {
            double m1 = gauss_panels(mode_mass, eta0, qcfg.mode_eta_hi, 4);
            partB += m1;
            partB_err += 0.05 * m1 + std::exp(-2.0 * kTwoPi * qcfg.mode_eta_hi);
        }
    }

    double val = partA + partB;
    return {val, partA_err + partB_err + qcfg.tol * 0.0, NormMethod::Quadrature};
}

double norm_bound_ratio(long long q, const geom::Cusp& a, int n, double t) {
    TruncationPolicy pol;
    double ms = maass_selberg_closed_form(q, a, n, t, pol.base_T);
    return ms / (1.0 + std::log(1.0 + std::abs(n) / 2.0) + std::log(1.0 + std::abs(t)));
}

double constant_term_integral(double V, long long q, const geom::Cusp& a, int n, double t) {
    if (!(V >= 1.0)) throw DomainError("constant_term_integral: V >= 1 required");
    cplx w = alphaphi_aa(q, a, n, cplx(0.5, t));
    double lv = std::log(V);
    double u = 2.0 * t * lv;
    cplx g;
    if (std::abs(u) < 1e-5) {
        // (1 - V^{-2it})/(it) = 2 log V (1 - u^2/6) - i u log V + O(u^3 log V)
        g = cplx(2.0 * lv * (1.0 - u * u / 6.0), -u * lv);
    } else {
        g = cplx(std::sin(u), -(1.0 - std::cos(u))) / t;
    }
    return (1.0 + std::norm(w)) * lv + (w * g).real();
}

double constant_term_sup(double V, long long q, const geom::Cusp& a, int n, double t) {
    if (!(V >= 1.0)) throw DomainError("constant_term_sup: V >= 1 required");
    cplx w = alphaphi_aa(q, a, n, cplx(0.5, t));
    double r = std::abs(w);
    double beta = std::arg(w);
    // phase of w y^{-2it} sweeps [beta - 2t log V, beta] (or reversed)
    double lo = beta - 2.0 * t * std::log(V), hi = beta;
    if (lo > hi) std::swap(lo, hi);
    double maxcos;
    if (hi - lo >= kTwoPi) {
        maxcos = 1.0;
    } else if (std::ceil(lo / kTwoPi) * kTwoPi <= hi) {
        maxcos = 1.0;  // the arc crosses phase 0
    } else {
        maxcos = std::max(std::cos(lo), std::cos(hi));
    }
    return std::sqrt(std::max(0.0, 1.0 + r * r + 2.0 * r * maxcos));
}

RatioCheck constant_term_ratio_check(long long q, const geom::Cusp& a, int n, double t,
                                     double T, double Tprime) {
    if (!(1.0 <= T && T <= Tprime && Tprime <= 2.0 * T + 1e-9))
        throw DomainError("constant_term_ratio_check: need 1 <= T <= T' <= 2T");
    double IT = constant_term_integral(T, q, a, n, t);
    double ITp = constant_term_integral(Tprime, q, a, n, t);
    if (IT < 1e-12)
        return {std::numeric_limits<double>::infinity(), true};
    return {ITp / IT, false};
}

RegimeReport p_norm_lower_bound_check(long long q, const geom::Cusp& a, int n, double t) {
    TruncationPolicy pol;
    double I = constant_term_integral(pol.base_T, q, a, n, t);
    double phi_aa = std::abs(scat::phi_entry(q, a, a, cplx(0.5, t)).value);
    double surrogate = I + (1.0 - phi_aa);

    double logs = std::pow(std::log(1.0 + double(q)), 2) + std::log(1.0 + std::abs(n) / 2.0);
    double t1 = 1.0 / logs;
    double at = std::abs(t);

    RegimeReport rep{};
    rep.surrogate = surrogate;
    if (at < 1e-4) {
        // central point: Phi(1/2) = -I makes E vanish, the claim degenerates
        rep.regime = LowerBoundRegime::DegenerateCentral;
        rep.target = 0.0;
        rep.ratio = 1.0;
        rep.pass = true;
        return rep;
    }
    if (at > 1.0) {
        rep.regime = LowerBoundRegime::LargeT;
        rep.target = 1.0;
    } else if (at >= std::min(t1, 1.0)) {
        rep.regime = LowerBoundRegime::MidT;
        rep.target = t * t;
    } else {
        rep.regime = LowerBoundRegime::SmallT;
        rep.target = 1.0;
    }
    rep.ratio = surrogate / rep.target;
    rep.pass = rep.ratio >= 0.05;
    return rep;
}

}  // namespace eisen::truncation
