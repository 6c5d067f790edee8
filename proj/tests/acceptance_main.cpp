// Acceptance suite: one binary, one pass/fail line per criterion, nonzero
// exit code if anything fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <thread>
#include <vector>

#include "eisen/eisenstein.hpp"
#include "eisen/geometry.hpp"
#include "eisen/harness.hpp"
#include "eisen/scattering.hpp"
#include "eisen/specfun.hpp"
#include "eisen/truncation.hpp"
#include "oracles.hpp"

using namespace eisen;
namespace sf = eisen::specfun;
namespace geom = eisen::geometry;
namespace scat = eisen::scattering;
namespace eis = eisen::eisenstein;
namespace trn = eisen::truncation;
namespace hn = eisen::harness;

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool pass, double measured, const char* extra = "") {
    std::printf("[%s] criterion %2d: %-42s measured=%.3e %s\n", pass ? "PASS" : "FAIL", idx,
                name, measured, extra);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Rng {
    std::mt19937_64 g{20260809};
    double uni(double a, double b) { return a + (b - a) * (g() >> 11) * 0x1p-53; }
};

}  // namespace

int main() {
    auto t_start = std::chrono::steady_clock::now();
    const double T0 = std::exp(2.0 * kPi);

    // 1. scattering unitarity
    {
        double worst = 0;
        for (long long q : {1LL, 2LL, 3LL, 5LL, 6LL, 10LL, 15LL, 30LL, 105LL})
            for (double t : {0.3, 1.0, 5.0, 13.7}) {
                auto m = scat::scattering_matrix(q, cplx(0.5, t));
                worst = std::max(worst,
                                 m.entries.mul(m.entries.conj_transpose()).max_norm_minus_identity());
            }
        report(1, "scattering unitarity", worst <= 1e-9, worst);
    }

    // 2. closed-form entries vs tensor product, all squarefree q <= 30
    {
        double worst = 0;
        for (long long q = 1; q <= 30; ++q) {
            if (!geom::is_squarefree(q)) continue;
            for (double t : {0.9, 2.7}) {
                auto m = scat::scattering_matrix(q, cplx(0.5, t));
                auto cusps = geom::cusps_of_level(q);
                for (size_t i = 0; i < cusps.size(); ++i)
                    for (size_t j = 0; j < cusps.size(); ++j) {
                        cplx closed = scat::phi_entry(q, cusps[i], cusps[j], cplx(0.5, t)).value;
                        cplx tensor = m.entries.at(int(i), int(j));
                        worst = std::max(worst, std::abs(closed - tensor) /
                                                    std::max(1e-30, std::abs(tensor)));
                    }
            }
        }
        report(2, "phi entries = tensor product", worst <= 1e-10, worst);
    }

    // 3. alpha unimodularity, derivative, derivative bound
    {
        Rng rng;
        double worst_mod = 0, worst_fd = 0, worst_bound = 0;
        for (int n = -400; n <= 400; n += 40) {
            for (int i = 0; i < 20; ++i) {
                double t = rng.uni(-30, 30);
                worst_mod = std::max(worst_mod,
                                     std::abs(std::abs(scat::alpha(n, cplx(0.5, t))) - 1.0));
            }
        }
        for (auto [n, t] : std::initializer_list<std::pair<int, double>>{
                 {12, 1.7}, {40, 0.4}, {100, 5.0}}) {
            double h = 1e-5;
            cplx fd = (scat::alpha(n, cplx(0.5, t + h)) - scat::alpha(n, cplx(0.5, t - h))) /
                      (2.0 * h);
            cplx an = scat::alpha_t_derivative(n, t);
            worst_fd = std::max(worst_fd, std::abs(an - fd) / std::abs(fd));
        }
        for (int n = 2; n <= 400; n += 14) {
            double cap = 4.0 * (1.0 + std::log(1.0 + n / 2.0));
            for (double t : {0.0, 0.1, 1.0, 10.0, 40.0})
                worst_bound = std::max(worst_bound, std::abs(scat::alpha_t_derivative(n, t)) / cap);
        }
        bool pass = worst_mod <= 1e-12 && worst_fd <= 1e-6 && worst_bound <= 1.0;
        char extra[128];
        std::snprintf(extra, sizeof extra, "(mod=%.2e fd=%.2e bound=%.2f)", worst_mod, worst_fd,
                      worst_bound);
        report(3, "alpha modulus/derivative/bound", pass, worst_mod, extra);
    }

    // 4. evaluator vs coprime oracle
    {
        auto t0 = std::chrono::steady_clock::now();
        Rng rng;
        eis::EvaluatorConfig cfg;
        cfg.tol = 1e-9;
        double worst = 0;
        for (cplx s : {cplx(1.5, 0.0), cplx(1.25, 0.7)}) {
            for (int n : {0, 2, -2, 8, -8}) {
                for (int i = 0; i < 2; ++i) {
                    eis::EvaluationPoint p{rng.uni(-0.5, 0.5), rng.uni(0.87, 4.0), rng.uni(0, 6.2)};
                    eis::EvalResult ex = eis::eval_level1(p, n, s, cfg);
                    eis::EvalResult oc = eis::coprime_sum_oracle(p, n, s, cfg);
                    worst = std::max(worst, std::abs(ex.value - oc.value) / std::abs(oc.value));
                }
            }
        }
        char extra[64];
        std::snprintf(extra, sizeof extra, "(%.1fs)", seconds_since(t0));
        report(4, "evaluator = coprime oracle", worst <= 1e-6, worst, extra);
    }

    // 5. automorphy on the critical line
    {
        eis::EvaluatorConfig cfg;
        double worst_excess = -1e300;
        auto act = [](const geom::GroupElement& m, const eis::EvaluationPoint& p) {
            geom::IwasawaCoordinates ic =
                geom::iwasawa_decompose(m * geom::iwasawa_compose({p.x, p.y, p.theta}));
            return eis::EvaluationPoint{ic.x, ic.y, ic.theta};
        };
        for (long long q : {1LL, 2LL, 3LL}) {
            std::vector<geom::GroupElement> gens = {{1, 1, 0, 1}};
            if (q == 1) gens.push_back({0, -1, 1, 0});
            else gens.push_back({1, 0, double(q), 1});
            for (auto& a : geom::cusps_of_level(q))
                for (int n : {0, 8, -8})
                    for (double t : {0.5, 3.0}) {
                        eis::EvaluationPoint p{0.23, 1.11, 0.7};
                        eis::EvalResult e0 = eis::eval_levelq(q, a, p, n, t, cfg);
                        for (auto& m : gens) {
                            eis::EvalResult e1 = eis::eval_levelq(q, a, act(m, p), n, t, cfg);
                            double allow = std::max(1e-5 * std::abs(e0.value),
                                                    10.0 * (e0.abs_error + e1.abs_error));
                            worst_excess = std::max(worst_excess,
                                                    std::abs(e1.value - e0.value) - allow);
                        }
                    }
        }
        report(5, "automorphy under generators", worst_excess <= 0, worst_excess);
    }

    // 6. functional equation at 10 random tuples
    {
        Rng rng;
        eis::EvaluatorConfig cfg;
        double worst = 0;
        for (int i = 0; i < 10; ++i) {
            int n = 2 * int(rng.uni(0, 6));
            double t = rng.uni(0.3, 3.5);
            cplx s(0.5, t);
            eis::EvaluationPoint p{rng.uni(-0.45, 0.45), rng.uni(0.9, 2.5), rng.uni(0, 6.2)};
            cplx L = std::pow(cplx(kPi), -s) * sf::gamma(s + std::abs(n) / 2.0) *
                     sf::zeta(2.0 * s).value * eis::eval_level1(p, n, s, cfg).value;
            cplx R = std::pow(cplx(kPi), s - 1.0) * sf::gamma(1.0 - s + std::abs(n) / 2.0) *
                     sf::zeta(2.0 - 2.0 * s).value * eis::eval_level1(p, n, 1.0 - s, cfg).value;
            worst = std::max(worst, std::abs(L - R) / std::max(std::abs(L), std::abs(R)));
        }
        report(6, "functional equation", worst <= 1e-6, worst);
    }

    // 7. constant-term extraction at y in {0.9, 3, 40}
    {
        eis::EvaluatorConfig cfg;
        double worst = 0;
        for (double y : {0.9, 3.0, 40.0}) {
            int n = 2;
            double t = 1.0;
            auto f = [&](const eis::EvaluationPoint& p) {
                return eis::eval_level1(p, n, cplx(0.5, t), cfg).value;
            };
            cplx avg = eis::fourier_coefficient_numeric(f, 0, y, 0.0, 64);
            cplx ct = eis::constant_term(1, geom::cusp_for_divisor(1, 1),
                                         geom::cusp_for_divisor(1, 1), n, t, y, 0.0);
            worst = std::max(worst, std::abs(avg - ct) / std::max(1.0, std::abs(ct)));
        }
        report(7, "constant-term extraction", worst <= 1e-6, worst);
    }

    // 8. Maass-Selberg closed form vs quadrature
    {
        auto t0 = std::chrono::steady_clock::now();
        trn::QuadratureConfig qc;
        double worst = 0;
        for (auto [n, t] : std::initializer_list<std::pair<int, double>>{{0, 1.0}, {4, 0.5}}) {
            double cf = trn::maass_selberg_closed_form(1, geom::cusp_for_divisor(1, 1), n, t, T0);
            auto qd = trn::p_norm_quadrature(1, geom::cusp_for_divisor(1, 1), n, t, T0, qc);
            worst = std::max(worst, std::abs(cf - qd.value) / std::abs(cf));
        }
        char extra[64];
        std::snprintf(extra, sizeof extra, "(%.1fs)", seconds_since(t0));
        report(8, "Maass-Selberg vs quadrature", worst <= 1e-3, worst, extra);
    }

    // 9. level reduction vs direct coset sum + critical-line constant term
    {
        auto t0 = std::chrono::steady_clock::now();
        eis::EvaluatorConfig cfg;
        cfg.tol = 1e-11;
        double worst = 0;
        double x = 0.21, y = 1.13;
        for (long long q : {2LL, 3LL, 6LL}) {
            for (auto& a : geom::cusps_of_level(q)) {
                eis::EvalResult red = eis::eval_levelq_s(q, a, {x, y, 0.0}, 0, cplx(1.5, 0.0), cfg);
                double tail = 0;
                double direct = oracles::direct_levelq_coset_sum_em(q, a.divisor, x, y, 1500000, &tail);
                double rel = std::abs(red.value.real() - direct) / std::abs(direct);
                worst = std::max(worst, rel);
            }
        }
        // constant-term match at each cusp on the critical line
        double worst_ct = 0;
        for (long long q : {2LL, 3LL, 6LL}) {
            double t = 1.3;
            for (auto& a : geom::cusps_of_level(q))
                for (auto& b : geom::cusps_of_level(q)) {
                    for (int n : {0, 2}) {
                        geom::GroupElement sb = geom::scaling_matrix(b);
                        int Q = 24;
                        double yy = 40.0;
                        cplx avg(0.0);
                        for (int k = 0; k < Q; ++k) {
                            geom::IwasawaCoordinates ic = geom::iwasawa_decompose(
                                sb * geom::iwasawa_compose({(k + 0.5) / Q, yy, 0.0}));
                            cplx val = eis::eval_levelq(q, a, {ic.x, ic.y, ic.theta}, n, t, cfg).value;
                            avg += val * std::polar(1.0, -double(n) * ic.theta);
                        }
                        avg /= double(Q);
                        cplx ct = eis::constant_term(q, a, b, n, t, yy, 0.0);
                        worst_ct = std::max(worst_ct,
                                            std::abs(avg - ct) / std::max(1.0, std::abs(ct)));
                    }
                }
        }
        char extra[96];
        std::snprintf(extra, sizeof extra, "(ct=%.2e, %.1fs)", worst_ct, seconds_since(t0));
        report(9, "level reduction + cusp constant term", worst <= 1e-5 && worst_ct <= 1e-6,
               worst, extra);
    }

    // 10. Main Theorem property suite over the default grid
    {
        auto t0 = std::chrono::steady_clock::now();
        hn::HarnessConfig cfg = hn::default_config();
        cfg.workers = int(std::max(1u, std::thread::hardware_concurrency()));
        std::string out = (std::filesystem::temp_directory_path() / "eisenx_acceptance_sweep").string();
        hn::SweepSummary sum = hn::run_supnorm_sweep(cfg, out);
        bool finite = std::isfinite(sum.max_ratio) && sum.max_ratio > 0;
        bool pass = finite && sum.block_growth_ok && sum.q_spread <= 2.0 &&
                    sum.accuracy_failures == 0;
        char extra[128];
        std::snprintf(extra, sizeof extra, "(max=%.3f spread=%.2f growth_ok=%d fails=%lld, %.0fs)",
                      sum.max_ratio, sum.q_spread, int(sum.block_growth_ok),
                      sum.accuracy_failures, seconds_since(t0));
        report(10, "Main Theorem ratio sweep", pass, sum.max_ratio, extra);
    }

    // 11. lattice-count bound and agreement of two counters
    {
        Rng rng;
        double worst_ratio = 0;
        bool agree = true;
        for (int i = 0; i < 120; ++i) {
            eis::EvaluationPoint p{rng.uni(-0.5, 0.5), 0.0, 0.0};
            p.y = std::exp(rng.uni(std::log(std::sqrt(1.0 - p.x * p.x)), 3.5));
            double X = std::exp(rng.uni(0.0, std::log(1e4)));
            long long fast = eis::count_lattice_points(p, X);
            // independent brute force on a rectangle certain to cover the disk
            cplx z(p.x, p.y);
            long long brute = 0;
            long cb = long(std::sqrt(X) / p.y) + 2;
            long db = long(std::sqrt(X) * (1.0 + std::abs(p.x) / p.y)) + long(std::sqrt(X)) + 2;
            for (long c = -cb; c <= cb; ++c)
                for (long d = -db; d <= db; ++d) {
                    if (c == 0 && d == 0) continue;
                    if (std::norm(double(c) * z + double(d)) <= X) ++brute;
                }
            if (fast != brute) agree = false;
            double bound = 8.0 * (1.0 + std::sqrt(X) / p.y) * std::sqrt(X);
            worst_ratio = std::max(worst_ratio, double(fast) / bound);
        }
        report(11, "lattice count bound + double count", agree && worst_ratio <= 1.0, worst_ratio,
               agree ? "" : "(counters disagree)");
    }

    // 12. constant-term ratio I(2T)/I(T) <= 10
    {
        double worst = 0;
        for (long long q : {1LL, 2LL, 6LL})
            for (auto& a : geom::cusps_of_level(q))
                for (int n = 0; n <= 100; n += 4)
                    for (double t : {0.01, 0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 12.0, 25.0, 50.0}) {
                        auto rc = trn::constant_term_ratio_check(q, a, n, t, T0, 2.0 * T0);
                        if (!rc.degenerate) worst = std::max(worst, rc.ratio);
                    }
        report(12, "constant-term ratio I(2T)/I(T)", worst <= 10.0, worst);
    }

    // 13. P(e_n) lower-bound regimes
    {
        double fitted = 1e300;
        bool all_classified = true;
        for (long long q : {1LL, 2LL, 3LL, 6LL})
            for (auto& a : geom::cusps_of_level(q))
                for (int n : {0, 2, 8, 20, 40})
                    for (double t : {0.0, 0.3, 1.0, 3.0, 10.0, 25.0}) {
                        auto rep = trn::p_norm_lower_bound_check(q, a, n, t);
                        if (rep.regime == trn::LowerBoundRegime::DegenerateCentral) continue;
                        fitted = std::min(fitted, rep.ratio);
                        if (!rep.pass) all_classified = false;
                    }
        // quadratic scaling in the t^2 regime: log-log slope on the surrogate
        auto a6 = geom::cusp_for_divisor(6, 2);
        std::vector<double> lx, ly;
        for (double t = 0.02; t <= 0.2001; t *= 1.25) {
            auto rep = trn::p_norm_lower_bound_check(6, a6, 40, t);
            lx.push_back(std::log(t));
            ly.push_back(std::log(rep.surrogate));
        }
        double mx = 0, my = 0;
        for (size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
        mx /= lx.size();
        my /= ly.size();
        double num = 0, den = 0;
        for (size_t i = 0; i < lx.size(); ++i) {
            num += (lx[i] - mx) * (ly[i] - my);
            den += (lx[i] - mx) * (lx[i] - mx);
        }
        double slope = num / den;
        bool pass = all_classified && fitted >= 0.05 && std::abs(slope - 2.0) <= 0.2;
        char extra[96];
        std::snprintf(extra, sizeof extra, "(fitted_c=%.3f slope=%.3f)", fitted, slope);
        report(13, "P(e_n) lower-bound regimes", pass, fitted, extra);
    }

    std::printf("%s: %d criteria failed (total %.0fs)\n", g_failures == 0 ? "OK" : "FAIL",
                g_failures, seconds_since(t_start));
    return g_failures == 0 ? 0 : 1;
}
