#include <doctest.h>

#include <cmath>

#include "eisen/scattering.hpp"
#include "eisen/specfun.hpp"

using namespace eisen;
namespace scat = eisen::scattering;
namespace geom = eisen::geometry;

TEST_CASE("psi is unimodular on the critical line") {
    for (double t : {0.5, 3.0, 17.0})
        CHECK(std::abs(std::abs(scat::psi_factor(t).value) - 1.0) < 1e-10);
    CHECK(std::abs(scat::psi_factor(-2.0).value - std::conj(scat::psi_factor(2.0).value)) < 1e-12);
}

TEST_CASE("psi central limit by Richardson extrapolation") {
    cplx p4 = scat::psi_factor(1e-4).value;
    cplx p5 = scat::psi_factor(1e-5).value;
    // psi(1/2+it) = -1 + c t + O(t^2): Richardson in t removes the linear term
    cplx extrap = (10.0 * p5 - p4) / 9.0;
    CHECK(std::abs(extrap - scat::psi_factor_limit_at_half()) < 1e-6);
    CHECK(std::abs(p5 - scat::psi_factor_limit_at_half()) < 1e-3);
    // squares to 1, consistent with Phi(s) Phi(1-s) = I at s = 1/2
    cplx lim = scat::psi_factor_limit_at_half();
    CHECK(std::abs(lim * lim - cplx(1.0)) < 1e-15);
    CHECK_THROWS_AS(scat::psi_factor(0.0), PoleError);
    CHECK_THROWS_AS(scat::psi_factor(1e-9), ConditioningError);
}

TEST_CASE("alpha basics") {
    CHECK(scat::alpha(0, cplx(0.3, 1.0)) == cplx(1.0));
    cplx s(0.5, 1.7);
    CHECK(std::abs(scat::alpha(2, s) - (1.0 - s) / s) < 1e-15);
    CHECK(std::abs(std::abs(scat::alpha(40, cplx(0.5, 7.0))) - 1.0) < 1e-12);
    CHECK(std::abs(scat::alpha(-6, s) - scat::alpha(6, s)) < 1e-15);
}

TEST_CASE("alpha derivative against central differences and the log bound") {
    int n = 12;
    double t = 1.7, h = 1e-5;
    cplx fd = (scat::alpha(n, cplx(0.5, t + h)) - scat::alpha(n, cplx(0.5, t - h))) / (2.0 * h);
    cplx an = scat::alpha_t_derivative(n, t);
    CHECK(std::abs(an - fd) / std::abs(fd) < 1e-6);

    CHECK(std::abs(scat::alpha_t_derivative(0, 2.0)) == 0.0);

    for (int nn : {2, 40, 200, 400}) {
        double bound = 0;
        for (int k = 0; k < nn / 2; ++k) bound += 1.0 / (0.5 + k);
        bound *= 2.0;
        for (double tt : {0.0, 0.3, 2.0, 30.0})
            CHECK(std::abs(scat::alpha_t_derivative(nn, tt)) <= bound * (1.0 + 1e-12));
    }
}

TEST_CASE("local factor pinned values") {
    auto m = scat::local_factor(2, cplx(0.5, 0.0));
    CHECK(m.max_norm_minus_identity() < 1e-14);

    auto m2 = scat::local_factor(2, cplx(1.0, 0.0));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(m2.at(i, j) - cplx(1.0 / 3.0)) < 1e-14);

    for (long long p : {2LL, 3LL, 5LL}) {
        auto u = scat::local_factor(p, cplx(0.5, 0.9));
        CHECK(u.mul(u.conj_transpose()).max_norm_minus_identity() < 1e-10);
    }
}

TEST_CASE("scattering matrix structure") {
    auto m1 = scat::scattering_matrix(1, cplx(0.5, 1.3));
    REQUIRE(m1.entries.n == 1);
    CHECK(std::abs(m1.entries.at(0, 0) - scat::psi_factor(1.3).value) < 1e-12);

    auto m6 = scat::scattering_matrix(6, cplx(0.5, 1.1));
    REQUIRE(m6.entries.n == 4);
    CHECK(m6.entries.mul(m6.entries.conj_transpose()).max_norm_minus_identity() < 1e-9);
    CHECK(m6.entries.max_abs_asymmetry() < 1e-10);

    // diagonal entries psi prod (p-1)/(p^{2s}-1)
    cplx s(0.5, 1.1);
    cplx expect = scat::psi_factor(1.1).value;
    for (long long p : {2LL, 3LL}) {
        cplx p2s = std::exp(2.0 * s * std::log(double(p)));
        expect *= (double(p) - 1.0) / (p2s - 1.0);
    }
    for (int i = 0; i < 4; ++i) CHECK(std::abs(m6.entries.at(i, i) - expect) < 1e-11);

    // central point: Phi(1/2) = -I (psi limit is -1, local factors are I)
    auto mc = scat::scattering_matrix(6, cplx(0.5, 0.0));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(mc.entries.at(i, j) - (i == j ? cplx(-1.0) : cplx(0.0))) < 1e-12);
}

TEST_CASE("phi entries match the tensor product") {
    cplx s(0.5, 2.3);
    auto m = scat::scattering_matrix(6, s);
    auto cusps = geom::cusps_of_level(6);
    for (size_t i = 0; i < cusps.size(); ++i)
        for (size_t j = 0; j < cusps.size(); ++j) {
            cplx closed = scat::phi_entry(6, cusps[i], cusps[j], s).value;
            CHECK(std::abs(closed - m.entries.at(int(i), int(j))) < 1e-10);
        }

    // single-prime off-diagonal formula at q = 2
    cplx s2(0.5, 0.7);
    auto c2 = geom::cusps_of_level(2);
    cplx two_s = std::exp(s2 * std::log(2.0));
    cplx expect = scat::psi_factor(0.7).value * (two_s - 2.0 / two_s) /
                  (two_s * two_s - 1.0);
    CHECK(std::abs(scat::phi_entry(2, c2[0], c2[1], s2).value - expect) < 1e-12);
}

TEST_CASE("phi derivative against central differences") {
    long long q = 6;
    auto cusps = geom::cusps_of_level(q);
    auto a = cusps[0], b = cusps[3];
    double t = 1.4, h = 1e-5;
    cplx fd = (scat::phi_entry(q, a, b, cplx(0.5, t + h)).value -
               scat::phi_entry(q, a, b, cplx(0.5, t - h)).value) /
              (2.0 * h);
    cplx an = scat::phi_entry_t_derivative(q, a, b, t).value;
    CHECK(std::abs(an - fd) / std::abs(fd) < 1e-5);

    // q = 1 reduces to the psi logarithmic derivative times psi
    cplx d1 = scat::phi_entry_t_derivative(1, geom::cusp_for_divisor(1, 1),
                                           geom::cusp_for_divisor(1, 1), t).value;
    cplx expect = cplx(0, 1) * scat::psi_log_deriv_s(cplx(0.5, t)).value *
                  scat::psi_factor(t).value;
    CHECK(std::abs(d1 - expect) / std::abs(expect) < 1e-9);
}
