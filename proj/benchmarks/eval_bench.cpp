#include <benchmark/benchmark.h>

#include <cmath>

#include "eisen/eisenstein.hpp"
#include "eisen/scattering.hpp"
#include "eisen/specfun.hpp"
#include "eisen/truncation.hpp"

namespace sf = eisen::specfun;
namespace eis = eisen::eisenstein;
namespace geom = eisen::geometry;
namespace scat = eisen::scattering;

static void BM_BesselKImagOrder(benchmark::State& state) {
    double t = double(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sf::bessel_k_imag_order(t, 6.5));
    }
}
BENCHMARK(BM_BesselKImagOrder)->Arg(1)->Arg(10)->Arg(25);

static void BM_WhittakerW(benchmark::State& state) {
    double kap = double(state.range(0));
    eisen::cplx mu(0.0, 3.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sf::whittaker_w(kap, mu, 12.0));
    }
}
BENCHMARK(BM_WhittakerW)->Arg(-10)->Arg(0)->Arg(10);

static void BM_EvalLevel1(benchmark::State& state) {
    int n = int(state.range(0));
    double t = double(state.range(1));
    eis::EvaluationPoint p{0.23, 1.1, 0.4};
    for (auto _ : state) {
        benchmark::DoNotOptimize(eis::eval_level1(p, n, eisen::cplx(0.5, t)));
    }
}
BENCHMARK(BM_EvalLevel1)->Args({0, 1})->Args({8, 3})->Args({40, 25});

static void BM_EvalLevel6(benchmark::State& state) {
    eis::EvaluationPoint p{0.23, 1.1, 0.4};
    auto cusp = geom::cusp_for_divisor(6, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(eis::eval_levelq(6, cusp, p, 8, 3.0));
    }
}
BENCHMARK(BM_EvalLevel6);

static void BM_ScatteringMatrix(benchmark::State& state) {
    long long q = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(scat::scattering_matrix(q, eisen::cplx(0.5, 1.3)));
    }
}
BENCHMARK(BM_ScatteringMatrix)->Arg(6)->Arg(210);

static void BM_MaassSelbergClosedForm(benchmark::State& state) {
    auto cusp = geom::cusp_for_divisor(6, 2);
    double T = std::exp(2.0 * eisen::kPi);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            eisen::truncation::maass_selberg_closed_form(6, cusp, 8, 1.3, T));
    }
}
BENCHMARK(BM_MaassSelbergClosedForm);

BENCHMARK_MAIN();
