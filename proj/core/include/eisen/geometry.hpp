#pragma once

#include <vector>

#include "eisen/types.hpp"

namespace eisen::geometry {

struct IwasawaCoordinates {
    double x;
    double y;      // > 0
    double theta;  // canonicalized to [0, 2pi)
};

struct GroupElement {
    double a, b, c, d;

    GroupElement operator*(const GroupElement& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    GroupElement inverse() const { return {d, -b, -c, a}; }
    double det() const { return a * d - b * c; }
    static GroupElement identity() { return {1, 0, 0, 1}; }
};

// Cusp of Gamma_0(q), squarefree q, identified with a divisor v | q.
struct Cusp {
    long long level;    // q
    long long divisor;  // v
    long long width;    // w = q / v
};

struct HeightResult {
    double height;
    Cusp cusp;
    GroupElement witness;  // gamma in Gamma_0(q) achieving the maximum
};

enum class ZoneKind { Interior, Cuspidal };
struct ZoneTag {
    ZoneKind kind;
    Cusp cusp;  // valid when kind == Cuspidal
};

IwasawaCoordinates iwasawa_decompose(const GroupElement& g);
GroupElement iwasawa_compose(const IwasawaCoordinates& c);

// Mobius action on z = x + iy.
cplx mobius(const GroupElement& g, cplx z);

bool is_squarefree(long long q);
std::vector<long long> prime_factors(long long q);

// One cusp per divisor of q, sorted by divisor. Throws DomainError for
// non-squarefree q.
std::vector<Cusp> cusps_of_level(long long q);
Cusp cusp_for_divisor(long long q, long long v);

// sigma_a: carries infinity to the cusp and conjugates its stabilizer to unit
// translations. Identity for the infinity cusp (v = q).
GroupElement scaling_matrix(const Cusp& c);

HeightResult height(const GroupElement& g, long long q);

// gamma in SL2(Z) with reduced = gamma * g in the standard fundamental domain
// (x in [-1/2, 1/2), x^2 + y^2 >= 1; on the unit circle x <= 0).
struct ReductionResult {
    GroupElement gamma;
    GroupElement reduced;
};
ReductionResult reduce_to_fundamental_domain(const GroupElement& g);

ZoneTag classify_zone(const GroupElement& g, long long q, double T);

bool delta_rectangle_contains(const GroupElement& g, double delta);

struct SmallTranslateReport {
    struct Row {
        bool height_window_pass;
        bool zone_pass;
        double ratio;  // h(x g') / h(x)
    };
    std::vector<Row> rows;
    bool all_pass() const {
        for (const auto& r : rows)
            if (!r.height_window_pass || !r.zone_pass) return false;
        return true;
    }
};
SmallTranslateReport small_translate_check(const GroupElement& gprime, long long q,
                                           const std::vector<GroupElement>& sample);

}  // namespace eisen::geometry
