#include "eisen/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace eisen::geometry {

namespace {
constexpr double kTwoPi = 2.0 * kPi;

double canonical_theta(double th) {
    th = std::fmod(th, kTwoPi);
    if (th < 0) th += kTwoPi;
    if (th >= kTwoPi) th -= kTwoPi;
    return th;
}
}  // namespace

IwasawaCoordinates iwasawa_decompose(const GroupElement& g) {
    double n2 = g.c * g.c + g.d * g.d;
    double y = 1.0 / n2;
    double x = (g.a * g.c + g.b * g.d) * y;
    double theta = std::atan2(g.c, g.d);  // bottom row = y^{-1/2} (sin, cos)
    return {x, y, canonical_theta(theta)};
}

GroupElement iwasawa_compose(const IwasawaCoordinates& c) {
    if (!(c.y > 0)) throw DomainError("iwasawa_compose: y must be positive");
    double r = std::sqrt(c.y);
    double ct = std::cos(c.theta), st = std::sin(c.theta);
    // n(x) a(y) k(theta)
    return {r * ct + c.x / r * st, -r * st + c.x / r * ct,
            st / r, ct / r};
}

cplx mobius(const GroupElement& g, cplx z) {
    return (g.a * z + g.b) / (g.c * z + g.d);
}

bool is_squarefree(long long q) {
    if (q <= 0) return false;
    for (long long p = 2; p * p <= q; ++p) {
        if (q % (p * p) == 0) return false;
    }
    return true;
}

std::vector<long long> prime_factors(long long q) {
    std::vector<long long> ps;
    for (long long p = 2; p * p <= q; ++p) {
        if (q % p == 0) {
            ps.push_back(p);
            while (q % p == 0) q /= p;
        }
    }
    if (q > 1) ps.push_back(q);
    return ps;
}

std::vector<Cusp> cusps_of_level(long long q) {
    if (!is_squarefree(q)) throw DomainError("cusps_of_level: level must be a positive squarefree integer");
    std::vector<long long> divs;
    for (long long v = 1; v <= q; ++v)
        if (q % v == 0) divs.push_back(v);
    std::vector<Cusp> out;
    out.reserve(divs.size());
    for (long long v : divs) out.push_back({q, v, q / v});
    return out;
}

Cusp cusp_for_divisor(long long q, long long v) {
    if (!is_squarefree(q) || v <= 0 || q % v != 0)
        throw DomainError("cusp_for_divisor: v must divide squarefree q");
    return {q, v, q / v};
}

GroupElement scaling_matrix(const Cusp& c) {
    if (c.divisor == c.level) return GroupElement::identity();  // infinity cusp, width 1
    double sw = std::sqrt(double(c.width));
    GroupElement rep{1, 0, double(c.divisor), 1};  // sends infinity to 1/v
    GroupElement scale{sw, 0, 0, 1.0 / sw};
    return rep * scale;
}

namespace {

long long gcd_ll(long long a, long long b) { return std::gcd(std::abs(a), std::abs(b)); }

// extended gcd: returns (g, u, v) with u*a + v*b = g
void ext_gcd(long long a, long long b, long long& g, long long& u, long long& v) {
    if (b == 0) { g = a; u = 1; v = 0; return; }
    long long g1, u1, v1;
    ext_gcd(b, a % b, g1, u1, v1);
    g = g1; u = v1; v = u1 - (a / b) * v1;
}

// gamma in Gamma_0(q) with y(sigma_v^{-1} gamma g) realizing the candidate
// bottom row (c,d) of the scaled coset.
GroupElement witness_from_row(long long q, long long v, long long c, long long d) {
    long long w = q / v;
    // tau in SL2(Z) with bottom row (c, d)
    long long g, u0, v0;
    ext_gcd(c, d, g, u0, v0);  // u0*c + v0*d = g
    if (g < 0) { g = -g; u0 = -u0; v0 = -v0; }
    // top row (v0, -u0): det = v0*d - (-u0)*c = 1
    long long ta = v0, tb = -u0;
    if (c == 0) { ta = d > 0 ? 1 : -1; tb = 0; }
    // gamma = sigma~_v T^k tau must land in Gamma_0(q); solve for k mod w
    for (long long k = 0; k < std::max<long long>(w, 1); ++k) {
        double A = ta + double(k) * c, B = tb + double(k) * d;
        GroupElement gamma;
        if (v == q) {
            gamma = {A, B, double(c), double(d)};
        } else {
            GroupElement rep{1, 0, double(v), 1};
            gamma = rep * GroupElement{A, B, double(c), double(d)};
        }
        long long cl = std::llround(gamma.c);
        if (cl % q == 0) return gamma;
    }
    throw std::logic_error("witness_from_row: no lift found");
}

}  // namespace

HeightResult height(const GroupElement& g, long long q) {
    if (!is_squarefree(q)) throw DomainError("height: level must be squarefree");
    IwasawaCoordinates ic = iwasawa_decompose(g);
    cplx z(ic.x, ic.y);
    double y = ic.y;

    // h = max over coprime (c,d) of (gcd(c,q)/q) * y / |cz+d|^2, gcd(0,q) = q.
    double best = y;  // (c,d) = (0,1)
    long long bc = 0, bd = 1;
    // enumerate candidate rows: |cz+d|^2 <= y * (v/q) / best <= y / best
    for (int pass = 0; pass < 2; ++pass) {
        double B = y / best + 1e-12;
        long long cmax = (long long)std::floor(std::sqrt(B) / y) + 1;
        for (long long c = 1; c <= cmax; ++c) {
            if (c * c * y * y > B) break;
            double rad = std::sqrt(std::max(0.0, B - c * c * y * y));
            long long dlo = (long long)std::floor(-c * ic.x - rad) - 1;
            long long dhi = (long long)std::ceil(-c * ic.x + rad) + 1;
            for (long long d = dlo; d <= dhi; ++d) {
                if (gcd_ll(c, d) != 1) continue;
                double n2 = std::norm(double(c) * z + double(d));
                long long v = gcd_ll(c, q);
                double h = y * double(v) / (double(q) * n2);
                if (h > best) { best = h; bc = c; bd = d; }
            }
        }
    }
    long long v = (bc == 0) ? q : gcd_ll(bc, q);
    Cusp cusp = cusp_for_divisor(q, v);
    GroupElement witness = (bc == 0) ? GroupElement::identity()
                                     : witness_from_row(q, v, bc, bd);
    return {best, cusp, witness};
}

ReductionResult reduce_to_fundamental_domain(const GroupElement& g) {
    GroupElement gamma = GroupElement::identity();
    IwasawaCoordinates ic = iwasawa_decompose(g);
    cplx z(ic.x, ic.y);
    for (int iter = 0; iter < 256; ++iter) {
        double k = std::floor(z.real() + 0.5);
        if (k != 0) {
            gamma = GroupElement{1, -k, 0, 1} * gamma;
            z -= k;
        }
        if (std::norm(z) >= 1.0 - 1e-15) break;
        gamma = GroupElement{0, -1, 1, 0} * gamma;
        z = -1.0 / z;
    }
    // boundary ties: x = 1/2 -> -1/2; on |z| = 1 prefer x <= 0
    if (z.real() >= 0.5 - 1e-14) {
        gamma = GroupElement{1, -1, 0, 1} * gamma;
        z -= 1.0;
    }
    if (std::abs(std::norm(z) - 1.0) < 1e-14 && z.real() > 1e-14) {
        gamma = GroupElement{0, -1, 1, 0} * gamma;
        z = -1.0 / z;
    }
    return {gamma, gamma * g};
}

ZoneTag classify_zone(const GroupElement& g, long long q, double T) {
    if (!(T >= 1.0)) throw DomainError("classify_zone: requires T >= 1");
    HeightResult h = height(g, q);
    if (h.height <= T) return {ZoneKind::Interior, Cusp{q, 0, 0}};
    return {ZoneKind::Cuspidal, h.cusp};
}

bool delta_rectangle_contains(const GroupElement& g, double delta) {
    if (!(delta > 0)) throw DomainError("delta_rectangle_contains: delta must be positive");
    IwasawaCoordinates ic = iwasawa_decompose(g);
    double th = ic.theta <= kPi ? ic.theta : ic.theta - kTwoPi;  // signed fold
    return std::max({std::abs(ic.x), std::abs(ic.y - 1.0), std::abs(th)}) <= delta;
}

SmallTranslateReport small_translate_check(const GroupElement& gprime, long long q,
                                           const std::vector<GroupElement>& sample) {
    SmallTranslateReport rep;
    rep.rows.reserve(sample.size());
    for (const auto& x : sample) {
        HeightResult h0 = height(x, q);
        HeightResult h1 = height(x * gprime, q);
        double ratio = h1.height / h0.height;
        bool window = (ratio >= 0.5 - 1e-12) && (ratio <= 2.0 + 1e-12);
        bool zone = true;
        if (h0.height > 2.0) zone = (h1.cusp.divisor == h0.cusp.divisor);
        rep.rows.push_back({window, zone, ratio});
    }
    return rep;
}

}  // namespace eisen::geometry
