#include "orbkit/sw.hpp"

#include "orbkit/cyclotomic.hpp"

namespace orbkit {

StratumRep surface_rep(const SurfaceComponent& s) {
    StratumRep r;
    r.kind = StratumRep::Kind::surface;
    r.m = s.m;
    r.normal_exponent = mod64(s.normal_weight, s.m);
    r.k_exponent = mod64(-s.normal_weight, s.m);
    return r;
}

StratumRep point_rep(const CyclicSingularPoint& p) {
    validate_point(p);
    StratumRep r;
    r.kind = StratumRep::Kind::point;
    r.m = p.m;
    r.w1 = mod64(p.w1, p.m);
    r.w2 = mod64(p.w2, p.m);
    r.k_exponent = mod64(-(p.w1 + p.w2), p.m);
    return r;
}

namespace {

Rational finish(const CyclotomicValue& sum, std::int64_t m, const char* where) {
    auto r = sum.as_rational();
    if (!r) throw Error("internal", where, "character sum is not rational");
    return *r / Rational(m);
}

} // namespace

Rational I_surface(const StratumRep& rep, std::int64_t k) {
    if (rep.kind != StratumRep::Kind::surface) throw Error("precondition", "I_surface", "not a surface stratum");
    const auto m = rep.m;
    const CyclotomicValue one(m, 1);
    CyclotomicValue sum(m);
    for (std::int64_t t = 1; t < m; ++t) {
        auto rho_inv = CyclotomicValue::root_power(m, -rep.normal_exponent * t);
        auto rho_l = CyclotomicValue::root_power(m, mod64(k, m) * rep.k_exponent * t);
        auto den = one - rho_inv;
        sum += (one + rho_inv) * (rho_l - one) / (den * den);
    }
    return finish(sum, m, "I_surface");
}

Rational I_point(const StratumRep& rep, std::int64_t k) {
    if (rep.kind != StratumRep::Kind::point) throw Error("precondition", "I_point", "not a point stratum");
    const auto m = rep.m;
    const CyclotomicValue one(m, 1);
    CyclotomicValue sum(m);
    for (std::int64_t t = 1; t < m; ++t) {
        auto r1 = CyclotomicValue::root_power(m, -rep.w1 * t);
        auto r2 = CyclotomicValue::root_power(m, -rep.w2 * t);
        auto rho_l = CyclotomicValue::root_power(m, mod64(k, m) * rep.k_exponent * t);
        sum += (rho_l - one) * Rational(2) / ((one - r1) * (one - r2));
    }
    return finish(sum, m, "I_point");
}

Rational d_dimension(const OrbifoldSpec& spec, std::int64_t k) {
    validate_spec(spec);
    Rational d = 0;
    for (const auto& s : spec.surfaces) d += I_surface(surface_rep(s), k) * (2 - 2 * s.genus);
    for (const auto& p : spec.points) d += I_point(point_rep(p.type), k);
    return d;
}

Cor35Report cor35_check(const OrbifoldSpec& spec) {
    validate_spec(spec);
    const auto n = spec_order(spec);
    if (n <= 2) throw Error("precondition", "cor35_check", "needs n > 2, got n = " + std::to_string(n));
    if (spec.b1 != 0) throw Error("precondition", "cor35_check", "needs b1 = 0");
    if (!expected_blowups(spec))
        throw Error("precondition", "cor35_check",
                    "9 - K^2 = " + to_string(9 - canonical_square(spec)) +
                        " is not a nonnegative integer, so the canonical class of the resolution cannot be of the required form");
    Cor35Report rep;
    for (std::int64_t k = 2; k <= n - 1; ++k) {
        Cor35Row row{k, d_dimension(spec, k), false};
        if (is_integer(row.d) && row.d < 0) {
            BigInt v = numerator_of(row.d);
            row.negative_even = (v % 2) == 0;
        }
        if (!row.negative_even)
            rep.violations.push_back("d(K^" + std::to_string(k) + ") = " + to_string(row.d) + " is not a negative even integer");
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

} // namespace orbkit
