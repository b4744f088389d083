#include "orbkit/cover.hpp"

#include "orbkit/cyclotomic.hpp"

#include <algorithm>

namespace orbkit {

std::vector<std::int64_t> prime_factors(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        out.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) out.push_back(n);
    return out;
}

CoverReport cover_numerology(const OrbifoldSpec& raw) {
    auto spec = with_default_labels(raw);
    validate_spec(spec);
    CoverReport rep;
    rep.n = spec_order(spec);
    for (const auto& s : spec.surfaces) rep.surface_preimages.push_back(rep.n / s.m);
    for (const auto& p : spec.points) {
        auto h = sl_part_order(p.type);
        rep.point_preimages.push_back({p.label, rep.n / mj_order(p.type), h});
        if (h > 1) rep.singular_upstairs.push_back(p.label);
    }
    rep.y_equals_resolution = rep.singular_upstairs.empty();
    return rep;
}

CoverEuler euler_of_cover(std::int64_t chi_quotient, std::int64_t p, std::int64_t fixed_euler, std::int64_t x_duval) {
    if (!is_prime(p))
        throw Error("precondition", "euler_of_cover",
                    "order " + std::to_string(p) + " is not prime; iterate over prime-order subgroups instead");
    CoverEuler e;
    e.chi_y = p * chi_quotient - (p - 1) * fixed_euler;
    e.chi_y_tilde = e.chi_y + x_duval * (p * p - 1);
    return e;
}

const char* to_string(CoverVerdict v) {
    switch (v) {
    case CoverVerdict::t2_bundle_over_t2: return "T2_bundle_over_T2";
    case CoverVerdict::rational_homology_t4: return "rational_homology_T4";
    case CoverVerdict::integral_homology_k3: return "integral_homology_K3";
    }
    return "?";
}

Classification classify_cy_cover(const OrbifoldSpec& raw) {
    auto spec = with_default_labels(raw);
    validate_spec(spec);
    Classification c;
    if (spec.b1 > 0) {
        c.verdict = CoverVerdict::t2_bundle_over_t2;
        c.reason = "b1 > 0";
        for (const auto& s : spec.surfaces)
            if (s.genus != 1)
                c.contradictions.push_back(s.label + " has genus " + std::to_string(s.genus) +
                                           "; with b1 > 0 every singular component is a torus of square zero");
        for (const auto& p : spec.points)
            c.contradictions.push_back(p.label + " is an isolated singular point; with b1 > 0 there are none");
        return c;
    }
    auto only_points = [&](std::size_t count, std::int64_t m, auto&& accept) {
        if (!spec.surfaces.empty() || spec.points.size() != count) return false;
        return std::all_of(spec.points.begin(), spec.points.end(),
                           [&](const IsolatedPoint& p) { return p.type.m == m && accept(p.type); });
    };
    if (only_points(9, 3, [](const CyclicSingularPoint& q) { return mj_order(q) == 3; })) {
        c.verdict = CoverVerdict::rational_homology_t4;
        c.reason = "nine non-Du Val points of order 3";
        return c;
    }
    if (only_points(5, 5, [](const CyclicSingularPoint& q) {
            auto t = normalize_type(q);
            return t.q == 2 || t.q == 3;
        })) {
        c.verdict = CoverVerdict::rational_homology_t4;
        c.reason = "five points of order 5 of type (1,2)";
        return c;
    }
    c.verdict = CoverVerdict::integral_homology_k3;
    c.reason = "b1 = 0 and the singular set is neither of the two exceptional configurations";
    return c;
}

std::vector<std::string> thm32_check(const OrbifoldSpec& raw) {
    auto spec = with_default_labels(raw);
    if (classify_cy_cover(spec).verdict != CoverVerdict::integral_homology_k3)
        throw Error("precondition", "thm32_check", "the Calabi-Yau cover is not an integral homology K3");
    std::vector<std::string> v;
    const auto n = spec_order(spec);
    const auto primes = prime_factors(n);
    auto max_prime = primes.empty() ? std::int64_t{1} : primes.back();
    auto ns = std::to_string(n);
    if (max_prime > 19) v.push_back("n = " + ns + " has prime factor " + std::to_string(max_prime) + " > 19");

    std::vector<const SurfaceComponent*> high, tori;
    for (const auto& s : spec.surfaces) {
        if (s.genus > 1) high.push_back(&s);
        if (s.genus == 1) tori.push_back(&s);
    }
    if (high.size() > 1) v.push_back("more than one singular component of genus > 1");
    if (high.size() == 1) {
        const auto& h = *high.front();
        for (const auto& s : spec.surfaces)
            if (&s != &h && s.genus != 0)
                v.push_back("with " + h.label + " of genus " + std::to_string(h.genus) + ", " + s.label +
                            " must be a sphere but has genus " + std::to_string(s.genus));
        if (n != h.m) v.push_back("with " + h.label + " of genus > 1, n must equal its order " + std::to_string(h.m) + " but n = " + ns);
        if (max_prime > 5) v.push_back("with a component of genus > 1, prime factors of n must be at most 5 (n = " + ns + ")");
    }
    if (tori.size() > 2) v.push_back("more than two singular tori");
    if (tori.size() == 2) {
        if (spec.surfaces.size() != 2) v.push_back("with two singular tori there can be no other singular component");
        if (n != 2) v.push_back("with two singular tori n must be 2 but n = " + ns);
    }
    if (tori.size() == 1) {
        if (n != tori.front()->m)
            v.push_back("with a single singular torus n must equal its order " + std::to_string(tori.front()->m) +
                        " but n = " + ns);
        if (max_prime > 11) v.push_back("with a single singular torus prime factors of n must be at most 11 (n = " + ns + ")");
    }
    if (n > 2) {
        bool non_torus = std::any_of(spec.surfaces.begin(), spec.surfaces.end(), [](auto& s) { return s.genus != 1; });
        bool non_du_val = std::any_of(spec.points.begin(), spec.points.end(), [](auto& p) { return mj_order(p.type) > 1; });
        if (!non_torus && !non_du_val)
            v.push_back("n = " + ns + " > 2 requires a singular component that is not a torus or a non-Du Val point");
    }
    return v;
}

EdmondsResult edmonds_solve(std::int64_t b2, std::int64_t p, std::int64_t chi_fix, std::int64_t b1_fix) {
    if (!is_prime(p)) throw Error("precondition", "edmonds_solve", std::to_string(p) + " is not prime");
    if (b2 < 0) throw Error("precondition", "edmonds_solve", "b2 must be nonnegative");
    EdmondsResult res;
    const auto s = b1_fix;
    if (s < 0) {
        res.violated = "s = b1(M^G) must be nonnegative";
        return res;
    }
    const auto t = chi_fix - 2 + s;
    if (t < 0) {
        res.violated = "chi(M^G) = t - s + 2 forces t = " + std::to_string(t) + " < 0";
        return res;
    }
    const auto rp = b2 - t - s * (p - 1);
    if (rp < 0) {
        res.violated = "b2 = rp + t + s(p-1) forces rp = " + std::to_string(rp) + " < 0";
        return res;
    }
    if (rp % p != 0) {
        res.violated = "b2 = rp + t + s(p-1) forces r = " + std::to_string(rp) + "/" + std::to_string(p) + ", not an integer";
        return res;
    }
    EdmondsSolution sol{rp / p, t, s, false};
    sol.excluded_trivial = sol.r == 0 && sol.s == 0;
    res.solution = sol;
    return res;
}

AngleResult angle_feasibility(std::int64_t d, bool require_nonnegative) {
    if (d < 2) throw Error("precondition", "angle_feasibility", "d must be at least 2");
    AngleResult res;
    auto order = [d](std::int64_t a) { return d / gcd64(a, d); };
    auto cosine = [d](std::int64_t a) {
        return (CyclotomicValue::root_power(d, a) + CyclotomicValue::root_power(d, -a)) * make_rational(1, 2);
    };
    const CyclotomicValue one(d, 1);
    const auto phi = euler_phi(d);
    for (std::int64_t a1 = 0; a1 < d; ++a1)
        for (std::int64_t a2 = 0; a2 < d; ++a2) {
            if (lcm64(order(a1), order(a2)) != d) continue;
            auto c1 = cosine(a1), c2 = cosine(a2);
            auto s2 = ((c1 + c2) * Rational(2)).as_rational();
            if (!s2 || !is_integer(*s2)) continue;
            auto lv = (one - c1) * (one - c2) * Rational(4);
            auto l = lv.as_rational();
            if (!l || !is_integer(*l)) continue;
            // Second route: the trace form divided by the degree.
            if (lv.trace() / Rational(phi) != *l)
                throw Error("internal", "angle_feasibility", "trace and rational reconstruction disagree");
            if (require_nonnegative && *l < 0) continue;
            res.witnesses.push_back({a1, a2, to_int64(*l, "angle_feasibility")});
        }
    res.feasible = !res.witnesses.empty();
    return res;
}

} // namespace orbkit
