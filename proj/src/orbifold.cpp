#include "orbkit/orbifold.hpp"

#include <set>

namespace orbkit {

void validate_spec(const OrbifoldSpec& spec) {
    if (spec.b1 < 0) throw Error("precondition", "validate_spec", "b1 must be nonnegative");
    for (std::size_t i = 0; i < spec.surfaces.size(); ++i) {
        const auto& s = spec.surfaces[i];
        auto who = "surface #" + std::to_string(i + 1);
        if (s.genus < 0) throw Error("precondition", "validate_spec", who + ": negative genus");
        if (s.m < 2) throw Error("precondition", "validate_spec", who + ": isotropy order must exceed 1");
        if (gcd64(mod64(s.normal_weight, s.m), s.m) != 1)
            throw Error("precondition", "validate_spec", who + ": normal weight not coprime to the order");
    }
    for (std::size_t j = 0; j < spec.points.size(); ++j) {
        try {
            validate_point(spec.points[j].type);
        } catch (const Error& e) {
            throw Error("precondition", "validate_spec", "point #" + std::to_string(j + 1) + ": " + e.what());
        }
    }
    if (spec_order(spec) <= 1)
        throw Error("precondition", "validate_spec", "n = lcm of the isotropy orders is 1; the spec has n > 1 by assumption");
}

std::int64_t spec_order(const OrbifoldSpec& spec) {
    std::int64_t n = 1;
    for (const auto& s : spec.surfaces) n = lcm64(n, s.m);
    for (const auto& p : spec.points) n = lcm64(n, mj_order(p.type));
    return n;
}

OrbifoldSpec with_default_labels(const OrbifoldSpec& spec) {
    OrbifoldSpec out = spec;
    for (std::size_t i = 0; i < out.surfaces.size(); ++i)
        if (out.surfaces[i].label.empty()) out.surfaces[i].label = "B" + std::to_string(i + 1);
    for (std::size_t j = 0; j < out.points.size(); ++j) {
        auto& p = out.points[j];
        if (p.label.empty()) p.label = "q" + std::to_string(j + 1);
        if (!p.chain_labels.empty()) continue;
        auto t = normalize_type(p.type);
        auto len = hj_chain(t.m, t.q).size();
        for (std::size_t k = 0; k < len; ++k)
            p.chain_labels.push_back(len == 1 ? "F" + std::to_string(j + 1)
                                              : "F" + std::to_string(j + 1) + "." + std::to_string(k + 1));
    }
    return out;
}

Rational canonical_square(const OrbifoldSpec& spec) {
    Rational k2 = 0;
    for (const auto& s : spec.surfaces) {
        Rational w = make_rational(s.m - 1, s.m);
        k2 += w * w * (2 * s.m * (s.genus - 1));
    }
    for (const auto& p : spec.points) {
        auto t = normalize_type(p.type);
        auto chain = hj_chain(t.m, t.q);
        auto a = discrepancies(chain);
        // c1(D_j) . F_l = b_l - 2
        for (std::size_t k = 0; k < chain.size(); ++k) k2 += a[k] * (chain[k] - 2);
    }
    return k2;
}

std::optional<std::int64_t> expected_blowups(const OrbifoldSpec& spec) {
    Rational n = 9 - canonical_square(spec);
    if (!is_integer(n) || n < 0) return std::nullopt;
    return to_int64(n, "expected_blowups");
}

AssemblyResult assemble_resolution(const OrbifoldSpec& raw, const Configuration& expressions) {
    auto spec = with_default_labels(raw);
    validate_spec(spec);
    AssemblyResult res;
    auto& model = res.model;
    auto& bad = res.violations;
    model.n_blowups = expressions.n_blowups();
    model.basis = expressions.basis;

    std::set<std::string> used;
    auto lookup = [&](const std::string& label) -> std::optional<ClassVector> {
        const auto* lc = expressions.find(label);
        if (!lc) {
            bad.push_back("missing expression for component " + label);
            return std::nullopt;
        }
        used.insert(label);
        if (lc->cls.n_blowups() != model.n_blowups) {
            bad.push_back(label + ": expression has N=" + std::to_string(lc->cls.n_blowups()) + " but the basis has N=" +
                          std::to_string(model.n_blowups));
            return std::nullopt;
        }
        return lc->cls;
    };

    for (std::size_t i = 0; i < spec.surfaces.size(); ++i) {
        const auto& s = spec.surfaces[i];
        auto cls = lookup(s.label);
        if (!cls) continue;
        auto sq = intersect(*cls, *cls);
        auto want = 2 * s.m * (s.genus - 1);
        if (sq != want)
            bad.push_back(s.label + ": self-intersection " + std::to_string(sq) + " but 2m(g-1) = " + std::to_string(want));
        model.components.push_back({s.label, ComponentRole::surface, i, 0, *cls, -make_rational(s.m - 1, s.m)});
    }
    for (std::size_t j = 0; j < spec.points.size(); ++j) {
        const auto& p = spec.points[j];
        auto t = normalize_type(p.type);
        auto chain = hj_chain(t.m, t.q);
        auto a = discrepancies(chain);
        model.chains.push_back(chain);
        if (p.chain_labels.size() != chain.size()) {
            bad.push_back(p.label + ": " + std::to_string(p.chain_labels.size()) + " chain labels for a chain of length " +
                          std::to_string(chain.size()));
            continue;
        }
        for (std::size_t k = 0; k < chain.size(); ++k) {
            auto cls = lookup(p.chain_labels[k]);
            if (!cls) continue;
            auto sq = intersect(*cls, *cls);
            if (sq != -chain[k])
                bad.push_back(p.chain_labels[k] + ": self-intersection " + std::to_string(sq) + " but the chain needs " +
                              std::to_string(-chain[k]));
            model.components.push_back({p.chain_labels[k], ComponentRole::chain_sphere, j, k, *cls, a[k]});
        }
    }
    for (const auto& lc : expressions.classes)
        if (!used.count(lc.label)) bad.push_back("expression " + lc.label + " matches no component of the spec");

    const auto& cs = model.components;
    for (std::size_t x = 0; x < cs.size(); ++x)
        for (std::size_t y = x + 1; y < cs.size(); ++y) {
            bool adjacent = cs[x].role == ComponentRole::chain_sphere && cs[y].role == ComponentRole::chain_sphere &&
                            cs[x].owner == cs[y].owner &&
                            (cs[x].position + 1 == cs[y].position || cs[y].position + 1 == cs[x].position);
            auto want = adjacent ? 1 : 0;
            auto got = intersect(cs[x].cls, cs[y].cls);
            if (got != want)
                bad.push_back(cs[x].label + "." + cs[y].label + " = " + std::to_string(got) + ", expected " +
                              std::to_string(want) + (adjacent ? " (chain neighbours)" : " (disjoint components)"));
        }

    // Canonical identity, coefficientwise.
    const auto n = model.n_blowups;
    Rational a_sum = 0;
    std::vector<Rational> e_sum(n, 0);
    for (const auto& c : cs) {
        a_sum += c.weight * c.cls.a;
        for (std::size_t i = 0; i < n; ++i) e_sum[i] -= c.weight * c.cls.b[i];
    }
    if (a_sum != -3) bad.push_back("canonical identity: coefficient of H is " + to_string(a_sum) + ", expected -3");
    for (std::size_t i = 0; i < n; ++i)
        if (e_sum[i] != 1)
            bad.push_back("canonical identity: coefficient of E_" + model.basis[i] + " is " + to_string(e_sum[i]) +
                          ", expected 1");

    auto expected = expected_blowups(spec);
    if (!expected)
        bad.push_back("N consistency: 9 - K^2 = " + to_string(9 - canonical_square(spec)) +
                      " is not a nonnegative integer");
    else if (static_cast<std::size_t>(*expected) != n)
        bad.push_back("N consistency: the singular set forces N = " + std::to_string(*expected) + " but the basis has N = " +
                      std::to_string(n));
    return res;
}

EulerCharacteristics euler_characteristics(const OrbifoldSpec& spec, std::size_t n_blowups) {
    EulerCharacteristics e;
    e.chi_resolution = 3 + static_cast<std::int64_t>(n_blowups);
    e.chi_underlying = e.chi_resolution;
    for (const auto& p : spec.points) {
        auto t = normalize_type(p.type);
        e.chi_underlying -= static_cast<std::int64_t>(hj_chain(t.m, t.q).size());
    }
    return e;
}

EulerCharacteristics euler_characteristics(const OrbifoldSpec& spec, const ResolutionModel& model) {
    return euler_characteristics(spec, model.n_blowups);
}

bool ruled_check(std::size_t n_blowups, const AreaVector& areas) {
    return areas.pair(canonical_class(n_blowups)) < 0;
}

bool ruled_check(const ResolutionModel& model, const AreaVector& areas) { return ruled_check(model.n_blowups, areas); }

} // namespace orbkit
