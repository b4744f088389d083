#include <doctest.h>

#include "orbkit/search.hpp"
#include "reference_data.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <random>
#include <set>

using namespace orbkit;

namespace {

bool contains(const SearchResult& r, const CanonicalForm& f) {
    return std::find(r.forms.begin(), r.forms.end(), f) != r.forms.end();
}

// Brute-force canonical form: every type-preserving unit placement and every column order.
CanonicalForm brute_canonical(const SearchTarget& t, const std::vector<ClassVector>& cls) {
    const auto n = cls.front().b.size();
    std::vector<std::size_t> cols(n);
    std::iota(cols.begin(), cols.end(), 0);
    std::vector<std::size_t> units(t.units.size());
    std::iota(units.begin(), units.end(), 0);
    std::optional<std::vector<std::vector<std::int64_t>>> best;
    do {
        bool types_ok = true;
        for (std::size_t j = 0; j < units.size(); ++j) types_ok = types_ok && t.units[units[j]].type == t.units[j].type;
        if (!types_ok) continue;
        std::sort(cols.begin(), cols.end());
        do {
            std::vector<std::vector<std::int64_t>> m;
            for (auto u : units)
                for (auto c : t.units[u].members) {
                    std::vector<std::int64_t> row{cls[c].a};
                    for (auto i : cols) row.push_back(cls[c].b[i]);
                    m.push_back(row);
                }
            if (!best || m < *best) best = m;
        } while (std::next_permutation(cols.begin(), cols.end()));
    } while (std::next_permutation(units.begin(), units.end()));
    return CanonicalForm{*best};
}

// Every assignment in the declared box: 0 <= a <= 3 scale, b in [0, a] for a > 0, b in {-1, 0, 1} for a = 0.
std::set<CanonicalForm> brute_force(const SearchTarget& t, std::size_t n) {
    std::vector<std::vector<ClassVector>> cands(t.components.size());
    for (std::size_t x = 0; x < t.components.size(); ++x) {
        const auto& c = t.components[x];
        for (std::int64_t a = 0; a <= 3 * t.scale; ++a) {
            const std::int64_t lo = a == 0 ? -1 : 0, hi = a == 0 ? 1 : a;
            std::vector<std::int64_t> b(n, lo);
            for (;;) {
                ClassVector f{a, b};
                if (intersect(f, f) == c.square && intersect(canonical_class(n), f) == c.k_dot()) cands[x].push_back(f);
                std::size_t i = 0;
                while (i < n && b[i] == hi) b[i++] = lo;
                if (i == n) break;
                ++b[i];
            }
        }
    }
    std::set<CanonicalForm> out;
    std::vector<ClassVector> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t x) {
        if (x == t.components.size()) {
            ClassVector sum{0, std::vector<std::int64_t>(n, 0)};
            for (std::size_t y = 0; y < x; ++y) sum = sum + cur[y] * t.components[y].weight;
            if (sum == ClassVector{3 * t.scale, std::vector<std::int64_t>(n, t.scale)}) out.insert(brute_canonical(t, cur));
            return;
        }
        for (const auto& f : cands[x]) {
            bool ok = true;
            for (std::size_t y = 0; y < x && ok; ++y) ok = intersect(f, cur[y]) == t.pairing[x][y];
            if (!ok) continue;
            cur.push_back(f);
            rec(x + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

// A target read off from a random decomposition of scale * (3H - sum E).
std::optional<SearchTarget> random_target(std::mt19937& rng, std::size_t& n) {
    n = 1 + rng() % 6;
    const std::int64_t s = 1 + static_cast<std::int64_t>(rng() % 2);
    std::size_t k = 2 + rng() % 4;
    std::vector<std::int64_t> w(k, 1), a(k, 0);
    if (s == 2)
        for (auto& x : w) x = 1 + static_cast<std::int64_t>(rng() % 2);
    std::int64_t left = 3 * s;
    for (std::size_t x = 0; x < k; ++x) {
        if (x + 1 == k) {
            if (left % w[x] != 0) return std::nullopt;
            a[x] = left / w[x];
        } else {
            a[x] = static_cast<std::int64_t>(rng() % static_cast<unsigned>(left / w[x] + 1));
        }
        left -= w[x] * a[x];
        if (a[x] < 1) return std::nullopt;
    }
    std::vector<ClassVector> f;
    for (std::size_t x = 0; x < k; ++x) f.push_back({a[x], std::vector<std::int64_t>(n, 0)});
    std::vector<std::int64_t> need(n, s);
    if (n >= 2 && rng() % 2 == 0) {
        // A zero-a sphere E_p - E_q of weight 1.
        ClassVector z{0, std::vector<std::int64_t>(n, 0)};
        z.b[0] = -1;
        z.b[1] = 1;
        ++need[0];
        --need[1];
        f.push_back(z);
        w.push_back(1);
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t rest = need[i];
        for (int tries = 0; rest > 0 && tries < 50; ++tries) {
            auto x = rng() % k;
            if (w[x] <= rest && f[x].b[i] < f[x].a) {
                ++f[x].b[i];
                rest -= w[x];
            }
        }
        if (rest != 0) return std::nullopt;
    }
    k = f.size();
    SearchTarget t;
    t.scale = s;
    for (std::size_t x = 0; x < k; ++x) {
        auto g = adjunction_genus(f[x]);
        if (!is_integer(g) || g < 0) return std::nullopt;
        t.components.push_back({"F" + std::to_string(x + 1), intersect(f[x], f[x]), to_int64(g, "test"), w[x]});
    }
    t.pairing.assign(k, std::vector<std::int64_t>(k, 0));
    for (std::size_t x = 0; x < k; ++x)
        for (std::size_t y = 0; y < k; ++y)
            if (x != y) t.pairing[x][y] = intersect(f[x], f[y]);
    // Same type when the transposition is an automorphism of the target data.
    std::vector<std::size_t> root(k);
    std::iota(root.begin(), root.end(), 0);
    for (std::size_t x = 0; x < k; ++x)
        for (std::size_t y = x + 1; y < k; ++y) {
            const auto& cx = t.components[x];
            const auto& cy = t.components[y];
            bool swap_ok = cx.square == cy.square && cx.genus == cy.genus && cx.weight == cy.weight;
            for (std::size_t z = 0; z < k && swap_ok; ++z)
                if (z != x && z != y) swap_ok = t.pairing[x][z] == t.pairing[y][z];
            if (swap_ok) root[y] = root[x];
        }
    for (std::size_t x = 0; x < k; ++x) t.units.push_back({"t" + std::to_string(root[x]), {x}});
    return t;
}

} // namespace

TEST_CASE("targets built from singular sets") {
    auto t = target_from_spec(testdata::case_i_spec());
    CHECK(t.scale == 3);
    CHECK(t.components.size() == 9);
    CHECK(t.units.size() == 9);
    for (const auto& c : t.components) {
        CHECK(c.square == -3);
        CHECK(c.weight == 1);
        CHECK(c.k_dot() == 1);
    }
    auto t2 = target_from_spec(testdata::case_ii_spec());
    CHECK(t2.scale == 5);
    REQUIRE(t2.units.size() == 5);
    CHECK(t2.units[0].members.size() == 2);
    CHECK(t2.components[0].weight == 2);
    CHECK(t2.components[1].weight == 1);
    CHECK(t2.pairing[0][1] == 1);
    CHECK(t2.pairing[0][2] == 0);
    CHECK(check_assignment(t2, testdata::five_chains()).empty());
    CHECK(check_assignment(t, testdata::hesse_dual()).empty());
    CHECK(check_assignment(t, testdata::tangency_example()).empty());
}

TEST_CASE("canonical forms") {
    auto t = target_from_spec(testdata::case_i_spec());
    auto hesse = testdata::hesse_dual();
    auto form = canonicalize_solution(t, hesse);

    std::mt19937 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        auto shuffled = hesse;
        std::vector<std::size_t> perm(12);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (auto& c : shuffled.classes) {
            auto old = c.cls.b;
            for (std::size_t i = 0; i < 12; ++i) c.cls.b[perm[i]] = old[i];
        }
        std::vector<std::size_t> relabel(9);
        std::iota(relabel.begin(), relabel.end(), 0);
        std::shuffle(relabel.begin(), relabel.end(), rng);
        auto moved = shuffled;
        for (std::size_t j = 0; j < 9; ++j) moved.classes[j].cls = shuffled.classes[relabel[j]].cls;
        CHECK(canonicalize_solution(t, moved) == form);
        CHECK(canonicalize_solution(moved) == canonicalize_solution(hesse));
    }
    CHECK(canonicalize_solution(t, testdata::tangency_example()) != form);

    auto single = testdata::make_config({"1", "2", "3"}, {{"F", "H-E_2-E_3"}});
    CHECK(canonicalize_solution(single).rows == std::vector<std::vector<std::int64_t>>{{1, 0, 1, 1}});

    auto back = assignment_from_canonical(t, form);
    CHECK(check_assignment(t, back).empty());
    CHECK(canonicalize_solution(t, back) == form);
}

TEST_CASE("search on the nine-sphere target") {
    auto spec = testdata::case_i_spec();
    auto t = target_from_spec(spec);
    auto res = search_expressions(t, 12, 1000);
    CHECK_FALSE(res.stats.truncated);
    CHECK(contains(res, canonicalize_solution(t, testdata::hesse_dual())));
    CHECK(contains(res, canonicalize_solution(t, testdata::tangency_example())));
    CHECK(std::is_sorted(res.forms.begin(), res.forms.end()));
    CHECK(std::set<CanonicalForm>(res.forms.begin(), res.forms.end()).size() == res.forms.size());
    for (std::size_t i = 0; i < res.assignments.size(); ++i) {
        CHECK(assemble_resolution(spec, res.assignments[i]).ok());
        CHECK(check_assignment(t, res.assignments[i]).empty());
        CHECK(canonicalize_solution(t, res.assignments[i]) == res.forms[i]);
    }
}

TEST_CASE("search on five chain pairs") {
    auto spec = testdata::case_ii_spec();
    auto t = target_from_spec(spec);
    auto res = search_expressions(t, 11, 1000);
    CHECK_FALSE(res.stats.truncated);
    CHECK(contains(res, canonicalize_solution(t, testdata::five_chains())));
    for (const auto& a : res.assignments) CHECK(assemble_resolution(spec, a).ok());
}

TEST_CASE("search: infeasible targets and limits") {
    auto two = disjoint_spheres_target(2, -3, 1, 3);
    auto res = search_expressions(two, 2, 100);
    CHECK(res.assignments.empty());
    CHECK(brute_force(two, 2).empty());

    auto t = target_from_spec(testdata::case_i_spec());
    auto few = search_expressions(t, 12, 5);
    CHECK(few.forms.size() == 5);
    CHECK(few.stats.truncated);
    CHECK(search_expressions(t, 11, 100).forms.empty());
}

TEST_CASE("search output does not depend on the worker count") {
    auto t = target_from_spec(testdata::case_i_spec());
    setenv("ORBKIT_THREADS", "1", 1);
    auto one = search_expressions(t, 12, 1000);
    setenv("ORBKIT_THREADS", "3", 1);
    auto three = search_expressions(t, 12, 1000);
    unsetenv("ORBKIT_THREADS");
    CHECK(one.forms == three.forms);
    CHECK(one.assignments == three.assignments);
}

TEST_CASE("search agrees with brute force on small random targets") {
    std::mt19937 rng(20261015);
    int compared = 0, nonempty = 0, with_zero = 0;
    while (compared < 60) {
        std::size_t n = 0;
        auto t = random_target(rng, n);
        if (!t) continue;
        ++compared;
        auto expect = brute_force(*t, n);
        auto got = search_expressions(*t, n, 100000);
        CHECK_FALSE(got.stats.truncated);
        CHECK(std::set<CanonicalForm>(got.forms.begin(), got.forms.end()) == expect);
        if (!expect.empty()) ++nonempty;
        for (const auto& f : expect)
            if (std::any_of(f.rows.begin(), f.rows.end(), [](const auto& r) { return r[0] == 0; })) {
                ++with_zero;
                break;
            }
    }
    CHECK(nonempty == compared);
    CHECK(with_zero >= 10);
}

TEST_CASE("search agrees with brute force on interchangeable spheres") {
    int consistent = 0, solvable = 0;
    for (std::size_t count = 2; count <= 4; ++count)
        for (std::int64_t sq = -3; sq <= 4; ++sq)
            for (std::int64_t meet = 0; meet <= 2; ++meet)
                for (std::int64_t s = 1; s <= 2; ++s)
                    for (std::int64_t w = 1; w <= s; ++w)
                        for (std::size_t n = 1; n <= 5; ++n) {
                            auto c = static_cast<std::int64_t>(count);
                            auto lhs = w * w * (c * sq + c * (c - 1) * meet);
                            if (lhs != s * s * (9 - static_cast<std::int64_t>(n))) continue;
                            ++consistent;
                            auto t = disjoint_spheres_target(count, sq, w, s);
                            for (std::size_t x = 0; x < count; ++x)
                                for (std::size_t y = 0; y < count; ++y)
                                    if (x != y) t.pairing[x][y] = meet;
                            auto expect = brute_force(t, n);
                            auto got = search_expressions(t, n, 100000);
                            CHECK(std::set<CanonicalForm>(got.forms.begin(), got.forms.end()) == expect);
                            if (!expect.empty()) ++solvable;
                        }
    CHECK(consistent >= 10);
    CHECK(solvable >= 3);
}
