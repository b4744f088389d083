#include <doctest.h>

#include "orbkit/orbifold.hpp"
#include "reference_data.hpp"

using namespace orbkit;

namespace {

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
    for (const auto& s : v)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

} // namespace

TEST_CASE("case (i) resolution with the nine-line expressions") {
    auto res = assemble_resolution(testdata::case_i_spec(), testdata::hesse_dual());
    CHECK(res.ok());
    CHECK(res.model.n_blowups == 12);
    CHECK(res.model.components.size() == 9);
    CHECK(res.model.assumes_no_triple_points);

    // Independent recomputation: -(1/3) sum F_k, coefficientwise.
    auto cfg = testdata::hesse_dual();
    ClassVector sum{0, std::vector<std::int64_t>(12, 0)};
    for (const auto& c : cfg.classes) sum = sum + c.cls;
    CHECK(sum.a == 9);
    for (auto b : sum.b) CHECK(b == 3);
    CHECK(expected_blowups(testdata::case_i_spec()) == 12);
}

TEST_CASE("case (ii) resolution with chain pairs") {
    auto res = assemble_resolution(testdata::case_ii_spec(), testdata::five_chains());
    CHECK(res.ok());
    CHECK(res.model.n_blowups == 11);
    auto cfg = testdata::five_chains();
    for (int k = 1; k <= 5; ++k) {
        auto a = cfg.find("F1" + std::to_string(k))->cls;
        auto b = cfg.find("F2" + std::to_string(k))->cls;
        CHECK(intersect(a, b) == 1);
    }
    // 2 F1k + F2k summed: a = 15, each b = 5.
    ClassVector sum{0, std::vector<std::int64_t>(11, 0)};
    for (const auto& c : cfg.classes) sum = sum + c.cls * (c.label[1] == '1' ? 2 : 1);
    CHECK(sum.a == 15);
    for (auto b : sum.b) CHECK(b == 5);
}

TEST_CASE("a perturbed expression fails both the pairwise and canonical checks") {
    auto cfg = testdata::hesse_dual();
    cfg.classes[0].cls = parse_class("H-E_i-E_r-E_s-E_u", cfg.basis);
    auto res = assemble_resolution(testdata::case_i_spec(), cfg);
    CHECK_FALSE(res.ok());
    CHECK(mentions(res.violations, "F1.F2 = -1"));
    CHECK(mentions(res.violations, "coefficient of E_t"));
    CHECK(mentions(res.violations, "coefficient of E_u"));
}

TEST_CASE("assembly reports missing and mismatched data") {
    auto cfg = testdata::hesse_dual();
    cfg.classes.pop_back();
    auto res = assemble_resolution(testdata::case_i_spec(), cfg);
    CHECK(mentions(res.violations, "missing expression for component F9"));

    auto wrong_square = testdata::hesse_dual();
    wrong_square.classes[2].cls = parse_class("H-E_i-E_x-E_y", wrong_square.basis);
    CHECK(mentions(assemble_resolution(testdata::case_i_spec(), wrong_square).violations, "F3: self-intersection -2"));

    OrbifoldSpec torus;
    torus.surfaces.push_back({1, 2, 1, "B"});
    Configuration c;
    c.basis = numeric_basis(9);
    c.classes.push_back({"B", parse_class("3H-E1-E2-E3-E4-E5-E6-E7-E8", c.basis)});
    auto r2 = assemble_resolution(torus, c);
    CHECK(mentions(r2.violations, "B: self-intersection 1 but 2m(g-1) = 0"));
}

TEST_CASE("surfaces enter the canonical identity with weight (m-1)/m") {
    // Two tori of order 2: B1 + B2 = -2K = 6H - 2 sum E with N = 9.
    OrbifoldSpec spec;
    spec.surfaces.push_back({1, 2, 1, "B1"});
    spec.surfaces.push_back({1, 2, 1, "B2"});
    for (int j = 0; j < 8; ++j) spec.points.push_back({{2, 1, 1}, "", {}});
    auto labelled = with_default_labels(spec);
    CHECK(labelled.points[0].chain_labels == std::vector<std::string>{"F1"});
    CHECK(expected_blowups(spec) == 9);
}

TEST_CASE("euler characteristics") {
    auto e1 = euler_characteristics(testdata::case_i_spec(), 12);
    CHECK(e1.chi_resolution == 15);
    CHECK(e1.chi_underlying == 6);
    auto e2 = euler_characteristics(testdata::case_ii_spec(), 11);
    CHECK(e2.chi_resolution == 14);
    CHECK(e2.chi_underlying == 4);
    // Lefschetz cross-check for n = 5: 5 chi(X) = chi(Y) + 4 * 5 with chi(Y) = 0.
    CHECK(5 * e2.chi_underlying == 0 + 4 * 5);
    OrbifoldSpec surf;
    surf.surfaces.push_back({1, 2, 1, ""});
    auto e3 = euler_characteristics(surf, 9);
    CHECK(e3.chi_resolution == 12);
    CHECK(e3.chi_underlying == 12);
}

TEST_CASE("ruled check") {
    CHECK_FALSE(ruled_check(12, AreaVector{4, std::vector<Rational>(12, 1)}));
    CHECK(ruled_check(12, AreaVector{5, std::vector<Rational>(12, 1)}));
}

TEST_CASE("spec validation") {
    OrbifoldSpec bad;
    bad.points.push_back({{4, 2, 1}, "", {}});
    CHECK_THROWS_AS(validate_spec(bad), Error);
    OrbifoldSpec du_val_only;
    du_val_only.points.push_back({{3, 1, 2}, "", {}});
    CHECK_THROWS_AS(validate_spec(du_val_only), Error);  // n = 1
    CHECK_FALSE(expected_blowups(OrbifoldSpec{{}, {{{5, 1, 1}, "", {}}}, 0}).has_value());
}
