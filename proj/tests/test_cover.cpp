#include <doctest.h>

#include "orbkit/cover.hpp"
#include "orbkit/cyclotomic.hpp"
#include "reference_data.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

using namespace orbkit;

namespace {

OrbifoldSpec example_2_6_1() {
    OrbifoldSpec s;
    s.surfaces.push_back({1, 2, 1, "B1"});
    s.surfaces.push_back({1, 2, 1, "B2"});
    for (int j = 0; j < 8; ++j) s.points.push_back({{2, 1, 1}, "", {}});
    return s;
}

OrbifoldSpec example_2_6_4() {
    OrbifoldSpec s;
    s.points.push_back({{8, 1, 5}, "", {}});
    s.points.push_back({{8, 1, 5}, "", {}});
    s.points.push_back({{4, 1, 1}, "", {}});
    for (int j = 0; j < 3; ++j) s.points.push_back({{2, 1, 1}, "", {}});
    return s;
}

bool has_witness(const AngleResult& r, std::int64_t a1, std::int64_t a2, std::int64_t l) {
    for (const auto& w : r.witnesses)
        if (w.a1 == a1 && w.a2 == a2 && w.lefschetz == l) return true;
    return false;
}

using Float = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<200, boost::multiprecision::digit_base_2>>;

Float cos_float(std::int64_t a, std::int64_t d) {
    return cos(2 * boost::math::constants::pi<Float>() * Float(a) / Float(d));
}

} // namespace

TEST_CASE("cover numerology") {
    auto r = cover_numerology(testdata::case_i_spec());
    CHECK(r.n == 3);
    for (const auto& p : r.point_preimages) CHECK(p.count == 1);
    CHECK(r.y_equals_resolution);

    auto r4 = cover_numerology(example_2_6_4());
    CHECK(r4.n == 4);
    CHECK(r4.point_preimages[0].count == 1);  // m_j = 4 for (8;1,5)
    CHECK(r4.point_preimages[0].stabilizer == 2);
    CHECK(r4.point_preimages[2].count == 2);  // m_j = 2 for (4;1,1)
    CHECK(r4.point_preimages[3].count == 4);  // Du Val
    CHECK_FALSE(r4.y_equals_resolution);

    OrbifoldSpec single;
    single.surfaces.push_back({0, 2, 1, ""});
    auto r1 = cover_numerology(single);
    CHECK(r1.n == 2);
    CHECK(r1.surface_preimages == std::vector<std::int64_t>{1});
}

TEST_CASE("euler of the cover") {
    CHECK(euler_of_cover(6, 3, 9, 0).chi_y == 0);
    CHECK(euler_of_cover(4, 5, 5, 0).chi_y == 0);
    CHECK(euler_of_cover(7, 2, 0, 0).chi_y == 14);
    CHECK(euler_of_cover(6, 3, 9, 2).chi_y_tilde == 16);
    CHECK_THROWS_AS(euler_of_cover(6, 4, 0, 0), Error);
}

TEST_CASE("classification of the Calabi-Yau cover") {
    CHECK(classify_cy_cover(testdata::case_i_spec()).verdict == CoverVerdict::rational_homology_t4);
    CHECK(classify_cy_cover(testdata::case_ii_spec()).verdict == CoverVerdict::rational_homology_t4);
    CHECK(classify_cy_cover(example_2_6_1()).verdict == CoverVerdict::integral_homology_k3);

    OrbifoldSpec swapped = testdata::case_ii_spec();
    for (auto& p : swapped.points) p.type = {5, 1, 3};
    CHECK(classify_cy_cover(swapped).verdict == CoverVerdict::rational_homology_t4);

    OrbifoldSpec bundle;
    bundle.b1 = 1;
    bundle.surfaces.push_back({1, 2, 1, ""});
    auto ok = classify_cy_cover(bundle);
    CHECK(ok.verdict == CoverVerdict::t2_bundle_over_t2);
    CHECK(ok.contradictions.empty());
    bundle.surfaces.push_back({0, 2, 1, ""});
    bundle.points.push_back({{3, 1, 1}, "", {}});
    CHECK(classify_cy_cover(bundle).contradictions.size() == 2);
}

TEST_CASE("fixed-point rules for a K3 cover") {
    OrbifoldSpec high;
    high.surfaces.push_back({2, 3, 1, "S"});
    high.surfaces.push_back({1, 3, 1, "T"});
    auto v = thm32_check(high);
    REQUIRE_FALSE(v.empty());
    CHECK(v.front().find("must be a sphere") != std::string::npos);

    OrbifoldSpec big;
    big.surfaces.push_back({0, 23, 1, ""});
    auto vb = thm32_check(big);
    REQUIRE_FALSE(vb.empty());
    CHECK(vb.front().find("23 > 19") != std::string::npos);

    OrbifoldSpec tori;
    tori.surfaces.push_back({1, 2, 1, ""});
    tori.surfaces.push_back({1, 2, 1, ""});
    CHECK(thm32_check(tori).empty());

    OrbifoldSpec du_val_torus;
    du_val_torus.surfaces.push_back({1, 3, 1, ""});
    du_val_torus.points.push_back({{3, 1, 2}, "", {}});
    auto vt = thm32_check(du_val_torus);
    REQUIRE(vt.size() == 1);
    CHECK(vt.front().find("requires a singular component") != std::string::npos);

    CHECK_THROWS_AS(thm32_check(testdata::case_i_spec()), Error);
}

TEST_CASE("Edmonds identities") {
    auto a = edmonds_solve(22, 3, 9, 0);
    REQUIRE(a.solution);
    CHECK(a.solution->r == 5);
    CHECK(a.solution->t == 7);
    CHECK(a.solution->s == 0);
    auto b = edmonds_solve(22, 2, 0, 4);
    REQUIRE(b.solution);
    CHECK(b.solution->r == 8);
    CHECK(b.solution->t == 2);
    CHECK(b.solution->s == 4);
    for (std::int64_t chi = -10; chi <= 30; ++chi) {
        auto c = edmonds_solve(22, 11, chi, 3);
        CHECK_FALSE(c.solution);
        CHECK_FALSE(c.violated.empty());
    }
    // Every returned triple satisfies the three identities.
    for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19})
        for (std::int64_t chi = -4; chi <= 24; ++chi)
            for (std::int64_t s = 0; s <= 12; ++s) {
                auto e = edmonds_solve(22, p, chi, s);
                if (!e.solution) continue;
                const auto& x = *e.solution;
                CHECK(22 == x.r * p + x.t + x.s * (p - 1));
                CHECK(x.t - x.s == chi - 2);
                CHECK(x.s == s);
                CHECK(x.excluded_trivial == (x.r == 0 && x.s == 0));
            }
    CHECK_THROWS_AS(edmonds_solve(22, 4, 0, 0), Error);
}

TEST_CASE("cyclotomic arithmetic") {
    CHECK(cyclotomic_polynomial(1) == std::vector<std::int64_t>{-1, 1});
    CHECK(cyclotomic_polynomial(6) == std::vector<std::int64_t>{1, -1, 1});
    CHECK(cyclotomic_polynomial(12) == std::vector<std::int64_t>{1, 0, -1, 0, 1});
    for (std::int64_t m = 1; m <= 40; ++m) {
        CHECK(static_cast<std::int64_t>(cyclotomic_polynomial(m).size()) - 1 == euler_phi(m));
        // The m-th roots of unity sum to zero (m > 1).
        CyclotomicValue sum(m);
        for (std::int64_t k = 0; k < m; ++k) sum += CyclotomicValue::root_power(m, k);
        CHECK(sum.as_rational() == Rational(m == 1 ? 1 : 0));
        auto z = CyclotomicValue::root_power(m, 1);
        auto w = z + CyclotomicValue(m, 3);
        CHECK((w * w.inverse()).as_rational() == Rational(1));
    }
    auto z5 = CyclotomicValue::root_power(5, 1);
    CHECK((z5 * z5 * z5 * z5 * z5).as_rational() == Rational(1));
    CHECK(z5.trace() == -1);
}

TEST_CASE("angle feasibility") {
    auto d3 = angle_feasibility(3);
    CHECK(d3.feasible);
    CHECK(has_witness(d3, 1, 1, 9));
    auto d5 = angle_feasibility(5);
    CHECK(d5.feasible);
    CHECK(has_witness(d5, 1, 2, 5));
    CHECK_FALSE(angle_feasibility(9).feasible);
    CHECK_FALSE(angle_feasibility(25).feasible);

    // Floating oracle for every reported witness.
    for (std::int64_t d = 2; d <= 30; ++d) {
        auto res = angle_feasibility(d);
        for (const auto& w : res.witnesses) {
            Float l = 4 * (1 - cos_float(w.a1, d)) * (1 - cos_float(w.a2, d));
            CHECK(abs(l - Float(w.lefschetz)) < Float(1e-50));
        }
    }
}
