#pragma once

#include "orbkit/orbifold.hpp"

#include <optional>
#include <string>
#include <vector>

namespace orbkit {

struct PointPreimage {
    std::string label;
    std::int64_t count = 0;         // n / m_j
    std::int64_t stabilizer = 1;    // |H_j|; the preimages are singular when > 1
};

struct CoverReport {
    std::int64_t n = 1;
    std::vector<std::int64_t> surface_preimages;
    std::vector<PointPreimage> point_preimages;
    std::vector<std::string> singular_upstairs;
    bool y_equals_resolution = true;
};

CoverReport cover_numerology(const OrbifoldSpec& spec);

struct CoverEuler {
    std::int64_t chi_y = 0;
    std::int64_t chi_y_tilde = 0;
};

// p * chi(quotient) = chi(total) + (p - 1) * chi(fixed); then chi(Y~) = chi(Y) + x (p^2 - 1).
CoverEuler euler_of_cover(std::int64_t chi_quotient, std::int64_t p, std::int64_t fixed_euler, std::int64_t x_duval);

enum class CoverVerdict { t2_bundle_over_t2, rational_homology_t4, integral_homology_k3 };
const char* to_string(CoverVerdict v);

struct Classification {
    CoverVerdict verdict = CoverVerdict::integral_homology_k3;
    std::string reason;
    // Non-empty when a b1 > 0 spec contradicts the torus-bundle structure.
    std::vector<std::string> contradictions;
};

Classification classify_cy_cover(const OrbifoldSpec& spec);

std::vector<std::string> thm32_check(const OrbifoldSpec& spec);

struct EdmondsSolution {
    std::int64_t r = 0, t = 0, s = 0;
    bool excluded_trivial = false;  // r = s = 0
};

struct EdmondsResult {
    std::optional<EdmondsSolution> solution;
    std::string violated;  // names the failed identity when infeasible
};

EdmondsResult edmonds_solve(std::int64_t b2, std::int64_t p, std::int64_t chi_fix, std::int64_t b1_fix);

struct AngleWitness {
    std::int64_t a1 = 0, a2 = 0;
    std::int64_t lefschetz = 0;
    bool operator==(const AngleWitness&) const = default;
};

struct AngleResult {
    bool feasible = false;
    std::vector<AngleWitness> witnesses;
};

AngleResult angle_feasibility(std::int64_t d, bool require_nonnegative = true);

std::vector<std::int64_t> prime_factors(std::int64_t n);

} // namespace orbkit
