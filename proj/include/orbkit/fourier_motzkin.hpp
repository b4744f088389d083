#pragma once

#include "orbkit/rational.hpp"

#include <string>
#include <vector>

namespace orbkit {

enum class Relation { ge, gt, eq };

// coeffs . x  (>= | > | =)  0
struct HomogeneousConstraint {
    std::vector<Rational> coeffs;
    Relation relation = Relation::ge;
    std::string name;
};

struct FeasibilityResult {
    bool feasible = false;
    // Primitive integer point satisfying every constraint (strict ones strictly).
    std::vector<Rational> point;
    // Names of constraints whose nonnegative combination is contradictory.
    std::vector<std::string> certificate;
};

// Exact feasibility of a homogeneous system.  Strict rows are normalised to
// coeffs . x >= 1 (any solution of the strict cone rescales onto this), then
// equalities are substituted away and the remaining variables are removed by
// Fourier-Motzkin elimination with Chernikov's redundancy rule.
FeasibilityResult solve_homogeneous(const std::vector<HomogeneousConstraint>& constraints, std::size_t n_vars);

} // namespace orbkit
