#pragma once

#include "orbkit/lattice.hpp"
#include "orbkit/orbifold.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace orbkit {

struct SearchComponent {
    std::string label;
    std::int64_t square = 0;
    std::int64_t genus = 0;
    std::int64_t weight = 0;  // coefficient in sum_c weight_c F_c = scale * (3H - sum E)

    std::int64_t k_dot() const { return 2 * genus - 2 - square; }
};

// Components that may be permuted together; units with equal `type` are interchangeable.
struct SearchUnit {
    std::string type;
    std::vector<std::size_t> members;
};

struct SearchTarget {
    std::vector<SearchComponent> components;
    std::vector<std::vector<std::int64_t>> pairing;  // required F_x . F_y for x != y
    std::vector<SearchUnit> units;
    std::int64_t scale = 1;
};

// Builds the target of a singular set: chains of every point, singular surfaces, disjointness
// across strata and the canonical identity scaled to integers.
SearchTarget target_from_spec(const OrbifoldSpec& spec);

// Target of `count` pairwise disjoint spheres of the given square, all interchangeable.
SearchTarget disjoint_spheres_target(std::size_t count, std::int64_t square, std::int64_t weight, std::int64_t scale);

// Rows in unit order, each row (a, b_1..b_N), columns sorted; the lex-smallest in its orbit.
struct CanonicalForm {
    std::vector<std::vector<std::int64_t>> rows;
    auto operator<=>(const CanonicalForm&) const = default;
};

CanonicalForm canonicalize_solution(const SearchTarget& target, const Configuration& assignment);
// Every component is its own interchangeable unit.
CanonicalForm canonicalize_solution(const Configuration& assignment);

// Rebuilds an assignment from a canonical form using the target's labels and a numeric basis.
Configuration assignment_from_canonical(const SearchTarget& target, const CanonicalForm& form);

struct SearchStats {
    std::size_t branches = 0;   // top-level a-distributions
    std::size_t nodes = 0;      // rows placed during the search
    bool truncated = false;     // some branch hit the limit
};

struct SearchResult {
    std::vector<Configuration> assignments;  // canonical representatives, sorted
    std::vector<CanonicalForm> forms;
    SearchStats stats;
};

// Violations of the target's own constraints by an assignment (empty when it realizes the target).
std::vector<std::string> check_assignment(const SearchTarget& target, const Configuration& assignment);

// Depth-first search with double-lex symmetry breaking.  Workers: ORBKIT_THREADS or the hardware count.
SearchResult search_expressions(const SearchTarget& target, std::size_t n_blowups, std::size_t limit);

} // namespace orbkit
