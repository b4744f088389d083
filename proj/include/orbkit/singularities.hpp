#pragma once

#include "orbkit/rational.hpp"

#include <cstdint>
#include <vector>

namespace orbkit {

// Isolated fixed point of the cyclic group Z_m acting on C^2 with weights (w1, w2):
// the generator acts by (z1, z2) -> (zeta^w1 z1, zeta^w2 z2), zeta = exp(2 pi i / m).
struct CyclicSingularPoint {
    std::int64_t m = 0;
    std::int64_t w1 = 0;
    std::int64_t w2 = 0;
};

// Throws Error("precondition", ...) unless m > 1 and both weights are units mod m.
void validate_point(const CyclicSingularPoint& p);

struct CyclicType {
    std::int64_t m;
    std::int64_t q;
    bool operator==(const CyclicType&) const = default;
};

CyclicType normalize_type(const CyclicSingularPoint& p);

// Self-intersection magnitudes of the minimal resolution chain of type (1, q):
// m/q = b1 - 1/(b2 - 1/(...)), every b_k >= 2.
std::vector<std::int64_t> hj_chain(std::int64_t m, std::int64_t q);

// Coefficients a_k of the exceptional spheres in the canonical class of the resolution.
std::vector<Rational> discrepancies(const std::vector<std::int64_t>& chain);

std::int64_t mj_order(const CyclicSingularPoint& p);
// |H_j| where H_j is the part of G_j inside SU(2).
std::int64_t sl_part_order(const CyclicSingularPoint& p);

// mj_order == 1 and vanishing discrepancies must agree; throws on disagreement.
bool du_val_consistency(const CyclicSingularPoint& p);

} // namespace orbkit
