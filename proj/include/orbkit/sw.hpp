#pragma once

#include "orbkit/orbifold.hpp"

#include <string>
#include <vector>

namespace orbkit {

// Characters of one stratum, as exponents of zeta_m = exp(2 pi i / m) for the generator g.
struct StratumRep {
    enum class Kind { surface, point } kind = Kind::point;
    std::int64_t m = 2;
    std::int64_t normal_exponent = 1;  // surface: rho(g) = zeta^normal_exponent
    std::int64_t w1 = 1, w2 = 1;       // point: rho_1(g), rho_2(g)
    std::int64_t k_exponent = 0;       // K restricted to the stratum: zeta^k_exponent
};

// K acts through the inverse of the normal character along a surface,
// and through zeta^-(w1 + w2) at an isolated point.
StratumRep surface_rep(const SurfaceComponent& s);
StratumRep point_rep(const CyclicSingularPoint& p);

Rational I_surface(const StratumRep& rep, std::int64_t k);
Rational I_point(const StratumRep& rep, std::int64_t k);

// d(K^k) = sum_i I_i chi(Sigma_i) + sum_j I_j.
Rational d_dimension(const OrbifoldSpec& spec, std::int64_t k);

struct Cor35Row {
    std::int64_t k = 0;
    Rational d;
    bool negative_even = false;
};

struct Cor35Report {
    std::vector<Cor35Row> rows;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Requires n > 2, b1 = 0 and an integral 9 - K^2; throws Error("precondition") otherwise.
Cor35Report cor35_check(const OrbifoldSpec& spec);

} // namespace orbkit
