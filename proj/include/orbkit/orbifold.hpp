#pragma once

#include "orbkit/lattice.hpp"
#include "orbkit/singularities.hpp"

#include <optional>
#include <string>
#include <vector>

namespace orbkit {

// A 2-dimensional component of the singular set: genus g, isotropy Z_m.
struct SurfaceComponent {
    std::int64_t genus = 0;
    std::int64_t m = 2;
    // Exponent of the generator's rotation of the normal direction.
    std::int64_t normal_weight = 1;
    std::string label;  // name of the descendant class B_i; defaulted when empty
};

struct IsolatedPoint {
    CyclicSingularPoint type;
    std::string label;
    // Names of the resolution spheres in chain order; defaulted when empty.
    std::vector<std::string> chain_labels;
};

struct OrbifoldSpec {
    std::vector<SurfaceComponent> surfaces;
    std::vector<IsolatedPoint> points;
    std::int64_t b1 = 0;
};

// Structural validity: coprime weights, m_i > 1, g_i >= 0, b1 >= 0, n > 1.
void validate_spec(const OrbifoldSpec& spec);

// n = lcm of the surface orders and the point orders m_j.
std::int64_t spec_order(const OrbifoldSpec& spec);

// Fills default surface labels (B1, B2, ...) and chain labels (F<j> or F<j>.<k>).
OrbifoldSpec with_default_labels(const OrbifoldSpec& spec);

// Square of the canonical class of the resolution, as forced by the singular set alone.
Rational canonical_square(const OrbifoldSpec& spec);
// 9 - K^2 when it is a nonnegative integer, else nullopt.
std::optional<std::int64_t> expected_blowups(const OrbifoldSpec& spec);

enum class ComponentRole { surface, chain_sphere };

struct ModelComponent {
    std::string label;
    ComponentRole role = ComponentRole::surface;
    std::size_t owner = 0;     // surface index or point index
    std::size_t position = 0;  // position in the chain
    ClassVector cls;
    // Coefficient of this class in the canonical identity sum_c weight_c * cls_c = K.
    Rational weight;
};

struct ResolutionModel {
    std::size_t n_blowups = 0;
    Basis basis;
    std::vector<ModelComponent> components;
    std::vector<std::vector<std::int64_t>> chains;
    // "No three components through one point" cannot be read off homology; it is declared here.
    bool assumes_no_triple_points = true;
};

struct AssemblyResult {
    ResolutionModel model;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

AssemblyResult assemble_resolution(const OrbifoldSpec& spec, const Configuration& expressions);

struct EulerCharacteristics {
    std::int64_t chi_resolution = 0;
    std::int64_t chi_underlying = 0;
};

EulerCharacteristics euler_characteristics(const OrbifoldSpec& spec, std::size_t n_blowups);
EulerCharacteristics euler_characteristics(const OrbifoldSpec& spec, const ResolutionModel& model);

bool ruled_check(std::size_t n_blowups, const AreaVector& areas);
bool ruled_check(const ResolutionModel& model, const AreaVector& areas);

} // namespace orbkit
