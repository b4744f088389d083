#pragma once

#include "orbkit/lattice.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace orbkit {

// A local branch of a component at a marked point.  A line branch lies on `line`;
// a germ has contact order kappa with its reference line `line` and multiplicity lambda.
struct Branch {
    enum class Kind { line, germ } kind = Kind::line;
    std::string owner;
    std::int64_t line = 0;
    std::int64_t kappa = 1;
    std::int64_t lambda = 1;

    bool is_line() const { return kind == Kind::line; }
    bool operator==(const Branch&) const = default;
};

Branch line_branch(std::string owner, std::int64_t line);
Branch germ_branch(std::string owner, std::int64_t ref_line, std::int64_t kappa, std::int64_t lambda);

// Intersection multiplicity of two distinct branches through the same point.
std::int64_t local_mult(const Branch& x, const Branch& y);

// (kappa - 1)(lambda - 1) / 2 for a germ, 0 for a line.
std::int64_t delta_invariant(const Branch& b);

struct MarkedPoint {
    std::string id;          // "E_u" for a created point, "O<n>" for an inherited double point
    std::string label;       // the E-class label, or "original"
    std::vector<std::int64_t> lines;
    std::vector<Branch> branches;

    bool original() const { return label == "original"; }
    bool operator==(const MarkedPoint&) const = default;
};

struct ComponentState {
    std::string label;
    ClassVector original;
    ClassVector current;
    bool live = true;
    bool operator==(const ComponentState&) const = default;
};

enum class FinalTarget { cp2, cp2_one_blowup };
const char* to_string(FinalTarget t);

struct FinalStageDecision {
    FinalTarget target = FinalTarget::cp2_one_blowup;
    std::vector<std::string> conditions;  // e.g. "(c)", "(e) via F8"
    bool operator==(const FinalStageDecision&) const = default;
};

FinalStageDecision final_stage(const Configuration& config, const AreaVector& areas);

// E-classes that never occur with coefficient +1 in a component with zero a-coefficient.
std::set<std::string> eps_zero(const Configuration& config);

struct AssumptionReport {
    // For every zero-a sphere S: the zero-a components containing the leading class of S.
    std::map<std::string, std::vector<std::string>> z_sets;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

AssumptionReport check_assumptions(const Configuration& config);

struct BlowdownOptions {
    // Replace every single-branch linear extension by an order-2 tangency.  Not canonical.
    bool strict_germs = false;
};

struct ArrangementState {
    std::size_t stage = 0;      // number of E-classes left in the basis
    Basis basis;                // labels of the remaining E-classes
    std::vector<ComponentState> components;
    std::vector<MarkedPoint> points;
    FinalStageDecision decision;
    bool non_canonical = false;
    std::int64_t next_line = 1;
    std::vector<std::string> log;

    const ComponentState* component(const std::string& label) const;
    const MarkedPoint* point(const std::string& id) const;
    bool operator==(const ArrangementState&) const = default;
};

// Full pipeline: validates areas, requires odd parity and a ruled area vector, decides the final stage.
ArrangementState run_blowdown(const Configuration& config, const AreaVector& areas, const BlowdownOptions& options = {});

// Runs the germ calculus down to the requested final stage without any area data.
ArrangementState run_blowdown(const Configuration& config, const FinalStageDecision& decision,
                              const BlowdownOptions& options = {});

struct PairRecord {
    std::string first, second;
    std::int64_t local_sum = 0;
    std::int64_t homological = 0;
    bool operator==(const PairRecord&) const = default;
};

struct GenusRecord {
    std::string label;
    Rational original_genus;
    Rational arithmetic_genus;
    std::int64_t singular_correction = 0;
    bool operator==(const GenusRecord&) const = default;
};

struct VerificationReport {
    std::vector<PairRecord> pairs;
    std::vector<GenusRecord> genera;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    bool operator==(const VerificationReport&) const = default;
};

VerificationReport verify_arrangement(const ArrangementState& state, const Configuration& config);

} // namespace orbkit
