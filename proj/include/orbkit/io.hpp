#pragma once

#include "orbkit/blowdown.hpp"
#include "orbkit/lattice.hpp"
#include "orbkit/orbifold.hpp"

#include <optional>
#include <string>

namespace orbkit {

struct InputOptions {
    std::optional<std::size_t> limit;
    bool strict_germs = false;
    bool operator==(const InputOptions&) const = default;
};

// JSON input: {"schema": 1, "orbifold": {...}, "expressions": {...}, "areas": {...}, "options": {...}}.
// Rationals are written as {"num": p, "den": q}; plain integers are accepted on input.
struct InputDocument {
    int schema = 1;
    OrbifoldSpec spec;
    std::optional<Configuration> expressions;
    std::optional<AreaVector> areas;
    InputOptions options;
};

// Throws Error("parse", ...) naming the JSON pointer of the offending value.
InputDocument parse_input(const std::string& text);
std::string serialize_input(const InputDocument& doc);

// A standalone areas file: {"h": ..., "e": [...]}.
AreaVector parse_areas(const std::string& text);
std::string serialize_areas(const AreaVector& areas);

// Everything needed to re-run verify_arrangement, plus the stored verification summary.
struct ArrangementDocument {
    Configuration config;
    ArrangementState state;
    VerificationReport summary;
};

struct ArrangementExport {
    ArrangementDocument document;
    std::string graph;  // DOT text: components and points as nodes, branches as edges
};

ArrangementExport export_arrangement(const ArrangementState& state, const Configuration& config);
std::string arrangement_to_json(const ArrangementDocument& doc);
ArrangementDocument arrangement_from_json(const std::string& text);
std::string incidence_graph(const ArrangementState& state);

enum class Command { resolve, cover, constraints, sw, blowdown, search };
std::optional<Command> parse_command(const std::string& name);
const char* to_string(Command c);

struct PipelineOptions {
    std::optional<AreaVector> areas;    // overrides the document's areas block
    std::optional<std::size_t> limit;   // overrides options.limit
    bool strict_germs = false;          // or-ed with options.strict_germs
};

struct PipelineResult {
    int exit_code = 0;    // 0 success, 1 validation failure, 2 parse error
    std::string report;   // human-readable
    std::string json;     // machine-readable
};

PipelineResult run_pipeline(const InputDocument& doc, Command command, const PipelineOptions& options = {});
// Parses first; parse failures give exit code 2.
PipelineResult run_pipeline(const std::string& input_text, Command command, const PipelineOptions& options = {});

} // namespace orbkit
