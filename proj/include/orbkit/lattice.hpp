#pragma once

#include "orbkit/rational.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace orbkit {

// The class aH - sum b_i E_i in H^2 of CP^2 # N (-CP^2).
struct ClassVector {
    std::int64_t a = 0;
    std::vector<std::int64_t> b;

    ClassVector() = default;
    ClassVector(std::int64_t a_coeff, std::vector<std::int64_t> b_coeffs) : a(a_coeff), b(std::move(b_coeffs)) {}

    std::size_t n_blowups() const { return b.size(); }

    static ClassVector line(std::size_t n) { return {1, std::vector<std::int64_t>(n, 0)}; }
    // The exceptional class E_i (1-based), i.e. b_i = -1.
    static ClassVector exceptional(std::size_t n, std::size_t i);

    ClassVector operator+(const ClassVector& o) const;
    ClassVector operator-(const ClassVector& o) const;
    ClassVector operator-() const;
    ClassVector operator*(std::int64_t s) const;

    auto operator<=>(const ClassVector&) const = default;
};

std::int64_t intersect(const ClassVector& u, const ClassVector& v);
ClassVector canonical_class(std::size_t n);
Rational adjunction_genus(const ClassVector& f);

// Removes the coordinate of E_k (1-based).
ClassVector drop_coordinate(const ClassVector& f, std::size_t k);

// For a class with a = 0 of the shape E_n - sum E_l: the index n, else nullopt.
std::optional<std::size_t> leading_index(const ClassVector& f);

// Human-readable labels of E_1..E_N.  Expressions are written like "2H - E_s - E_t".
using Basis = std::vector<std::string>;

Basis numeric_basis(std::size_t n);
ClassVector parse_class(const std::string& text, const Basis& basis);
std::string format_class(const ClassVector& f, const Basis& basis);

struct LabeledClass {
    std::string label;
    ClassVector cls;
    bool operator==(const LabeledClass&) const = default;
};

// Labeled classes over a common basis: the input of blow-downs, searches and resolution checks.
struct Configuration {
    Basis basis;
    std::vector<LabeledClass> classes;

    std::size_t n_blowups() const { return basis.size(); }
    std::vector<ClassVector> vectors() const;
    std::vector<std::string> labels() const;
    const LabeledClass* find(const std::string& label) const;
    bool operator==(const Configuration&) const = default;
};

struct AreaVector {
    Rational h;
    std::vector<Rational> e;

    Rational pair(const ClassVector& f) const;
    std::size_t n_blowups() const { return e.size(); }
    bool operator==(const AreaVector&) const = default;
};

struct AreaValidation {
    std::vector<std::string> violations;
    // Index pairs (1-based) of consecutive classes with equal area.
    std::vector<std::pair<std::size_t, std::size_t>> ties;

    bool ok() const { return violations.empty(); }
};

AreaValidation validate_area_vector(const AreaVector& areas, const std::vector<ClassVector>& config);

enum class Parity { odd, even };

Parity is_odd(const AreaVector& areas);
const char* to_string(Parity p);

struct AreaSearchOptions {
    bool require_odd = false;
    bool equal_config_areas = false;
};

struct AreaSearchResult {
    std::optional<AreaVector> areas;
    // Names of constraints forming an unsatisfiable subset when infeasible.
    std::vector<std::string> certificate;

    bool feasible() const { return areas.has_value(); }
};

// `labels`, when given, names the config classes inside certificates.
AreaSearchResult find_area_vector(const std::vector<ClassVector>& config, std::size_t n_blowups,
                                  const AreaSearchOptions& options = {},
                                  const std::vector<std::string>& labels = {});

} // namespace orbkit
