#include "orbkit/lattice.hpp"

#include "orbkit/fourier_motzkin.hpp"

#include <cctype>

namespace orbkit {

ClassVector ClassVector::exceptional(std::size_t n, std::size_t i) {
    if (i == 0 || i > n) throw Error("precondition", "ClassVector::exceptional", "index out of range");
    ClassVector f{0, std::vector<std::int64_t>(n, 0)};
    f.b[i - 1] = -1;
    return f;
}

namespace {

void require_same_dim(const ClassVector& u, const ClassVector& v, const char* where) {
    if (u.b.size() != v.b.size())
        throw Error("dimension", where,
                    "dimension mismatch: N=" + std::to_string(u.b.size()) + " vs N=" + std::to_string(v.b.size()));
}

} // namespace

ClassVector ClassVector::operator+(const ClassVector& o) const {
    require_same_dim(*this, o, "ClassVector::operator+");
    ClassVector r = *this;
    r.a += o.a;
    for (std::size_t i = 0; i < b.size(); ++i) r.b[i] += o.b[i];
    return r;
}

ClassVector ClassVector::operator-() const { return *this * -1; }

ClassVector ClassVector::operator-(const ClassVector& o) const { return *this + (-o); }

ClassVector ClassVector::operator*(std::int64_t s) const {
    ClassVector r = *this;
    r.a *= s;
    for (auto& x : r.b) x *= s;
    return r;
}

std::int64_t intersect(const ClassVector& u, const ClassVector& v) {
    require_same_dim(u, v, "intersect");
    std::int64_t s = u.a * v.a;
    for (std::size_t i = 0; i < u.b.size(); ++i) s -= u.b[i] * v.b[i];
    return s;
}

ClassVector canonical_class(std::size_t n) { return {-3, std::vector<std::int64_t>(n, -1)}; }

Rational adjunction_genus(const ClassVector& f) {
    auto k = canonical_class(f.n_blowups());
    return 1 + make_rational(intersect(f, f) + intersect(k, f), 2);
}

ClassVector drop_coordinate(const ClassVector& f, std::size_t k) {
    if (k == 0 || k > f.b.size()) throw Error("precondition", "drop_coordinate", "index out of range");
    ClassVector r = f;
    r.b.erase(r.b.begin() + static_cast<std::ptrdiff_t>(k - 1));
    return r;
}

std::optional<std::size_t> leading_index(const ClassVector& f) {
    if (f.a != 0) return std::nullopt;
    std::optional<std::size_t> lead;
    for (std::size_t i = 0; i < f.b.size(); ++i) {
        if (f.b[i] == -1) {
            if (lead) return std::nullopt;
            lead = i + 1;
        } else if (f.b[i] != 0 && f.b[i] != 1) {
            return std::nullopt;
        }
    }
    return lead;
}

Basis numeric_basis(std::size_t n) {
    Basis b;
    for (std::size_t i = 1; i <= n; ++i) b.push_back(std::to_string(i));
    return b;
}

ClassVector parse_class(const std::string& text, const Basis& basis) {
    ClassVector f{0, std::vector<std::int64_t>(basis.size(), 0)};
    std::size_t i = 0;
    auto fail = [&](const std::string& why) {
        throw Error("parse", "parse_class", why + " at offset " + std::to_string(i) + " in '" + text + "'");
    };
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    bool first = true;
    skip();
    if (i == text.size()) fail("empty expression");
    while (true) {
        skip();
        if (i == text.size()) break;
        int sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
            skip();
        } else if (!first) {
            fail("expected '+' or '-'");
        }
        first = false;
        std::int64_t coeff = 1;
        if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            coeff = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                coeff = coeff * 10 + (text[i++] - '0');
            skip();
        }
        if (i == text.size()) {
            if (coeff != 0) fail("bare integer term");
            break;
        }
        if (text[i] == 'H') {
            f.a += sign * coeff;
            ++i;
        } else if (text[i] == 'E') {
            ++i;
            if (i < text.size() && text[i] == '_') ++i;
            std::string label;
            if (i < text.size() && text[i] == '{') {
                auto close = text.find('}', i);
                if (close == std::string::npos) fail("unterminated '{'");
                label = text.substr(i + 1, close - i - 1);
                i = close + 1;
            } else {
                while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '\''))
                    label += text[i++];
            }
            if (label.empty()) fail("missing E label");
            std::size_t idx = basis.size();
            for (std::size_t k = 0; k < basis.size(); ++k)
                if (basis[k] == label) idx = k;
            if (idx == basis.size()) fail("unknown E label '" + label + "'");
            // aH - sum b E: a +E term lowers b.
            f.b[idx] -= sign * coeff;
        } else {
            fail("unexpected character");
        }
    }
    return f;
}

std::string format_class(const ClassVector& f, const Basis& basis) {
    if (basis.size() != f.b.size()) throw Error("dimension", "format_class", "basis length differs from N");
    std::string out;
    auto term = [&](std::int64_t c, const std::string& sym) {
        if (c == 0) return;
        if (out.empty()) out += c < 0 ? "-" : "";
        else out += c < 0 ? " - " : " + ";
        auto m = c < 0 ? -c : c;
        if (m != 1) out += std::to_string(m);
        out += sym;
    };
    term(f.a, "H");
    for (std::size_t i = 0; i < f.b.size(); ++i) {
        const auto& l = basis[i];
        bool plain = !l.empty();
        for (char ch : l) plain = plain && (std::isalnum(static_cast<unsigned char>(ch)) || ch == '\'');
        term(-f.b[i], plain ? "E_" + l : "E_{" + l + "}");
    }
    return out.empty() ? "0" : out;
}

std::vector<ClassVector> Configuration::vectors() const {
    std::vector<ClassVector> out;
    for (const auto& c : classes) out.push_back(c.cls);
    return out;
}

std::vector<std::string> Configuration::labels() const {
    std::vector<std::string> out;
    for (const auto& c : classes) out.push_back(c.label);
    return out;
}

const LabeledClass* Configuration::find(const std::string& label) const {
    for (const auto& c : classes)
        if (c.label == label) return &c;
    return nullptr;
}

Rational AreaVector::pair(const ClassVector& f) const {
    if (f.b.size() != e.size()) throw Error("dimension", "AreaVector::pair", "dimension mismatch");
    Rational s = Rational(f.a) * h;
    for (std::size_t i = 0; i < e.size(); ++i) s -= Rational(f.b[i]) * e[i];
    return s;
}

AreaValidation validate_area_vector(const AreaVector& areas, const std::vector<ClassVector>& config) {
    AreaValidation rep;
    const auto n = areas.e.size();
    const auto& e = areas.e;
    auto E = [](std::size_t i) { return "E" + std::to_string(i + 1); };
    if (areas.h <= 0) rep.violations.push_back("area(H) = " + to_string(areas.h) + " is not positive");
    for (std::size_t i = 0; i < n; ++i)
        if (e[i] <= 0) rep.violations.push_back("area(" + E(i) + ") = " + to_string(e[i]) + " is not positive");
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (e[i] < e[i + 1])
            rep.violations.push_back("ordering: area(" + E(i) + ") = " + to_string(e[i]) + " < area(" + E(i + 1) +
                                     ") = " + to_string(e[i + 1]));
        else if (e[i] == e[i + 1])
            rep.ties.emplace_back(i + 1, i + 2);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            auto v = areas.h - e[i] - e[j];
            if (v <= 0)
                rep.violations.push_back("area(H - " + E(i) + " - " + E(j) + ") = " + to_string(v) + " is not positive");
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                auto v = areas.h - e[i] - e[j] - e[k];
                if (v < 0)
                    rep.violations.push_back("area(H - " + E(i) + " - " + E(j) + " - " + E(k) + ") = " + to_string(v) +
                                             " is negative");
            }
    for (std::size_t c = 0; c < config.size(); ++c) {
        if (config[c].b.size() != n) {
            rep.violations.push_back("config class #" + std::to_string(c + 1) + " has N=" +
                                     std::to_string(config[c].b.size()) + ", areas have N=" + std::to_string(n));
            continue;
        }
        auto v = areas.pair(config[c]);
        if (v <= 0)
            rep.violations.push_back("config class #" + std::to_string(c + 1) + " has area " + to_string(v) +
                                     " (must be positive)");
    }
    auto kw = areas.pair(canonical_class(n));
    if (kw >= 0) rep.violations.push_back("K.omega = " + to_string(kw) + " (must be negative)");
    return rep;
}

Parity is_odd(const AreaVector& areas) {
    if (areas.e.size() < 2) throw Error("precondition", "is_odd", "parity needs N >= 2");
    return areas.h - areas.e[0] - 2 * areas.e[1] >= 0 ? Parity::odd : Parity::even;
}

const char* to_string(Parity p) { return p == Parity::odd ? "odd" : "even"; }

AreaSearchResult find_area_vector(const std::vector<ClassVector>& config, std::size_t n,
                                  const AreaSearchOptions& options, const std::vector<std::string>& labels) {
    // Variables: x0 = h, x_i = e_i.
    const std::size_t nv = n + 1;
    std::vector<HomogeneousConstraint> cs;
    auto row = [&] { return std::vector<Rational>(nv, 0); };
    auto E = [](std::size_t i) { return "E" + std::to_string(i); };
    auto class_row = [&](const ClassVector& f) {
        auto r = row();
        r[0] = f.a;
        for (std::size_t i = 0; i < n; ++i) r[i + 1] = -f.b[i];
        return r;
    };
    auto name_of = [&](std::size_t c) {
        return c < labels.size() ? labels[c] : "config class #" + std::to_string(c + 1);
    };

    {
        auto r = row();
        r[0] = 1;
        cs.push_back({r, Relation::gt, "area(H) > 0"});
    }
    for (std::size_t i = 1; i < n; ++i) {
        auto r = row();
        r[i] = 1;
        r[i + 1] = -1;
        cs.push_back({r, Relation::ge, "area(" + E(i) + ") >= area(" + E(i + 1) + ")"});
    }
    if (n >= 1) {
        auto r = row();
        r[n] = 1;
        cs.push_back({r, Relation::gt, "area(" + E(n) + ") > 0"});
    }
    // Under the ordering, the first two (three) classes give the binding pair (triple) constraints.
    if (n >= 2) {
        auto r = row();
        r[0] = 1;
        r[1] = r[2] = -1;
        cs.push_back({r, Relation::gt, "area(H - E1 - E2) > 0"});
    }
    if (n >= 3) {
        auto r = row();
        r[0] = 1;
        r[1] = r[2] = r[3] = -1;
        cs.push_back({r, Relation::ge, "area(H - E1 - E2 - E3) >= 0"});
    }
    for (std::size_t c = 0; c < config.size(); ++c) {
        if (config[c].b.size() != n)
            throw Error("dimension", "find_area_vector", name_of(c) + " has N=" + std::to_string(config[c].b.size()));
        cs.push_back({class_row(config[c]), Relation::gt, "area(" + name_of(c) + ") > 0"});
    }
    cs.push_back({class_row(-canonical_class(n)), Relation::gt, "K.omega < 0"});
    if (options.require_odd && n >= 2) {
        auto r = row();
        r[0] = 1;
        r[1] = -1;
        r[2] = -2;
        cs.push_back({r, Relation::ge, "odd: area(H - E1 - 2E2) >= 0"});
    }
    if (options.equal_config_areas)
        for (std::size_t c = 1; c < config.size(); ++c)
            cs.push_back({class_row(config[c] - config[0]), Relation::eq,
                          "area(" + name_of(c) + ") = area(" + name_of(0) + ")"});

    auto sol = solve_homogeneous(cs, nv);
    AreaSearchResult out;
    if (!sol.feasible) {
        out.certificate = std::move(sol.certificate);
        return out;
    }
    AreaVector a;
    a.h = sol.point[0];
    a.e.assign(sol.point.begin() + 1, sol.point.end());
    out.areas = std::move(a);
    return out;
}

} // namespace orbkit
