#include "orbkit/io.hpp"

#include "orbkit/cover.hpp"
#include "orbkit/search.hpp"
#include "orbkit/singularities.hpp"
#include "orbkit/sw.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace orbkit {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& ptr, const std::string& msg) {
    throw Error("parse", where, (ptr.empty() ? std::string("/") : ptr) + ": " + msg);
}

class Reader {
public:
    explicit Reader(std::string where) : where_(std::move(where)) {}

    json load(const std::string& text) const {
        try {
            return json::parse(text);
        } catch (const json::parse_error& e) {
            fail(where_, "", std::string("malformed JSON at byte ") + std::to_string(e.byte) + ": " + e.what());
        }
    }

    void only(const json& obj, const std::string& ptr, std::initializer_list<const char*> keys) const {
        if (!obj.is_object()) fail(where_, ptr, "expected an object");
        std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& [k, v] : obj.items())
            if (!allowed.count(k)) fail(where_, ptr + "/" + k, "unknown key");
    }

    const json& need(const json& obj, const std::string& ptr, const char* key) const {
        if (!obj.contains(key)) fail(where_, ptr + "/" + key, "missing");
        return obj.at(key);
    }

    std::int64_t integer(const json& v, const std::string& ptr) const {
        if (!v.is_number_integer()) fail(where_, ptr, "expected an integer");
        return v.get<std::int64_t>();
    }

    std::string string(const json& v, const std::string& ptr) const {
        if (!v.is_string()) fail(where_, ptr, "expected a string");
        return v.get<std::string>();
    }

    bool boolean(const json& v, const std::string& ptr) const {
        if (!v.is_boolean()) fail(where_, ptr, "expected true or false");
        return v.get<bool>();
    }

    const json& array(const json& v, const std::string& ptr) const {
        if (!v.is_array()) fail(where_, ptr, "expected an array");
        return v;
    }

    Rational rational(const json& v, const std::string& ptr) const {
        if (v.is_number_integer()) return make_rational(v.get<std::int64_t>());
        if (!v.is_object()) fail(where_, ptr, "expected {\"num\", \"den\"} or an integer");
        only(v, ptr, {"num", "den"});
        auto num = integer(need(v, ptr, "num"), ptr + "/num");
        auto den = integer(need(v, ptr, "den"), ptr + "/den");
        if (den == 0) fail(where_, ptr + "/den", "zero denominator");
        return make_rational(num, den);
    }

    const std::string& where() const { return where_; }

private:
    std::string where_;
};

json rational_json(const Rational& r) {
    return json{{"num", to_int64(numerator_of(r), "rational_json")}, {"den", to_int64(denominator_of(r), "rational_json")}};
}

AreaVector read_areas(const Reader& rd, const json& v, const std::string& ptr) {
    rd.only(v, ptr, {"h", "e"});
    AreaVector a;
    a.h = rd.rational(rd.need(v, ptr, "h"), ptr + "/h");
    const auto& e = rd.array(rd.need(v, ptr, "e"), ptr + "/e");
    for (std::size_t i = 0; i < e.size(); ++i) a.e.push_back(rd.rational(e[i], ptr + "/e/" + std::to_string(i)));
    return a;
}

json areas_json(const AreaVector& a) {
    json e = json::array();
    for (const auto& x : a.e) e.push_back(rational_json(x));
    return json{{"h", rational_json(a.h)}, {"e", e}};
}

Configuration read_config(const Reader& rd, const json& v, const std::string& ptr) {
    rd.only(v, ptr, {"basis", "n_blowups", "classes"});
    Configuration c;
    if (v.contains("basis")) {
        const auto& b = rd.array(v.at("basis"), ptr + "/basis");
        for (std::size_t i = 0; i < b.size(); ++i) c.basis.push_back(rd.string(b[i], ptr + "/basis/" + std::to_string(i)));
        if (v.contains("n_blowups") && rd.integer(v.at("n_blowups"), ptr + "/n_blowups") != static_cast<std::int64_t>(c.basis.size()))
            fail(rd.where(), ptr + "/n_blowups", "differs from the basis length");
    } else {
        auto n = rd.integer(rd.need(v, ptr, "n_blowups"), ptr + "/n_blowups");
        if (n < 0) fail(rd.where(), ptr + "/n_blowups", "negative");
        c.basis = numeric_basis(static_cast<std::size_t>(n));
    }
    const auto& cls = rd.array(rd.need(v, ptr, "classes"), ptr + "/classes");
    for (std::size_t i = 0; i < cls.size(); ++i) {
        const auto p = ptr + "/classes/" + std::to_string(i);
        rd.only(cls[i], p, {"label", "class"});
        auto label = rd.string(rd.need(cls[i], p, "label"), p + "/label");
        auto text = rd.string(rd.need(cls[i], p, "class"), p + "/class");
        try {
            c.classes.push_back({label, parse_class(text, c.basis)});
        } catch (const Error& e) {
            fail(rd.where(), p + "/class", e.what());
        }
    }
    return c;
}

json config_json(const Configuration& c) {
    json cls = json::array();
    for (const auto& lc : c.classes) cls.push_back(json{{"label", lc.label}, {"class", format_class(lc.cls, c.basis)}});
    return json{{"basis", c.basis}, {"classes", cls}};
}

OrbifoldSpec read_spec(const Reader& rd, const json& v, const std::string& ptr) {
    rd.only(v, ptr, {"b1", "surfaces", "points"});
    OrbifoldSpec s;
    if (v.contains("b1")) s.b1 = rd.integer(v.at("b1"), ptr + "/b1");
    if (v.contains("surfaces")) {
        const auto& arr = rd.array(v.at("surfaces"), ptr + "/surfaces");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto p = ptr + "/surfaces/" + std::to_string(i);
            rd.only(arr[i], p, {"label", "genus", "m", "normal_weight"});
            SurfaceComponent c;
            c.genus = rd.integer(rd.need(arr[i], p, "genus"), p + "/genus");
            c.m = rd.integer(rd.need(arr[i], p, "m"), p + "/m");
            if (arr[i].contains("normal_weight")) c.normal_weight = rd.integer(arr[i].at("normal_weight"), p + "/normal_weight");
            if (arr[i].contains("label")) c.label = rd.string(arr[i].at("label"), p + "/label");
            s.surfaces.push_back(c);
        }
    }
    if (v.contains("points")) {
        const auto& arr = rd.array(v.at("points"), ptr + "/points");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto p = ptr + "/points/" + std::to_string(i);
            rd.only(arr[i], p, {"label", "m", "weights", "chain"});
            IsolatedPoint q;
            q.type.m = rd.integer(rd.need(arr[i], p, "m"), p + "/m");
            const auto& w = rd.array(rd.need(arr[i], p, "weights"), p + "/weights");
            if (w.size() != 2) fail(rd.where(), p + "/weights", "expected two weights");
            q.type.w1 = rd.integer(w[0], p + "/weights/0");
            q.type.w2 = rd.integer(w[1], p + "/weights/1");
            if (arr[i].contains("label")) q.label = rd.string(arr[i].at("label"), p + "/label");
            if (arr[i].contains("chain")) {
                const auto& ch = rd.array(arr[i].at("chain"), p + "/chain");
                for (std::size_t k = 0; k < ch.size(); ++k) q.chain_labels.push_back(rd.string(ch[k], p + "/chain/" + std::to_string(k)));
            }
            s.points.push_back(q);
        }
    }
    return s;
}

json spec_json(const OrbifoldSpec& s) {
    json surfaces = json::array(), points = json::array();
    for (const auto& c : s.surfaces) {
        json o{{"genus", c.genus}, {"m", c.m}, {"normal_weight", c.normal_weight}};
        if (!c.label.empty()) o["label"] = c.label;
        surfaces.push_back(o);
    }
    for (const auto& q : s.points) {
        json o{{"m", q.type.m}, {"weights", {q.type.w1, q.type.w2}}};
        if (!q.label.empty()) o["label"] = q.label;
        if (!q.chain_labels.empty()) o["chain"] = q.chain_labels;
        points.push_back(o);
    }
    return json{{"b1", s.b1}, {"surfaces", surfaces}, {"points", points}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace

InputDocument parse_input(const std::string& text) {
    Reader rd("parse_input");
    auto j = rd.load(text);
    rd.only(j, "", {"schema", "orbifold", "expressions", "areas", "options"});
    InputDocument doc;
    doc.schema = static_cast<int>(rd.integer(rd.need(j, "", "schema"), "/schema"));
    if (doc.schema != 1) fail("parse_input", "/schema", "unsupported schema version " + std::to_string(doc.schema));
    doc.spec = read_spec(rd, rd.need(j, "", "orbifold"), "/orbifold");
    if (j.contains("expressions")) doc.expressions = read_config(rd, j.at("expressions"), "/expressions");
    if (j.contains("areas")) doc.areas = read_areas(rd, j.at("areas"), "/areas");
    if (j.contains("options")) {
        const auto& o = j.at("options");
        rd.only(o, "/options", {"limit", "strict_germs"});
        if (o.contains("limit")) {
            auto l = rd.integer(o.at("limit"), "/options/limit");
            if (l < 0) fail("parse_input", "/options/limit", "negative");
            doc.options.limit = static_cast<std::size_t>(l);
        }
        if (o.contains("strict_germs")) doc.options.strict_germs = rd.boolean(o.at("strict_germs"), "/options/strict_germs");
    }
    return doc;
}

std::string serialize_input(const InputDocument& doc) {
    json j{{"schema", doc.schema}, {"orbifold", spec_json(doc.spec)}};
    if (doc.expressions) j["expressions"] = config_json(*doc.expressions);
    if (doc.areas) j["areas"] = areas_json(*doc.areas);
    json o = json::object();
    if (doc.options.limit) o["limit"] = *doc.options.limit;
    if (doc.options.strict_germs) o["strict_germs"] = true;
    if (!o.empty()) j["options"] = o;
    return dump(j);
}

AreaVector parse_areas(const std::string& text) {
    Reader rd("parse_areas");
    return read_areas(rd, rd.load(text), "");
}

std::string serialize_areas(const AreaVector& areas) { return dump(areas_json(areas)); }

// ---------------------------------------------------------------- arrangement documents

namespace {

json branch_json(const Branch& b) {
    json o{{"owner", b.owner}, {"kind", b.is_line() ? "line" : "germ"}, {"line", b.line}};
    if (!b.is_line()) {
        o["kappa"] = b.kappa;
        o["lambda"] = b.lambda;
    }
    return o;
}

json state_json(const ArrangementState& st) {
    json comps = json::array(), points = json::array();
    for (const auto& p : st.points) {
        json br = json::array();
        for (const auto& b : p.branches) br.push_back(branch_json(b));
        points.push_back(json{{"id", p.id}, {"label", p.label}, {"kind", p.original() ? "original" : "created"},
                              {"lines", p.lines}, {"branches", br}});
    }
    json decision{{"target", to_string(st.decision.target)}, {"conditions", st.decision.conditions}};
    return json{{"stage", st.stage},     {"basis", st.basis},       {"decision", decision},
                {"non_canonical", st.non_canonical}, {"next_line", st.next_line}, {"components", comps},
                {"points", points},      {"log", st.log}};
}

json document_json(const ArrangementDocument& doc) {
    auto st = state_json(doc.state);
    json comps = json::array();
    for (const auto& c : doc.state.components)
    {
        json o{{"id", c.label}, {"live", c.live}, {"degree", c.current.a}};
        if (c.live)
            o["final_class"] = format_class(c.current, doc.state.basis);
        else
            o["removed_class"] = json{{"a", c.current.a}, {"b", c.current.b}};
        o["original"] = format_class(c.original, doc.config.basis);
        comps.push_back(o);
    }
    st["components"] = comps;
    json pairs = json::array(), genera = json::array();
    for (const auto& p : doc.summary.pairs)
        pairs.push_back(json{{"first", p.first}, {"second", p.second}, {"local_sum", p.local_sum}, {"homological", p.homological}});
    for (const auto& g : doc.summary.genera)
        genera.push_back(json{{"id", g.label},
                              {"original_genus", rational_json(g.original_genus)},
                              {"arithmetic_genus", rational_json(g.arithmetic_genus)},
                              {"singular_correction", g.singular_correction}});
    json summary{{"ok", doc.summary.ok()}, {"pairs", pairs}, {"genera", genera}, {"violations", doc.summary.violations}};
    return json{{"configuration", config_json(doc.config)}, {"arrangement", st}, {"summary", summary}};
}

FinalTarget read_target(const std::string& s, const std::string& ptr) {
    for (auto t : {FinalTarget::cp2, FinalTarget::cp2_one_blowup})
        if (s == to_string(t)) return t;
    fail("arrangement_from_json", ptr, "unknown final target '" + s + "'");
}

} // namespace

std::string incidence_graph(const ArrangementState& st) {
    std::ostringstream os;
    os << "graph arrangement {\n";
    for (const auto& c : st.components)
        if (c.live) os << "  \"" << c.label << "\" [shape=box, label=\"" << c.label << " (degree " << c.current.a << ")\"];\n";
    for (const auto& p : st.points) os << "  \"" << p.id << "\" [shape=circle, label=\"" << p.id << "\"];\n";
    for (const auto& p : st.points)
        for (const auto& b : p.branches) {
            os << "  \"" << b.owner << "\" -- \"" << p.id << "\"";
            if (b.is_line())
                os << " [label=\"line L" << b.line << "\"]";
            else
                os << " [label=\"(" << b.kappa << "," << b.lambda << ") ref L" << b.line << "\", style=bold]";
            os << ";\n";
        }
    os << "}\n";
    return os.str();
}

ArrangementExport export_arrangement(const ArrangementState& state, const Configuration& config) {
    ArrangementExport out;
    out.document.config = config;
    out.document.state = state;
    out.document.summary = verify_arrangement(state, config);
    out.graph = incidence_graph(state);
    return out;
}

std::string arrangement_to_json(const ArrangementDocument& doc) { return dump(document_json(doc)); }

ArrangementDocument arrangement_from_json(const std::string& text) {
    Reader rd("arrangement_from_json");
    auto j = rd.load(text);
    rd.only(j, "", {"configuration", "arrangement", "summary"});
    ArrangementDocument doc;
    doc.config = read_config(rd, rd.need(j, "", "configuration"), "/configuration");

    const auto& a = rd.need(j, "", "arrangement");
    const std::string ap = "/arrangement";
    rd.only(a, ap, {"stage", "basis", "decision", "non_canonical", "next_line", "components", "points", "log"});
    auto& st = doc.state;
    st.stage = static_cast<std::size_t>(rd.integer(rd.need(a, ap, "stage"), ap + "/stage"));
    for (const auto& b : rd.array(rd.need(a, ap, "basis"), ap + "/basis")) st.basis.push_back(rd.string(b, ap + "/basis"));
    const auto& d = rd.need(a, ap, "decision");
    rd.only(d, ap + "/decision", {"target", "conditions"});
    st.decision.target = read_target(rd.string(rd.need(d, ap + "/decision", "target"), ap + "/decision/target"), ap + "/decision/target");
    for (const auto& c : rd.array(rd.need(d, ap + "/decision", "conditions"), ap + "/decision/conditions"))
        st.decision.conditions.push_back(rd.string(c, ap + "/decision/conditions"));
    st.non_canonical = rd.boolean(rd.need(a, ap, "non_canonical"), ap + "/non_canonical");
    st.next_line = rd.integer(rd.need(a, ap, "next_line"), ap + "/next_line");
    for (const auto& l : rd.array(rd.need(a, ap, "log"), ap + "/log")) st.log.push_back(rd.string(l, ap + "/log"));

    const auto& comps = rd.array(rd.need(a, ap, "components"), ap + "/components");
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const auto p = ap + "/components/" + std::to_string(i);
        rd.only(comps[i], p, {"id", "live", "degree", "final_class", "removed_class", "original"});
        ComponentState c;
        c.label = rd.string(rd.need(comps[i], p, "id"), p + "/id");
        c.live = rd.boolean(rd.need(comps[i], p, "live"), p + "/live");
        if (!c.live) {
            const auto& rc = rd.need(comps[i], p, "removed_class");
            rd.only(rc, p + "/removed_class", {"a", "b"});
            c.current.a = rd.integer(rd.need(rc, p + "/removed_class", "a"), p + "/removed_class/a");
            const auto& b = rd.array(rd.need(rc, p + "/removed_class", "b"), p + "/removed_class/b");
            for (std::size_t k = 0; k < b.size(); ++k) c.current.b.push_back(rd.integer(b[k], p + "/removed_class/b/" + std::to_string(k)));
        }
        try {
            if (c.live) c.current = parse_class(rd.string(rd.need(comps[i], p, "final_class"), p + "/final_class"), st.basis);
            c.original = parse_class(rd.string(rd.need(comps[i], p, "original"), p + "/original"), doc.config.basis);
        } catch (const Error& e) {
            if (e.code() != "parse") throw;
            fail("arrangement_from_json", p, e.what());
        }
        if (rd.integer(rd.need(comps[i], p, "degree"), p + "/degree") != c.current.a)
            fail("arrangement_from_json", p + "/degree", "does not match the final class");
        st.components.push_back(std::move(c));
    }
    const auto& pts = rd.array(rd.need(a, ap, "points"), ap + "/points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto p = ap + "/points/" + std::to_string(i);
        rd.only(pts[i], p, {"id", "label", "kind", "lines", "branches"});
        MarkedPoint mp;
        mp.id = rd.string(rd.need(pts[i], p, "id"), p + "/id");
        mp.label = rd.string(rd.need(pts[i], p, "label"), p + "/label");
        auto kind = rd.string(rd.need(pts[i], p, "kind"), p + "/kind");
        if (kind != (mp.original() ? "original" : "created")) fail("arrangement_from_json", p + "/kind", "inconsistent with the label");
        for (const auto& l : rd.array(rd.need(pts[i], p, "lines"), p + "/lines")) mp.lines.push_back(rd.integer(l, p + "/lines"));
        const auto& brs = rd.array(rd.need(pts[i], p, "branches"), p + "/branches");
        for (std::size_t k = 0; k < brs.size(); ++k) {
            const auto bp = p + "/branches/" + std::to_string(k);
            rd.only(brs[k], bp, {"owner", "kind", "line", "kappa", "lambda"});
            auto owner = rd.string(rd.need(brs[k], bp, "owner"), bp + "/owner");
            auto bk = rd.string(rd.need(brs[k], bp, "kind"), bp + "/kind");
            auto line = rd.integer(rd.need(brs[k], bp, "line"), bp + "/line");
            if (bk == "line") {
                mp.branches.push_back(line_branch(owner, line));
            } else if (bk == "germ") {
                auto kappa = rd.integer(rd.need(brs[k], bp, "kappa"), bp + "/kappa");
                auto lambda = rd.integer(rd.need(brs[k], bp, "lambda"), bp + "/lambda");
                try {
                    mp.branches.push_back(germ_branch(owner, line, kappa, lambda));
                } catch (const Error& e) {
                    fail("arrangement_from_json", bp, e.what());
                }
            } else {
                fail("arrangement_from_json", bp + "/kind", "expected \"line\" or \"germ\"");
            }
        }
        st.points.push_back(std::move(mp));
    }

    const auto& s = rd.need(j, "", "summary");
    const std::string sp = "/summary";
    rd.only(s, sp, {"ok", "pairs", "genera", "violations"});
    const auto& pairs = rd.array(rd.need(s, sp, "pairs"), sp + "/pairs");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto p = sp + "/pairs/" + std::to_string(i);
        rd.only(pairs[i], p, {"first", "second", "local_sum", "homological"});
        doc.summary.pairs.push_back({rd.string(rd.need(pairs[i], p, "first"), p + "/first"),
                                     rd.string(rd.need(pairs[i], p, "second"), p + "/second"),
                                     rd.integer(rd.need(pairs[i], p, "local_sum"), p + "/local_sum"),
                                     rd.integer(rd.need(pairs[i], p, "homological"), p + "/homological")});
    }
    const auto& genera = rd.array(rd.need(s, sp, "genera"), sp + "/genera");
    for (std::size_t i = 0; i < genera.size(); ++i) {
        const auto p = sp + "/genera/" + std::to_string(i);
        rd.only(genera[i], p, {"id", "original_genus", "arithmetic_genus", "singular_correction"});
        doc.summary.genera.push_back({rd.string(rd.need(genera[i], p, "id"), p + "/id"),
                                      rd.rational(rd.need(genera[i], p, "original_genus"), p + "/original_genus"),
                                      rd.rational(rd.need(genera[i], p, "arithmetic_genus"), p + "/arithmetic_genus"),
                                      rd.integer(rd.need(genera[i], p, "singular_correction"), p + "/singular_correction")});
    }
    for (const auto& v : rd.array(rd.need(s, sp, "violations"), sp + "/violations"))
        doc.summary.violations.push_back(rd.string(v, sp + "/violations"));
    if (rd.boolean(rd.need(s, sp, "ok"), sp + "/ok") != doc.summary.ok())
        fail("arrangement_from_json", sp + "/ok", "disagrees with the violation list");
    return doc;
}

// ---------------------------------------------------------------- pipeline

std::optional<Command> parse_command(const std::string& name) {
    for (auto c : {Command::resolve, Command::cover, Command::constraints, Command::sw, Command::blowdown, Command::search})
        if (name == to_string(c)) return c;
    return std::nullopt;
}

const char* to_string(Command c) {
    switch (c) {
    case Command::resolve: return "resolve";
    case Command::cover: return "cover";
    case Command::constraints: return "constraints";
    case Command::sw: return "sw";
    case Command::blowdown: return "blowdown";
    case Command::search: return "search";
    }
    return "?";
}

namespace {

const char* module_of(const std::string& where) {
    static const std::map<std::string, const char*> table{
        {"parse_input", "cli_reports"},          {"parse_areas", "cli_reports"},
        {"arrangement_from_json", "cli_reports"}, {"run_pipeline", "cli_reports"},
        {"parse_rational", "homology_lattice"},  {"parse_class", "homology_lattice"},
        {"format_class", "homology_lattice"},    {"drop_coordinate", "homology_lattice"},
        {"find_area_vector", "homology_lattice"}, {"solve_homogeneous", "homology_lattice"},
        {"is_odd", "homology_lattice"},          {"validate_point", "quotient_singularities"},
        {"hj_chain", "quotient_singularities"},  {"discrepancies", "quotient_singularities"},
        {"du_val_consistency", "quotient_singularities"}, {"inverse_mod", "quotient_singularities"},
        {"validate_spec", "orbifold_model"},     {"assemble_resolution", "orbifold_model"},
        {"euler_of_cover", "cover_constraints"}, {"edmonds_solve", "cover_constraints"},
        {"thm32_check", "cover_constraints"},    {"angle_feasibility", "cover_constraints"},
        {"cyclotomic_polynomial", "cover_constraints"}, {"cor35_check", "sw_dimension"},
        {"run_blowdown", "blowdown_engine"},     {"check_assumptions", "blowdown_engine"},
        {"local_mult", "blowdown_engine"},       {"germ_branch", "blowdown_engine"},
        {"target_from_spec", "expression_search"}, {"canonicalize_solution", "expression_search"},
    };
    auto it = table.find(where);
    return it == table.end() ? "orbkit" : it->second;
}

std::string bare_message(const Error& e) {
    const std::string prefix = e.code() + " in " + e.where() + ": ";
    const std::string w = e.what();
    return w.rfind(prefix, 0) == 0 ? w.substr(prefix.size()) : w;
}

std::string error_line(const Error& e) {
    return std::string("error [") + e.code() + "] " + module_of(e.where()) + "/" + e.where() + ": " + bare_message(e);
}

json error_json(const Error& e) {
    return json{{"code", e.code()}, {"module", module_of(e.where())}, {"operation", e.where()}, {"message", bare_message(e)}};
}

std::string rat(const Rational& r) { return to_string(r); }

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
    return out;
}

template <class T>
std::string join_num(const std::vector<T>& xs) {
    std::vector<std::string> s;
    for (const auto& x : xs) {
        if constexpr (std::is_same_v<T, Rational>) s.push_back(rat(x));
        else s.push_back(std::to_string(x));
    }
    return "[" + join(s, ", ") + "]";
}

struct Out {
    std::ostringstream text;
    json data;
    int exit_code = 0;

    void line(const std::string& s) { text << s << "\n"; }
    void problem(const std::string& s) {
        line("  violation: " + s);
        exit_code = 1;
    }
};

std::optional<std::size_t> blowups_of(const InputDocument& doc) {
    if (doc.expressions) return doc.expressions->n_blowups();
    if (auto n = expected_blowups(doc.spec)) return static_cast<std::size_t>(*n);
    return std::nullopt;
}

void cmd_resolve(const InputDocument& doc, Out& out) {
    auto spec = with_default_labels(doc.spec);
    validate_spec(spec);
    out.line("singular set: " + std::to_string(spec.points.size()) + " points, " + std::to_string(spec.surfaces.size()) +
             " surfaces, b1 = " + std::to_string(spec.b1) + ", n = " + std::to_string(spec_order(spec)));
    auto k2 = canonical_square(spec);
    out.line("K^2 = " + rat(k2) + ", 9 - K^2 = " + rat(9 - k2));
    out.data["k_squared"] = rational_json(k2);
    json pts = json::array(), surfs = json::array();
    for (const auto& p : spec.points) {
        auto t = normalize_type(p.type);
        auto chain = hj_chain(t.m, t.q);
        auto disc = discrepancies(chain);
        out.line("point " + p.label + ": (" + std::to_string(t.m) + ";1," + std::to_string(t.q) + ") chain " + join_num(chain) +
                 " discrepancies " + join_num(disc) + " spheres " + join(p.chain_labels, ", "));
        json d = json::array();
        for (const auto& x : disc) d.push_back(rational_json(x));
        pts.push_back(json{{"label", p.label}, {"m", t.m}, {"q", t.q}, {"chain", chain}, {"discrepancies", d},
                           {"spheres", p.chain_labels}});
    }
    for (const auto& s : spec.surfaces) {
        out.line("surface " + s.label + ": genus " + std::to_string(s.genus) + ", m = " + std::to_string(s.m) +
                 ", normal weight " + std::to_string(s.normal_weight));
        surfs.push_back(json{{"label", s.label}, {"genus", s.genus}, {"m", s.m}, {"normal_weight", s.normal_weight}});
    }
    out.data["points"] = pts;
    out.data["surfaces"] = surfs;
    if (doc.expressions) {
        auto res = assemble_resolution(spec, *doc.expressions);
        out.line("expressions: " + std::to_string(doc.expressions->classes.size()) + " classes over N = " +
                 std::to_string(doc.expressions->n_blowups()) + (res.ok() ? ", all checks passed" : ""));
        for (const auto& v : res.violations) out.problem(v);
        out.data["expressions"] = json{{"n_blowups", doc.expressions->n_blowups()}, {"violations", res.violations}};
    }
    auto n = blowups_of(doc);
    if (spec.b1 == 0 && n) {
        auto e = euler_characteristics(spec, *n);
        out.line("chi(resolution) = " + std::to_string(e.chi_resolution) + ", chi(X) = " + std::to_string(e.chi_underlying));
        out.data["euler"] = json{{"n_blowups", *n}, {"resolution", e.chi_resolution}, {"underlying", e.chi_underlying}};
    } else {
        out.line("Euler characteristics: not available (b1 > 0 or 9 - K^2 not a nonnegative integer)");
    }
}

// chi(Y) by climbing the tower of prime-order quotients Y/Z_e, e | n.
std::optional<std::int64_t> chi_of_cover(const OrbifoldSpec& spec, std::int64_t chi_x, std::int64_t n, Out& out) {
    struct Stratum {
        std::int64_t m, chi;
    };
    std::vector<Stratum> strata;
    for (const auto& s : spec.surfaces) strata.push_back({s.m, 2 - 2 * s.genus});
    for (const auto& p : spec.points) strata.push_back({mj_order(p.type), 1});
    std::vector<std::int64_t> primes;
    for (auto p : prime_factors(n))
        for (auto r = n; r % p == 0; r /= p) primes.push_back(p);
    std::int64_t d = n, chi = chi_x;
    json steps = json::array();
    for (auto p : primes) {
        const auto e = d / p;
        std::int64_t fixed = 0;
        for (const auto& s : strata) {
            const auto l = lcm64(s.m, e);
            if (l % d == 0) fixed += s.chi * (n / l);
        }
        auto ce = euler_of_cover(chi, p, fixed, 0);
        steps.push_back(json{{"order", d}, {"prime", p}, {"fixed_euler", fixed}, {"chi_cover", ce.chi_y}});
        out.line("  Z_" + std::to_string(p) + " step: chi(quotient) = " + std::to_string(chi) + ", chi(fixed) = " +
                 std::to_string(fixed) + " -> chi = " + std::to_string(ce.chi_y));
        chi = ce.chi_y;
        d = e;
    }
    out.data["euler_steps"] = steps;
    return chi;
}

void cmd_cover(const InputDocument& doc, Out& out) {
    auto spec = with_default_labels(doc.spec);
    auto rep = cover_numerology(spec);
    out.line("n = " + std::to_string(rep.n));
    json pre = json::array();
    for (std::size_t i = 0; i < spec.surfaces.size(); ++i)
        out.line("surface " + spec.surfaces[i].label + ": " + std::to_string(rep.surface_preimages[i]) + " preimage components");
    for (const auto& p : rep.point_preimages) {
        out.line("point " + p.label + ": " + std::to_string(p.count) + " preimages, stabilizer order " + std::to_string(p.stabilizer));
        pre.push_back(json{{"label", p.label}, {"count", p.count}, {"stabilizer", p.stabilizer}});
    }
    out.line(std::string("Y equals its resolution: ") + (rep.y_equals_resolution ? "yes" : "no") +
             (rep.singular_upstairs.empty() ? "" : " (singular over " + join(rep.singular_upstairs, ", ") + ")"));
    out.data["n"] = rep.n;
    out.data["surface_preimages"] = rep.surface_preimages;
    out.data["point_preimages"] = pre;
    out.data["singular_upstairs"] = rep.singular_upstairs;
    out.data["y_equals_resolution"] = rep.y_equals_resolution;

    auto cls = classify_cy_cover(spec);
    out.line(std::string("verdict: ") + to_string(cls.verdict) + " (" + cls.reason + ")");
    for (const auto& c : cls.contradictions) out.problem(c);
    out.data["verdict"] = to_string(cls.verdict);
    out.data["reason"] = cls.reason;
    out.data["contradictions"] = cls.contradictions;

    auto n = blowups_of(doc);
    if (spec.b1 == 0 && n) {
        auto chi_x = euler_characteristics(spec, *n).chi_underlying;
        out.line("Euler characteristic of Y from chi(X) = " + std::to_string(chi_x) + ":");
        auto chi_y = chi_of_cover(spec, chi_x, rep.n, out);
        out.line("chi(Y) = " + std::to_string(*chi_y));
        out.data["chi_x"] = chi_x;
        out.data["chi_y"] = *chi_y;
    } else {
        out.line("chi(Y): not available (b1 > 0 or 9 - K^2 not a nonnegative integer)");
    }
}

void cmd_constraints(const InputDocument& doc, Out& out) {
    auto spec = with_default_labels(doc.spec);
    auto cls = classify_cy_cover(spec);
    out.line(std::string("verdict: ") + to_string(cls.verdict));
    json section;
    try {
        auto v = thm32_check(spec);
        out.line("fixed-point rules for a K3 cover: " + std::string(v.empty() ? "satisfied" : "violated"));
        for (const auto& x : v) out.problem(x);
        section["fixed_point_rules"] = json{{"applicable", true}, {"violations", v}};
    } catch (const Error& e) {
        if (e.code() != "precondition") throw;
        out.line(std::string("fixed-point rules: not applicable (") + bare_message(e) + ")");
        section["fixed_point_rules"] = json{{"applicable", false}, {"reason", bare_message(e)}};
    }

    // Strata with full isotropy lift to the fixed set; with n prime every other point has n free preimages.
    const auto n = spec_order(spec);
    bool smooth_fixed = true;
    std::int64_t chi_fix = 0, b1_fix = 0;
    for (const auto& s : spec.surfaces)
        if (s.m == n) {
            chi_fix += 2 - 2 * s.genus;
            b1_fix += 2 * s.genus;
        }
    for (const auto& p : spec.points)
        if (mj_order(p.type) == n) {
            chi_fix += 1;
            smooth_fixed = smooth_fixed && sl_part_order(p.type) == 1;
        }
    if (cls.verdict == CoverVerdict::integral_homology_k3 && is_prime(n) && smooth_fixed) {
        auto r = edmonds_solve(22, n, chi_fix, b1_fix);
        if (r.solution) {
            out.line("Edmonds (b2 = 22, p = " + std::to_string(n) + ", chi(fixed) = " + std::to_string(chi_fix) +
                     ", b1(fixed) = " + std::to_string(b1_fix) + "): r = " + std::to_string(r.solution->r) +
                     ", t = " + std::to_string(r.solution->t) + ", s = " + std::to_string(r.solution->s));
            section["edmonds"] = json{{"applicable", true}, {"chi_fix", chi_fix}, {"b1_fix", b1_fix},
                                      {"r", r.solution->r}, {"t", r.solution->t}, {"s", r.solution->s}};
        } else {
            out.problem("Edmonds identities: " + r.violated);
            section["edmonds"] = json{{"applicable", true}, {"chi_fix", chi_fix}, {"b1_fix", b1_fix}, {"violated", r.violated}};
        }
    } else {
        out.line("Edmonds: not applicable (needs a K3 verdict, prime n and smooth points over the fully fixed strata)");
        section["edmonds"] = json{{"applicable", false}};
    }

    try {
        auto c = cor35_check(spec);
        json rows = json::array();
        for (const auto& r : c.rows) {
            out.line("d(K^" + std::to_string(r.k) + ") = " + rat(r.d) + (r.negative_even ? "" : " (not a negative even integer)"));
            rows.push_back(json{{"k", r.k}, {"d", rational_json(r.d)}, {"negative_even", r.negative_even}});
        }
        for (const auto& v : c.violations) out.problem(v);
        section["sw_dimensions"] = json{{"applicable", true}, {"rows", rows}, {"violations", c.violations}};
    } catch (const Error& e) {
        if (e.code() != "precondition") throw;
        out.line(std::string("Seiberg-Witten dimension test: not applicable (") + bare_message(e) + ")");
        section["sw_dimensions"] = json{{"applicable", false}, {"reason", bare_message(e)}};
    }
    out.data["constraints"] = section;
}

void cmd_sw(const InputDocument& doc, Out& out) {
    auto spec = with_default_labels(doc.spec);
    validate_spec(spec);
    const auto n = spec_order(spec);
    json rows = json::array();
    for (std::int64_t k = 0; k <= n; ++k) {
        auto d = d_dimension(spec, k);
        out.line("d(K^" + std::to_string(k) + ") = " + rat(d));
        rows.push_back(json{{"k", k}, {"d", rational_json(d)}});
    }
    out.data["n"] = n;
    out.data["dimensions"] = rows;
}

void cmd_blowdown(const InputDocument& doc, const PipelineOptions& opt, Out& out, json& arrangement) {
    if (!doc.expressions) throw Error("precondition", "run_pipeline", "blowdown needs an expressions block");
    const auto& cfg = *doc.expressions;
    AreaVector areas;
    if (opt.areas) {
        areas = *opt.areas;
    } else if (doc.areas) {
        areas = *doc.areas;
    } else {
        auto found = find_area_vector(cfg.vectors(), cfg.n_blowups(), AreaSearchOptions{true, false}, cfg.labels());
        if (!found.feasible())
            throw Error("precondition", "find_area_vector",
                        "no odd reduced area vector for the expressions; conflicting constraints: " + join(found.certificate, "; "));
        areas = *found.areas;
        out.line("areas: computed an odd reduced area vector");
    }
    out.data["areas"] = areas_json(areas);
    BlowdownOptions bo{opt.strict_germs || doc.options.strict_germs};
    auto st = run_blowdown(cfg, areas, bo);
    out.line(std::string("final stage: ") + to_string(st.decision.target) + " via " + join(st.decision.conditions, ", "));
    if (st.non_canonical) out.line("strict germs: the arrangement is not canonical");

    std::map<std::int64_t, std::size_t> degrees;
    std::size_t live = 0;
    for (const auto& c : st.components)
        if (c.live) {
            ++live;
            ++degrees[c.current.a];
        }
    std::vector<std::string> deg;
    for (const auto& [d, k] : degrees) deg.push_back(std::to_string(k) + " of degree " + std::to_string(d));
    out.line("components: " + std::to_string(live) + " live (" + join(deg, ", ") + ")");
    std::map<std::size_t, std::size_t> profile;
    std::size_t created = 0, germs = 0;
    for (const auto& p : st.points) {
        ++profile[p.branches.size()];
        if (!p.original()) ++created;
        for (const auto& b : p.branches) germs += b.is_line() ? 0 : 1;
    }
    std::vector<std::string> prof;
    for (const auto& [k, c] : profile) prof.push_back(std::to_string(c) + " with " + std::to_string(k) + " branches");
    out.line("points: " + std::to_string(st.points.size()) + " (" + std::to_string(created) + " created; " + join(prof, ", ") + ")");
    out.line("germ branches: " + std::to_string(germs));
    for (const auto& c : st.components)
        if (c.live) {
            std::size_t on = 0;
            for (const auto& p : st.points)
                for (const auto& b : p.branches)
                    if (b.owner == c.label) {
                        ++on;
                        break;
                    }
            out.line("  " + c.label + ": " + format_class(c.current, st.basis) + ", through " + std::to_string(on) + " points");
        }
    for (const auto& p : st.points) {
        std::vector<std::string> br;
        for (const auto& b : p.branches)
            br.push_back(b.is_line() ? b.owner + " line L" + std::to_string(b.line)
                                     : b.owner + " (" + std::to_string(b.kappa) + "," + std::to_string(b.lambda) + ") ref L" +
                                           std::to_string(b.line));
        out.line("  " + p.id + ": " + join(br, "; "));
    }
    auto ex = export_arrangement(st, cfg);
    out.line(std::string("verification: ") + (ex.document.summary.ok() ? "zero violations" : "violations found"));
    for (const auto& v : ex.document.summary.violations) out.problem(v);
    out.data["components_live"] = live;
    out.data["point_profile"] = json::object();
    for (const auto& [k, c] : profile) out.data["point_profile"][std::to_string(k)] = c;
    arrangement = document_json(ex.document);
    out.data["graph"] = ex.graph;
}

void cmd_search(const InputDocument& doc, const PipelineOptions& opt, Out& out) {
    auto spec = with_default_labels(doc.spec);
    auto t = target_from_spec(spec);
    auto n = blowups_of(doc);
    if (!n) throw Error("precondition", "run_pipeline", "9 - K^2 is not a nonnegative integer; no blow-up count to search");
    const auto limit = opt.limit ? *opt.limit : doc.options.limit ? *doc.options.limit : std::size_t{100};
    auto res = search_expressions(t, *n, limit);
    out.line("target: " + std::to_string(t.components.size()) + " components, scale " + std::to_string(t.scale) + ", N = " +
             std::to_string(*n) + ", limit " + std::to_string(limit));
    out.line("found " + std::to_string(res.forms.size()) + " assignments up to symmetry" +
             (res.stats.truncated ? " (truncated by the limit)" : "") + "; " + std::to_string(res.stats.branches) +
             " top-level branches, " + std::to_string(res.stats.nodes) + " rows placed");
    json list = json::array();
    for (std::size_t i = 0; i < res.assignments.size(); ++i) {
        const auto& a = res.assignments[i];
        out.line("assignment " + std::to_string(i + 1) + ":");
        for (const auto& c : a.classes) out.line("  " + c.label + " = " + format_class(c.cls, a.basis));
        list.push_back(config_json(a));
    }
    out.data["assignments"] = list;
    out.data["truncated"] = res.stats.truncated;
    if (doc.expressions) {
        auto mine = canonicalize_solution(t, *doc.expressions);
        bool hit = std::find(res.forms.begin(), res.forms.end(), mine) != res.forms.end();
        out.line(std::string("input expressions are ") + (hit ? "among" : "not among") + " the results");
        out.data["input_found"] = hit;
    }
}

} // namespace

PipelineResult run_pipeline(const InputDocument& doc, Command command, const PipelineOptions& options) {
    Out out;
    out.line(std::string("orbkit ") + to_string(command));
    out.data["command"] = to_string(command);
    json arrangement;
    try {
        switch (command) {
        case Command::resolve: cmd_resolve(doc, out); break;
        case Command::cover: cmd_cover(doc, out); break;
        case Command::constraints: cmd_constraints(doc, out); break;
        case Command::sw: cmd_sw(doc, out); break;
        case Command::blowdown: cmd_blowdown(doc, options, out, arrangement); break;
        case Command::search: cmd_search(doc, options, out); break;
        }
    } catch (const Error& e) {
        out.line(error_line(e));
        out.data["error"] = error_json(e);
        out.exit_code = e.code() == "parse" ? 2 : 1;
    }
    out.data["exit_code"] = out.exit_code;
    if (!arrangement.is_null()) out.data["arrangement"] = arrangement;
    return PipelineResult{out.exit_code, out.text.str(), dump(out.data)};
}

PipelineResult run_pipeline(const std::string& input_text, Command command, const PipelineOptions& options) {
    InputDocument doc;
    try {
        doc = parse_input(input_text);
    } catch (const Error& e) {
        json data{{"command", to_string(command)}, {"error", error_json(e)}, {"exit_code", 2}};
        return PipelineResult{2, error_line(e) + "\n", dump(data)};
    }
    return run_pipeline(doc, command, options);
}

} // namespace orbkit
