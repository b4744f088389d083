#include <doctest.h>

#include "orbkit/io.hpp"
#include "orbkit/search.hpp"
#include "reference_data.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>

using namespace orbkit;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in, "cannot open " << path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fixture(const std::string& name) { return read_file(std::string(ORBKIT_FIXTURES) + "/" + name); }
std::string test_data(const std::string& name) { return read_file(std::string(ORBKIT_TEST_DATA) + "/" + name); }

InputDocument random_document(std::mt19937& rng) {
    auto pick = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
    InputDocument d;
    d.spec.b1 = pick(0, 2);
    for (auto i = pick(0, 2); i > 0; --i) d.spec.surfaces.push_back({pick(0, 3), pick(2, 7), pick(1, 3), pick(0, 1) ? "S" + std::to_string(i) : ""});
    for (auto i = pick(0, 4); i > 0; --i) {
        IsolatedPoint q{{pick(2, 9), pick(1, 8), pick(1, 8)}, pick(0, 1) ? "q" + std::to_string(i) : "", {}};
        for (auto k = pick(0, 2); k > 0; --k) q.chain_labels.push_back("G" + std::to_string(i) + "_" + std::to_string(k));
        d.spec.points.push_back(q);
    }
    const auto n = static_cast<std::size_t>(pick(0, 5));
    if (pick(0, 1)) {
        Configuration c;
        c.basis = numeric_basis(n);
        for (auto i = pick(0, 4); i > 0; --i) {
            ClassVector f{pick(-1, 3), {}};
            for (std::size_t k = 0; k < n; ++k) f.b.push_back(pick(-2, 2));
            c.classes.push_back({"C" + std::to_string(i), f});
        }
        d.expressions = c;
    }
    if (pick(0, 1)) {
        AreaVector a;
        a.h = make_rational(pick(1, 50), pick(1, 7));
        for (std::size_t k = 0; k < n; ++k) a.e.push_back(make_rational(pick(-9, 9), pick(1, 5)));
        d.areas = a;
    }
    if (pick(0, 1)) d.options.limit = static_cast<std::size_t>(pick(0, 500));
    d.options.strict_germs = pick(0, 1) == 1;
    return d;
}

ArrangementExport blowdown_export(const Configuration& c, bool strict = false) {
    auto found = find_area_vector(c.vectors(), c.n_blowups(), AreaSearchOptions{true, false});
    REQUIRE(found.feasible());
    return export_arrangement(run_blowdown(c, *found.areas, BlowdownOptions{strict}), c);
}

struct DotGraph {
    std::set<std::string> boxes, circles;
    std::vector<std::tuple<std::string, std::string, std::string>> edges;  // owner, point, label
};

DotGraph parse_dot(const std::string& text) {
    DotGraph g;
    std::regex node(R"re(^\s*"([^"]+)" \[shape=(box|circle))re");
    std::regex edge(R"re(^\s*"([^"]+)" -- "([^"]+)" \[label="([^"]*)")re");
    std::istringstream in(text);
    std::string line;
    std::smatch m;
    while (std::getline(in, line)) {
        if (std::regex_search(line, m, edge))
            g.edges.emplace_back(m[1], m[2], m[3]);
        else if (std::regex_search(line, m, node))
            (m[2] == "box" ? g.boxes : g.circles).insert(m[1]);
    }
    return g;
}

} // namespace

TEST_CASE("input documents round-trip") {
    std::mt19937 rng(20261015);
    for (int trial = 0; trial < 200; ++trial) {
        auto d = random_document(rng);
        auto text = serialize_input(d);
        auto back = parse_input(text);
        CHECK(serialize_input(back) == text);
        CHECK(back.expressions == d.expressions);
        CHECK(back.areas == d.areas);
        CHECK(back.options == d.options);
        REQUIRE(back.spec.points.size() == d.spec.points.size());
        for (std::size_t i = 0; i < d.spec.points.size(); ++i) {
            CHECK(back.spec.points[i].type.m == d.spec.points[i].type.m);
            CHECK(back.spec.points[i].type.w2 == d.spec.points[i].type.w2);
            CHECK(back.spec.points[i].chain_labels == d.spec.points[i].chain_labels);
        }
    }
    for (const char* f : {"case_i.json", "case_ii.json", "nine_lines.json", "chain_pairs.json", "tangency.json", "example_2_6_1.json",
                          "example_2_6_2a.json", "example_2_6_2b.json", "example_2_6_3.json", "example_2_6_4.json"}) {
        CAPTURE(f);
        auto once = serialize_input(parse_input(fixture(f)));
        CHECK(serialize_input(parse_input(once)) == once);
    }
}

TEST_CASE("input parsing accepts integer rationals and rejects bad documents with a pointer") {
    auto d = parse_input(R"({"schema": 1, "orbifold": {"points": []}, "areas": {"h": 3, "e": [1, {"num": 1, "den": 2}]}})");
    REQUIRE(d.areas);
    CHECK(d.areas->h == 3);
    CHECK(d.areas->e[1] == make_rational(1, 2));

    auto message = [](const std::string& text) -> std::string {
        try {
            parse_input(text);
        } catch (const Error& e) {
            CHECK(e.code() == "parse");
            return e.what();
        }
        return "";
    };
    CHECK(message(R"({"schema": 1, "orbifold": {"points": [{"m": 3, "weights": [1]}]}})").find("/orbifold/points/0/weights") != std::string::npos);
    CHECK(message(R"({"schema": 1, "orbifold": {"points": [{"m": 3, "weights": [1, 1], "colour": 2}]}})").find("/orbifold/points/0/colour") != std::string::npos);
    CHECK(message(R"({"schema": 2, "orbifold": {}})").find("/schema") != std::string::npos);
    CHECK(message(R"({"orbifold": {}})").find("/schema") != std::string::npos);
    CHECK(message(R"({"schema": 1, "orbifold": {}, "expressions": {"n_blowups": 2, "classes": [{"label": "A", "class": "H - E_3"}]}})")
              .find("/expressions/classes/0/class") != std::string::npos);
    CHECK(message(R"({"schema": 1, "orbifold": {}, "areas": {"h": {"num": 1, "den": 0}, "e": []}})").find("/areas/h/den") != std::string::npos);
    CHECK(message(test_data("malformed.json")).find("malformed JSON") != std::string::npos);
    CHECK(parse_areas(serialize_areas(AreaVector{make_rational(7, 3), {make_rational(1), make_rational(-2, 5)}})) ==
          AreaVector{make_rational(7, 3), {make_rational(1), make_rational(-2, 5)}});
}

TEST_CASE("arrangement documents round-trip and re-verify") {
    for (auto [name, cfg, strict] : {std::tuple{"hesse", testdata::hesse_dual(), false},
                                     std::tuple{"chains", testdata::five_chains(), false},
                                     std::tuple{"tangency", testdata::tangency_example(), false},
                                     std::tuple{"tangency strict", testdata::tangency_example(), true}}) {
        CAPTURE(name);
        auto ex = blowdown_export(cfg, strict);
        CHECK(ex.document.summary.ok());
        auto text = arrangement_to_json(ex.document);
        auto back = arrangement_from_json(text);
        CHECK(back.config == ex.document.config);
        CHECK(back.state == ex.document.state);
        CHECK(back.summary == ex.document.summary);
        CHECK(verify_arrangement(back.state, back.config) == back.summary);
        CHECK(arrangement_to_json(back) == text);
    }
}

TEST_CASE("a tampered arrangement document is rejected") {
    auto ex = blowdown_export(testdata::hesse_dual());
    auto j = json::parse(arrangement_to_json(ex.document));
    j["summary"]["ok"] = false;
    CHECK_THROWS_AS(arrangement_from_json(j.dump()), Error);
    j = json::parse(arrangement_to_json(ex.document));
    j["arrangement"]["components"][0]["degree"] = 2;
    CHECK_THROWS_AS(arrangement_from_json(j.dump()), Error);
}

TEST_CASE("empty configuration exports an empty document") {
    auto ex = export_arrangement(ArrangementState{}, Configuration{});
    CHECK(ex.document.state.components.empty());
    CHECK(ex.document.state.points.empty());
    CHECK(ex.document.summary.ok());
    CHECK(ex.document.summary.pairs.empty());
    auto g = parse_dot(ex.graph);
    CHECK(g.boxes.empty());
    CHECK(g.circles.empty());
    CHECK(g.edges.empty());
    CHECK(arrangement_from_json(arrangement_to_json(ex.document)).state == ArrangementState{});
}

TEST_CASE("incidence graph of the chain-pair arrangement") {
    auto g = parse_dot(blowdown_export(testdata::five_chains()).graph);
    CHECK(g.boxes.size() == 10);
    CHECK(g.circles.size() == 16);
    std::map<std::string, int> degree;
    for (const auto& [owner, point, label] : g.edges) {
        CHECK(g.boxes.count(owner) == 1);
        ++degree[point];
    }
    std::map<int, int> profile;
    for (const auto& [p, d] : degree) ++profile[d];
    CHECK(profile == std::map<int, int>{{2, 5}, {3, 10}, {5, 1}});
}

TEST_CASE("incidence graph of the tangency arrangement") {
    auto g = parse_dot(blowdown_export(testdata::tangency_example()).graph);
    CHECK(g.boxes.size() == 7);
    for (const char* p : {"E_u", "E_y"}) {
        CAPTURE(p);
        std::map<std::string, int> per_ref;
        for (const auto& [owner, point, label] : g.edges)
            if (point == p && label.rfind("(2,1) ref ", 0) == 0) ++per_ref[label];
        CHECK(per_ref.size() == 2);
        for (const auto& [ref, count] : per_ref) CHECK(count == 2);
    }
}

TEST_CASE("pipeline: nine-line blow-down from the case (i) fixture") {
    auto r = run_pipeline(fixture("case_i.json"), Command::blowdown);
    CHECK(r.exit_code == 0);
    CHECK(r.report.find("components: 9 live (9 of degree 1)") != std::string::npos);
    CHECK(r.report.find("points: 12 (12 created; 12 with 3 branches)") != std::string::npos);
    auto j = json::parse(r.json);
    CHECK(j["arrangement"]["summary"]["ok"] == true);
    CHECK(j["arrangement"]["points"].is_null());
    CHECK(j["arrangement"]["arrangement"]["points"].size() == 12);
}

TEST_CASE("pipeline: cover reports") {
    auto j = json::parse(run_pipeline(fixture("example_2_6_4.json"), Command::cover).json);
    CHECK(j["n"] == 4);
    CHECK(j["verdict"] == "integral_homology_K3");

    // chi(Y) plus the Du Val corrections of Y must be the K3 value 24.
    for (const char* f : {"example_2_6_1.json", "example_2_6_2a.json", "example_2_6_2b.json", "example_2_6_3.json", "example_2_6_4.json"}) {
        CAPTURE(f);
        auto doc = parse_input(fixture(f));
        auto r = run_pipeline(doc, Command::cover);
        REQUIRE(r.exit_code == 0);
        auto out = json::parse(r.json);
        std::int64_t n = 1;
        for (const auto& s : doc.spec.surfaces) n = std::lcm(n, s.m);
        std::int64_t correction = 0;
        std::vector<std::pair<std::int64_t, std::int64_t>> point_orders;
        for (const auto& p : doc.spec.points) {
            const auto h = std::gcd(p.type.m, p.type.w1 + p.type.w2);
            point_orders.push_back({p.type.m / h, h});
            n = std::lcm(n, p.type.m / h);
        }
        for (auto [mj, h] : point_orders) correction += (n / mj) * (h - 1);
        CHECK(out["n"] == n);
        CHECK(out["chi_y"].get<std::int64_t>() + correction == 24);
    }

    for (const char* f : {"case_i.json", "case_ii.json"}) {
        auto out = json::parse(run_pipeline(fixture(f), Command::cover).json);
        CHECK(out["chi_y"] == 0);
        CHECK(out["verdict"] == "rational_homology_T4");
    }
}

TEST_CASE("pipeline: constraints on the involution example") {
    auto j = json::parse(run_pipeline(fixture("example_2_6_1.json"), Command::constraints).json);
    const auto& e = j["constraints"]["edmonds"];
    CHECK(e["applicable"] == true);
    CHECK(e["r"] == 8);
    CHECK(e["t"] == 2);
    CHECK(e["s"] == 4);
    CHECK(j["constraints"]["fixed_point_rules"]["violations"].empty());
}

TEST_CASE("pipeline: resolve, sw and search") {
    auto j = json::parse(run_pipeline(fixture("case_i.json"), Command::resolve).json);
    CHECK(j["euler"]["resolution"] == 15);
    CHECK(j["euler"]["underlying"] == 6);
    CHECK(j["expressions"]["violations"].empty());

    j = json::parse(run_pipeline(fixture("case_ii.json"), Command::sw).json);
    CHECK(j["dimensions"].size() == 6);
    CHECK(j["dimensions"][0]["d"]["num"] == 0);

    PipelineOptions opts;
    opts.limit = 200;
    j = json::parse(run_pipeline(fixture("tangency.json"), Command::search, opts).json);
    CHECK(j["input_found"] == true);
    CHECK(j["truncated"] == false);
    CHECK(j["assignments"].size() == 44);
}

TEST_CASE("pipeline exit codes") {
    auto r = run_pipeline(test_data("bad_weights.json"), Command::resolve);
    CHECK(r.exit_code == 1);
    CHECK(r.report.find("error [precondition] quotient_singularities/validate_point") != std::string::npos);

    r = run_pipeline(test_data("malformed.json"), Command::cover);
    CHECK(r.exit_code == 2);
    CHECK(r.report.find("error [parse] cli_reports/parse_input") != std::string::npos);

    auto doc = parse_input(fixture("case_i.json"));
    doc.expressions->classes[0].cls = parse_class("H - E_i - E_j - E_k - E_r", doc.expressions->basis);
    r = run_pipeline(doc, Command::resolve);
    CHECK(r.exit_code == 1);
    CHECK(r.report.find("violation:") != std::string::npos);

    doc = parse_input(fixture("case_ii.json"));
    r = run_pipeline(doc, Command::blowdown);
    CHECK(r.exit_code == 1);
    CHECK(json::parse(r.json)["error"]["code"] == "precondition");
}

TEST_CASE("reports are byte-stable") {
    for (auto c : {Command::resolve, Command::cover, Command::constraints, Command::sw, Command::blowdown, Command::search}) {
        CAPTURE(to_string(c));
        auto a = run_pipeline(fixture("tangency.json"), c);
        auto b = run_pipeline(fixture("tangency.json"), c);
        CHECK(a.report == b.report);
        CHECK(a.json == b.json);
    }
}

TEST_CASE("commands parse by name") {
    for (auto c : {Command::resolve, Command::cover, Command::constraints, Command::sw, Command::blowdown, Command::search})
        CHECK(parse_command(to_string(c)) == c);
    CHECK_FALSE(parse_command("plot"));
}
