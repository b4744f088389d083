#include "orbkit/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::optional<std::string> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    return static_cast<bool>(out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"orbkit: singular sets of symplectic Calabi-Yau quotients"};
    app.require_subcommand(1, 1);

    std::string input, areas_path, out_path, graph_path;
    std::optional<std::size_t> limit;
    bool strict = false;
    for (const char* name : {"resolve", "cover", "constraints", "sw", "blowdown", "search"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--input,-i", input, "input JSON document")->required();
        sub->add_option("--out,-o", out_path, "write the machine-readable report here");
        if (std::string(name) == "blowdown") {
            sub->add_option("--areas", areas_path, "JSON area vector overriding the document");
            sub->add_flag("--strict-germs", strict, "replace linear extensions by order-2 tangencies");
            sub->add_option("--graph", graph_path, "write the incidence graph (DOT) here");
        }
        if (std::string(name) == "search") sub->add_option("--limit", limit, "maximum number of assignments");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    const auto command = *orbkit::parse_command(app.get_subcommands().front()->get_name());
    auto text = slurp(input);
    if (!text) {
        std::cerr << "error [io] cli_reports/read: cannot read " << input << "\n";
        return 2;
    }
    orbkit::PipelineOptions options;
    options.limit = limit;
    options.strict_germs = strict;
    if (!areas_path.empty()) {
        auto a = slurp(areas_path);
        if (!a) {
            std::cerr << "error [io] cli_reports/read: cannot read " << areas_path << "\n";
            return 2;
        }
        try {
            options.areas = orbkit::parse_areas(*a);
        } catch (const orbkit::Error& e) {
            std::cerr << e.what() << "\n";
            return 2;
        }
    }

    auto result = orbkit::run_pipeline(*text, command, options);
    std::cout << result.report;
    if (!out_path.empty() && !write_file(out_path, result.json)) {
        std::cerr << "error [io] cli_reports/write: cannot write " << out_path << "\n";
        return 2;
    }
    if (!graph_path.empty()) {
        auto j = nlohmann::json::parse(result.json);
        if (j.contains("graph") && !write_file(graph_path, j["graph"].get<std::string>())) {
            std::cerr << "error [io] cli_reports/write: cannot write " << graph_path << "\n";
            return 2;
        }
    }
    return result.exit_code;
}
