#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli.hpp"

using namespace slantgeo::cli;
using nlohmann::json;

namespace {

std::vector<int> parse_grid(const std::string& s) {
    std::vector<int> g;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        size_t used = 0;
        int v = std::stoi(part, &used);
        if (used != part.size() || v < 1) throw std::invalid_argument(part);
        g.push_back(v);
    }
    if (g.empty()) throw std::invalid_argument(s);
    return g;
}

// Write to a sibling temporary and rename so readers never see a partial report.
bool write_atomically(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    fs::path target(path), tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) return false;
        f << text;
        if (!f.flush()) return false;
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    return !ec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slantgeo: slant and semi-slant submanifolds of almost contact metric manifolds"};
    app.require_subcommand(1);

    std::string grid_text, format = "json", output;
    std::optional<double> tol;
    std::optional<uint64_t> seed;
    app.add_option("--grid", grid_text, "sampling grid: one count per axis, comma separated, or a single count");
    app.add_option("--tol", tol, "residual tolerance overriding the manifest and every check default");
    app.add_option("--seed", seed, "seed for random directions and random ambient points");
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--output,-o", output, "write the report to this file instead of stdout");

    std::string manifest_path, suite, id, sub_command;
    auto add_manifest = [&](CLI::App* c) { c->add_option("manifest", manifest_path, "manifest file")->required(); };
    auto* classify = app.add_subcommand("classify", "classify the ambient structure");
    add_manifest(classify);
    auto* slant = app.add_subcommand("slant", "slant function over the sampling grid");
    add_manifest(slant);
    auto* semislant = app.add_subcommand("semislant", "semi-slant splitting over the sampling grid");
    add_manifest(semislant);
    auto* verify = app.add_subcommand("verify", "run a check suite, or all of them");
    verify->add_option("suite", suite, "suite name or 'all'")->required();
    add_manifest(verify);
    auto* example = app.add_subcommand("example", "run a command on a catalog entry ('example list' lists entries)");
    example->add_option("id", id, "catalog id, or 'list'")->required();
    example->add_option("command", sub_command, "classify | slant | semislant | verify | manifest");
    example->add_option("suite", suite, "suite for verify");
    for (auto* c : {classify, slant, semislant, verify, example}) c->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return InvalidManifest;
    }

    Overrides o;
    o.tol = tol;
    o.seed = seed;
    if (!grid_text.empty()) {
        try {
            o.grid = parse_grid(grid_text);
        } catch (const std::exception&) {
            std::cerr << "--grid: expected positive integers separated by commas\n";
            return InvalidManifest;
        }
    }

    Result r;
    if (example->parsed()) {
        if (id == "list") {
            r = catalog_listing();
        } else if (sub_command.empty()) {
            std::cerr << "example: missing command\n";
            return InvalidManifest;
        } else {
            r = run_example(id, sub_command, suite.empty() ? "all" : suite, o);
        }
    } else {
        std::string command = app.get_subcommands().front()->get_name();
        std::ifstream f(manifest_path, std::ios::binary);
        if (!f) {
            r = Result{InvalidManifest, {{"command", command}, {"engine_version", kEngineVersion}, {"exit_code", 2},
                                         {"error", "cannot read " + manifest_path}, {"report_version", 1}}};
        } else {
            json manifest;
            try {
                manifest = json::parse(f);
            } catch (const json::parse_error& e) {
                r = Result{InvalidManifest, {{"command", command}, {"engine_version", kEngineVersion}, {"exit_code", 2},
                                             {"error", std::string("manifest is not valid JSON: ") + e.what()},
                                             {"report_version", 1}}};
            }
            if (r.report.is_null()) r = run(command, manifest, suite, o);
        }
    }

    std::string text = format == "json" ? canonical_dump(r.report) : render_text(r.report);
    if (r.exit_code == InvalidManifest && r.report.contains("error"))
        std::cerr << "error: " << r.report["error"].get<std::string>() << "\n";
    if (output.empty()) {
        std::cout << text;
        std::cout.flush();
    } else if (!write_atomically(output, text)) {
        std::cerr << "cannot write " << output << "\n";
        return InvalidManifest;
    }
    return r.exit_code;
}
