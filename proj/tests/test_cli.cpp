#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"

using namespace slantgeo::cli;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

json plane_manifest() {
    return json::parse(R"J({
      "manifest_version": 1,
      "ambient": {"builtin": "euclidean_cosymplectic", "n": 2},
      "submanifold": {"params": ["x1", "x2"], "domain": {"lo": [0.1, -1], "hi": [1.4, 1]},
                      "map": ["0", "cos(x1)", "x2", "sin(x1)", "0"]},
      "sampling": {"grid": [4, 3], "seed": 7},
      "expect": {"theta": "x1", "xi_position": "normal", "class": "cosymplectic"}
    })J");
}

fs::path scratch() {
    auto d = fs::temp_directory_path() / "slantgeo_cli_test";
    fs::create_directories(d);
    return d;
}

fs::path put(const std::string& name, const std::string& text) {
    auto p = scratch() / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Runs the built executable; returns its exit status and leaves stdout in out.
int exe(const std::string& args, std::string* out = nullptr) {
    auto o = scratch() / "stdout.txt";
    std::string cmd = std::string(SLANTGEO_EXE) + " " + args + " > " + o.string() + " 2>/dev/null";
    int st = std::system(cmd.c_str());
    if (out) *out = slurp(o);
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST_CASE("canonical dump sorts keys and prints 17 significant digits") {
    json j = {{"b", 0.1}, {"a", {1, 2}}, {"c", std::nan("")}, {"d", -0.0}, {"e", "x\ny"}};
    CHECK(canonical_dump(j) ==
          "{\n  \"a\": [1, 2],\n  \"b\": 0.10000000000000001,\n  \"c\": null,\n  \"d\": 0,\n  \"e\": \"x\\ny\"\n}\n");
    CHECK(canonical_dump(j).find('\r') == std::string::npos);
    // the 17-digit form round-trips
    double v = std::atan(2.0);
    CHECK(json::parse(canonical_dump(json{{"v", v}}))["v"].get<double>() == v);
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("manifest validation rejects malformed input with exit 2") {
    auto code = [](json m) { return run("slant", m, "", {}).exit_code; };
    CHECK(code(plane_manifest()) == Ok);

    auto m = plane_manifest();
    m["manifest_version"] = 2;
    CHECK(code(m) == InvalidManifest);
    m = plane_manifest();
    m["surprise"] = 1;
    CHECK(code(m) == InvalidManifest);
    m = plane_manifest();
    m["submanifold"]["map"].erase(4);
    CHECK(code(m) == InvalidManifest);
    m = plane_manifest();
    m["submanifold"]["map"][1] = "cos(x1";
    CHECK(code(m) == InvalidManifest);
    m = plane_manifest();
    m["submanifold"]["map"][1] = "cos(q)";
    CHECK(code(m) == InvalidManifest);
    m = plane_manifest();
    m["ambient"]["builtin"] = "hyperbolic";
    CHECK(code(m) == InvalidManifest);
    m = plane_manifest();
    m["sampling"]["grid"] = {2, 2, 2};
    CHECK(code(m) == InvalidManifest);
    m = plane_manifest();
    m["tolerances"] = {{"residual", -1}};
    CHECK(code(m) == InvalidManifest);
    m = plane_manifest();
    m["expect"]["class"] = "kahler";
    CHECK(code(m) == InvalidManifest);
    m = plane_manifest();
    m.erase("submanifold");
    CHECK(code(m) == InvalidManifest);  // expect.theta without parameters
    m.erase("expect");
    CHECK(code(m) == InvalidManifest);  // slant needs a submanifold
    CHECK(run("classify", m, "", {}).exit_code == Ok);

    json custom = json::parse(R"J({
      "manifest_version": 1,
      "ambient": {"custom": {"coords": ["y1", "y2", "t"],
                             "metric": [["1", "0", "0"], ["0", "1"], ["0", "0", "1"]],
                             "phi": [["0", "-1", "0"], ["1", "0", "0"], ["0", "0", "0"]],
                             "xi": ["0", "0", "1"], "eta": ["0", "0", "1"]}}
    })J");
    auto r = run("classify", custom, "", {});
    CHECK(r.exit_code == InvalidManifest);
    CHECK(r.report["error"].get<std::string>().find("metric") != std::string::npos);
    custom["ambient"]["custom"]["metric"][1] = {"0", "1", "0"};
    r = run("classify", custom, "", {});
    CHECK(r.exit_code == Ok);
    CHECK(r.report["payload"]["label"] == "cosymplectic");
    custom["ambient"]["custom"]["dim"] = 5;
    CHECK(run("classify", custom, "", {}).exit_code == InvalidManifest);
}

TEST_CASE("classify reports the builtin classes") {
    for (auto [name, label] : {std::pair{"kenmotsu_warped", "kenmotsu"}, {"euclidean_cosymplectic", "cosymplectic"},
                               {"sasakian_standard", "sasakian"}}) {
        json m = {{"manifest_version", 1}, {"ambient", {{"builtin", name}, {"n", 2}}}};
        auto r = run("classify", m, "", {});
        CHECK(r.exit_code == Ok);
        CHECK(r.report["payload"]["label"] == label);
        CHECK(r.report["payload"]["points_count"] == 200);
        CHECK(r.report["conventions"]["d_eta"] == "half");
    }
    json m = {{"manifest_version", 1}, {"ambient", {{"builtin", "kenmotsu_warped"}, {"n", 1}}},
              {"expect", {{"class", "sasakian"}}}};
    CHECK(run("classify", m, "", {}).exit_code == CheckFailure);
}

TEST_CASE("slant compares against the expected angle") {
    auto r = run("slant", plane_manifest(), "", {});
    const auto& p = r.report["payload"];
    CHECK(p["label"] == "pointwise-slant");
    CHECK(p["samples"].size() == 12);
    CHECK(p["expect"]["max_deviation"].get<double>() < 1e-12);
    for (const auto& s : p["samples"]) {
        double u1 = s["u"][0];
        CHECK(s["theta"].get<double>() == doctest::Approx(u1).epsilon(1e-12));
        CHECK(s["theta_deg"].get<double>() == doctest::Approx(u1 * 180 / M_PI).epsilon(1e-12));
    }
    CHECK(r.report["sampling"]["grid"] == json({4, 3}));
    CHECK(r.report["sampling"]["seed"] == 7);

    auto m = plane_manifest();
    m["expect"]["theta"] = "x1 + 0.01";
    r = run("slant", m, "", {});
    CHECK(r.exit_code == CheckFailure);
    CHECK(r.report["payload"]["expect"]["max_deviation"].get<double>() == doctest::Approx(0.01));
    r = run("slant", m, "", Overrides{std::nullopt, 0.1, std::nullopt});
    CHECK(r.exit_code == Ok);

    m = plane_manifest();
    m["expect"]["xi_position"] = "tangent";
    CHECK(run("slant", m, "", {}).exit_code == CheckFailure);

    // mixed blocks: a flat R^2 and a slant R^2 at different angles
    json cube = json::parse(R"J({
      "manifest_version": 1,
      "ambient": {"builtin": "euclidean_cosymplectic", "n": 4},
      "submanifold": {"params": ["x1", "x2", "x3", "x4"], "domain": {"lo": [0, 0, 0, 0], "hi": [1, 1, 1, 1]},
                      "map": ["x1", "x2", "0", "0", "x3", "0.5*x4", "0", "0.8660254037844386*x4", "0"]},
      "sampling": {"grid": 2}
    })J");
    r = run("slant", cube, "", {});
    CHECK(r.exit_code == Ok);
    CHECK(r.report["payload"]["label"] == "not-pointwise-slant");
}

TEST_CASE("grid override and degenerate samples") {
    auto r = run("slant", plane_manifest(), "", Overrides{std::vector<int>{2}, std::nullopt, 3});
    CHECK(r.report["payload"]["samples"].size() == 4);
    CHECK(r.report["sampling"]["seed"] == 3);

    // rank drops along x2 = 0, a third of the 3 x 3 grid
    json cone = json::parse(R"J({
      "manifest_version": 1,
      "ambient": {"builtin": "euclidean_cosymplectic", "n": 2},
      "submanifold": {"params": ["x1", "x2"], "domain": {"lo": [-1, -1], "hi": [1, 1]},
                      "map": ["x1*x2", "x2^3", "0", "0", "0"]},
      "sampling": {"grid": 3}
    })J");
    for (const char* c : {"slant", "semislant"}) {
        r = run(c, cone, "", {});
        CAPTURE(c);
        CHECK(r.exit_code == Degenerate);
        CHECK(r.report["payload"]["degenerate"] == 3);
    }
    CHECK(run("verify", cone, "slant-basic", {}).exit_code == Degenerate);
    CHECK(run("slant", cone, "", Overrides{std::vector<int>{2}, std::nullopt, std::nullopt}).exit_code == Ok);
}

TEST_CASE("semislant summarises the split") {
    auto r = run_example("semislant-r11", "semislant", "", Overrides{std::vector<int>{2}, std::nullopt, std::nullopt});
    CHECK(r.exit_code == Ok);
    const auto& p = r.report["payload"];
    CHECK(p["label"] == "pointwise-semi-slant");
    for (const auto& s : p["samples"]) {
        CHECK(s["dim_D1"] == 2);
        CHECK(s["dim_D2"] == 2);
        CHECK(s["status"] == "ok");
    }

    auto m = manifest_json(slantgeo::build("semislant-r11"));
    m["sampling"]["grid"] = {2};
    m["expect"]["d1_dim"] = 3;
    CHECK(run("semislant", m, "", {}).exit_code == CheckFailure);

    // at (1, 1) the angle is arccos(1/3)
    m = manifest_json(slantgeo::build("semislant-r11"));
    m["submanifold"]["domain"] = {{"lo", {1, 1, 0.1, 0.1}}, {"hi", {1, 1, 0.2, 0.2}}};
    m["sampling"]["grid"] = {1};
    r = run("semislant", m, "", {});
    CHECK(r.report["payload"]["samples"][0]["theta"].get<double>() == doctest::Approx(std::acos(1.0 / 3)).epsilon(1e-12));

    r = run_example("semislant-r7", "semislant", "", Overrides{std::vector<int>{2}, std::nullopt, std::nullopt});
    CHECK(r.exit_code == Ok);
    CHECK(r.report["payload"]["samples"][0]["dim_D1"] == 3);
    CHECK(r.report["payload"]["samples"][0]["dim_D2"] == 2);

    // a phi-invariant plane has no slant part
    json flat = json::parse(R"J({
      "manifest_version": 1,
      "ambient": {"builtin": "euclidean_cosymplectic", "n": 2},
      "submanifold": {"params": ["x1", "x2"], "domain": {"lo": [0, 0], "hi": [1, 1]},
                      "map": ["x1", "x2", "0", "0", "0"]},
      "sampling": {"grid": 2}
    })J");
    r = run("semislant", flat, "", {});
    CHECK(r.exit_code == Ok);
    CHECK(r.report["payload"]["label"] == "invariant");
    CHECK(r.report["payload"]["samples"][0]["proper"] == false);
}

TEST_CASE("verify exit codes follow the verdicts") {
    Overrides small{std::vector<int>{2}, std::nullopt, std::nullopt};
    auto r = run_example("slant-euclidean", "verify", "parallel-tensors", small);
    CHECK(r.exit_code == Ok);
    CHECK(r.report["payload"]["summary"]["fail"] == 0);
    CHECK(r.report["payload"]["summary"]["pass"].get<int>() > 0);

    r = run_example("warped-cosymplectic-normal", "verify", "warp-identities", small);
    CHECK(r.exit_code == CheckFailure);

    // not semi-slant: every distribution check is skipped, which is not a failure
    r = run_example("slant-rotation", "verify", "integrability-D1", small);
    CHECK(r.exit_code == Ok);
    CHECK(r.report["payload"]["summary"]["pass"] == 0);
    CHECK(r.report["payload"]["note"].get<std::string>().find("vacuous") == 0);

    r = run_example("slant-euclidean", "verify", "no-such-suite", small);
    CHECK(r.exit_code == InvalidManifest);

    r = run_example("slant-euclidean", "verify", "all", small);
    std::set<std::string> suites;
    for (const auto& c : r.report["payload"]["checks"]) suites.insert(c["suite"]);
    CHECK(suites.size() == slantgeo::suite_names().size());
}

TEST_CASE("example manifests round-trip through the parser") {
    for (const auto& id : slantgeo::list_entries()) {
        CAPTURE(id);
        auto m = manifest_json(slantgeo::build(id));
        CHECK_NOTHROW(parse_manifest(m));
        CHECK(json::parse(canonical_dump(m)) == m);
    }
    CHECK(run_example("nope", "slant", "", {}).exit_code == InvalidManifest);
}

TEST_CASE("executable: exit codes, output file and byte-identical reports") {
    auto good = put("plane.json", plane_manifest().dump(2));
    std::string a, b;
    CHECK(exe("slant " + good.string(), &a) == 0);
    CHECK(exe("slant " + good.string(), &b) == 0);
    CHECK(a == b);
    CHECK(json::parse(a)["exit_code"] == 0);
    CHECK(a.find("\r") == std::string::npos);

    // a reformatted copy of the same manifest has the same digest
    auto spaced = put("plane2.json", plane_manifest().dump(8));
    CHECK(exe("slant " + spaced.string(), &b) == 0);
    CHECK(json::parse(a)["manifest_digest"] == json::parse(b)["manifest_digest"]);

    auto out = scratch() / "report.json";
    fs::remove(out);
    CHECK(exe("slant " + good.string() + " --output " + out.string(), &b) == 0);
    CHECK(b.empty());
    CHECK(slurp(out) == a);

    CHECK(exe("example semislant-r11 verify umbilic --grid 2 --seed 5", &a) == 0);
    CHECK(exe("example semislant-r11 verify umbilic --grid 2 --seed 5", &b) == 0);
    CHECK(a == b);
    CHECK(json::parse(a)["sampling"]["seed"] == 5);

    CHECK(exe("example slant-kenmotsu slant --format text", &a) == 0);
    CHECK(a.find("label: pointwise-slant") != std::string::npos);

    CHECK(exe("example warped-cosymplectic-normal verify warp-identities --grid 2") == 1);
    CHECK(exe("slant " + put("broken.json", "{\"manifest_version\": 1,").string()) == 2);
    CHECK(exe("slant " + (scratch() / "missing.json").string()) == 2);
    CHECK(exe("example unknown-id slant") == 2);
    CHECK(exe("slant " + good.string() + " --grid 0") == 2);
    CHECK(exe("slant " + good.string() + " --format xml") == 2);

    auto m = plane_manifest();
    m["submanifold"]["domain"] = {{"lo", {-1, -1}}, {"hi", {1, 1}}};
    m["submanifold"]["map"] = {"x1*x2", "x2^3", "0", "0", "0"};
    m["sampling"]["grid"] = 3;
    m.erase("expect");
    CHECK(exe("slant " + put("cone.json", m.dump()).string()) == 3);
}
