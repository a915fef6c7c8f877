#pragma once
// Named check suites over an (ambient, immersion, samples) configuration.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slantgeo/slant.hpp"
#include "slantgeo/warped.hpp"

namespace slantgeo {

enum class Verdict { Pass, Fail, Skipped };
const char* to_string(Verdict v);

struct CheckReport {
    std::string suite, check;
    std::string formula;  // the identity being evaluated
    int samples_total = 0, degenerate = 0, skipped = 0;
    double max_residual = 0, tolerance = 0;
    Verdict verdict = Verdict::Skipped;
    std::string hypothesis;              // why samples (or the whole check) were skipped
    std::map<std::string, double> metrics;
    std::vector<std::string> notes;
};

struct VerifyConfig {
    ACMStructure ambient;
    Immersion immersion;
    std::optional<WarpedImmersion> warped;
    std::vector<std::vector<double>> samples;
    uint64_t seed = 1;
    int trials = 4;                          // random direction sets per sample
    Tolerances point_tol;
    double cluster_tol = 1e-6;
    std::optional<double> tol_override;      // replaces every check tolerance
    bool declared_umbilic = false;
};

std::vector<std::string> suite_names();
// Throws std::invalid_argument for an unknown suite.
std::vector<CheckReport> run_suite(const std::string& name, const VerifyConfig& cfg);

// max |A_V X (duality) - A_V X (Weingarten)| over the normal frame and coordinate X
double shape_route_residual(const FramedPoint& p);

}  // namespace slantgeo
