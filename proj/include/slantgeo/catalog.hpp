#pragma once
// Ready-made configurations: the worked examples and the constructed instances.
// Specs are kept as text so the CLI can render any entry as a manifest.

#include <optional>
#include <string>
#include <vector>

#include "slantgeo/verifier.hpp"

namespace slantgeo {

struct AmbientSpec {
    // builtin form
    std::string builtin;  // empty for a custom ambient
    int n = 0;
    std::optional<std::string> f;  // rotation_family angle function, in y1..y2n, t
    // custom form
    std::vector<std::string> coords;
    std::vector<std::vector<std::string>> metric, phi;
    std::vector<std::string> xi, eta;
    std::optional<Box> box;
};

struct ImmersionSpec {
    std::vector<std::string> params;
    Box domain;
    std::vector<std::string> map;
};

struct WarpSpec {
    std::vector<std::string> base, fiber;
    std::optional<std::string> declared_f;
};

// Throws std::invalid_argument (bad dimensions) or ParseError (bad expression text).
ACMStructure build_ambient(const AmbientSpec& a);
Immersion build_immersion(const ImmersionSpec& s);

struct CatalogEntry {
    std::string id;
    std::string title;
    AmbientSpec ambient;
    ImmersionSpec immersion;
    std::optional<WarpSpec> warped;
    std::optional<std::string> expected_theta;  // expression in the parameters
    std::string expected_xi;                     // tangent | normal
    std::string expected_class;                  // classify() label, or "unconstrained"
    std::string kind;                            // slant | semi-slant | warped | nonexistence-candidate
    std::optional<std::pair<int, int>> split_dims;  // (dim D1, dim D2) for semi-slant entries
    bool constructed = false;                    // not one of the worked examples
    std::vector<std::string> suites;             // suites the entry is meant to exercise
    std::string notes;
};

std::vector<std::string> list_entries();
// Throws std::out_of_range for an unknown id.
CatalogEntry build(const std::string& id);

// Samples on the per-axis grid over the entry domain.
VerifyConfig make_config(const CatalogEntry& e, const std::vector<int>& grid, uint64_t seed = 1);

}  // namespace slantgeo
