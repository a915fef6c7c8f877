#pragma once
// Manifest-driven commands behind the slantgeo executable.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "slantgeo/catalog.hpp"

namespace slantgeo::cli {

inline constexpr const char* kEngineVersion = "1.0.0";

enum Exit { Ok = 0, CheckFailure = 1, InvalidManifest = 2, Degenerate = 3 };

class ManifestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Manifest {
    AmbientSpec ambient;
    std::optional<ImmersionSpec> submanifold;
    std::optional<WarpSpec> warped;
    std::vector<int> grid = {10};
    uint64_t seed = 1;
    int ambient_points = 200;  // classify without a submanifold
    std::optional<double> residual_tol;
    double eigen_cluster = 1e-6;
    double degenerate_rank = 1e-8;
    double classification_tol = 1e-8;
    double theta_tol = 1e-6;
    bool declared_umbilic = false;
    std::optional<std::string> expect_theta, expect_xi, expect_class;
    std::optional<int> expect_d1, expect_d2;
};

// Throws ManifestError with a message naming the offending field.
Manifest parse_manifest(const nlohmann::json& j);
nlohmann::json manifest_json(const CatalogEntry& e);

struct Overrides {
    std::optional<std::vector<int>> grid;
    std::optional<double> tol;
    std::optional<uint64_t> seed;
};

struct Result {
    int exit_code = Ok;
    nlohmann::json report;
};

// command: classify | slant | semislant | verify. suite is used by verify ("all" runs every suite).
Result run(const std::string& command, const nlohmann::json& manifest, const std::string& suite, const Overrides& o);
// Same on a catalog entry; command "manifest" returns the entry's manifest.
Result run_example(const std::string& id, const std::string& command, const std::string& suite, const Overrides& o);
Result catalog_listing();

// Sorted keys, two-space indent, doubles as %.17g, non-finite as null, LF line ends.
std::string canonical_dump(const nlohmann::json& j);
std::string render_text(const nlohmann::json& report);
uint64_t fnv1a64(const std::string& s);

}  // namespace slantgeo::cli
