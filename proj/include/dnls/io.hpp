#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dnls/evolution.hpp"
#include "dnls/grid.hpp"
#include "dnls/state.hpp"

namespace dnls {

inline constexpr std::string_view kCodeVersion = "0.1.0";

struct GridConfig {
    double L = 20.0;
    std::size_t N = 1024;
};

/// Optional explicit background; when absent the initial condition picks one.
struct BackgroundConfig {
    std::string type;  // "", "constant", "kink_limits", "kink"
    double q0 = 0.0;
    cplx left{};
    cplx right{};
    double width = 1.0;
    double B = 1.0;
    double theta0 = 0.0;
};

struct InitialCondition {
    std::string family = "constant";  // constant, plane_wave, gaussian_bump, kink
    double value = 1.0;      // constant
    double amplitude = 0.0;  // plane_wave, gaussian_bump
    double wavenumber = 1.0;  // plane_wave
    double q0 = 1.0;         // gaussian_bump level
    double width = 1.0;      // gaussian_bump
    double center = 0.0;     // gaussian_bump
    double B = 1.0;          // kink
    double theta0 = 0.0;     // kink
};

struct RunConfig {
    GridConfig grid;
    BackgroundConfig background;
    InitialCondition ic;
    Scheme scheme = Scheme::Direct;
    double dt = 1e-3;
    double T = 1.0;
    std::size_t stride = 100;
    double tol = 1e-9;
    double blowup_threshold = 1e6;
    std::uint64_t seed = 0;  // recorded for reproducibility; no built-in IC draws from it
    std::string output_dir = "out";
};

/// Parses a JSON document into a validated RunConfig. Unknown keys and type
/// mismatches raise ConfigError naming the offending path.
RunConfig parse_config(std::string_view text);
RunConfig config_from_json(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides = {});

/// Applies "a.b.c=value" to a JSON document; value is JSON if it parses, else a string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

nlohmann::json to_json(const RunConfig& cfg);

Grid build_grid(const RunConfig& cfg);
FieldState build_initial_state(const RunConfig& cfg, const Grid& g);

struct SnapshotTable {
    std::vector<double> x;
    ComplexField u;
    ComplexField perturbation;
};

/// CSV with columns x,re_u,im_u,re_pert,im_pert at 17 significant digits.
void write_snapshot(const FieldState& s, const Grid& g, const std::filesystem::path& path);
SnapshotTable read_snapshot(const std::filesystem::path& path);

struct SeriesTable {
    std::vector<std::string> columns;  // first column is conventionally t
    std::vector<std::vector<double>> rows;
};

void write_series(const SeriesTable& table, const std::filesystem::path& path);
SeriesTable read_series(const std::filesystem::path& path);

/// JSON sidecar holding the config, code version and grid metadata.
void write_sidecar(const RunConfig& cfg, const Grid& g, const std::filesystem::path& path,
                   const nlohmann::json& extra = nlohmann::json::object());

/// Formats with 17 significant digits.
std::string format_number(double v);

}  // namespace dnls
