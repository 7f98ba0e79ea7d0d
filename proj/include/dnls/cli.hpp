#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace dnls::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsage = 1,    // bad flags, unreadable or invalid config
    kFailure = 2,  // blow-up or non-convergence
};

struct Streams {
    std::ostream& out;
    std::ostream& err;
    bool quiet = false;
};

struct RunOptions {
    std::filesystem::path config;
    std::vector<std::string> overrides;
    std::optional<std::filesystem::path> out_dir;  // replaces output_dir from the config
};

struct StationaryOptions {
    double B = 1.0;
    double theta0 = 0.0;
    std::optional<double> L;  // default 40/sqrt(B)
    std::size_t N = 8192;
    std::filesystem::path out_dir = "out/stationary";
};

/// Writes snapshots/, diagnostics.csv, drift.csv (real constant background),
/// gauge_residual.csv (gauge schemes) and run.json under the output directory.
int cmd_simulate(const RunOptions& opt, Streams io);

/// Writes profile.csv and stationary.json: first-integral and stationary residuals,
/// the tail decay fit, and the decaying-probe report for rho0 in {1, 2}.
int cmd_stationary(const StationaryOptions& opt, Streams io);

/// Writes drift.csv and r_ladder.csv and prints the maximum drifts of M, E, P.
int cmd_conserve(const RunOptions& opt, Streams io);

/// dt-halving ladder (dt, dt/2, dt/4, dt/8) for the direct and gauge schemes plus the
/// continuity-in-data probe. Writes convergence.csv and continuity.csv.
int cmd_convergence(const RunOptions& opt, Streams io);

/// Parses argv and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dnls::cli
