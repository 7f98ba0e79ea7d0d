#include "dnls/cli.hpp"

#include <optional>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>

#include <CLI11.hpp>

#include "dnls/conservation.hpp"
#include "dnls/evolution.hpp"
#include "dnls/io.hpp"
#include "dnls/stationary.hpp"

namespace dnls::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Loaded {
    RunConfig cfg;
    Grid grid;
    FieldState init;
    fs::path out_dir;
};

Loaded load(const RunOptions& opt) {
    RunConfig cfg = load_config(opt.config, opt.overrides);
    if (opt.out_dir) cfg.output_dir = opt.out_dir->string();
    Grid g = build_grid(cfg);
    FieldState init = build_initial_state(cfg, g);
    fs::path out = cfg.output_dir;
    return {std::move(cfg), std::move(g), std::move(init), std::move(out)};
}

EvolveOptions evolve_options(const RunConfig& cfg) {
    EvolveOptions o;
    o.stride = cfg.stride;
    o.blowup_threshold = cfg.blowup_threshold;
    return o;
}

std::optional<double> real_constant(const BackgroundProfile& bg) {
    if (!bg.is_constant() || bg.constant_value().imag() != 0.0) return std::nullopt;
    return bg.constant_value().real();
}

std::string fmt(double v, int digits = 6) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

void print_warnings(const std::vector<std::string>& warnings, Streams io) {
    for (const auto& w : warnings) io.err << "warning: " << w << '\n';
}

SeriesTable drift_table(const DriftReport& rep) {
    SeriesTable t{{"t", "M", "E", "P", "drift_M", "drift_E", "drift_P"}, {}};
    for (const auto& r : rep.records)
        t.rows.push_back({r.values.t, r.values.mass, r.values.energy, r.values.momentum,
                          r.mass_drift, r.energy_drift, r.momentum_drift});
    return t;
}

// Maps library exceptions to exit codes; `body` does the work.
template <typename F>
int guarded(Streams io, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        io.err << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        io.err << "invalid input: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        io.err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

ComplexField difference(const ComplexField& a, const ComplexField& b) {
    ComplexField d(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) d[j] = a[j] - b[j];
    return d;
}

Scheme gauge_scheme_for(const BackgroundProfile& bg) {
    return bg.is_constant() ? Scheme::GaugeSystemP : Scheme::GaugeSystemQ;
}

}  // namespace

int cmd_simulate(const RunOptions& opt, Streams io) {
    return guarded(io, [&] {
        Loaded run = load(opt);
        const Grid& g = run.grid;
        const Trajectory traj =
            evolve(run.init, g, run.cfg.T, run.cfg.dt, run.cfg.scheme, evolve_options(run.cfg));
        print_warnings(traj.warnings, io);

        for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "u_%06zu.csv", i);
            write_snapshot(traj.snapshots[i].u, g, run.out_dir / "snapshots" / name);
        }

        SeriesTable diag{{"t", "zhidkov4", "perturbation_h2"}, {}};
        SeriesTable gres{{"t", "gauge_residual"}, {}};
        for (const auto& d : traj.diagnostics) {
            diag.rows.push_back({d.t, d.zhidkov4, d.perturbation_h2});
            if (d.gauge_residual) gres.rows.push_back({d.t, *d.gauge_residual});
        }
        write_series(diag, run.out_dir / "diagnostics.csv");
        if (traj.scheme != Scheme::Direct) write_series(gres, run.out_dir / "gauge_residual.csv");

        json extra = {{"snapshots", traj.snapshots.size()},
                      {"dt_used", traj.dt},
                      {"blew_up", traj.blew_up},
                      {"warnings", traj.warnings}};
        if (const auto q0 = real_constant(run.init.background)) {
            const DriftReport rep = drift_report(traj, *q0, g);
            write_series(drift_table(rep), run.out_dir / "drift.csv");
            extra["max_drift"] = {{"M", rep.max_mass_drift},
                                  {"E", rep.max_energy_drift},
                                  {"P", rep.max_momentum_drift}};
        } else if (!io.quiet) {
            io.out << "drift series skipped: background is not a real constant\n";
        }
        if (traj.blowup_time) extra["blowup_time"] = *traj.blowup_time;
        write_sidecar(run.cfg, g, run.out_dir / "run.json", extra);

        if (!io.quiet) {
            io.out << "scheme " << to_string(traj.scheme) << ", " << traj.snapshots.size()
                   << " snapshots to " << run.out_dir.string() << '\n';
            if (!traj.diagnostics.empty()) {
                const auto& last = traj.diagnostics.back();
                io.out << "final t = " << fmt(last.t) << ", X^4 norm = " << fmt(last.zhidkov4);
                if (last.gauge_residual) io.out << ", gauge residual = " << fmt(*last.gauge_residual);
                io.out << '\n';
            }
        }
        if (traj.blew_up) {
            io.err << "blow-up flagged at t = " << fmt(traj.blowup_time.value_or(kNaN)) << '\n';
            return int(kFailure);
        }
        return int(kSuccess);
    });
}

int cmd_stationary(const StationaryOptions& opt, Streams io) {
    return guarded(io, [&] {
        if (!(opt.B > 0.0)) throw ConfigError("B must be positive, got " + fmt(opt.B));
        const KinkParams p(opt.B, opt.theta0);
        const double L = opt.L.value_or(40.0 / std::sqrt(opt.B));
        const Grid g = make_grid(L, opt.N);

        const KinkProfile prof = kink_profile(p, g);
        std::vector<std::string> warnings = prof.warnings;

        SeriesTable table{{"x", "re_phi", "im_phi", "abs_phi", "theta", "k"}, {}};
        for (std::size_t j = 0; j < g.size(); ++j)
            table.rows.push_back({g.x(j), prof.values[j].real(), prof.values[j].imag(),
                                  std::abs(prof.values[j]), prof.theta[j], kink_k(p, g.x(j))});
        write_series(table, opt.out_dir / "profile.csv");

        const FirstIntegralResiduals fi = first_integral_residuals(p, g);
        const double residual = stationary_residual(prof.values, g);
        std::optional<DecayFit> fit;
        try {
            fit = decay_rate(p, g);
        } catch (const ConfigError& e) {
            warnings.push_back(std::string("decay fit skipped: ") + e.what());
        }
        json probes = json::array();
        for (double rho0 : {1.0, 2.0}) {
            const DecayingProbeReport r = decaying_stationary_probe(rho0);
            probes.push_back({{"rho0", rho0},
                              {"blowup_x", r.blowup_x},
                              {"integrated_blowup_x", r.integrated_blowup_x},
                              {"max_relative_error", r.max_relative_error},
                              {"max_inverse_square_error", r.max_inverse_square_error}});
        }
        const double k0_ratio = kink_k(p, 0.0) / p.k_infinity();

        json summary = {
            {"B", opt.B},
            {"theta0", opt.theta0},
            {"grid", {{"L", L}, {"N", g.size()}}},
            {"a", p.a()},
            {"residuals",
             {{"first_integral_energy", fi.energy},
              {"first_integral_ode", fi.ode},
              {"h_equation", fi.h},
              {"stationary", residual}}},
            {"decay_fit", fit ? json{{"rate", fit->rate},
                                     {"expected", p.k_infinity()},
                                     {"window", {fit->window_lo, fit->window_hi}},
                                     {"samples", fit->samples}}
                              : json(nullptr)},
            {"k0_over_kinf", k0_ratio},
            {"probes", probes},
            {"warnings", warnings},
            {"warning_count", warnings.size()},
            {"code_version", std::string(kCodeVersion)},
        };
        const fs::path json_path = opt.out_dir / "stationary.json";
        {
            std::ofstream os(json_path);
            if (!os) throw std::runtime_error("cannot open " + json_path.string() + " for writing");
            os << summary.dump(2) << '\n';
        }

        print_warnings(warnings, io);
        if (!io.quiet) {
            io.out << "B = " << fmt(opt.B) << ", L = " << fmt(L) << ", N = " << g.size() << '\n'
                   << "residual               value\n"
                   << "first integral (k)     " << fmt(fi.energy, 3) << '\n'
                   << "second-order ODE (k)   " << fmt(fi.ode, 3) << '\n'
                   << "h equation             " << fmt(fi.h, 3) << '\n'
                   << "stationary equation    " << fmt(residual, 3) << '\n'
                   << "decay rate " << (fit ? fmt(fit->rate, 8) : std::string("n/a"))
                   << " (2 sqrt B = " << fmt(p.k_infinity(), 8) << ")\n"
                   << "k(0) / (2 sqrt B) = " << fmt(k0_ratio, 10) << '\n';
            for (const auto& pr : probes)
                io.out << "probe rho0 = " << fmt(pr["rho0"].get<double>()) << ": blow-up at "
                       << fmt(pr["blowup_x"].get<double>(), 10) << ", integrated "
                       << fmt(pr["integrated_blowup_x"].get<double>(), 10) << '\n';
            io.out << "warnings: " << warnings.size() << '\n';
        }
        return int(kSuccess);
    });
}

int cmd_conserve(const RunOptions& opt, Streams io) {
    return guarded(io, [&] {
        Loaded run = load(opt);
        const Grid& g = run.grid;
        const double q0 = require_real_constant(run.init.background);
        const Trajectory traj =
            evolve(run.init, g, run.cfg.T, run.cfg.dt, run.cfg.scheme, evolve_options(run.cfg));
        print_warnings(traj.warnings, io);
        const DriftReport rep = drift_report(traj, q0, g);
        write_series(drift_table(rep), run.out_dir / "drift.csv");

        const double R0 = g.half_length() / 16.0;
        const RenormalizedMass m0 = renormalized_mass(run.init, q0, g, R0, run.cfg.tol);
        const RenormalizedMass m1 =
            renormalized_mass(traj.final_snapshot().u, q0, g, R0, run.cfg.tol);
        SeriesTable ladder{{"R", "M_initial", "M_final"}, {}};
        for (double R = R0; 2.0 * R <= g.half_length(); R *= 2.0)
            ladder.rows.push_back({R, mass_R(run.init, q0, R, g),
                                   mass_R(traj.final_snapshot().u, q0, R, g)});
        write_series(ladder, run.out_dir / "r_ladder.csv");
        write_sidecar(run.cfg, g, run.out_dir / "run.json",
                      {{"max_drift",
                        {{"M", rep.max_mass_drift},
                         {"E", rep.max_energy_drift},
                         {"P", rep.max_momentum_drift}}},
                       {"mass_ladder_converged", m0.converged && m1.converged},
                       {"blew_up", traj.blew_up}});

        if (!io.quiet) {
            io.out << "max drift M = " << fmt(rep.max_mass_drift, 3)
                   << ", E = " << fmt(rep.max_energy_drift, 3)
                   << ", P = " << fmt(rep.max_momentum_drift, 3) << '\n'
                   << "R ladder           M(t=0)                  M(T)\n";
            for (const auto& row : ladder.rows)
                io.out << fmt(row[0]) << "    " << format_number(row[1]) << "    "
                       << format_number(row[2]) << '\n';
            io.out << "ladder converged: " << (m0.converged && m1.converged ? "yes" : "no") << '\n';
        }
        if (traj.blew_up) {
            io.err << "blow-up flagged at t = " << fmt(traj.blowup_time.value_or(kNaN)) << '\n';
            return int(kFailure);
        }
        return int(kSuccess);
    });
}

int cmd_convergence(const RunOptions& opt, Streams io) {
    return guarded(io, [&] {
        Loaded run = load(opt);
        const Grid& g = run.grid;
        const RunConfig& cfg = run.cfg;
        const Scheme gauge = gauge_scheme_for(run.init.background);
        constexpr int kLevels = 4;

        EvolveOptions eo;
        eo.stride = std::numeric_limits<std::size_t>::max();
        eo.blowup_threshold = cfg.blowup_threshold;
        eo.record_diagnostics = false;

        auto final_state = [&](const FieldState& init, Scheme s, double dt) {
            Trajectory t = evolve(init, g, cfg.T, dt, s, eo);
            if (t.blew_up) throw BlowUpError(std::string(to_string(s)) + " run blew up at dt = " + fmt(dt));
            return t.final_snapshot().u.perturbation;
        };

        std::vector<double> dts;
        for (int i = 0; i < kLevels; ++i) dts.push_back(cfg.dt / std::pow(2.0, i));
        std::vector<std::future<ComplexField>> direct_runs, gauge_runs;
        for (double dt : dts) {
            direct_runs.push_back(std::async(std::launch::async, final_state, run.init, Scheme::Direct, dt));
            gauge_runs.push_back(std::async(std::launch::async, final_state, run.init, gauge, dt));
        }

        std::vector<double> eps{1e-3, 1e-4};
        std::vector<std::future<ComplexField>> perturbed;
        for (double e : eps) {
            FieldState p = run.init;
            for (std::size_t j = 0; j < g.size(); ++j) p.perturbation[j] += e * std::exp(-g.x(j) * g.x(j));
            perturbed.push_back(std::async(std::launch::async, final_state, p, cfg.scheme, cfg.dt));
        }
        auto base = std::async(std::launch::async, final_state, run.init, cfg.scheme, cfg.dt);

        std::vector<ComplexField> direct, gauged;
        try {
            for (auto& f : direct_runs) direct.push_back(f.get());
            for (auto& f : gauge_runs) gauged.push_back(f.get());
        } catch (const BlowUpError& e) {
            io.err << "non-convergence: " << e.what() << '\n';
            return int(kFailure);
        }

        SeriesTable ladder{{"dt", "direct_increment", "gauge_increment", "cross_scheme_linf",
                            "direct_order", "gauge_order"}, {}};
        std::vector<double> dinc(kLevels, kNaN), ginc(kLevels, kNaN);
        for (int i = 0; i + 1 < kLevels; ++i) {
            dinc[i] = linf_norm(difference(direct[i], direct[i + 1]));
            ginc[i] = linf_norm(difference(gauged[i], gauged[i + 1]));
        }
        bool cross_monotone = true;
        double prev_cross = std::numeric_limits<double>::infinity();
        for (int i = 0; i < kLevels; ++i) {
            const double cross = linf_norm(difference(direct[i], gauged[i]));
            cross_monotone = cross_monotone && cross < prev_cross;
            prev_cross = cross;
            const double dord = i + 2 < kLevels ? std::log2(dinc[i] / dinc[i + 1]) : kNaN;
            const double gord = i + 2 < kLevels ? std::log2(ginc[i] / ginc[i + 1]) : kNaN;
            ladder.rows.push_back({dts[i], dinc[i], ginc[i], cross, dord, gord});
        }
        write_series(ladder, run.out_dir / "convergence.csv");

        SeriesTable cont{{"epsilon", "h1_distance", "ratio"}, {}};
        try {
            const ComplexField ref = base.get();
            for (std::size_t i = 0; i < eps.size(); ++i) {
                const double d = discrete_norm(difference(perturbed[i].get(), ref), g, NormSpec::sobolev(1));
                cont.rows.push_back({eps[i], d, d / eps[i]});
            }
        } catch (const BlowUpError& e) {
            io.err << "non-convergence: " << e.what() << '\n';
            return int(kFailure);
        }
        write_series(cont, run.out_dir / "continuity.csv");
        write_sidecar(cfg, g, run.out_dir / "run.json",
                      {{"gauge_scheme", std::string(to_string(gauge))},
                       {"cross_scheme_monotone", cross_monotone}});

        if (!io.quiet) {
            io.out << "dt            direct order   " << to_string(gauge) << " order   cross-scheme Linf\n";
            for (const auto& r : ladder.rows)
                io.out << fmt(r[0]) << "    " << fmt(r[4], 4) << "    " << fmt(r[5], 4) << "    "
                       << fmt(r[3], 4) << '\n';
            io.out << "cross-scheme distance monotone: " << (cross_monotone ? "yes" : "no") << '\n';
            for (const auto& r : cont.rows)
                io.out << "epsilon " << fmt(r[0]) << ": H1 distance " << fmt(r[1], 4) << " = "
                       << fmt(r[2], 4) << " epsilon\n";
        }
        for (const auto& r : ladder.rows)
            for (double v : r)
                if (std::isinf(v)) return int(kFailure);
        return int(kSuccess);
    });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Derivative NLS with nonvanishing boundary conditions"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("--quiet", quiet, "Suppress summaries on stdout");

    RunOptions sim, cons, conv;
    std::string sim_out, cons_out, conv_out;
    auto add_run_flags = [](CLI::App* sub, RunOptions& o, std::string& out_dir) {
        sub->add_option("--config", o.config, "JSON run configuration")->required();
        sub->add_option("--override", o.overrides, "KEY=VALUE applied to the config (repeatable)");
        sub->add_option("--out", out_dir, "Output directory");
    };
    CLI::App* simulate = app.add_subcommand("simulate", "Evolve one configuration");
    add_run_flags(simulate, sim, sim_out);
    CLI::App* conserve = app.add_subcommand("conserve", "Conservation audit of M, E, P");
    add_run_flags(conserve, cons, cons_out);
    CLI::App* convergence = app.add_subcommand("convergence", "dt ladder and continuity probe");
    add_run_flags(convergence, conv, conv_out);

    StationaryOptions st;
    std::string st_out;
    CLI::App* stationary = app.add_subcommand("stationary", "Kink profile analysis");
    stationary->add_option("--B", st.B, "Kink parameter B > 0")->required();
    stationary->add_option("--theta0", st.theta0, "Phase at +infinity");
    stationary->add_option("--L", st.L, "Domain half-length (default 40/sqrt(B))");
    stationary->add_option("--N", st.N, "Grid points (power of two)");
    stationary->add_option("--out", st_out, "Output directory");

    for (CLI::App* sub : {simulate, conserve, convergence, stationary})
        sub->add_flag("--quiet", quiet, "Suppress summaries on stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kUsage;
    }

    const Streams io{out, err, quiet};
    auto with_out = [](RunOptions o, const std::string& dir) {
        if (!dir.empty()) o.out_dir = dir;
        return o;
    };
    if (*simulate) return cmd_simulate(with_out(sim, sim_out), io);
    if (*conserve) return cmd_conserve(with_out(cons, cons_out), io);
    if (*convergence) return cmd_convergence(with_out(conv, conv_out), io);
    if (!st_out.empty()) st.out_dir = st_out;
    return cmd_stationary(st, io);
}

}  // namespace dnls::cli
