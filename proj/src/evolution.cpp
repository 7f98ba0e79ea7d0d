#include "dnls/evolution.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>

namespace dnls {

namespace {

constexpr cplx kI{0.0, 1.0};

// Perturbations below this magnitude near the domain edge are treated as decayed.
constexpr double kTailTolerance = 1e-10;

void check_finite(const ComplexField& f, const char* what) {
    if (!all_finite(f)) throw BlowUpError(std::string("non-finite values in ") + what);
}

// Pointwise RK4 for d/dt (a, b) = -i F(a, b) at one node.
template <typename Rhs>
PointPair rk4_point(cplx a, cplx b, double h, Rhs&& rhs) {
    auto f = [&](cplx x, cplx y) {
        const PointPair r = rhs(x, y);
        return PointPair{-kI * r.first, -kI * r.second};
    };
    const PointPair k1 = f(a, b);
    const PointPair k2 = f(a + 0.5 * h * k1.first, b + 0.5 * h * k1.second);
    const PointPair k3 = f(a + 0.5 * h * k2.first, b + 0.5 * h * k2.second);
    const PointPair k4 = f(a + h * k3.first, b + h * k3.second);
    return {a + h / 6.0 * (k1.first + 2.0 * k2.first + 2.0 * k3.first + k4.first),
            b + h / 6.0 * (k1.second + 2.0 * k2.second + 2.0 * k3.second + k4.second)};
}

// Nonlinear part of the direct scheme for the perturbation:
//   d/dt u~ = i u~_xx + [ i phi_xx - u^2 conj(u_x) ].
ComplexField direct_nonlinearity(const BackgroundProfile& bg, std::span<const cplx> pert,
                                 const Grid& g) {
    ComplexField du = spectral_derivative(pert, g, 1);
    const auto& p = bg.values();
    const auto& dp = bg.derivative(1);
    const auto& d2p = bg.derivative(2);
    ComplexField out(pert.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const cplx u = p[j] + pert[j];
        const cplx ux = dp[j] + du[j];
        out[j] = kI * d2p[j] - u * u * std::conj(ux);
    }
    return out;
}

void axpy(ComplexField& y, cplx a, const ComplexField& x) {
    for (std::size_t j = 0; j < y.size(); ++j) y[j] += a * x[j];
}

StepDiagnostics diagnose(double t, const FieldState& u, const std::optional<GaugePair>& pair,
                         const Grid& g) {
    StepDiagnostics d;
    d.t = t;
    d.zhidkov4 = zhidkov_norm_state(u, g, 4);
    d.perturbation_h2 = discrete_norm(u.perturbation, g, NormSpec::sobolev(2));
    if (pair) d.gauge_residual = gauge_residual(*pair, g);
    return d;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

struct StepPlan {
    std::size_t steps = 0;
    double h = 0.0;
};

StepPlan plan_steps(double T, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time step dt must be positive");
    if (!std::isfinite(T)) throw ConfigError("final time T must be finite");
    const double ratio = std::abs(T) / dt;
    if (ratio > 1e8) throw ConfigError("|T|/dt exceeds 1e8 steps");
    StepPlan p;
    p.steps = static_cast<std::size_t>(std::llround(ratio));
    if (p.steps == 0 && T != 0.0) p.steps = 1;
    p.h = p.steps == 0 ? 0.0 : T / static_cast<double>(p.steps);
    return p;
}

void warn_on_tail(const FieldState& u, const Grid& g, std::vector<std::string>& warnings) {
    const double tail = tail_magnitude(u.perturbation, g);
    if (tail > kTailTolerance)
        warnings.push_back("perturbation does not decay near the domain edge (max |u - phi| = " +
                           format_double(tail) + " for |x| > 0.8 L)");
}

// Shared stepping loop. `Stepper` advances a state by h and returns it; `View`
// extracts (u, optional pair) for snapshots and diagnostics.
template <typename State, typename Stepper, typename View>
Trajectory run(State state, const Grid& g, double T, double dt, Scheme scheme,
               const EvolveOptions& opt, Stepper&& step, View&& view) {
    const StepPlan plan = plan_steps(T, dt);
    Trajectory traj;
    traj.scheme = scheme;
    traj.dt = plan.h;
    traj.stride = std::max<std::size_t>(1, opt.stride);

    auto record = [&](double t) {
        auto [u, pair, v] = view(state);
        if (opt.record_diagnostics) traj.diagnostics.push_back(diagnose(t, u, pair, g));
        traj.snapshots.push_back(Snapshot{t, std::move(u), std::move(v)});
        if (opt.record_diagnostics) {
            const double norm = traj.diagnostics.back().zhidkov4;
            if (!std::isfinite(norm) || norm > opt.blowup_threshold) {
                traj.blew_up = true;
                traj.blowup_time = t;
            }
        }
    };

    const double t0 = std::get<0>(view(state)).time;
    record(t0);
    for (std::size_t n = 1; n <= plan.steps && !traj.blew_up; ++n) {
        const double t = t0 + static_cast<double>(n) * plan.h;
        try {
            state = step(state, plan.h);
        } catch (const BlowUpError& e) {
            traj.blew_up = true;
            traj.blowup_time = t;
            traj.warnings.push_back(std::string("blow-up at t = ") + format_double(t) + ": " +
                                    e.what());
            break;
        }
        if (n % traj.stride == 0 || n == plan.steps) record(t);
    }
    return traj;
}

}  // namespace

std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::GaugeSystemP: return "gauge_p";
        case Scheme::GaugeSystemQ: return "gauge_q";
        case Scheme::Direct: return "direct";
    }
    return "unknown";
}

Scheme scheme_from_string(std::string_view name) {
    if (name == "gauge_p" || name == "GaugeSystemP") return Scheme::GaugeSystemP;
    if (name == "gauge_q" || name == "GaugeSystemQ") return Scheme::GaugeSystemQ;
    if (name == "direct" || name == "Direct") return Scheme::Direct;
    throw ConfigError("unknown scheme '" + std::string(name) +
                      "' (expected one of: gauge_p, gauge_q, direct)");
}

ComplexField free_propagate(std::span<const cplx> w, const Grid& g, double t) {
    ComplexField what = g.forward(w);
    const auto& k = g.wavenumbers();
    for (std::size_t j = 0; j < what.size(); ++j) what[j] *= std::polar(1.0, -k[j] * k[j] * t);
    return g.inverse(what);
}

GaugePair step_strang(const GaugePair& pair, const Grid& g, double dt) {
    if (dt == 0.0) throw std::invalid_argument("step_strang needs a nonzero dt");
    GaugePair out = pair;
    ComplexField a = free_propagate(pair.u.perturbation, g, 0.5 * dt);
    ComplexField b = free_propagate(pair.v.perturbation, g, 0.5 * dt);

    if (pair.mode == GaugeMode::PhiFree) {
        const cplx cu = pair.u.background.constant_value();
        const cplx cv = pair.v.background.constant_value();
        auto rhs = [&](cplx x, cplx y) { return p_system(cu + x, cv + y); };
        for (std::size_t j = 0; j < a.size(); ++j) {
            const PointPair r = rk4_point(a[j], b[j], dt, rhs);
            a[j] = r.first;
            b[j] = r.second;
        }
    } else {
        const BackgroundProfile& bg = pair.u.background;
        for (std::size_t j = 0; j < a.size(); ++j) {
            const BackgroundPoint p = bg.at(j);
            auto rhs = [&](cplx x, cplx y) { return q_tilde_system(x, y, p); };
            const PointPair r = rk4_point(a[j], b[j], dt, rhs);
            a[j] = r.first;
            b[j] = r.second;
        }
    }

    out.u.perturbation = free_propagate(a, g, 0.5 * dt);
    out.v.perturbation = free_propagate(b, g, 0.5 * dt);
    out.u.time = pair.u.time + dt;
    out.v.time = pair.v.time + dt;
    check_finite(out.u.perturbation, "u");
    check_finite(out.v.perturbation, "v");
    return out;
}

FieldState step_direct(const FieldState& s, const Grid& g, double h) {
    if (h == 0.0) throw std::invalid_argument("step_direct needs a nonzero dt");
    const auto& bg = s.background;
    const ComplexField& u = s.perturbation;
    auto half = [&](const ComplexField& f) { return free_propagate(f, g, 0.5 * h); };

    const ComplexField k1 = direct_nonlinearity(bg, u, g);
    const ComplexField eu = half(u);
    const ComplexField ek1 = half(k1);

    ComplexField a = eu;
    axpy(a, 0.5 * h, ek1);
    const ComplexField k2 = direct_nonlinearity(bg, a, g);

    ComplexField b = eu;
    axpy(b, 0.5 * h, k2);
    const ComplexField k3 = direct_nonlinearity(bg, b, g);

    const ComplexField eeu = half(eu);
    ComplexField c = eeu;
    axpy(c, h, half(k3));
    const ComplexField k4 = direct_nonlinearity(bg, c, g);

    ComplexField k23 = k2;
    axpy(k23, 1.0, k3);
    ComplexField next = eeu;
    axpy(next, h / 6.0, half(ek1));
    axpy(next, h / 3.0, half(k23));
    axpy(next, h / 6.0, k4);

    check_finite(next, "u");
    return FieldState{bg, std::move(next), s.time + h};
}

double direct_step_limit(const Grid& g) {
    const double kmax = g.max_wavenumber();
    return 0.5 * std::numbers::pi / (kmax * kmax);
}

Trajectory evolve(const FieldState& init, const Grid& g, double T, double dt, Scheme scheme,
                  const EvolveOptions& options) {
    if (init.perturbation.size() != g.size())
        throw std::invalid_argument("initial state does not match the grid");
    if (scheme == Scheme::Direct) {
        std::vector<std::string> warnings;
        warn_on_tail(init, g, warnings);
        if (dt > direct_step_limit(g))
            warnings.push_back("dt = " + format_double(dt) +
                               " exceeds the direct-scheme guard dt max|k|^2 <= pi/2 (limit " +
                               format_double(direct_step_limit(g)) + ")");
        auto step = [&](const FieldState& s, double h) { return step_direct(s, g, h); };
        auto view = [](const FieldState& s) {
            return std::tuple<FieldState, std::optional<GaugePair>, std::optional<FieldState>>(
                s, std::nullopt, std::nullopt);
        };
        Trajectory traj = run(init, g, T, dt, scheme, options, step, view);
        traj.warnings.insert(traj.warnings.begin(), warnings.begin(), warnings.end());
        return traj;
    }
    const GaugeMode mode =
        scheme == Scheme::GaugeSystemP ? GaugeMode::PhiFree : GaugeMode::PhiRelative;
    return evolve(make_gauge_pair(init, g, mode), g, T, dt, options);
}

Trajectory evolve(const GaugePair& init, const Grid& g, double T, double dt,
                  const EvolveOptions& options) {
    if (init.u.perturbation.size() != g.size() || init.v.perturbation.size() != g.size())
        throw std::invalid_argument("initial pair does not match the grid");
    if (init.mode == GaugeMode::PhiFree &&
        (!init.u.background.is_constant() || !init.v.background.is_constant()))
        throw std::invalid_argument("the phi-free gauge system needs constant backgrounds");
    std::vector<std::string> warnings;
    warn_on_tail(init.u, g, warnings);
    const Scheme scheme =
        init.mode == GaugeMode::PhiFree ? Scheme::GaugeSystemP : Scheme::GaugeSystemQ;
    auto step = [&](const GaugePair& p, double h) { return step_strang(p, g, h); };
    auto view = [](const GaugePair& p) {
        return std::tuple<FieldState, std::optional<GaugePair>, std::optional<FieldState>>(
            p.u, p, p.v);
    };
    Trajectory traj = run(init, g, T, dt, scheme, options, step, view);
    traj.warnings.insert(traj.warnings.begin(), warnings.begin(), warnings.end());
    return traj;
}

BlowupReport blowup_monitor(const Trajectory& traj, const Grid& g, double threshold) {
    BlowupReport r;
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        const Snapshot& s = traj.snapshots[i];
        const double norm = all_finite(s.u.perturbation)
                                ? zhidkov_norm_state(s.u, g, 4)
                                : std::numeric_limits<double>::quiet_NaN();
        r.times.push_back(s.t);
        r.norms.push_back(norm);
        if (!r.flagged_index && (!std::isfinite(norm) || norm > threshold)) {
            r.flagged_index = i;
            r.flagged_time = s.t;
        }
    }
    return r;
}

}  // namespace dnls
