#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dnls/gauge.hpp"
#include "dnls/grid.hpp"
#include "dnls/state.hpp"

namespace dnls {

enum class Scheme {
    GaugeSystemP,  // phi-free gauge system, Strang split
    GaugeSystemQ,  // phi-relative gauge system, Strang split
    Direct,        // the derivative equation itself, integrating-factor RK4
};

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view name);

/// Thrown by a single step when the output is not finite.
class BlowUpError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Snapshot {
    double t = 0.0;
    FieldState u;
    std::optional<FieldState> v;  // present for the gauge schemes
};

struct StepDiagnostics {
    double t = 0.0;
    double zhidkov4 = 0.0;        // ||u||_{X^4}
    double perturbation_h2 = 0.0;  // ||u - phi||_{H^2}
    std::optional<double> gauge_residual;
};

struct Trajectory {
    Scheme scheme = Scheme::Direct;
    double dt = 0.0;  // signed step actually used
    std::size_t stride = 1;
    std::vector<Snapshot> snapshots;
    std::vector<StepDiagnostics> diagnostics;
    bool blew_up = false;
    std::optional<double> blowup_time;
    std::vector<std::string> warnings;

    const Snapshot& final_snapshot() const { return snapshots.back(); }
};

struct EvolveOptions {
    std::size_t stride = 100;
    double blowup_threshold = 1e6;
    bool record_diagnostics = true;
};

/// S(t)w: multiplies the Fourier coefficients by exp(-i k^2 t), solving i w_t + w_xx = 0.
ComplexField free_propagate(std::span<const cplx> w, const Grid& g, double t);

/// One Strang step: half free step, RK4 on the pointwise gauge system, half free step.
GaugePair step_strang(const GaugePair& pair, const Grid& g, double dt);

/// One integrating-factor RK4 step of i u_t + u_xx = -i u^2 conj(u)_x on the perturbation.
FieldState step_direct(const FieldState& u, const Grid& g, double dt);

/// Largest stable-looking step for the direct scheme, dt max|k|^2 <= pi/2.
double direct_step_limit(const Grid& g);

Trajectory evolve(const FieldState& init, const Grid& g, double T, double dt, Scheme scheme,
                  const EvolveOptions& options = {});

/// Gauge schemes only; starts from a given pair, consistent or not.
Trajectory evolve(const GaugePair& init, const Grid& g, double T, double dt,
                  const EvolveOptions& options = {});

struct BlowupReport {
    std::vector<double> times;
    std::vector<double> norms;  // ||u||_{X^4} per snapshot
    std::optional<std::size_t> flagged_index;
    std::optional<double> flagged_time;
};

BlowupReport blowup_monitor(const Trajectory& traj, const Grid& g, double threshold = 1e6);

}  // namespace dnls
