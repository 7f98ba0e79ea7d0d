#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "dnls/grid.hpp"
#include "dnls/state.hpp"

namespace dnls {

/// Parameters of the closed-form kink family phi = e^{i theta} sqrt(k).
class KinkParams {
public:
    KinkParams(double B, double theta0 = 0.0);

    double B() const { return B_; }
    double theta0() const { return theta0_; }
    /// First-integral constant a = 4 B^{3/2} / 3.
    double a() const { return 4.0 * B_ * std::sqrt(B_) / 3.0; }
    /// |phi| at infinity squared, 2 sqrt(B).
    double k_infinity() const { return 2.0 * std::sqrt(B_); }

private:
    double B_;
    double theta0_;
};

/// h = k - 2 sqrt(B) = -1 / (sqrt(5/(72B)) cosh(2 sqrt(B) x) + 5/(12 sqrt(B))) and its x-derivatives.
double kink_h(const KinkParams& p, double x, int order = 0);
/// k = 2 sqrt(B) + h, so |phi|^2.
double kink_k(const KinkParams& p, double x, int order = 0);

/// theta_x = B/k - k/4.
double kink_phase_rate(const KinkParams& p, double x);

/// theta(x) = theta0 - int_x^inf (B/k - k/4) dy. Adaptive Gauss-Kronrod on
/// [x, x + 30/sqrt(B)] plus the exponential tail beyond.
double kink_phase(const KinkParams& p, double x);

struct KinkProfile {
    ComplexField values;
    std::vector<double> theta;
    std::vector<std::string> warnings;
};

/// Samples e^{i theta} sqrt(k) on the grid. Warns when L < 30/sqrt(B).
KinkProfile kink_profile(const KinkParams& p, const Grid& g);

/// The exact kink as a background with analytic derivatives up to order four
/// (higher derivatives from the stationary equation).
BackgroundProfile kink_background(const KinkParams& p, const Grid& g);

enum class StationaryBoundary {
    Auto,      // limits when the field is flat at both edges and the end values differ
    Periodic,  // purely spectral
    Limits,    // perturbation relative to a tanh ramp between the end values
};

/// L2 norm of phi_xx + i phi^2 conj(phi)_x.
double stationary_residual(std::span<const cplx> phi, const Grid& g,
                           StationaryBoundary boundary = StationaryBoundary::Auto);
/// Same, with the background part differentiated analytically.
double stationary_residual(const FieldState& s, const Grid& g);

struct FirstIntegralResiduals {
    double energy = 0.0;  // sup |k_x^2/4 + B^2 - 5k^4/48 + 3B k^2/2 - 2 a k|
    double ode = 0.0;     // sup |k_xx/2 - 5k^3/12 + 3 B k - 2a|
    double h = 0.0;       // sup |h_xx - 5h^3/6 - 5 sqrt(B) h^2 - 4 B h|
};

/// Residuals over the grid nodes using analytic derivatives; a defaults to 4 B^{3/2}/3.
FirstIntegralResiduals first_integral_residuals(const KinkParams& p, const Grid& g);
FirstIntegralResiduals first_integral_residuals(const KinkParams& p, const Grid& g, double a);

struct DecayFit {
    double rate = 0.0;
    double intercept = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    std::size_t samples = 0;
};

/// Least-squares slope of log|phi_B - e^{i theta0} sqrt(2 sqrt B)| over grid nodes in
/// [5/sqrt(B), 15/sqrt(B)], shrinking the window where the tail reaches the rounding floor.
DecayFit decay_rate(const KinkParams& p, const Grid& g);

struct DecayingProbeReport {
    double rho0 = 0.0;
    double blowup_x = 0.0;            // closed form -rho0^{-2} / sqrt(5/12)
    double integrated_blowup_x = 0.0;  // from the integrated ODE, extrapolating 1/rho^2
    double max_relative_error = 0.0;   // ODE vs closed form where rho <= 100 rho0
    double max_inverse_square_error = 0.0;  // |1/rho^2 - (rho0^-2 + sqrt(5/12) x)| at every node
    std::vector<double> x;
    std::vector<double> rho;
};

/// Rounding in x is amplified by rho^2 near the singularity, so the relative comparison
/// stops at rho = 100 rho0.
inline constexpr double kProbeConditioningBound = 100.0;

/// Integrates rho_x = -sqrt(5/48) rho^3 from rho(0) = rho0 and locates the backward
/// blow-up of rho^2 = 1/(rho0^{-2} + sqrt(5/12) x).
DecayingProbeReport decaying_stationary_probe(double rho0);

}  // namespace dnls
