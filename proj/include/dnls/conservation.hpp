#pragma once

#include <vector>

#include "dnls/evolution.hpp"
#include "dnls/grid.hpp"
#include "dnls/state.hpp"

namespace dnls {

/**
 * Localizing function chi: 1 on [-1, 1], (2 - |y|)^2 (2|y| - 1) on 1 < |y| < 2,
 * 0 beyond. C^1 at both junctions, and chi'^2 <= 12 chi on the ramp.
 */
double cutoff_profile(double y);
double cutoff_profile_derivative(double y);

/// chi_R(x) = chi(x / R).
double cutoff_eval(double R, double x);

/// int (|u|^2 - q0^2) chi_R dx by the rectangle rule. Requires a constant real background q0.
double mass_R(const FieldState& u, double q0, double R, const Grid& g);

/// int |u_x|^2 + (1/2) Im int (|u|^2 conj(u) - q0^3) u_x + (1/6) int (|u|^2 - q0^2)^2 (|u|^2 + 2 q0^2).
double energy(const FieldState& u, double q0, const Grid& g);

/// (1/2) Im int (u - q0) conj(u)_x - (1/4) int (|u|^2 - q0^2)^2.
double momentum(const FieldState& u, double q0, const Grid& g);

struct RenormalizedMass {
    double value = 0.0;
    bool converged = false;
    std::vector<double> radii;
    std::vector<double> values;
};

/// Evaluates mass_R on R0, 2 R0, 4 R0, ... while 2R <= L; converged once successive
/// values differ by less than tol.
RenormalizedMass renormalized_mass(const FieldState& u, double q0, const Grid& g, double R0,
                                   double tol = 1e-9);

struct ConservedValues {
    double t = 0.0;
    double mass = 0.0;  // mass_R at R = L/2
    double energy = 0.0;
    double momentum = 0.0;
};

struct DriftRecord {
    ConservedValues values;
    double mass_drift = 0.0;
    double energy_drift = 0.0;
    double momentum_drift = 0.0;
};

struct DriftReport {
    std::vector<DriftRecord> records;
    double max_mass_drift = 0.0;
    double max_energy_drift = 0.0;
    double max_momentum_drift = 0.0;
};

ConservedValues conserved_values(const FieldState& u, double q0, const Grid& g);

/// Drift of M, E, P relative to the first snapshot; absolute when |initial| < 1e-8.
/// The mass uses R = L/2 (the largest cutoff that fits the periodic domain).
DriftReport drift_report(const Trajectory& traj, double q0, const Grid& g);

/// Real q0 of a constant background, or ConfigError.
double require_real_constant(const BackgroundProfile& bg);

}  // namespace dnls
