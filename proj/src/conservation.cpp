#include "dnls/conservation.hpp"

#include <algorithm>
#include <cmath>

namespace dnls {

namespace {

double relative_drift(double value, double initial) {
    const double diff = std::abs(value - initial);
    return std::abs(initial) < 1e-8 ? diff : diff / std::abs(initial);
}

void check_background(const FieldState& u, double q0) {
    if (require_real_constant(u.background) != q0)
        throw ConfigError("state background does not match q0 = " + std::to_string(q0));
}

}  // namespace

double require_real_constant(const BackgroundProfile& bg) {
    if (!bg.is_constant())
        throw ConfigError("conserved quantities need a constant background, got '" + bg.label() +
                          "'");
    const cplx c = bg.constant_value();
    if (c.imag() != 0.0) throw ConfigError("conserved quantities are defined for real q0 only");
    return c.real();
}

double cutoff_profile(double y) {
    const double s = std::abs(y);
    if (s <= 1.0) return 1.0;
    if (s >= 2.0) return 0.0;
    return (2.0 - s) * (2.0 - s) * (2.0 * s - 1.0);
}

double cutoff_profile_derivative(double y) {
    const double s = std::abs(y);
    if (s <= 1.0 || s >= 2.0) return 0.0;
    const double d = 6.0 * (2.0 - s) * (1.0 - s);
    return y < 0.0 ? -d : d;
}

double cutoff_eval(double R, double x) {
    if (!(R > 0.0)) throw ConfigError("cutoff scale R must be positive");
    return cutoff_profile(x / R);
}

double mass_R(const FieldState& u, double q0, double R, const Grid& g) {
    check_background(u, q0);
    if (!(R > 0.0)) throw ConfigError("cutoff scale R must be positive");
    double sum = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double chi = cutoff_profile(g.x(j) / R);
        if (chi == 0.0) continue;
        // |q0 + p|^2 - q0^2 = 2 q0 Re p + |p|^2, avoids cancellation.
        const cplx p = u.perturbation[j];
        sum += (2.0 * q0 * p.real() + std::norm(p)) * chi;
    }
    return sum * g.dx();
}

double energy(const FieldState& u, double q0, const Grid& g) {
    check_background(u, q0);
    const ComplexField ux = state_derivative(u, g, 1);
    const double q2 = q0 * q0;
    double kinetic = 0.0, mixed = 0.0, potential = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const cplx p = u.perturbation[j];
        const cplx w = q0 + p;
        const double excess = 2.0 * q0 * p.real() + std::norm(p);  // |u|^2 - q0^2
        kinetic += std::norm(ux[j]);
        mixed += std::imag((std::norm(w) * std::conj(w) - q2 * q0) * ux[j]);
        potential += excess * excess * (std::norm(w) + 2.0 * q2);
    }
    return g.dx() * (kinetic + 0.5 * mixed + potential / 6.0);
}

double momentum(const FieldState& u, double q0, const Grid& g) {
    check_background(u, q0);
    const ComplexField ux = state_derivative(u, g, 1);
    double flux = 0.0, potential = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const cplx p = u.perturbation[j];
        const double excess = 2.0 * q0 * p.real() + std::norm(p);
        flux += std::imag(p * std::conj(ux[j]));
        potential += excess * excess;
    }
    return g.dx() * (0.5 * flux - 0.25 * potential);
}

RenormalizedMass renormalized_mass(const FieldState& u, double q0, const Grid& g, double R0,
                                   double tol) {
    if (!(R0 > 0.0)) throw ConfigError("initial cutoff scale must be positive");
    if (2.0 * R0 > g.half_length())
        throw ConfigError("initial cutoff scale does not fit the domain (need 2 R0 <= L)");
    RenormalizedMass r;
    for (double R = R0; 2.0 * R <= g.half_length(); R *= 2.0) {
        r.radii.push_back(R);
        r.values.push_back(mass_R(u, q0, R, g));
        r.value = r.values.back();
        const std::size_t n = r.values.size();
        if (n >= 2 && std::abs(r.values[n - 1] - r.values[n - 2]) < tol) {
            r.converged = true;
            break;
        }
    }
    return r;
}

ConservedValues conserved_values(const FieldState& u, double q0, const Grid& g) {
    return {u.time, mass_R(u, q0, 0.5 * g.half_length(), g), energy(u, q0, g),
            momentum(u, q0, g)};
}

DriftReport drift_report(const Trajectory& traj, double q0, const Grid& g) {
    DriftReport rep;
    if (traj.snapshots.empty()) return rep;
    const ConservedValues first = conserved_values(traj.snapshots.front().u, q0, g);
    for (const Snapshot& s : traj.snapshots) {
        DriftRecord rec;
        rec.values = conserved_values(s.u, q0, g);
        rec.values.t = s.t;
        rec.mass_drift = relative_drift(rec.values.mass, first.mass);
        rec.energy_drift = relative_drift(rec.values.energy, first.energy);
        rec.momentum_drift = relative_drift(rec.values.momentum, first.momentum);
        rep.max_mass_drift = std::max(rep.max_mass_drift, rec.mass_drift);
        rep.max_energy_drift = std::max(rep.max_energy_drift, rec.energy_drift);
        rep.max_momentum_drift = std::max(rep.max_momentum_drift, rec.momentum_drift);
        rep.records.push_back(rec);
    }
    return rep;
}

}  // namespace dnls
