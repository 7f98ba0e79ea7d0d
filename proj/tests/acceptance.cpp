// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <complex>
#include <cstdio>
#include <functional>
#include <future>
#include <iostream>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "dnls/conservation.hpp"
#include "dnls/evolution.hpp"
#include "dnls/gauge.hpp"
#include "dnls/stationary.hpp"

using namespace dnls;

namespace {

constexpr double pi = std::numbers::pi;

struct Verdict {
    bool pass;
    std::string details;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

EvolveOptions final_only() {
    EvolveOptions o;
    o.stride = std::numeric_limits<std::size_t>::max();
    o.record_diagnostics = false;
    return o;
}

ComplexField sample(const Grid& g, const std::function<cplx(double)>& f) {
    ComplexField out(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) out[j] = f(g.x(j));
    return out;
}

double linf_diff(const ComplexField& a, const ComplexField& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

FieldState gaussian_bump(const Grid& g, double q0, double amp) {
    return make_state(BackgroundProfile::constant(q0, g),
                      sample(g, [&](double x) { return cplx(amp * std::exp(-x * x)); }));
}

ComplexField final_u(const FieldState& init, const Grid& g, double T, double dt, Scheme s) {
    return total_field(evolve(init, g, T, dt, s, final_only()).final_snapshot().u);
}

bool near_ratio(double r, double target, double rel) { return std::abs(r / target - 1.0) <= rel; }

Verdict constant_solutions() {
    const Grid g = make_grid(20.0, 1024);
    std::vector<std::future<double>> runs;
    for (double q0 : {0.5, 1.0, 2.0})
        for (Scheme s : {Scheme::Direct, Scheme::GaugeSystemP, Scheme::GaugeSystemQ})
            runs.push_back(std::async(std::launch::async, [&g, q0, s] {
                const FieldState c = make_state(BackgroundProfile::constant(q0, g), ComplexField(g.size()));
                const ComplexField u = final_u(c, g, 1.0, 1e-3, s);
                return linf_diff(u, ComplexField(g.size(), cplx(q0)));
            }));
    double worst = 0.0;
    for (auto& r : runs) worst = std::max(worst, r.get());
    return {worst <= 1e-10, fmt("max Linf deviation %.3g over 3 q0 x 3 schemes (bound 1e-10)", worst)};
}

Verdict plane_wave_dispersion() {
    const double A = 0.5, k = 1.0, T = 1.0;
    // Substitute u = A e^{i(kx - wt)}: w u = k^2 u - i u^2 conj(u_x), evaluated at one point.
    const cplx u0 = std::polar(A, 0.3);
    const cplx ux = cplx(0.0, k) * u0;
    const double w_oracle = std::real((k * k * u0 - cplx(0.0, 1.0) * u0 * u0 * std::conj(ux)) / u0);

    const Grid g = make_grid(pi, 64);
    const FieldState init =
        make_state(BackgroundProfile::constant(0.0, g), sample(g, [&](double x) { return std::polar(A, k * x); }));
    double worst = 0.0;
    for (Scheme s : {Scheme::Direct, Scheme::GaugeSystemP}) {
        const ComplexField u = final_u(init, g, T, 1e-3, s);
        cplx overlap = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) overlap += u[j] * std::conj(init.perturbation[j]);
        const double w = -std::arg(overlap) / T;
        worst = std::max(worst, std::abs(w - w_oracle));
    }
    return {worst <= 1e-6,
            fmt("w = k^2 - k A^2 = %.6f, max |w_measured - w| = %.3g over direct and gauge_p (bound 1e-6)",
                w_oracle, worst)};
}

Verdict gauge_identity() {
    const Grid g = make_grid(20.0, 1024);
    const FieldState init = gaussian_bump(g, 1.0, 0.1);
    const std::vector<double> dts{4e-3, 2e-3, 1e-3};
    std::vector<std::future<double>> runs;
    for (double dt : dts)
        runs.push_back(std::async(std::launch::async, [&, dt] {
            const Trajectory t = evolve(init, g, 1.0, dt, Scheme::GaugeSystemP, final_only());
            const Snapshot& s = t.final_snapshot();
            return gauge_residual(GaugePair{s.u, *s.v, GaugeMode::PhiFree}, g);
        }));
    std::vector<double> r;
    for (auto& f : runs) r.push_back(f.get());
    const double q1 = r[0] / r[1], q2 = r[1] / r[2];
    const bool pass = near_ratio(q1, 4.0, 0.2) && near_ratio(q2, 4.0, 0.2) && r[2] <= 1e-6;
    return {pass, fmt("residuals %.3g, %.3g, %.3g at dt = 4e-3, 2e-3, 1e-3; ratios %.3f, %.3f", r[0], r[1], r[2], q1,
                      q2)};
}

Verdict scheme_equivalence() {
    const Grid g = make_grid(20.0, 1024);
    const FieldState init = gaussian_bump(g, 1.0, 0.1);
    const std::vector<double> dts{2e-3, 1e-3, 5e-4};
    std::vector<std::future<double>> runs;
    for (double dt : dts)
        runs.push_back(std::async(std::launch::async, [&, dt] {
            return linf_diff(final_u(init, g, 1.0, dt, Scheme::Direct), final_u(init, g, 1.0, dt, Scheme::GaugeSystemP));
        }));
    std::vector<double> d;
    for (auto& f : runs) d.push_back(f.get());
    const bool pass = d[1] <= 1e-6 && d[1] < d[0] && d[2] < d[1];
    return {pass, fmt("Linf(direct - gauge_p) = %.3g, %.3g, %.3g at dt = 2e-3, 1e-3 (reference), 5e-4", d[0], d[1],
                      d[2])};
}

Verdict conservation() {
    const Grid g = make_grid(40.0, 2048);
    const FieldState init = gaussian_bump(g, 1.0, 0.1);
    const std::vector<double> dts{4e-3, 2e-3, 1e-3};
    EvolveOptions o;
    o.stride = 1u << 30;
    std::vector<std::future<DriftReport>> runs;
    for (double dt : dts)
        runs.push_back(std::async(std::launch::async, [&, dt] {
            return drift_report(evolve(init, g, 1.0, dt, Scheme::GaugeSystemP, o), 1.0, g);
        }));
    std::vector<DriftReport> rep;
    for (auto& f : runs) rep.push_back(f.get());

    bool pass = true;
    std::string details = "gauge_p relative drifts at dt = 4e-3, 2e-3, 1e-3:";
    auto check = [&](const char* name, auto member) {
        const double a = rep[0].*member, b = rep[1].*member, c = rep[2].*member;
        pass = pass && c <= 1e-6 && near_ratio(a / b, 4.0, 0.2) && near_ratio(b / c, 4.0, 0.2);
        details += fmt(" %s %.2g/%.2g/%.2g;", name, a, b, c);
    };
    check("M", &DriftReport::max_mass_drift);
    check("E", &DriftReport::max_energy_drift);
    check("P", &DriftReport::max_momentum_drift);

    const RenormalizedMass ladder = renormalized_mass(init, 1.0, g, 2.5, 1e-9);
    pass = pass && ladder.converged;
    details += fmt(" R-ladder from R = 2.5 %s at M = %.9f", ladder.converged ? "converged" : "did not converge",
                   ladder.value);
    return {pass, details};
}

Verdict kink_exactness() {
    struct Row {
        double fi, stat, evolved;
    };
    std::vector<std::future<Row>> runs;
    for (double B : {0.25, 1.0, 4.0})
        runs.push_back(std::async(std::launch::async, [B] {
            const KinkParams p(B);
            const Grid fine = make_grid(40.0 / std::sqrt(B), 8192);
            const FirstIntegralResiduals fi = first_integral_residuals(p, fine, 4.0 * std::pow(B, 1.5) / 3.0);
            const double stat = stationary_residual(kink_profile(p, fine).values, fine);
            const Grid g = make_grid(20.0 / std::sqrt(B), 2048);
            const FieldState s = make_state(kink_background(p, g), ComplexField(g.size()));
            const Trajectory t = evolve(s, g, 0.5, 1e-4, Scheme::GaugeSystemQ, final_only());
            return Row{std::max({fi.energy, fi.ode, fi.h}), stat, linf_norm(t.final_snapshot().u.perturbation)};
        }));
    bool pass = true;
    std::string details;
    const char* names[] = {"B=0.25", "B=1", "B=4"};
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const Row r = runs[i].get();
        pass = pass && r.fi <= 1e-10 && r.stat <= 1e-8 && r.evolved <= 1e-6;
        details += fmt("%s%s: first integrals %.2g, stationary %.2g, evolved Linf %.2g", i ? "; " : "", names[i], r.fi,
                       r.stat, r.evolved);
    }
    return {pass, details};
}

Verdict kink_asymptotics() {
    const double k0_oracle = 1.0 - 1.0 / (2.0 * (std::sqrt(5.0 / 72.0) + 5.0 / 12.0));
    bool pass = std::abs(k0_oracle - 0.2649111) <= 1e-6;
    std::string details;
    for (double B : {0.25, 1.0, 4.0}) {
        const KinkParams p(B);
        const DecayFit fit = decay_rate(p, make_grid(40.0 / std::sqrt(B), 4096));
        const double k0 = kink_k(p, 0.0) / (2.0 * std::sqrt(B));
        const double rel = fit.rate / (2.0 * std::sqrt(B));
        pass = pass && fit.rate >= std::sqrt(B) && std::abs(rel - 1.0) <= 0.05 && std::abs(k0 - 0.2649111) <= 1e-6 &&
               std::abs(k0 - k0_oracle) <= 1e-12;
        details += fmt("B=%g: rate/(2 sqrt B) = %.6f, k(0)/(2 sqrt B) = %.10f; ", B, rel, k0);
    }
    details += fmt("closed form %.10f", k0_oracle);
    return {pass, details};
}

Verdict nonexistence_probe() {
    bool pass = true;
    std::string details;
    for (double rho0 : {1.0, 2.0}) {
        const DecayingProbeReport r = decaying_stationary_probe(rho0);
        const double xstar = -1.0 / (rho0 * rho0 * std::sqrt(5.0 / 12.0));
        const double e1 = std::abs(r.blowup_x - xstar), e2 = std::abs(r.integrated_blowup_x - xstar);
        pass = pass && e1 <= 1e-6 && e2 <= 1e-6 && r.max_relative_error <= 1e-9;
        details += fmt("rho0=%g: x* = %.9f, integrated %.9f, ODE vs formula %.2g (rho <= %g rho0); ", rho0, xstar,
                       r.integrated_blowup_x, r.max_relative_error, kProbeConditioningBound);
    }
    details.resize(details.size() - 2);
    return {pass, details};
}

Verdict cutoff_contract() {
    constexpr int n = 10000;
    bool plateau = true, support = true, range = true;
    double ratio = 0.0, scaled = 0.0;
    for (int i = 0; i < n; ++i) {
        const double y = -3.0 + 6.0 * (i + 0.5) / n;
        const double c = cutoff_profile(y), a = std::abs(y);
        plateau = plateau && (a > 1.0 || c == 1.0);
        support = support && (a < 2.0 || c == 0.0);
        range = range && c >= 0.0 && c <= 1.0;
        scaled = std::max(scaled, std::abs(cutoff_eval(3.0, 3.0 * y) - c));
        if (a > 1.0 && a < 2.0) ratio = std::max(ratio, std::pow(cutoff_profile_derivative(y), 2) / c);
    }
    // One-sided difference quotients on either side of each junction.
    double slope_gap = 0.0, value_gap = 0.0;
    const double h = 1e-10;
    for (double y0 : {-2.0, -1.0, 1.0, 2.0}) {
        const double left = (cutoff_profile(y0) - cutoff_profile(y0 - h)) / h;
        const double right = (cutoff_profile(y0 + h) - cutoff_profile(y0)) / h;
        slope_gap = std::max(slope_gap, std::abs(left - right));
        value_gap = std::max({value_gap, std::abs(cutoff_profile(y0 - h) - cutoff_profile(y0)),
                              std::abs(cutoff_profile(y0 + h) - cutoff_profile(y0))});
    }
    const bool c1 = slope_gap <= 1e-9 && value_gap <= 1e-9;
    const bool pass = plateau && support && range && scaled <= 1e-15 && c1 && std::isfinite(ratio);
    return {pass, fmt("plateau %s, support %s, range %s, C1 slope gap %.2g, sup chi'^2/chi = %.4f on the ramp, "
                      "chi_R(x) - chi(x/R) %.2g",
                      plateau ? "ok" : "broken", support ? "ok" : "broken", range ? "ok" : "broken", slope_gap,
                      ratio, scaled)};
}

Verdict continuity() {
    const Grid g = make_grid(20.0, 1024);
    const FieldState init = gaussian_bump(g, 1.0, 0.1);
    const std::vector<double> eps{1e-3, 1e-4};
    auto perturbed = [&](double e) {
        FieldState p = init;
        for (std::size_t j = 0; j < g.size(); ++j) p.perturbation[j] += e * std::exp(-g.x(j) * g.x(j));
        return final_u(p, g, 1.0, 1e-3, Scheme::Direct);
    };
    auto base = std::async(std::launch::async, [&] { return final_u(init, g, 1.0, 1e-3, Scheme::Direct); });
    auto f1 = std::async(std::launch::async, perturbed, eps[0]);
    auto f2 = std::async(std::launch::async, perturbed, eps[1]);
    const ComplexField ref = base.get();
    const ComplexField outs[] = {f1.get(), f2.get()};
    bool pass = true;
    std::string details;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        ComplexField d(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) d[j] = outs[i][j] - ref[j];
        const double h1 = discrete_norm(d, g, NormSpec::sobolev(1));
        pass = pass && h1 <= 10.0 * eps[i];
        details += fmt("%seps=%g: H1 distance %.3g = %.3f eps", i ? "; " : "", eps[i], h1, h1 / eps[i]);
    }
    return {pass, details + " (bound 10 eps)"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, Verdict (*)()>> criteria{
        {"constant solutions", constant_solutions},
        {"plane-wave dispersion", plane_wave_dispersion},
        {"gauge identity preservation", gauge_identity},
        {"scheme equivalence", scheme_equivalence},
        {"conservation", conservation},
        {"kink exactness", kink_exactness},
        {"kink asymptotics", kink_asymptotics},
        {"nonexistence probe", nonexistence_probe},
        {"cutoff contract", cutoff_contract},
        {"continuity in data", continuity},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failures += !v.pass;
        std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << i + 1 << ' ' << criteria[i].first << ": " << v.details
                  << std::endl;
    }
    std::cout << (criteria.size() - failures) << '/' << criteria.size() << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
