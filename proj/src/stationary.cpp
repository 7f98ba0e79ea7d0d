#include "dnls/stationary.hpp"

#include <algorithm>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

namespace dnls {

namespace {

constexpr cplx kI{0.0, 1.0};

// Beyond this |2 sqrt(B) x| the cosh profile overflows; h and its derivatives are < e^-600.
constexpr double kOverflowArgument = 600.0;

double tail_start(const KinkParams& p, double x) { return std::max(x, 0.0) + 30.0 / std::sqrt(p.B()); }

// Panels no wider than 1/(2 sqrt B), the decay scale of the integrand, each with a
// single 61-point Gauss-Kronrod pass.
double integrate_rate(const KinkParams& p, double lo, double hi) {
    if (hi <= lo) return 0.0;
    auto f = [&](double y) { return kink_phase_rate(p, y); };
    const double scale = 2.0 * std::sqrt(p.B());
    const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) * scale));
    const double w = (hi - lo) / static_cast<double>(std::max<std::size_t>(panels, 1));
    double sum = 0.0;
    double err_sum = 0.0;
    for (std::size_t i = 0; i < std::max<std::size_t>(panels, 1); ++i) {
        const double a = lo + static_cast<double>(i) * w;
        const double b = i + 1 == std::max<std::size_t>(panels, 1) ? hi : a + w;
        double err = 0.0;
        sum += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 0, 0.0, &err);
        err_sum += err;
    }
    if (err_sum > 1e-12 * (1.0 + std::abs(sum)))
        throw std::runtime_error("phase quadrature did not converge (estimated error " +
                                 std::to_string(err_sum) + ")");
    return sum;
}

// theta - theta0, accumulated from +infinity.
double phase_offset(const KinkParams& p, double x) {
    const double xs = tail_start(p, x);
    // theta_x ~ C e^{-2 sqrt(B) y} beyond xs.
    const double tail = kink_phase_rate(p, xs) / (2.0 * std::sqrt(p.B()));
    return -(integrate_rate(p, x, xs) + tail);
}

// phi - e^{i theta0} sqrt(k_inf) without cancellation.
cplx deviation_from_limit(const KinkParams& p, double x) {
    const double delta = phase_offset(p, x);
    const double k = kink_k(p, x);
    const double sk = std::sqrt(k);
    const double s_half = std::sin(0.5 * delta);
    const cplx rot_minus_one(-2.0 * s_half * s_half, std::sin(delta));
    const double dsqrt = kink_h(p, x) / (sk + std::sqrt(p.k_infinity()));
    return std::polar(1.0, p.theta0()) * (rot_minus_one * sk + dsqrt);
}

bool flat_edges_with_jump(std::span<const cplx> phi) {
    const std::size_t n = phi.size();
    const double scale = 1.0 + linf_norm(phi);
    const double flat = 1e-8 * scale;
    return std::abs(phi[1] - phi[0]) <= flat && std::abs(phi[n - 1] - phi[n - 2]) <= flat &&
           std::abs(phi[n - 1] - phi[0]) > 1e-12 * scale;
}

}  // namespace

KinkParams::KinkParams(double B, double theta0) : B_(B), theta0_(theta0) {
    if (!(B > 0.0) || !std::isfinite(B))
        throw ConfigError("kink parameter B must be positive, got " + std::to_string(B));
    if (!std::isfinite(theta0)) throw ConfigError("kink phase theta0 must be finite");
}

double kink_h(const KinkParams& p, double x, int order) {
    const double sb = std::sqrt(p.B());
    const double s = 2.0 * sb;
    const double alpha = std::sqrt(5.0 / (72.0 * p.B()));
    const double beta = 5.0 / (12.0 * sb);
    if (std::abs(s * x) > kOverflowArgument) return 0.0;
    const double ch = std::cosh(s * x);
    const double sh = std::sinh(s * x);
    const double D = alpha * ch + beta;
    const double D1 = alpha * s * sh;
    const double D2 = alpha * s * s * ch;
    switch (order) {
        case 0: return -1.0 / D;
        case 1: return D1 / (D * D);
        case 2: return D2 / (D * D) - 2.0 * D1 * D1 / (D * D * D);
        default: throw std::invalid_argument("kink_h supports derivative orders 0..2");
    }
}

double kink_k(const KinkParams& p, double x, int order) {
    const double h = kink_h(p, x, order);
    return order == 0 ? p.k_infinity() + h : h;
}

double kink_phase_rate(const KinkParams& p, double x) {
    const double k = kink_k(p, x);
    // B/k - k/4 = (2 sqrt B - k)(2 sqrt B + k) / (4k) = -h (k + 2 sqrt B) / (4k)
    return -kink_h(p, x) * (k + p.k_infinity()) / (4.0 * k);
}

double kink_phase(const KinkParams& p, double x) { return p.theta0() + phase_offset(p, x); }

KinkProfile kink_profile(const KinkParams& p, const Grid& g) {
    KinkProfile out;
    const std::size_t n = g.size();
    out.values.resize(n);
    out.theta.resize(n);
    if (g.half_length() < 30.0 / std::sqrt(p.B()))
        out.warnings.push_back("domain half-length " + std::to_string(g.half_length()) +
                               " is below 30/sqrt(B); the kink tail is truncated above 1e-10");
    // Accumulate theta right to left, one Gauss-Kronrod panel per cell.
    double delta = phase_offset(p, g.x(n - 1));
    for (std::size_t j = n; j-- > 0;) {
        if (j + 1 < n) delta -= integrate_rate(p, g.x(j), g.x(j + 1));
        out.theta[j] = p.theta0() + delta;
        out.values[j] = std::polar(std::sqrt(kink_k(p, g.x(j))), out.theta[j]);
    }
    return out;
}

BackgroundProfile kink_background(const KinkParams& p, const Grid& g) {
    const KinkProfile prof = kink_profile(p, g);
    BackgroundProfile::Derivatives d;
    for (auto& f : d) f.resize(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.x(j);
        const double k = kink_k(p, x);
        const double kx = kink_k(p, x, 1);
        const double sk = std::sqrt(k);
        const cplx phi = prof.values[j];
        const cplx phase = phi / sk;
        const cplx d1 = phase * cplx(kx / (2.0 * sk), kink_phase_rate(p, x) * sk);
        // Higher derivatives from phi_xx = -i phi^2 conj(phi_x).
        const cplx d2 = -kI * phi * phi * std::conj(d1);
        const cplx d3 = -kI * (2.0 * phi * d1 * std::conj(d1) + phi * phi * std::conj(d2));
        const cplx d4 = -kI * (2.0 * d1 * d1 * std::conj(d1) + 2.0 * phi * d2 * std::conj(d1) +
                               4.0 * phi * d1 * std::conj(d2) + phi * phi * std::conj(d3));
        d[0][j] = phi;
        d[1][j] = d1;
        d[2][j] = d2;
        d[3][j] = d3;
        d[4][j] = d4;
    }
    return BackgroundProfile::sampled(std::move(d), "kink");
}

double stationary_residual(std::span<const cplx> phi, const Grid& g, StationaryBoundary boundary) {
    if (phi.size() != g.size()) throw std::invalid_argument("field length does not match grid");
    if (boundary == StationaryBoundary::Auto)
        boundary = flat_edges_with_jump(phi) ? StationaryBoundary::Limits
                                             : StationaryBoundary::Periodic;
    if (boundary == StationaryBoundary::Limits) {
        auto ramp = BackgroundProfile::kink_limits(phi.front(), phi.back(),
                                                   g.half_length() / 20.0, g);
        ComplexField pert(phi.begin(), phi.end());
        const auto& r = ramp.values();
        for (std::size_t j = 0; j < pert.size(); ++j) pert[j] -= r[j];
        return stationary_residual(make_state(std::move(ramp), std::move(pert)), g);
    }
    const ComplexField d1 = spectral_derivative(phi, g, 1);
    ComplexField r = spectral_derivative(phi, g, 2);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += kI * phi[j] * phi[j] * std::conj(d1[j]);
    return l2_norm(r, g);
}

double stationary_residual(const FieldState& s, const Grid& g) {
    const ComplexField u = total_field(s);
    const ComplexField d1 = state_derivative(s, g, 1);
    ComplexField r = state_derivative(s, g, 2);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += kI * u[j] * u[j] * std::conj(d1[j]);
    return l2_norm(r, g);
}

FirstIntegralResiduals first_integral_residuals(const KinkParams& p, const Grid& g) {
    return first_integral_residuals(p, g, p.a());
}

FirstIntegralResiduals first_integral_residuals(const KinkParams& p, const Grid& g, double a) {
    FirstIntegralResiduals r;
    const double B = p.B();
    const double sb = std::sqrt(B);
    for (double x : g.nodes()) {
        const double k = kink_k(p, x);
        const double kx = kink_k(p, x, 1);
        const double kxx = kink_k(p, x, 2);
        const double h = kink_h(p, x);
        const double hxx = kink_h(p, x, 2);
        const double e = 0.25 * kx * kx + B * B - 5.0 / 48.0 * k * k * k * k + 1.5 * B * k * k -
                         2.0 * a * k;
        const double o = 0.5 * kxx - 5.0 / 12.0 * k * k * k + 3.0 * B * k - 2.0 * a;
        const double hr = hxx - 5.0 / 6.0 * h * h * h - 5.0 * sb * h * h - 4.0 * B * h;
        r.energy = std::max(r.energy, std::abs(e));
        r.ode = std::max(r.ode, std::abs(o));
        r.h = std::max(r.h, std::abs(hr));
    }
    return r;
}

DecayFit decay_rate(const KinkParams& p, const Grid& g) {
    const double sb = std::sqrt(p.B());
    DecayFit fit;
    fit.window_lo = 5.0 / sb;
    fit.window_hi = 15.0 / sb;
    if (fit.window_hi > g.x(g.size() - 1))
        throw ConfigError("decay window [5/sqrt(B), 15/sqrt(B)] exceeds the grid");
    const double floor = 1e-14 * std::sqrt(p.k_infinity());
    std::vector<double> xs, ys;
    for (double x : g.nodes()) {
        if (x < fit.window_lo || x > fit.window_hi) continue;
        const double dev = std::abs(deviation_from_limit(p, x));
        if (!(dev > floor)) {
            fit.window_hi = x;
            break;
        }
        xs.push_back(x);
        ys.push_back(std::log(dev));
    }
    if (xs.size() < 8) throw std::runtime_error("too few samples above the rounding floor to fit");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.rate = -slope;
    fit.intercept = (sy - slope * sx) / n;
    fit.samples = xs.size();
    return fit;
}

DecayingProbeReport decaying_stationary_probe(double rho0) {
    if (!(rho0 > 0.0)) throw ConfigError("probe amplitude rho0 must be positive");
    namespace odeint = boost::numeric::odeint;
    const double c = std::sqrt(5.0 / 48.0);
    const double slope = std::sqrt(5.0 / 12.0);  // d/dx rho^{-2}
    DecayingProbeReport rep;
    rep.rho0 = rho0;
    rep.blowup_x = -1.0 / (rho0 * rho0 * slope);
    auto closed_form = [&](double x) { return 1.0 / std::sqrt(1.0 / (rho0 * rho0) + slope * x); };

    using state_type = std::array<double, 1>;
    auto stepper = odeint::make_controlled(1e-15, 1e-14, odeint::runge_kutta_dopri5<state_type>());

    // Backward in x, written as s = -x so the integrator runs forward: rho_s = c rho^3.
    std::vector<double> s_points{0.0};
    for (int i = 1; i <= 32; ++i)
        s_points.push_back(-rep.blowup_x * (1.0 - std::pow(10.0, -0.25 * i)));
    std::vector<std::pair<double, double>> backward;
    state_type y{rho0};
    odeint::integrate_times(
        stepper, [&](const state_type& r, state_type& drds, double) { drds[0] = c * r[0] * r[0] * r[0]; },
        y, s_points.begin(), s_points.end(), 1e-4,
        [&](const state_type& r, double s) { backward.emplace_back(-s, r[0]); });

    // Forward decay branch on [0, 10].
    std::vector<double> x_points;
    for (int i = 0; i <= 40; ++i) x_points.push_back(0.25 * i);
    std::vector<std::pair<double, double>> forward;
    y = {rho0};
    odeint::integrate_times(
        stepper, [&](const state_type& r, state_type& drdx, double) { drdx[0] = -c * r[0] * r[0] * r[0]; },
        y, x_points.begin(), x_points.end(), 1e-4,
        [&](const state_type& r, double x) { forward.emplace_back(x, r[0]); });

    for (auto it = backward.rbegin(); it != backward.rend(); ++it) {
        rep.x.push_back(it->first);
        rep.rho.push_back(it->second);
    }
    for (std::size_t i = 1; i < forward.size(); ++i) {
        rep.x.push_back(forward[i].first);
        rep.rho.push_back(forward[i].second);
    }
    for (std::size_t i = 0; i < rep.x.size(); ++i) {
        const double exact = closed_form(rep.x[i]);
        if (exact <= kProbeConditioningBound * rho0)
            rep.max_relative_error =
                std::max(rep.max_relative_error, std::abs(rep.rho[i] - exact) / exact);
        const double inv = 1.0 / (rep.rho[i] * rep.rho[i]);
        rep.max_inverse_square_error = std::max(
            rep.max_inverse_square_error, std::abs(inv - (1.0 / (rho0 * rho0) + slope * rep.x[i])));
    }
    // 1/rho^2 is affine in x; extrapolate its root from the two points nearest blow-up.
    const auto& [xa, ra] = backward[backward.size() - 2];
    const auto& [xb, rb] = backward.back();
    const double ya = 1.0 / (ra * ra);
    const double yb = 1.0 / (rb * rb);
    rep.integrated_blowup_x = xb - yb * (xb - xa) / (yb - ya);
    return rep;
}

}  // namespace dnls
