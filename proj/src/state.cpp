#include "dnls/state.hpp"

#include <cmath>
#include <stdexcept>

namespace dnls {

BackgroundProfile BackgroundProfile::constant(cplx q0, const Grid& g) {
    BackgroundProfile b;
    b.kind_ = BackgroundKind::Constant;
    b.left_ = b.right_ = q0;
    b.label_ = "constant";
    Derivatives d;
    d[0].assign(g.size(), q0);
    for (int m = 1; m <= kMaxOrder; ++m) d[m].assign(g.size(), cplx{});
    b.d_ = std::make_shared<const Derivatives>(std::move(d));
    return b;
}

BackgroundProfile BackgroundProfile::kink_limits(cplx left, cplx right, double ramp_width,
                                                 const Grid& g) {
    if (!(ramp_width > 0.0)) throw ConfigError("ramp width must be positive");
    BackgroundProfile b;
    b.kind_ = BackgroundKind::KinkLimits;
    b.left_ = left;
    b.right_ = right;
    b.width_ = ramp_width;
    b.label_ = "kink_limits";
    Derivatives d;
    for (auto& f : d) f.resize(g.size());

    const cplx half_jump = 0.5 * (right - left);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double s = g.x(j) / ramp_width;
        const double t = std::tanh(s);
        const double sech = 1.0 / std::cosh(s);
        const double sech2 = sech * sech;  // 1 - t^2 without cancellation
        // d^m tanh / ds^m
        const double t1 = sech2;
        const double t2 = -2.0 * t * sech2;
        const double t3 = (6.0 * t * t - 2.0) * sech2;
        const double t4 = (16.0 * t - 24.0 * t * t * t) * sech2;
        d[0][j] = left + half_jump * (1.0 + t);
        double w = 1.0 / ramp_width;
        d[1][j] = half_jump * (t1 * w);
        w /= ramp_width;
        d[2][j] = half_jump * (t2 * w);
        w /= ramp_width;
        d[3][j] = half_jump * (t3 * w);
        w /= ramp_width;
        d[4][j] = half_jump * (t4 * w);
    }
    b.d_ = std::make_shared<const Derivatives>(std::move(d));
    return b;
}

BackgroundProfile BackgroundProfile::sampled(Derivatives derivs, std::string label) {
    const std::size_t n = derivs[0].size();
    for (const auto& d : derivs)
        if (d.size() != n) throw std::invalid_argument("background derivative sizes differ");
    BackgroundProfile b;
    b.kind_ = BackgroundKind::Sampled;
    b.left_ = derivs[0].front();
    b.right_ = derivs[0].back();
    b.label_ = std::move(label);
    b.d_ = std::make_shared<const Derivatives>(std::move(derivs));
    return b;
}

cplx BackgroundProfile::constant_value() const {
    if (kind_ != BackgroundKind::Constant)
        throw std::logic_error("background '" + label_ + "' is not constant");
    return left_;
}

const ComplexField& BackgroundProfile::derivative(int order) const {
    if (order < 0 || order > kMaxOrder)
        throw std::invalid_argument("background derivative order out of range");
    return (*d_)[order];
}

BackgroundPoint BackgroundProfile::at(std::size_t j) const {
    BackgroundPoint p;
    const Derivatives& d = *d_;
    p.phi = d[0][j];
    p.dphi = d[1][j];
    p.d2phi = d[2][j];
    p.dmod2 = 2.0 * std::real(std::conj(p.phi) * p.dphi);
    p.d2mod2 = 2.0 * std::real(std::conj(p.phi) * p.d2phi) + 2.0 * std::norm(p.dphi);
    return p;
}

FieldState make_state(BackgroundProfile background, ComplexField perturbation, double time) {
    if (background.size() != perturbation.size())
        throw std::invalid_argument("background and perturbation sizes differ");
    return FieldState{std::move(background), std::move(perturbation), time};
}

ComplexField total_field(const FieldState& s) {
    const auto& bg = s.background.values();
    ComplexField u(s.perturbation.size());
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = bg[j] + s.perturbation[j];
    return u;
}

ComplexField state_derivative(const FieldState& s, const Grid& g, int order) {
    if (order == 0) return total_field(s);
    ComplexField d = detail::derivative_any_order(s.perturbation, g, order);
    const auto& bg = s.background.derivative(order);
    for (std::size_t j = 0; j < d.size(); ++j) d[j] += bg[j];
    return d;
}

double zhidkov_norm_state(const FieldState& s, const Grid& g, int k) {
    if (k < 0 || k > kMaxNormOrder)
        throw std::invalid_argument("Zhidkov norm order must be in [0, 4], got " + std::to_string(k));
    double total = linf_norm(total_field(s));
    for (int a = 1; a <= k; ++a) total += l2_norm(state_derivative(s, g, a), g);
    return total;
}

}  // namespace dnls
