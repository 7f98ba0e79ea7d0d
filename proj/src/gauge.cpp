#include "dnls/gauge.hpp"

#include <stdexcept>

namespace dnls {

namespace {
constexpr cplx kHalfI{0.0, 0.5};

void require_same_size(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("field sizes differ");
}
}  // namespace

ComplexField gauge_forward(std::span<const cplx> u, const Grid& g) {
    ComplexField v = spectral_derivative(u, g, 1);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += kHalfI * std::norm(u[j]) * u[j];
    return v;
}

ComplexField gauge_forward_bg(std::span<const cplx> u, const BackgroundProfile& phi,
                              const Grid& g) {
    require_same_size(u.size(), phi.size());
    ComplexField v = spectral_derivative(u, g, 1);
    const auto& p = phi.values();
    for (std::size_t j = 0; j < v.size(); ++j)
        v[j] += kHalfI * u[j] * (std::norm(u[j]) - std::norm(p[j])) + p[j];
    return v;
}

ComplexField gauge_forward(const FieldState& s, const Grid& g, GaugeMode mode) {
    ComplexField v = state_derivative(s, g, 1);
    const ComplexField u = total_field(s);
    const auto& p = s.background.values();
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (mode == GaugeMode::PhiFree)
            v[j] += kHalfI * std::norm(u[j]) * u[j];
        else
            v[j] += kHalfI * u[j] * (std::norm(u[j]) - std::norm(p[j])) + p[j];
    }
    return v;
}

GaugePair make_gauge_pair(const FieldState& u, const Grid& g, GaugeMode mode) {
    ComplexField v = gauge_forward(u, g, mode);
    if (mode == GaugeMode::PhiFree) {
        if (!u.background.is_constant())
            throw std::invalid_argument("the phi-free gauge needs a constant background");
        const cplx c = u.background.constant_value();
        const cplx vc = kHalfI * std::norm(c) * c;
        for (auto& z : v) z -= vc;
        return {u, make_state(BackgroundProfile::constant(vc, g), std::move(v), u.time), mode};
    }
    const auto& p = u.background.values();
    for (std::size_t j = 0; j < v.size(); ++j) v[j] -= p[j];
    return {u, make_state(u.background, std::move(v), u.time), mode};
}

ComplexField gauge_defect(const GaugePair& pair, const Grid& g) {
    ComplexField d = total_field(pair.v);
    const ComplexField expected = gauge_forward(pair.u, g, pair.mode);
    for (std::size_t j = 0; j < d.size(); ++j) d[j] -= expected[j];
    return d;
}

double gauge_residual(const GaugePair& pair, const Grid& g) {
    return l2_norm(gauge_defect(pair, g), g);
}

FieldPair rhs_P(std::span<const cplx> u, std::span<const cplx> v) {
    require_same_size(u.size(), v.size());
    FieldPair out{ComplexField(u.size()), ComplexField(u.size())};
    for (std::size_t j = 0; j < u.size(); ++j) {
        const auto [p1, p2] = p_system(u[j], v[j]);
        out.first[j] = p1;
        out.second[j] = p2;
    }
    return out;
}

FieldPair rhs_Q_tilde(std::span<const cplx> ut, std::span<const cplx> vt,
                      const BackgroundProfile& phi) {
    require_same_size(ut.size(), vt.size());
    require_same_size(ut.size(), phi.size());
    FieldPair out{ComplexField(ut.size()), ComplexField(ut.size())};
    for (std::size_t j = 0; j < ut.size(); ++j) {
        const auto [q1, q2] = q_tilde_system(ut[j], vt[j], phi.at(j));
        out.first[j] = q1;
        out.second[j] = q2;
    }
    return out;
}

}  // namespace dnls
