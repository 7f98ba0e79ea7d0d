#pragma once

#include <span>

#include "dnls/grid.hpp"
#include "dnls/state.hpp"

namespace dnls {

struct FieldPair {
    ComplexField first;
    ComplexField second;
};

struct PointPair {
    cplx first;
    cplx second;
};

// Pointwise right-hand sides. Neither contains a derivative of u or v, which is
// what makes the nonlinear substep of the splitting a family of independent ODEs.

/// (P1, P2) of the phi-free system  L u = P1,  L v = P2.
inline PointPair p_system(cplx u, cplx v) {
    const double m2 = std::norm(u);
    const double m4 = m2 * m2;
    const cplx I(0.0, 1.0);
    const cplx vb = std::conj(v);
    return {-I * u * u * vb + 0.5 * m4 * u,
            I * std::conj(u) * v * v + 1.5 * m4 * v + u * u * m2 * vb};
}

/// (Q1~, Q2~) for the perturbations u~ = u - phi, v~ = v - phi.
inline PointPair q_tilde_system(cplx ut, cplx vt, const BackgroundPoint& bg) {
    const cplx I(0.0, 1.0);
    const cplx u = ut + bg.phi;
    const double m2 = std::norm(u);
    const double p2 = std::norm(bg.phi);
    const double excess = m2 - p2;  // |u|^2 - |phi|^2
    const cplx vtb = std::conj(vt);
    const cplx uu = u * u;

    const cplx q1 = -I * uu * vtb + 0.5 * u * m2 * excess - bg.d2phi;
    // d2phi from Q2 cancels against the subtraction defining Q2~.
    const cplx q2 = uu * m2 * vtb + I * std::conj(u) * (vt * vt - I * vt * u * excess) +
                    0.5 * m2 * m2 * vt - 0.5 * uu * p2 * vtb - 0.5 * I * bg.d2mod2 * u -
                    I * bg.dmod2 * vt - 0.5 * bg.dmod2 * u * excess;
    return {q1, q2};
}

/// v = du + (i/2)|u|^2 u, du taken spectrally (u must be periodic on g).
ComplexField gauge_forward(std::span<const cplx> u, const Grid& g);

/// v = du + (i/2)u(|u|^2 - |phi|^2) + phi, du taken spectrally from the samples.
ComplexField gauge_forward_bg(std::span<const cplx> u, const BackgroundProfile& phi, const Grid& g);

/// Gauge image of a state; du uses the analytic background derivative.
ComplexField gauge_forward(const FieldState& u, const Grid& g, GaugeMode mode);

/// Builds (u, v) satisfying the differential identity of the given mode.
/// PhiFree requires a constant background.
GaugePair make_gauge_pair(const FieldState& u, const Grid& g, GaugeMode mode);

/// v - G(u) on the grid; identically zero along exact flows.
ComplexField gauge_defect(const GaugePair& pair, const Grid& g);
double gauge_residual(const GaugePair& pair, const Grid& g);

FieldPair rhs_P(std::span<const cplx> u, std::span<const cplx> v);
FieldPair rhs_Q_tilde(std::span<const cplx> ut, std::span<const cplx> vt,
                      const BackgroundProfile& phi);

}  // namespace dnls
