#pragma once

#include <array>
#include <memory>
#include <string>

#include "dnls/grid.hpp"

namespace dnls {

enum class BackgroundKind { Constant, KinkLimits, Sampled };

/// Background quantities at one node, as consumed by the pointwise right-hand sides.
struct BackgroundPoint {
    cplx phi{};
    cplx dphi{};
    cplx d2phi{};
    double dmod2 = 0.0;   // d/dx |phi|^2
    double d2mod2 = 0.0;  // d^2/dx^2 |phi|^2
};

/**
 * The nonvanishing reference field phi. Fields are evolved as phi + perturbation,
 * so the boundary values at +-infinity live here and never touch the FFT.
 *
 * Derivatives up to order four are stored as analytic samples; they are never
 * obtained by differentiating the sampled profile spectrally (the profile need
 * not be periodic).
 */
class BackgroundProfile {
public:
    static constexpr int kMaxOrder = 4;
    using Derivatives = std::array<ComplexField, kMaxOrder + 1>;

    static BackgroundProfile constant(cplx q0, const Grid& g);
    /// left + (right - left) (1 + tanh(x / width)) / 2
    static BackgroundProfile kink_limits(cplx left, cplx right, double ramp_width, const Grid& g);
    /// Externally computed profile; derivs[0] holds the samples, derivs[m] the m-th derivative.
    static BackgroundProfile sampled(Derivatives derivs, std::string label);

    BackgroundKind kind() const { return kind_; }
    bool is_constant() const { return kind_ == BackgroundKind::Constant; }
    cplx constant_value() const;
    cplx left_value() const { return left_; }
    cplx right_value() const { return right_; }
    double ramp_width() const { return width_; }
    const std::string& label() const { return label_; }

    std::size_t size() const { return (*d_)[0].size(); }
    const ComplexField& values() const { return (*d_)[0]; }
    const ComplexField& derivative(int order) const;

    BackgroundPoint at(std::size_t j) const;

private:
    BackgroundProfile() = default;

    BackgroundKind kind_ = BackgroundKind::Constant;
    cplx left_{};
    cplx right_{};
    double width_ = 0.0;
    std::string label_;
    std::shared_ptr<const Derivatives> d_;  // immutable, shared between copies
};

/// u = background + perturbation at time t.
struct FieldState {
    BackgroundProfile background;
    ComplexField perturbation;
    double time = 0.0;
};

FieldState make_state(BackgroundProfile background, ComplexField perturbation, double time = 0.0);

ComplexField total_field(const FieldState& s);

/// d^m u / dx^m with the background part analytic and the perturbation part spectral.
ComplexField state_derivative(const FieldState& s, const Grid& g, int order);

/// ||u||_{X^k}: sup of the total field plus L2 norms of derivatives 1..k.
double zhidkov_norm_state(const FieldState& s, const Grid& g, int k);

enum class GaugeMode {
    PhiFree,      // v = du + (i/2)|u|^2 u, constant background only
    PhiRelative,  // v = du + (i/2)u(|u|^2 - |phi|^2) + phi, v shares u's background
};

struct GaugePair {
    FieldState u;
    FieldState v;
    GaugeMode mode = GaugeMode::PhiRelative;
};

}  // namespace dnls
