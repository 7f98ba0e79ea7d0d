#include "dnls/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"

namespace dnls {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

namespace detail {

// (i k)^order applied in Fourier space; Nyquist zeroed for odd order.
ComplexField derivative_any_order(std::span<const cplx> f, const Grid& g, int order) {
    ComplexField fhat = g.forward(f);
    const auto& k = g.wavenumbers();
    const std::size_t nyquist = g.size() / 2;
    for (std::size_t j = 0; j < fhat.size(); ++j) {
        if (order % 2 == 1 && j == nyquist) {
            fhat[j] = 0.0;
            continue;
        }
        cplx m = 1.0;
        for (int a = 0; a < order; ++a) m *= cplx(0.0, k[j]);
        fhat[j] *= m;
    }
    return g.inverse(fhat);
}

}  // namespace detail

Grid::Grid(double half_length, std::size_t n)
    : half_length_(half_length), n_(n), nodes_(n), k_(n), plan_(std::make_shared<FftPlan>(n)) {
    for (std::size_t j = 0; j < n; ++j) nodes_[j] = x(j);
    const double k0 = std::numbers::pi / half_length;
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    for (std::size_t j = 0; j < n; ++j) {
        auto m = static_cast<std::ptrdiff_t>(j);
        if (m >= half) m -= static_cast<std::ptrdiff_t>(n);
        k_[j] = k0 * static_cast<double>(m);
    }
}

Grid Grid::make(double half_length, std::size_t n_points) {
    if (!(half_length > 0.0) || !std::isfinite(half_length))
        throw ConfigError("grid half-length L must be positive and finite, got " +
                          std::to_string(half_length));
    if (!is_power_of_two(n_points))
        throw ConfigError("grid size N must be a power of two, got " + std::to_string(n_points));
    if (n_points < 8) throw ConfigError("grid size N must be at least 8");
    return Grid(half_length, n_points);
}

double Grid::max_wavenumber() const {
    return std::numbers::pi * static_cast<double>(n_ / 2) / half_length_;
}

ComplexField Grid::forward(std::span<const cplx> f) const {
    if (f.size() != n_) throw std::invalid_argument("field length does not match grid");
    ComplexField out(n_);
    plan_->forward(f.data(), out.data());
    return out;
}

ComplexField Grid::inverse(std::span<const cplx> fhat) const {
    if (fhat.size() != n_) throw std::invalid_argument("field length does not match grid");
    ComplexField out(n_);
    plan_->backward(fhat.data(), out.data());
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& z : out) z *= scale;
    return out;
}

ComplexField spectral_derivative(std::span<const cplx> f, const Grid& g, int order) {
    if (order != 1 && order != 2)
        throw std::invalid_argument("spectral_derivative supports order 1 or 2, got " +
                                    std::to_string(order));
    return detail::derivative_any_order(f, g, order);
}

double l2_norm(std::span<const cplx> f, const Grid& g) {
    double s = 0.0;
    for (const auto& z : f) s += std::norm(z);
    return std::sqrt(s * g.dx());
}

double linf_norm(std::span<const cplx> f) {
    double m = 0.0;
    for (const auto& z : f) {
        const double a = std::abs(z);
        if (std::isnan(a)) return a;
        m = std::max(m, a);
    }
    return m;
}

bool all_finite(std::span<const cplx> f) {
    return std::all_of(f.begin(), f.end(), [](const cplx& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

double discrete_norm(std::span<const cplx> f, const Grid& g, NormSpec spec) {
    if (f.size() != g.size()) throw std::invalid_argument("field length does not match grid");
    switch (spec.kind) {
        case NormKind::L2:
            return l2_norm(f, g);
        case NormKind::Linf:
            return linf_norm(f);
        case NormKind::Sobolev:
        case NormKind::Zhidkov: {
            if (spec.order < 0 || spec.order > kMaxNormOrder)
                throw std::invalid_argument("norm order must be in [0, 4], got " +
                                            std::to_string(spec.order));
            double total = spec.kind == NormKind::Sobolev ? l2_norm(f, g) : linf_norm(f);
            for (int a = 1; a <= spec.order; ++a) total += l2_norm(detail::derivative_any_order(f, g, a), g);
            return total;
        }
    }
    return 0.0;
}

double tail_magnitude(std::span<const cplx> f, const Grid& g, double fraction) {
    double m = 0.0;
    const double cut = fraction * g.half_length();
    for (std::size_t j = 0; j < f.size(); ++j)
        if (std::abs(g.x(j)) > cut) m = std::max(m, std::abs(f[j]));
    return m;
}

}  // namespace dnls
