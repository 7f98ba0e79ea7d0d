#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dnls {

using cplx = std::complex<double>;
using ComplexField = std::vector<cplx>;

/// Raised for invalid user-facing parameters (grid sizes, config values).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FftPlan;

/**
 * Uniform periodic grid on [-L, L) with N nodes (N a power of two).
 *
 * Wavenumbers are stored in FFT ordering: k_j = pi j / L for
 * j = 0 .. N/2-1, then -N/2 .. -1. The grid owns a shared FFTW plan so
 * copies are cheap and transforms can run concurrently.
 */
class Grid {
public:
    static Grid make(double half_length, std::size_t n_points);

    double half_length() const { return half_length_; }
    std::size_t size() const { return n_; }
    double dx() const { return 2.0 * half_length_ / static_cast<double>(n_); }
    double x(std::size_t j) const { return -half_length_ + static_cast<double>(j) * dx(); }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& wavenumbers() const { return k_; }
    double max_wavenumber() const;

    /// Unnormalized forward DFT (sum f_j e^{-i k x_j'}).
    ComplexField forward(std::span<const cplx> f) const;
    /// Inverse DFT including the 1/N factor.
    ComplexField inverse(std::span<const cplx> fhat) const;

    bool operator==(const Grid& other) const {
        return half_length_ == other.half_length_ && n_ == other.n_;
    }

private:
    Grid(double half_length, std::size_t n);

    double half_length_;
    std::size_t n_;
    std::vector<double> nodes_;
    std::vector<double> k_;
    std::shared_ptr<const FftPlan> plan_;
};

inline Grid make_grid(double half_length, std::size_t n_points) {
    return Grid::make(half_length, n_points);
}

/// Spectral derivative of order 1 or 2. The Nyquist mode is dropped for odd order.
ComplexField spectral_derivative(std::span<const cplx> f, const Grid& g, int order);

enum class NormKind { L2, Linf, Sobolev, Zhidkov };

struct NormSpec {
    NormKind kind = NormKind::L2;
    int order = 0;  // used by Sobolev (H^k) and Zhidkov (X^k)

    static NormSpec l2() { return {NormKind::L2, 0}; }
    static NormSpec linf() { return {NormKind::Linf, 0}; }
    static NormSpec sobolev(int k) { return {NormKind::Sobolev, k}; }
    static NormSpec zhidkov(int k) { return {NormKind::Zhidkov, k}; }
};

inline constexpr int kMaxNormOrder = 4;

double discrete_norm(std::span<const cplx> f, const Grid& g, NormSpec spec);

// Pointwise helpers shared by the modules.
double l2_norm(std::span<const cplx> f, const Grid& g);
double linf_norm(std::span<const cplx> f);
bool all_finite(std::span<const cplx> f);

namespace detail {
/// Any-order spectral derivative, used for the higher norms.
ComplexField derivative_any_order(std::span<const cplx> f, const Grid& g, int order);
}  // namespace detail

/// Largest |f| over nodes with |x| > fraction * L. Used for the decay guard.
double tail_magnitude(std::span<const cplx> f, const Grid& g, double fraction = 0.8);

}  // namespace dnls
