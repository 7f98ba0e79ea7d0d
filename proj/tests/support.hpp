#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "dnls/grid.hpp"

namespace dnls::test {

inline ComplexField sample(const Grid& g, auto&& f) {
    ComplexField out(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) out[j] = f(g.x(j));
    return out;
}

inline double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

/// Smooth decaying field with seeded random Gaussian-modulated modes.
inline ComplexField random_smooth(const Grid& g, std::mt19937_64& rng, double amplitude = 0.1) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexField f(g.size());
    for (int m = 0; m < 4; ++m) {
        const cplx c(amplitude * u(rng), amplitude * u(rng));
        const double center = 2.0 * u(rng);
        const double k = 2.0 * u(rng);
        const double w = 1.0 + 0.5 * (u(rng) + 1.0);
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double s = (g.x(j) - center) / w;
            f[j] += c * std::exp(-s * s) * std::polar(1.0, k * g.x(j));
        }
    }
    return f;
}

/// Fresh directory under the system temp path, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                ("dnls_test_" + std::to_string(stamp) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace dnls::test
