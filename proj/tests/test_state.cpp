#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dnls/state.hpp"
#include "support.hpp"

using namespace dnls;
using dnls::test::max_diff;
using dnls::test::sample;

TEST_CASE("constant background has vanishing derivatives") {
    const Grid g = make_grid(10.0, 64);
    const auto bg = BackgroundProfile::constant(cplx(0.5, -0.25), g);
    CHECK(bg.is_constant());
    CHECK(bg.constant_value() == cplx(0.5, -0.25));
    for (int m = 1; m <= BackgroundProfile::kMaxOrder; ++m)
        CHECK(linf_norm(bg.derivative(m)) == 0.0);
    const BackgroundPoint p = bg.at(7);
    CHECK(p.phi == cplx(0.5, -0.25));
    CHECK(p.dmod2 == 0.0);
    CHECK(p.d2mod2 == 0.0);
    CHECK_THROWS_AS(bg.derivative(5), std::invalid_argument);
}

TEST_CASE("kink_limits ramp matches its closed form") {
    const Grid g = make_grid(30.0, 1024);
    const cplx left(-1.0, 0.0), right(0.0, 1.0);
    const double w = 2.0;
    const auto bg = BackgroundProfile::kink_limits(left, right, w, g);
    CHECK_FALSE(bg.is_constant());
    CHECK_THROWS_AS(bg.constant_value(), std::logic_error);
    CHECK(std::abs(bg.values().front() - left) < 1e-12);
    CHECK(std::abs(bg.values().back() - right) < 1e-12);

    // d/dx tanh(x/w) = sech^2(x/w)/w; d2 = -2 tanh sech^2 / w^2.
    const ComplexField e1 = sample(g, [&](double x) {
        const double s = 1.0 / std::cosh(x / w);
        return (right - left) * 0.5 * s * s / w;
    });
    const ComplexField e2 = sample(g, [&](double x) {
        const double s = 1.0 / std::cosh(x / w);
        return (right - left) * 0.5 * (-2.0 * std::tanh(x / w) * s * s) / (w * w);
    });
    CHECK(max_diff(bg.derivative(1), e1) < 1e-14);
    CHECK(max_diff(bg.derivative(2), e2) < 1e-14);

    // Third derivative against central differences of the second.
    const double h = 1e-4;
    for (double x : {-3.0, -0.7, 0.0, 1.3, 4.0}) {
        auto d2 = [&](double y) {
            const double s = 1.0 / std::cosh(y / w);
            return (right - left) * 0.5 * (-2.0 * std::tanh(y / w) * s * s) / (w * w);
        };
        const std::size_t j = static_cast<std::size_t>(std::llround((x + 30.0) / g.dx()));
        const double xj = g.x(j);
        const cplx fd3 = (d2(xj + h) - d2(xj - h)) / (2 * h);
        CHECK(std::abs(bg.derivative(3)[j] - fd3) < 1e-7);
    }
}

TEST_CASE("background point quantities for |phi|^2") {
    const Grid g = make_grid(10.0, 256);
    const auto bg = BackgroundProfile::kink_limits(cplx(1, 0), cplx(0, 2), 1.5, g);
    // Central differences of |phi|^2 on a fine local stencil.
    const double h = 1e-4;
    for (std::size_t j : {60u, 128u, 200u}) {
        const double x = g.x(j);
        auto phi = [&](double y) {
            return cplx(1, 0) + (cplx(0, 2) - cplx(1, 0)) * 0.5 * (1.0 + std::tanh(y / 1.5));
        };
        const double f0 = std::norm(phi(x)), fp = std::norm(phi(x + h)), fm = std::norm(phi(x - h));
        const BackgroundPoint p = bg.at(j);
        CHECK(p.dmod2 == doctest::Approx((fp - fm) / (2 * h)).epsilon(1e-7));
        CHECK(p.d2mod2 == doctest::Approx((fp - 2 * f0 + fm) / (h * h)).epsilon(1e-5));
    }
}

TEST_CASE("sampled backgrounds validate their derivative arrays") {
    BackgroundProfile::Derivatives d;
    for (auto& f : d) f.assign(16, cplx(1.0));
    CHECK_NOTHROW(BackgroundProfile::sampled(d, "ok"));
    d[3].resize(8);
    CHECK_THROWS_AS(BackgroundProfile::sampled(d, "bad"), std::invalid_argument);
}

TEST_CASE("field state arithmetic and derivatives") {
    const Grid g = make_grid(20.0, 512);
    const cplx q0(1.0, 0.0);
    const ComplexField pert = sample(g, [](double x) { return cplx(0.1 * std::exp(-x * x), 0.0); });
    const FieldState s = make_state(BackgroundProfile::constant(q0, g), pert, 0.5);
    CHECK(s.time == 0.5);
    const ComplexField u = total_field(s);
    CHECK(std::abs(u[256] - cplx(1.1, 0.0)) < 1e-15);
    const ComplexField du = state_derivative(s, g, 1);
    const ComplexField e = sample(g, [](double x) { return cplx(-0.2 * x * std::exp(-x * x)); });
    CHECK(max_diff(du, e) < 1e-11);
    CHECK_THROWS_AS(make_state(BackgroundProfile::constant(q0, g), ComplexField(3)),
                    std::invalid_argument);
}

TEST_CASE("state derivative of a ramp background is analytic") {
    const Grid g = make_grid(15.0, 256);
    const auto bg = BackgroundProfile::kink_limits(cplx(-1, 0), cplx(1, 0), 1.0, g);
    const FieldState s = make_state(bg, ComplexField(g.size()));
    // The ramp is not periodic, yet no spectral ringing appears.
    CHECK(max_diff(state_derivative(s, g, 2), bg.derivative(2)) < 1e-15);
}

TEST_CASE("Zhidkov norm of a constant state") {
    const Grid g = make_grid(10.0, 64);
    for (double q0 : {0.5, 1.0, 2.0}) {
        const FieldState s = make_state(BackgroundProfile::constant(q0, g), ComplexField(64));
        CHECK(zhidkov_norm_state(s, g, 4) == doctest::Approx(q0));
    }
}
