#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "rfheat/geometry.hpp"
#include "rfheat/zonal.hpp"

using namespace rfheat;
using doctest::Approx;

namespace {
const ProductGeometry sphere3({{3, 1.0}});
const ProductGeometry s2s2({{2, 1.0}, {2, 1.0}});
}  // namespace

TEST_CASE("factor radius follows the flow ODE") {
    CHECK(factor_radius_sq({3, 1.0}, 0.0) == 1.0);
    auto rhs = [](int p) { return [p](double, double) { return -2.0 * (p - 1); }; };
    CHECK(factor_radius_sq({3, 1.0}, 0.1) == Approx(oracle::rk4(rhs(3), 1.0, 0.0, 0.1, 50)).epsilon(1e-14));
    CHECK(factor_radius_sq({3, 1.0}, 0.1) == Approx(0.6).epsilon(1e-14));
    CHECK(factor_radius_sq({2, 2.0}, 1.0) == Approx(oracle::rk4(rhs(2), 4.0, 0.0, 1.0, 50)).epsilon(1e-14));
    CHECK(factor_radius_sq({2, 2.0}, 1.0) == Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(factor_radius_sq({3, 1.0}, 0.25), DomainError);
    CHECK_THROWS_AS(factor_radius_sq({3, 1.0}, -0.01), DomainError);
}

TEST_CASE("finite-difference flow residual vanishes") {
    for (double t : {0.0, 0.05, 0.1, 0.2}) {
        const double h = 1e-5;
        const double lo = t > h ? t - h : t;
        const double d = (factor_radius_sq({3, 1.0}, t + h) - factor_radius_sq({3, 1.0}, lo)) / (t + h - lo);
        CHECK(d == Approx(-4.0).epsilon(1e-8));
    }
}

TEST_CASE("singular times are first zeros of the radius") {
    auto zero = [](RoundFactor f) { return oracle::bisect([f](double t) { return f.radius0 * f.radius0 - 2.0 * (f.dim - 1) * t; }, 0.0, 10.0); };
    CHECK(singular_time(sphere3) == Approx(zero({3, 1.0})).epsilon(1e-12));
    CHECK(singular_time(sphere3) == Approx(0.25));
    CHECK(singular_time(s2s2) == Approx(0.5));
    const ProductGeometry s3s5({{3, 1.0}, {5, 1.0}});
    CHECK(singular_time(s3s5) == Approx(zero({5, 1.0})).epsilon(1e-12));
    CHECK(singular_time(s3s5) == Approx(0.125));
}

TEST_CASE("scalar curvature matches the warped-metric curvature") {
    CHECK(scalar_curvature(sphere3, 0.0) == Approx(6.0));
    CHECK(scalar_curvature(s2s2, 0.0) == Approx(4.0));
    CHECK(scalar_curvature(sphere3, 0.1) == Approx(10.0).epsilon(1e-13));
    for (double t : {0.0, 0.1, 0.2}) {
        const double a = std::sqrt(factor_radius_sq({3, 1.0}, t));
        auto f = [a](double r) { return a * std::sin(r / a); };
        for (double r : {0.3 * a, 1.1 * a, 2.5 * a}) {
            CHECK(scalar_curvature(sphere3, t) == Approx(oracle::warped_scalar_curvature(f, 3, r)).epsilon(1e-6));
        }
    }
}

TEST_CASE("envelope constants and sphere sharpness") {
    const auto env = curvature_envelope(sphere3);
    CHECK(env.valid);
    CHECK(env.m0 == Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(env.c_n == Approx(2.0 / 3.0).epsilon(1e-15));
    const auto env22 = curvature_envelope(s2s2);
    CHECK(env22.m0 == Approx(0.25));
    CHECK(env22.c_n == Approx(0.5));
    for (double tau : {0.0, 0.05, 0.1, 0.2, 0.24}) {
        CHECK(std::abs(scalar_curvature(sphere3, tau) - env.rho(tau)) / scalar_curvature(sphere3, tau) <= 1e-12);
        CHECK(env22.rho(tau) <= scalar_curvature(s2s2, tau) * (1 + 1e-15));
    }
    double prev = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double r = env.rho(0.24 * i / 49);
        CHECK(r >= prev);
        prev = r;
    }
}

TEST_CASE("invalid envelope is treated as zero") {
    const auto env = envelope_from_infimum(0.0, 3);
    CHECK_FALSE(env.valid);
    CHECK(env.rho(0.1) == 0.0);
    CHECK(env.chi(0.2, 0.0) == 1.0);
    CHECK(std::isinf(env.blowup_time()));
}

TEST_CASE("chi values") {
    CHECK(chi(sphere3, 0.0, 0.0) == 1.0);
    const oracle::Fraction m0(1, 6), c(2, 3), t(1, 10);
    const auto exact = (m0 - c * t) / m0;
    CHECK(exact == oracle::Fraction(3, 5));
    CHECK(chi(sphere3, 0.1, 0.0) == Approx(exact.value()).epsilon(1e-14));
    const oracle::Fraction q = (oracle::Fraction(1, 4) - oracle::Fraction(1, 10)) /
                               (oracle::Fraction(1, 4) - oracle::Fraction(1, 20));
    CHECK(q == oracle::Fraction(3, 4));
    CHECK(chi(s2s2, 0.2, 0.1) == Approx(q.value()).epsilon(1e-14));
    for (double s : {0.0, 0.03, 0.1}) {
        for (double tt : {0.12, 0.2}) {
            const double ratio = factor_radius_sq({3, 1.0}, tt) / factor_radius_sq({3, 1.0}, s);
            CHECK(std::abs(chi(sphere3, tt, s) - ratio) <= 1e-12 * ratio);
        }
    }
    CHECK_THROWS(chi(sphere3, 0.0, 0.1));
}

TEST_CASE("volumes") {
    CHECK(volume(sphere3, 0.0) == Approx(2 * oracle::pi * oracle::pi).epsilon(1e-14));
    CHECK(unit_sphere_volume(2) == Approx(4 * oracle::pi).epsilon(1e-14));
    CHECK(unit_sphere_volume(0) == Approx(2.0));
    CHECK(volume(sphere3, 0.1) == Approx(2 * oracle::pi * oracle::pi * std::pow(0.6, 1.5)).epsilon(1e-14));
    // Zonal quadrature of omega_{p-1} sin^{p-1} theta.
    const double byquad = unit_sphere_volume(2) * oracle::simpson([](double x) { return std::sin(x) * std::sin(x); }, 0.0, oracle::pi, 2000);
    CHECK(volume(sphere3, 0.0) == Approx(byquad).epsilon(1e-12));
    const auto zq = make_zonal_quadrature(3, 40);
    const std::vector<double> ones(zq.size(), 1.0);
    CHECK(zq.integrate(ones) == Approx(2 * oracle::pi * oracle::pi).epsilon(1e-13));
}

TEST_CASE("log-volume derivative is minus the scalar curvature") {
    for (const auto* g : {&sphere3, &s2s2}) {
        for (double t : {0.02, 0.1, 0.15}) {
            const double h = 1e-5;
            const double d = (std::log(volume(*g, t + h)) - std::log(volume(*g, t - h))) / (2 * h);
            CHECK(d == Approx(-scalar_curvature(*g, t)).epsilon(1e-6));
        }
    }
}

TEST_CASE("geometry validation names the field") {
    try {
        ProductGeometry bad({{1, 1.0}});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "geometry[0].dim");
    }
    try {
        ProductGeometry bad({{2, 1.0}, {3, -1.0}});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "geometry[1].radius0");
    }
    CHECK_THROWS_AS(ProductGeometry({{2, 1.0}}), ConfigError);
    CHECK(ProductGeometry({{3, 1.0}, {2, 1.0}}).label() == "S3(1)xS2(1)");
}
