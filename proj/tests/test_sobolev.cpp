#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "rfheat/sobolev.hpp"
#include "rfheat/spectral.hpp"

using namespace rfheat;
using doctest::Approx;

namespace {

const ProductGeometry sphere3({{3, 1.0}});
const ProductGeometry s2s2({{2, 1.0}, {2, 1.0}});

// Closed form of the squared sharp constant, used only as a reference.
double best_constant_sq(int n) {
    return 4.0 / (n * (n - 2.0) * std::pow(unit_sphere_volume(n), 2.0 / n));
}

TestFamily constants_only() {
    TestFamily f;
    f.degrees.clear();
    f.amplitudes.clear();
    f.widths.clear();
    f.refine = false;
    return f;
}

}  // namespace

TEST_CASE("euclidean best constant") {
    for (int n : {3, 4, 5, 6}) {
        const double k = euclid_best_constant(n);
        CHECK(k * k == Approx(best_constant_sq(n)).epsilon(1e-10));
    }
    CHECK(sobolev_exponent(3) == 6.0);
    CHECK(sobolev_exponent(4) == 4.0);
}

TEST_CASE("bubble quotient is scale invariant and not beaten by perturbations") {
    for (int n : {3, 4}) {
        const double e = 0.5 * (n - 2);
        const double base = radial_sobolev_quotient(
            n, [e](double r) { return std::pow(1 + r * r, -e); },
            [e](double r) { return -2 * e * r * std::pow(1 + r * r, -e - 1); });
        for (double lam : {0.3, 2.0, 7.5}) {
            const double scaled = radial_sobolev_quotient(
                n, [=](double r) { return std::pow(1 + lam * lam * r * r, -e); },
                [=](double r) { return -2 * e * lam * lam * r * std::pow(1 + lam * lam * r * r, -e - 1); });
            CHECK(std::abs(scaled - base) <= 1e-10 * base);
        }
        std::mt19937 rng(1234 + n);
        std::uniform_real_distribution<double> amp(-0.3, 0.3), wid(0.3, 3.0);
        for (int trial = 0; trial < 20; ++trial) {
            const double a = amp(rng), w = wid(rng);
            // u = bubble * (1 + a exp(-r^2/w^2)).
            auto u = [=](double r) { return std::pow(1 + r * r, -e) * (1 + a * std::exp(-r * r / (w * w))); };
            auto du = [=](double r) {
                const double b = std::pow(1 + r * r, -e), db = -2 * e * r * std::pow(1 + r * r, -e - 1);
                const double g = std::exp(-r * r / (w * w)), dg = -2 * r / (w * w) * g;
                return db * (1 + a * g) + b * a * dg;
            };
            CHECK(radial_sobolev_quotient(n, u, du) <= base * (1 + 1e-12));
        }
    }
}

TEST_CASE("conventions") {
    CHECK(parse_a_convention("squared") == AConvention::squared);
    CHECK(parse_a_convention("linear") == AConvention::linear);
    CHECK(to_string(AConvention::linear) == "linear");
    try {
        parse_a_convention("quadratic");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "a_convention");
    }
}

TEST_CASE("profiles") {
    const auto c = SobolevProfile::constant(2.0, 0.5);
    CHECK(c.is_constant());
    CHECK(c.A(0.3) == 2.0);
    CHECK(c.B(0.0) == 0.5);
    const auto t = SobolevProfile::table({0.0, 0.1, 0.2}, {1.0, 2.0, 4.0}, {0.0, 1.0, 1.0});
    CHECK(t.A(0.05) == Approx(1.5));
    CHECK(t.A(0.15) == Approx(3.0));
    CHECK(t.B(0.2) == Approx(1.0));
    CHECK_THROWS_AS(t.A(0.3), DomainError);
    const auto cuts = t.breakpoints(0.05, 0.2);
    REQUIRE(cuts.size() == 3);
    CHECK(cuts[1] == 0.1);
    CHECK_THROWS(SobolevProfile::constant(0.0, 1.0));
    CHECK_THROWS(SobolevProfile::constant(1.0, -1.0));
    CHECK_THROWS(SobolevProfile::table({0.0, 0.0}, {1.0, 1.0}, {1.0, 1.0}));
}

TEST_CASE("sobolev sides for constants and zero") {
    const ProductQuadrature q(sphere3, 100);
    const auto one = sample_member(q, FamilyMember(1));
    const auto prof = SobolevProfile::constant(0.3, 0.7);
    const double vol = 2 * oracle::pi * oracle::pi;
    const auto sides = zhang_lhs_rhs(sphere3, 0.0, q, one, prof);
    CHECK(sides.lhs == Approx(std::cbrt(vol)).epsilon(1e-13));
    CHECK(sides.rhs == Approx(0.3 * 1.5 * vol + 0.7 * vol).epsilon(1e-13));
    ProductField zero = one;
    for (auto& f : zero.factors) {
        for (auto& v : f.value) v = 0.0;
    }
    const auto z = zhang_lhs_rhs(sphere3, 0.0, q, zero, prof);
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
}

TEST_CASE("holder step") {
    const ProductQuadrature q(sphere3, 200);
    const auto one = sample_member(q, FamilyMember(1));
    const auto eq = holder_split(sphere3, 0.1, q, one);
    CHECK(std::abs(eq.lhs - eq.rhs) <= 1e-10 * eq.rhs);
    ZonalShape bump{ZonalShape::Kind::bump, 0, 0.0, 0.2};
    const auto hb = holder_split(sphere3, 0.1, q, sample_member(q, {bump}));
    CHECK(hb.slack() > 0.0);
    const auto snap = kernel_snapshot(sphere3, 0.0, 0.05, q, SeriesConfig{});
    CHECK(holder_split(sphere3, 0.05, q, snap).slack() >= -1e-10);
    ZonalShape signed_mode{ZonalShape::Kind::mode, 1, 2.0, 1.0};
    CHECK_THROWS_AS(holder_split(sphere3, 0.0, q, sample_member(q, {signed_mode})), DomainError);
}

TEST_CASE("fit on constants reproduces the closed form") {
    const ProductQuadrature q(sphere3, 100);
    const double a = 0.2, vol = 2 * oracle::pi * oracle::pi;
    const auto fit = fit_profile(sphere3, constants_only(), a, {0.0}, q);
    const double expected = (std::cbrt(vol) - a * 1.5 * vol) / vol;
    CHECK(fit.raw_max == Approx(expected).epsilon(1e-12));
    CHECK(fit.profile.B(0.0) == Approx(std::max(1.1 * expected, 1e-3 * 6.0)));
    CHECK(fit.profile.empirical);
}

TEST_CASE("fit monotonicity and holdout") {
    const ProductQuadrature q(s2s2, 80);
    const std::vector<double> times{0.0, 0.1};
    const auto family = TestFamily::defaults();
    FitOptions no_floor;
    no_floor.floor_fraction = 1e-300;
    double prev = INFINITY;
    for (double a : {0.05, 0.1, 0.2, 0.4}) {
        const auto fit = fit_profile(s2s2, family, a, times, q, no_floor);
        CHECK(fit.raw_max <= prev);
        CHECK(fit.profile.B(0.0) >= 0.0);
        prev = fit.raw_max;
    }
    // Enlarging the family never lowers the fitted B.
    const auto small = fit_profile(s2s2, constants_only(), 0.1, times, q, no_floor);
    TestFamily medium = constants_only();
    medium.degrees = {1};
    medium.amplitudes = {-0.5, 0.5};
    const auto mid = fit_profile(s2s2, medium, 0.1, times, q, no_floor);
    const auto full = fit_profile(s2s2, family, 0.1, times, q, no_floor);
    CHECK(small.raw_max <= mid.raw_max);
    CHECK(mid.raw_max <= full.raw_max);

    // Holdout: random members not on the fitting grid.
    const auto est = estimate_sobolev(s2s2, AConvention::squared, family, times, q);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> amp(-1.0, 1.0), lw(std::log(0.03), std::log(3.0)), tt(0.0, 0.1);
    std::uniform_int_distribution<int> kind(0, 2), deg(1, 2);
    int failures = 0;
    for (int i = 0; i < 200; ++i) {
        FamilyMember m(2);
        for (auto& shape : m) {
            switch (kind(rng)) {
                case 0: break;
                case 1: shape = {ZonalShape::Kind::mode, deg(rng), amp(rng), 1.0}; break;
                default: shape = {ZonalShape::Kind::bump, 0, 0.0, std::exp(lw(rng))}; break;
            }
        }
        const auto sides = zhang_lhs_rhs(s2s2, tt(rng), q, sample_member(q, m), est.fit.profile);
        if (sides.slack() < -1e-10) ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("estimate carries the convention") {
    const ProductQuadrature q(sphere3, 80);
    const double k = euclid_best_constant(3);
    const auto sq = estimate_sobolev(sphere3, AConvention::squared, constants_only(), {0.0}, q);
    const auto lin = estimate_sobolev(sphere3, AConvention::linear, constants_only(), {0.0}, q);
    CHECK(sq.eps == Approx(0.01 * k * k));
    CHECK(sq.A0 == Approx(k * k + 0.01 * k * k));
    CHECK(lin.A0 == Approx(k + 0.01 * k * k));
    CHECK(sq.convention == AConvention::squared);
    CHECK(lin.B0 > 0.0);
}
