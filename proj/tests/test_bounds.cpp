#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "rfheat/bounds.hpp"
#include "rfheat/spectral.hpp"

using namespace rfheat;
using doctest::Approx;

namespace {

const ProductGeometry sphere3({{3, 1.0}});

BoundInputs manual(double a, double b, double m0, double c, bool valid, double s = 0.0, double t = 0.1) {
    BoundInputs inp;
    inp.n = 3;
    inp.env = CurvatureEnvelope{m0, c, valid};
    inp.prof = SobolevProfile::constant(a, b);
    inp.s = s;
    inp.t = t;
    return inp;
}

}  // namespace

TEST_CASE("bound constant") {
    CHECK(bound_constant(3) == Approx(0.544331).epsilon(1e-6));
    CHECK(bound_constant(4) == Approx(0.25));
}

TEST_CASE("integrand values") {
    using oracle::Fraction;
    const Fraction h1 = Fraction(1) - Fraction(3, 4) * (Fraction(1) / Fraction(1, 6));
    CHECK(h1 == Fraction(-7, 2));
    CHECK(h_integrand(manual(1, 1, 1.0 / 6, 2.0 / 3, true), 0.0) == Approx(h1.value()).epsilon(1e-14));
    const Fraction h2 = Fraction(1, 2) - Fraction(3, 4) * (Fraction(1) / Fraction(1, 4));
    CHECK(h2 == Fraction(-5, 2));
    CHECK(h_integrand(manual(2, 1, 0.25, 0.5, true), 0.0) == Approx(h2.value()).epsilon(1e-14));
    CHECK(h_integrand(manual(2, 1, 0.25, 0.5, false), 0.1) == Approx(0.5));
}

TEST_CASE("antiderivative anchored at s") {
    const auto inp = manual(1, 1, 1.0 / 6, 2.0 / 3, true);
    CHECK(H(inp, 0.0) == 0.0);
    const double expected = 0.1 - 1.125 * std::log(5.0 / 3.0);
    CHECK(std::abs(expected - -0.474684) <= 1e-5);
    CHECK(std::abs(H(inp, 0.1) - expected) <= 1e-10 * std::abs(expected));
    CHECK(std::abs(H_closed(inp, 0.1) - expected) <= 1e-14);
    const auto shifted = manual(1, 1, 1.0 / 6, 2.0 / 3, true, 0.05, 0.2);
    for (double tau : {0.06, 0.1, 0.2}) {
        CHECK(std::abs(H(shifted, tau) - H_closed(shifted, tau)) <= 1e-10 * std::abs(H_closed(shifted, tau)));
    }
    auto tab = inp;
    tab.prof = SobolevProfile::table({0.0, 0.2}, {1.0, 1.0}, {1.0, 1.0});
    CHECK_THROWS_AS(H_closed(tab, 0.1), DomainError);
    CHECK(H(tab, 0.1) == Approx(expected).epsilon(1e-10));
}

TEST_CASE("bounds dominate the measured alpha, beta and kernel") {
    const double k = euclid_best_constant(3);
    const auto prof = SobolevProfile::constant(1.01 * k * k, 1.0);
    const SeriesConfig cfg;
    const auto inp = make_bound_inputs(sphere3, prof, 0.0, 0.1);
    CHECK(alpha_bound(inp) >= alpha_parseval(sphere3, 0.0, 0.1, cfg));
    CHECK(beta_bound(inp) >= beta_parseval(sphere3, 0.0, 0.1, cfg));
    const auto rep = kernel_bound(inp);
    CHECK(rep.kernel_bound >= kernel(sphere3, {{0.0}, 0.0, 0.1}, cfg).value);
    CHECK(std::abs(rep.kernel_bound - std::sqrt(rep.alpha_bound * rep.beta_bound)) <= 1e-12 * rep.kernel_bound);
    CHECK(rep.convention == AConvention::squared);
    REQUIRE(rep.Ctilde_n.has_value());
}

TEST_CASE("limits and homogeneity") {
    const auto prof = SobolevProfile::constant(1.0, 1.0);
    double prev = 0.0;
    for (double gap : {0.1, 0.01, 1e-3, 1e-4}) {
        const double b = alpha_bound(make_bound_inputs(sphere3, prof, 0.0, gap));
        CHECK(b > prev);
        prev = b;
    }
    CHECK(prev > 1e5);
    // h = 0 with an invalid envelope and B = 0.
    auto flat = manual(1.0, 0.0, 0.0, 0.0, false, 0.0, 0.1);
    auto doubled = manual(2.0, 0.0, 0.0, 0.0, false, 0.0, 0.1);
    CHECK(alpha_bound(doubled) / alpha_bound(flat) == Approx(std::pow(2.0, 1.5)).epsilon(1e-12));
    CHECK(beta_bound(doubled) / beta_bound(flat) == Approx(std::pow(2.0, 1.5)).epsilon(1e-12));
}

TEST_CASE("anchor shift cancels") {
    const auto prof = SobolevProfile::constant(0.2, 0.5);
    auto base = make_bound_inputs(sphere3, prof, 0.02, 0.15);
    auto moved = base;
    moved.h_offset = 3.7;
    CHECK(alpha_bound(moved) == Approx(alpha_bound(base)).epsilon(1e-12));
    CHECK(beta_bound(moved) == Approx(beta_bound(base)).epsilon(1e-12));
    const auto r0 = kernel_bound(base), r1 = kernel_bound(moved);
    CHECK(r1.I1 * r1.I2 == Approx(r0.I1 * r0.I2).epsilon(1e-12));
    CHECK(r1.kernel_bound == Approx(r0.kernel_bound).epsilon(1e-12));
    CHECK(r1.I1 != Approx(r0.I1));
}

TEST_CASE("enlarging B never decreases the alpha bound") {
    double prev = 0.0;
    for (double b : {0.0, 0.01, 0.1, 1.0, 5.0}) {
        const double v = alpha_bound(make_bound_inputs(sphere3, SobolevProfile::constant(0.2, b), 0.0, 0.1));
        CHECK(v >= prev);
        prev = v;
    }
    const auto lo = SobolevProfile::table({0.0, 0.1, 0.2}, {0.2, 0.2, 0.2}, {0.1, 0.2, 0.1});
    const auto hi = SobolevProfile::table({0.0, 0.1, 0.2}, {0.2, 0.2, 0.2}, {0.1, 0.5, 0.3});
    CHECK(alpha_bound(make_bound_inputs(sphere3, hi, 0.0, 0.2)) >= alpha_bound(make_bound_inputs(sphere3, lo, 0.0, 0.2)));
}

TEST_CASE("bounds are positive and finite on the grid") {
    const auto prof = SobolevProfile::constant(0.2, 0.05);
    for (double s : {0.0, 0.05, 0.1}) {
        for (double gap : {1e-3, 0.01, 0.1}) {
            const auto r = kernel_bound(make_bound_inputs(sphere3, prof, s, s + gap));
            for (double v : {r.alpha_bound, r.beta_bound, r.kernel_bound, *r.corollary_bound}) {
                CHECK(std::isfinite(v));
                CHECK(v > 0.0);
            }
        }
    }
}

TEST_CASE("corollary constants and the small-B limit") {
    const auto cor = corollary_bound(manual(1.0, 1.0, 1.0 / 6, 2.0 / 3, true));
    CHECK(cor.Ctilde_n == Approx(std::pow(4.0 / 3.0, 1.5)).epsilon(1e-14));
    CHECK(cor.Ctilde_n == Approx(bound_constant(3) * std::pow(2.0, 1.5)).epsilon(1e-14));
    const auto zero = corollary_bound(manual(1.0, 0.0, 1.0 / 6, 2.0 / 3, true));
    const auto tiny = corollary_bound(manual(1.0, 1e-9, 1.0 / 6, 2.0 / 3, true));
    // B -> 0: the closed form tends to C_n ((t-s)/(2A))^{-n/2}.
    const double limit = bound_constant(3) * std::pow(0.1 / 2.0, -1.5);
    CHECK(zero.closed_form == Approx(limit).epsilon(1e-14));
    CHECK(tiny.closed_form == Approx(limit).epsilon(1e-8));
    CHECK(zero.power_law == Approx(zero.Ctilde_n * std::pow(0.1, -1.5)).epsilon(1e-14));
    CHECK_THROWS_AS(corollary_bound([] {
                        auto inp = manual(1.0, 1.0, 1.0 / 6, 2.0 / 3, true);
                        inp.prof = SobolevProfile::table({0.0, 1.0}, {1.0, 1.0}, {1.0, 1.0});
                        return inp;
                    }()),
                    DomainError);
}

TEST_CASE("input validation") {
    const auto prof = SobolevProfile::constant(1.0, 1.0);
    CHECK_THROWS(make_bound_inputs(sphere3, prof, 0.1, 0.1));
    CHECK_THROWS(make_bound_inputs(sphere3, prof, 0.0, 0.25));
}
