#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "rfheat/errors.hpp"

namespace rfheat::quad {

/// Nodes and weights of an n-point Gauss-Legendre rule.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on P_n.
GaussRule gauss_legendre(int n);

/// The same rule mapped affinely onto [a, b].
GaussRule gauss_legendre(int n, double a, double b);

struct AdaptiveOptions {
    double abs_tol = 1e-10;
    int max_depth = 40;
};

struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
};

/// Adaptive Gauss-Legendre on [a, b] by interval bisection. Each panel is
/// scored by the difference between a 15-point and a 31-point rule, and the
/// worst panel is bisected until the summed scores fall below `abs_tol`.
/// Throws QuadratureError when `max_depth` is exhausted or the integrand
/// is non-finite.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  const AdaptiveOptions& opts = {});

/// Convenience wrapper returning only the value.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        const AdaptiveOptions& opts = {}) {
    return integrate_adaptive(f, a, b, opts).value;
}

/// Integrates across consecutive breakpoints; `cuts` should be sorted and
/// include both ends.
double integrate_piecewise(const std::function<double(double)>& f, std::span<const double> cuts,
                           const AdaptiveOptions& opts = {});

}  // namespace rfheat::quad
