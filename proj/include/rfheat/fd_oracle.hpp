#pragma once

#include <span>
#include <vector>

#include "rfheat/geometry.hpp"

namespace rfheat::fd {

/// Uniform polar grid theta_j = j*pi/N, j = 0..N, on one sphere factor.
/// A non-positive `dt` selects the largest step for which the
/// Crank-Nicolson update keeps a non-negative explicit half (and hence
/// preserves positivity for p <= 3).
struct ZonalGrid {
    int p = 3;
    int nodes = 512;
    double dt = 0.0;

    double spacing() const;
    std::vector<double> theta() const;
};

/// Throws ConfigError for N < 64 or p < 2.
ZonalGrid make_zonal_grid(int p, int nodes = 512, double dt = 0.0);

/// Measure of the cell [theta_j - h/2, theta_j + h/2] (clipped at the poles)
/// under sin^{p-1} theta dtheta.
std::vector<double> cell_volumes(const ZonalGrid& grid);

/// Integral of a grid function against the unit-sphere zonal measure,
/// omega_{p-1} sum_j V_j u_j with the cell volumes above. This is the mass
/// conserved exactly by solve_zonal.
double grid_integral(const ZonalGrid& grid, std::span<const double> u);

/// Advances u_t = a(t)^{-2} (u_thth + (p-1) cot(theta) u_th) from s to t with
/// the trapezoidal (Crank-Nicolson) rule, coefficient frozen at each
/// half step. Space is discretized in flux form on polar cells, which keeps
/// the pole cells regular.
/// Throws ConfigError if the sup norm blows up.
std::vector<double> solve_zonal(const RoundFactor& f, double s, double t, std::span<const double> init,
                                const ZonalGrid& grid);

/// Approximates G(., t; pole, s) from a Gaussian bump of polar width
/// `bump_width`, normalized to unit mass in dmu(., s). The bump is taken as
/// the kernel of conformal age bump_width^2 / 2, so the solve starts at the
/// time s' > s with sigma(s, s') = bump_width^2 / 2.
std::vector<double> kernel_approx(const RoundFactor& f, double s, double t, const ZonalGrid& grid,
                                  double bump_width = 0.025);

}  // namespace rfheat::fd
