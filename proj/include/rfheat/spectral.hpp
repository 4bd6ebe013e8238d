#pragma once

#include <span>
#include <vector>

#include "rfheat/geometry.hpp"
#include "rfheat/zonal.hpp"

namespace rfheat {

/// k-th eigenvalue k(k+p-1) of -Delta on the unit p-sphere.
double eigenvalue(int p, int k);

/// dim H_k of degree-k spherical harmonics on S^p.
double harmonic_dimension(int p, int k);

/// Fills z[k] = Z_k(c) for k < z.size(), the zonal (reproducing) kernel of H_k on
/// the unit p-sphere, using the Gegenbauer three-term recurrence with
/// lambda = (p-1)/2. If `dz` is non-empty it receives dZ_k/dc through the
/// derivative identity d/dc C_k^lambda = 2 lambda C_{k-1}^{lambda+1}.
void zonal_harmonics(int p, double c, std::span<double> z, std::span<double> dz = {});

double zonal_harmonic(int p, int k, double c);

/// Gegenbauer polynomial normalized to 1 at c = 1, with its c-derivative.
struct NormalizedGegenbauer {
    double value;
    double derivative;
};
NormalizedGegenbauer normalized_gegenbauer(int p, int k, double c);

/// sigma(s,t) = int_s^t a(tau)^{-2} dtau = ln(a(s)^2/a(t)^2) / (2(p-1)).
double conformal_time(const RoundFactor& f, double s, double t);

struct SeriesConfig {
    int k_max = 512;
    double tail_tol = 1e-12;   ///< absolute, on the factor kernel value
    double sigma_min = 1e-3;   ///< smallest conformal time gap accepted
    bool enforce_tail = true;  ///< throw ConvergenceError if k_max is hit first
};

struct KernelQuery {
    std::vector<double> angles;  ///< one geodesic angle in [0, pi] per factor
    double s = 0.0;
    double t = 0.0;
};

struct KernelValue {
    double value = 0.0;
    double tail_bound = 0.0;
};

/// Truncated eigen-expansion of one factor's heat kernel,
/// G_f(theta) = a(s)^{-p} sum_k exp(-lambda_k sigma(s,t)) Z_k(cos theta).
/// Coefficients and the truncation order are fixed at construction so the
/// series can be evaluated at many angles.
class FactorSeries {
public:
    FactorSeries(const RoundFactor& f, double s, double t, const SeriesConfig& cfg);

    struct Sample {
        double value;
        double dtheta;
    };

    double value(double theta) const;
    Sample sample(double theta) const;

    /// Number of modes kept (k = 0 .. modes()-1).
    int modes() const noexcept { return static_cast<int>(weights_.size()); }
    /// Bound on the absolute truncation error of value(theta), uniform in theta.
    double tail_bound() const noexcept { return tail_; }
    double sigma() const noexcept { return sigma_; }

    /// a(s)^{-2p} sum_k exp(-2 lambda_k sigma) Z_k(1) = int G_f^2 dmu_1 over the unit sphere.
    double parseval_unit() const;

    const RoundFactor& factor() const noexcept { return factor_; }

private:
    RoundFactor factor_;
    double scale_ = 1.0;      // a(s)^{-p}
    double sum_scale_ = 1.0;  // a(s)^{-p} / omega_p
    double sigma_ = 0.0;
    double tail_ = 0.0;
    std::vector<double> weights_;  // exp(-lambda_k sigma)
};

/// Per-factor series for all factors of g.
std::vector<FactorSeries> make_series(const ProductGeometry& g, double s, double t,
                                      const SeriesConfig& cfg);

/// G(x,t;y,s) for a query of per-factor angles.
KernelValue kernel(const ProductGeometry& g, const KernelQuery& q, const SeriesConfig& cfg);

/// |grad_x G|^2 in the metric g(t).
double kernel_gradient_sq(const ProductGeometry& g, const KernelQuery& q, const SeriesConfig& cfg);

/// The kernel sampled at the quadrature nodes of each factor, as a separable
/// field in the angle between the two points.
ProductField kernel_snapshot(const ProductGeometry& g, double s, double t,
                             const ProductQuadrature& quad, const SeriesConfig& cfg);

/// int G(x,t;y,s) dmu(y,s); equals 1 for a fundamental solution.
double mass_in_y(const ProductGeometry& g, double s, double t, const ProductQuadrature& quad,
                 const SeriesConfig& cfg);

/// J(t) = int G(x,t;y,s) dmu(x,t).
double mass_in_x(const ProductGeometry& g, double s, double t, const ProductQuadrature& quad,
                 const SeriesConfig& cfg);

/// alpha(t) = int G^2 dmu(x,t) by zonal quadrature.
double alpha(const ProductGeometry& g, double s, double t, const ProductQuadrature& quad,
             const SeriesConfig& cfg);
/// alpha(t) from the mode coefficients alone.
double alpha_parseval(const ProductGeometry& g, double s, double t, const SeriesConfig& cfg);

/// beta(s) = int G^2 dmu(y,s) by zonal quadrature.
double beta(const ProductGeometry& g, double s, double t, const ProductQuadrature& quad,
            const SeriesConfig& cfg);
double beta_parseval(const ProductGeometry& g, double s, double t, const SeriesConfig& cfg);

/// int |grad G|^2 dmu(x,t).
double gradient_energy_in_x(const ProductGeometry& g, double s, double t,
                            const ProductQuadrature& quad, const SeriesConfig& cfg);

/// Right-hand side of the semigroup identity,
/// int G(x,t;z,m) G(z,m;y,s) dmu(z,m), by a two-angle quadrature on each factor
/// (polar angle from y and the angle between the projections of x and z).
double semigroup_composition(const ProductGeometry& g, std::span<const double> angles, double s,
                             double m, double t, const SeriesConfig& cfg, int nodes);

}  // namespace rfheat
