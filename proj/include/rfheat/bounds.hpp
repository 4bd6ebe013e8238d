#pragma once

#include <optional>

#include "rfheat/geometry.hpp"
#include "rfheat/quadrature.hpp"
#include "rfheat/sobolev.hpp"

namespace rfheat {

/// C_n = (2/n)^{n/2}.
double bound_constant(int n);

struct BoundInputs {
    int n = 3;
    CurvatureEnvelope env;
    SobolevProfile prof = SobolevProfile::constant(1.0, 1.0);
    double s = 0.0;
    double t = 0.0;
    AConvention convention = AConvention::squared;
    /// Additive shift of the antiderivative H; the bounds must not depend on it.
    double h_offset = 0.0;
    quad::AdaptiveOptions quad{};
};

/// Inputs for geometry g; validates 0 <= s < t < singular_time(g).
BoundInputs make_bound_inputs(const ProductGeometry& g, const SobolevProfile& prof, double s, double t,
                              AConvention convention = AConvention::squared);

/// h(tau) = B(tau)/A(tau) - (3/4) rho(tau).
double h_integrand(const BoundInputs& inp, double tau);

/// H(tau) = h_offset + int_s^tau h, by adaptive quadrature.
double H(const BoundInputs& inp, double tau);

/// Closed form of H for constant profiles:
/// (B/A)(tau - s) - (3/(4 c_n)) ln((m0 - c_n s) / (m0 - c_n tau)) + h_offset.
/// Throws DomainError for tabulated profiles.
double H_closed(const BoundInputs& inp, double tau);

/// Bound on alpha(t) = int G^2 dmu(x,t) over [s, t]:
/// C_n e^{H(t)} / (int_s^t e^{(2/n)H} / (chi_{tau,s}^2 A) dtau)^{n/2}.
double alpha_bound(const BoundInputs& inp);

/// Bound on beta(s) = int G^2 dmu(y,s) over [s, t]:
/// C_n e^{-H(s)} / (int_s^t e^{-(2/n)H} / A dtau)^{n/2}.
double beta_bound(const BoundInputs& inp);

struct BoundReport {
    int n = 0;
    double s = 0.0;
    double t = 0.0;
    double m0 = 0.0;
    double c_n = 0.0;
    bool envelope_valid = false;
    double chi_ts = 1.0;
    double A_s = 0.0;
    double B_s = 0.0;
    AConvention convention = AConvention::squared;
    double C_n = 0.0;
    double H_mid = 0.0;
    double I1 = 0.0;  ///< int_s^mid chi^{-2} e^{(2/n)H} / A
    double I2 = 0.0;  ///< int_mid^t e^{-(2/n)H} / A
    double alpha_bound = 0.0;  ///< bound on alpha at the midpoint
    double beta_bound = 0.0;   ///< bound on beta at the midpoint
    double kernel_bound = 0.0;
    std::optional<double> corollary_bound;      ///< closed form for constant profiles
    std::optional<double> corollary_power_law;  ///< Ctilde_n (t-s)^{-n/2}
    std::optional<double> Ctilde_n;
};

/// Kernel upper bound from splitting [s, t] at its midpoint: alpha on the
/// first half, beta on the second, combined through Cauchy-Schwarz.
BoundReport kernel_bound(const BoundInputs& inp);

struct CorollaryBound {
    double closed_form = 0.0;  ///< C_n / [ (n^2/(4B^2)) (1 - e^{-x})^2 ]^{n/4}, x = (2B/(nA)) (t-s)/2
    double power_law = 0.0;    ///< Ctilde_n (t-s)^{-n/2}
    double Ctilde_n = 0.0;     ///< C_n (2A)^{n/2}
};

/// Positive-curvature corollary. Requires a constant profile; the B -> 0
/// limit of the closed form is evaluated without cancellation.
CorollaryBound corollary_bound(const BoundInputs& inp);

}  // namespace rfheat
