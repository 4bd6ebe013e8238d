#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "rfheat/geometry.hpp"
#include "rfheat/zonal.hpp"

namespace rfheat {

/// Which quantity plays the role of A: K(n,2)^2 + eps ("squared") or
/// K(n,2) + eps ("linear"). Both are carried through and reported.
enum class AConvention { squared, linear };

std::string_view to_string(AConvention c);
/// Throws ConfigError("a_convention", ...) for anything but "squared" / "linear".
AConvention parse_a_convention(std::string_view text);

/// Critical exponent 2n/(n-2).
double sobolev_exponent(int n);

/// ||u||_{2n/(n-2)} / ||grad u||_2 for a radial profile on R^n, by adaptive
/// quadrature after mapping [0, inf) onto [0, 1).
double radial_sobolev_quotient(int n, const std::function<double(double)>& u,
                               const std::function<double(double)>& du);

/// Best constant K(n,2) of the Euclidean Sobolev inequality, evaluated as the
/// quotient of the extremal bubble (1 + r^2)^{-(n-2)/2}.
double euclid_best_constant(int n);

/// The pair A(t), B(t) of the uniform Sobolev inequality along the flow;
/// either constant or tabulated with linear interpolation.
class SobolevProfile {
public:
    /// Requires A > 0 and B >= 0 (B = 0 is accepted for limiting cases).
    static SobolevProfile constant(double a, double b);
    /// Requires strictly increasing times and matching lengths (>= 2).
    static SobolevProfile table(std::vector<double> times, std::vector<double> a,
                                std::vector<double> b);

    double A(double t) const;
    double B(double t) const;
    bool is_constant() const noexcept { return times_.empty(); }

    /// Table nodes strictly inside (lo, hi), bracketed by lo and hi.
    std::vector<double> breakpoints(double lo, double hi) const;

    /// Marks the profile as an empirical estimate (from fit_profile).
    bool empirical = false;

private:
    SobolevProfile() = default;
    double interp(const std::vector<double>& values, double t) const;

    std::vector<double> times_;
    std::vector<double> a_;
    std::vector<double> b_;
};

struct InequalitySides {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack() const { return rhs - lhs; }
};

/// (int |v|^{2n/(n-2)})^{(n-2)/n} versus
/// A(t) int (|grad v|^2 + R v^2 / 4) + B(t) int v^2, all in the metric g(t).
InequalitySides zhang_lhs_rhs(const ProductGeometry& g, double t, const ProductQuadrature& quad,
                              const ProductField& v, const SobolevProfile& prof);

/// int v^2 versus (int v^{2n/(n-2)})^{(n-2)/(n+2)} (int v)^{4/(n+2)}; requires v >= 0
/// up to round-off (1e-12 of the sup of each factor).
InequalitySides holder_split(const ProductGeometry& g, double t, const ProductQuadrature& quad,
                             const ProductField& v);

/// One zonal building block of a separable test function.
struct ZonalShape {
    enum class Kind { constant, mode, bump };
    Kind kind = Kind::constant;
    int degree = 0;          ///< mode: 1 + amplitude * P_degree(cos theta)
    double amplitude = 0.0;
    double width = 1.0;      ///< bump: exp(-(1 - cos theta) / width^2)
};

/// One factor shape per factor of the geometry.
using FamilyMember = std::vector<ZonalShape>;

ProductField sample_member(const ProductQuadrature& quad, const FamilyMember& member);

std::string describe(const FamilyMember& member);

/// Parameterized test family: constants, low zonal modes with a swept
/// amplitude, and bumps (all factors at once, and one factor at a time) with
/// widths on a log grid.
struct TestFamily {
    bool constants = true;
    std::vector<int> degrees{1, 2};
    std::vector<double> amplitudes;
    std::vector<double> widths;
    bool refine = true;  ///< golden-section refinement around the best grid point

    static TestFamily defaults();
};

struct FitOptions {
    double safety = 1.1;           ///< inflation applied to a positive fitted B
    double floor_fraction = 1e-3;  ///< B is never below floor_fraction * inf R(., 0)
};

struct ProfileFit {
    SobolevProfile profile = SobolevProfile::constant(1.0, 1.0);
    double raw_max = 0.0;   ///< max over family and times of the B-ratio
    double floor = 0.0;
    std::string argmax;     ///< description of the maximizing member
    double argmax_time = 0.0;
    int evaluations = 0;
};

/// Ratio (LHS - A int(|grad v|^2 + R v^2/4)) / int v^2: the smallest B that
/// makes the inequality hold for this v at time t.
double required_b(const ProductGeometry& g, double t, const ProductQuadrature& quad,
                  const ProductField& v, double a);

/// Constant profile with A = a_candidate and
/// B = max(safety * max_{family, times} required_b, floor).
ProfileFit fit_profile(const ProductGeometry& g, const TestFamily& family, double a_candidate,
                       const std::vector<double>& times, const ProductQuadrature& quad,
                       const FitOptions& opts = {});

struct SobolevEstimate {
    double K = 0.0;
    double eps = 0.0;
    double A0 = 0.0;
    double B0 = 0.0;
    AConvention convention = AConvention::squared;
    ProfileFit fit;
};

/// K(n,2), eps = eps_fraction * K^2, A0 per convention, and a fitted B0.
SobolevEstimate estimate_sobolev(const ProductGeometry& g, AConvention convention,
                                 const TestFamily& family, const std::vector<double>& times,
                                 const ProductQuadrature& quad, double eps_fraction = 0.01,
                                 const FitOptions& opts = {});

}  // namespace rfheat
