#include "rfheat/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rfheat/errors.hpp"
#include "rfheat/quadrature.hpp"
#include "rfheat/spectral.hpp"

namespace rfheat {

std::string_view to_string(AConvention c) {
    return c == AConvention::squared ? "squared" : "linear";
}

AConvention parse_a_convention(std::string_view text) {
    if (text == "squared") return AConvention::squared;
    if (text == "linear") return AConvention::linear;
    throw ConfigError("a_convention", "expected 'squared' or 'linear', got '" + std::string(text) + "'");
}

double sobolev_exponent(int n) { return 2.0 * n / (n - 2.0); }

double radial_sobolev_quotient(int n, const std::function<double(double)>& u,
                               const std::function<double(double)>& du) {
    if (n < 3) throw DomainError("radial_sobolev_quotient: n must be >= 3");
    const double q = sobolev_exponent(n);
    // r = x / (1 - x), dr = dx / (1 - x)^2
    auto mapped = [](const std::function<double(double, double)>& f) {
        return [f](double x) {
            const double om = 1.0 - x;
            const double r = x / om;
            return f(r, 1.0 / (om * om));
        };
    };
    quad::AdaptiveOptions opts;
    opts.abs_tol = 1e-14;
    opts.max_depth = 50;
    const double iq = quad::integrate(
        mapped([&](double r, double jac) { return std::pow(std::abs(u(r)), q) * std::pow(r, n - 1) * jac; }),
        0.0, 1.0, opts);
    const double ig = quad::integrate(
        mapped([&](double r, double jac) {
            const double d = du(r);
            return d * d * std::pow(r, n - 1) * jac;
        }),
        0.0, 1.0, opts);
    const double shell = unit_sphere_volume(n - 1);
    return std::pow(shell * iq, 1.0 / q) / std::sqrt(shell * ig);
}

double euclid_best_constant(int n) {
    if (n < 3) throw DomainError("euclid_best_constant: n must be >= 3");
    const double e = 0.5 * (n - 2);
    return radial_sobolev_quotient(
        n, [e](double r) { return std::pow(1.0 + r * r, -e); },
        [e](double r) { return -2.0 * e * r * std::pow(1.0 + r * r, -e - 1.0); });
}

// ---------------------------------------------------------------------------

SobolevProfile SobolevProfile::constant(double a, double b) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("profile.A", "must be positive");
    if (!(b >= 0.0) || !std::isfinite(b)) throw ConfigError("profile.B", "must be non-negative");
    SobolevProfile p;
    p.a_ = {a};
    p.b_ = {b};
    return p;
}

SobolevProfile SobolevProfile::table(std::vector<double> times, std::vector<double> a,
                                     std::vector<double> b) {
    if (times.size() < 2) throw ConfigError("profile.t", "a table needs at least two rows");
    if (a.size() != times.size()) throw ConfigError("profile.A", "length differs from profile.t");
    if (b.size() != times.size()) throw ConfigError("profile.B", "length differs from profile.t");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i > 0 && !(times[i] > times[i - 1])) {
            throw ConfigError("profile.t", "times must be strictly increasing");
        }
        if (!(a[i] > 0.0)) throw ConfigError("profile.A[" + std::to_string(i) + "]", "must be positive");
        if (!(b[i] >= 0.0)) throw ConfigError("profile.B[" + std::to_string(i) + "]", "must be non-negative");
    }
    SobolevProfile p;
    p.times_ = std::move(times);
    p.a_ = std::move(a);
    p.b_ = std::move(b);
    return p;
}

double SobolevProfile::interp(const std::vector<double>& values, double t) const {
    if (times_.empty()) return values.front();
    // Small tolerance lets quadrature nodes sit on the table ends.
    const double span = times_.back() - times_.front();
    if (t < times_.front() - 1e-12 * span || t > times_.back() + 1e-12 * span) {
        std::ostringstream os;
        os << "profile table does not cover t=" << t;
        throw DomainError(os.str());
    }
    t = std::clamp(t, times_.front(), times_.back());
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - times_.begin()), times_.size() - 1);
    const std::size_t lo = hi - 1;
    const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
    return (1.0 - w) * values[lo] + w * values[hi];
}

double SobolevProfile::A(double t) const { return interp(a_, t); }
double SobolevProfile::B(double t) const { return interp(b_, t); }

std::vector<double> SobolevProfile::breakpoints(double lo, double hi) const {
    std::vector<double> cuts{lo};
    for (double t : times_) {
        if (t > lo && t < hi) cuts.push_back(t);
    }
    cuts.push_back(hi);
    return cuts;
}

// ---------------------------------------------------------------------------

InequalitySides zhang_lhs_rhs(const ProductGeometry& g, double t, const ProductQuadrature& quad,
                              const ProductField& v, const SobolevProfile& prof) {
    const int n = g.dimension();
    const double q = sobolev_exponent(n);
    const double lq = field_power_integral(g, t, quad, v, q);
    const double l2 = field_power_integral(g, t, quad, v, 2.0);
    const double grad = field_gradient_integral(g, t, quad, v);
    const double r = scalar_curvature(g, t);
    InequalitySides out;
    out.lhs = std::pow(lq, (n - 2.0) / n);
    out.rhs = prof.A(t) * (grad + 0.25 * r * l2) + prof.B(t) * l2;
    return out;
}

InequalitySides holder_split(const ProductGeometry& g, double t, const ProductQuadrature& quad,
                             const ProductField& v) {
    // Truncated series can dip below zero at round-off level far from the peak.
    for (const auto& f : v.factors) {
        double peak = 0.0;
        for (double x : f.value) peak = std::max(peak, std::abs(x));
        for (double x : f.value) {
            if (x < -1e-12 * peak) throw DomainError("holder_split: requires a non-negative function");
        }
    }
    const int n = g.dimension();
    const double q = sobolev_exponent(n);
    InequalitySides out;
    out.lhs = field_power_integral(g, t, quad, v, 2.0);
    out.rhs = std::pow(field_power_integral(g, t, quad, v, q), (n - 2.0) / (n + 2.0)) *
              std::pow(field_power_integral(g, t, quad, v, 1.0), 4.0 / (n + 2.0));
    return out;
}

// ---------------------------------------------------------------------------

ProductField sample_member(const ProductQuadrature& quad, const FamilyMember& member) {
    if (member.size() != quad.factor_count()) {
        throw std::invalid_argument("sample_member: one shape per factor is required");
    }
    ProductField field;
    field.factors.resize(member.size());
    for (std::size_t i = 0; i < member.size(); ++i) {
        const auto& zq = quad.factor(i);
        const auto& shape = member[i];
        auto& out = field.factors[i];
        out.value.resize(zq.size());
        out.dtheta.resize(zq.size());
        for (std::size_t j = 0; j < zq.size(); ++j) {
            const double th = zq.theta[j];
            const double c = std::cos(th);
            const double sn = std::sin(th);
            switch (shape.kind) {
                case ZonalShape::Kind::constant:
                    out.value[j] = 1.0;
                    out.dtheta[j] = 0.0;
                    break;
                case ZonalShape::Kind::mode: {
                    const auto pk = normalized_gegenbauer(zq.p, shape.degree, c);
                    out.value[j] = 1.0 + shape.amplitude * pk.value;
                    out.dtheta[j] = -sn * shape.amplitude * pk.derivative;
                    break;
                }
                case ZonalShape::Kind::bump: {
                    const double w2 = shape.width * shape.width;
                    const double v = std::exp(-(1.0 - c) / w2);
                    out.value[j] = v;
                    out.dtheta[j] = -sn / w2 * v;
                    break;
                }
            }
        }
    }
    return field;
}

std::string describe(const FamilyMember& member) {
    std::ostringstream os;
    for (std::size_t i = 0; i < member.size(); ++i) {
        if (i) os << " x ";
        const auto& s = member[i];
        switch (s.kind) {
            case ZonalShape::Kind::constant: os << "1"; break;
            case ZonalShape::Kind::mode: os << "(1" << (s.amplitude < 0 ? "" : "+") << s.amplitude << "*P" << s.degree << ")"; break;
            case ZonalShape::Kind::bump: os << "bump(w=" << s.width << ")"; break;
        }
    }
    return os.str();
}

TestFamily TestFamily::defaults() {
    TestFamily fam;
    for (int i = 0; i <= 8; ++i) fam.amplitudes.push_back(-1.0 + 0.25 * i);
    const int count = 24;
    const double lo = std::log(0.03);
    const double hi = std::log(3.0);
    for (int i = 0; i < count; ++i) fam.widths.push_back(std::exp(lo + (hi - lo) * i / (count - 1)));
    return fam;
}

double required_b(const ProductGeometry& g, double t, const ProductQuadrature& quad,
                  const ProductField& v, double a) {
    const int n = g.dimension();
    const double lq = field_power_integral(g, t, quad, v, sobolev_exponent(n));
    const double l2 = field_power_integral(g, t, quad, v, 2.0);
    const double grad = field_gradient_integral(g, t, quad, v);
    const double r = scalar_curvature(g, t);
    return (std::pow(lq, (n - 2.0) / n) - a * (grad + 0.25 * r * l2)) / l2;
}

namespace {

// A one-parameter slice of the family; `make` builds the member for a
// parameter value.
struct Template {
    std::vector<double> grid;
    std::function<FamilyMember(double)> make;
};

struct Scorer {
    const ProductGeometry& g;
    const ProductQuadrature& quad;
    const std::vector<double>& times;
    double a;
    double best = -std::numeric_limits<double>::infinity();
    std::string argmax;
    double argmax_time = 0.0;
    int evaluations = 0;

    double operator()(const FamilyMember& m) {
        const ProductField v = sample_member(quad, m);
        double local = -std::numeric_limits<double>::infinity();
        for (double t : times) {
            const double b = required_b(g, t, quad, v, a);
            ++evaluations;
            if (b > local) local = b;
            if (b > best) {
                best = b;
                argmax = describe(m);
                argmax_time = t;
            }
        }
        return local;
    }
};

void search(Scorer& score, const Template& tpl, bool refine) {
    if (tpl.grid.empty()) return;
    std::size_t ib = 0;
    double vb = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tpl.grid.size(); ++i) {
        const double v = score(tpl.make(tpl.grid[i]));
        if (v > vb) {
            vb = v;
            ib = i;
        }
    }
    if (!refine || tpl.grid.size() < 3) return;
    double lo = tpl.grid[ib == 0 ? 0 : ib - 1];
    double hi = tpl.grid[std::min(ib + 1, tpl.grid.size() - 1)];
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = score(tpl.make(x1));
    double f2 = score(tpl.make(x2));
    for (int it = 0; it < 40 && hi - lo > 1e-9 * (1.0 + std::abs(lo)); ++it) {
        if (f1 > f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = score(tpl.make(x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = score(tpl.make(x2));
        }
    }
}

}  // namespace

ProfileFit fit_profile(const ProductGeometry& g, const TestFamily& family, double a_candidate,
                       const std::vector<double>& times, const ProductQuadrature& quad,
                       const FitOptions& opts) {
    if (!(a_candidate > 0.0)) throw ConfigError("profile.A", "candidate A must be positive");
    if (times.empty()) throw ConfigError("times", "fit_profile needs at least one sample time");
    for (double t : times) require_admissible_time(g, t);

    const std::size_t m = g.factor_count();
    const FamilyMember flat(m);  // all constant
    Scorer score{g, quad, times, a_candidate, -std::numeric_limits<double>::infinity(), {}, 0.0, 0};

    if (family.constants) score(flat);

    std::vector<Template> templates;
    for (std::size_t i = 0; i < m; ++i) {
        for (int k : family.degrees) {
            templates.push_back({family.amplitudes, [flat, i, k](double eps) {
                                     FamilyMember mem = flat;
                                     mem[i] = {ZonalShape::Kind::mode, k, eps, 1.0};
                                     return mem;
                                 }});
        }
    }
    std::vector<double> log_widths;
    for (double w : family.widths) log_widths.push_back(std::log(w));
    templates.push_back({log_widths, [flat](double lw) {
                             FamilyMember mem = flat;
                             for (auto& s : mem) s = {ZonalShape::Kind::bump, 0, 0.0, std::exp(lw)};
                             return mem;
                         }});
    if (m > 1) {
        for (std::size_t i = 0; i < m; ++i) {
            templates.push_back({log_widths, [flat, i](double lw) {
                                     FamilyMember mem = flat;
                                     mem[i] = {ZonalShape::Kind::bump, 0, 0.0, std::exp(lw)};
                                     return mem;
                                 }});
        }
    }
    for (const auto& tpl : templates) search(score, tpl, family.refine);

    if (score.evaluations == 0) throw ConfigError("family", "test family is empty");
    if (!std::isfinite(score.best)) throw QuadratureError("fit_profile: non-finite Sobolev ratio");

    ProfileFit fit;
    fit.raw_max = score.best;
    fit.floor = opts.floor_fraction * scalar_curvature(g, 0.0);
    fit.argmax = score.argmax;
    fit.argmax_time = score.argmax_time;
    fit.evaluations = score.evaluations;
    fit.profile = SobolevProfile::constant(a_candidate, std::max(opts.safety * score.best, fit.floor));
    fit.profile.empirical = true;
    return fit;
}

SobolevEstimate estimate_sobolev(const ProductGeometry& g, AConvention convention,
                                 const TestFamily& family, const std::vector<double>& times,
                                 const ProductQuadrature& quad, double eps_fraction,
                                 const FitOptions& opts) {
    SobolevEstimate est;
    est.convention = convention;
    est.K = euclid_best_constant(g.dimension());
    est.eps = eps_fraction * est.K * est.K;
    est.A0 = (convention == AConvention::squared ? est.K * est.K : est.K) + est.eps;
    est.fit = fit_profile(g, family, est.A0, times, quad, opts);
    est.B0 = est.fit.profile.B(0.0);
    return est;
}

}  // namespace rfheat
