#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "rfheat/errors.hpp"
#include "rfheat/fd_oracle.hpp"
#include "rfheat/harness.hpp"

namespace rfheat::harness {

namespace {

enum class Kind { identity, inequality };

// Which sample points a check is evaluated at.
enum class Scope { pair, angle };

struct Context {
    const Scenario& sc;
    const ProductGeometry& g;
    const ProductQuadrature& quad;
    const SobolevProfile& prof;
    AConvention convention;
};

struct Point {
    TimePair times;
    std::vector<double> angles;
};

struct Eval {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;  // identity checks only
    std::string note;
};

using CheckFn = std::function<Eval(const Context&, const Point&)>;

struct CheckDef {
    Kind kind;
    Scope scope;
    double tol;
    CheckFn fn;
};

double rel_residual(double lhs, double rhs, double scale) {
    const double denom = std::max({std::abs(lhs), std::abs(rhs), scale});
    return denom > 0.0 ? std::abs(lhs - rhs) / denom : 0.0;
}

Eval identity(double lhs, double rhs, double scale = 0.0) {
    return {lhs, rhs, rel_residual(lhs, rhs, scale), {}};
}

Eval inequality(double lhs, double rhs) { return {lhs, rhs, 0.0, {}}; }

// Fourth-order central difference.
double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

// Fourth-order one-sided (forward) difference.
double forward_diff(const std::function<double(double)>& f, double x, double h) {
    return (-25 * f(x) + 48 * f(x + h) - 36 * f(x + 2 * h) + 16 * f(x + 3 * h) - 3 * f(x + 4 * h)) /
           (12 * h);
}

constexpr double time_step = 1e-4;
constexpr double angle_step = 1e-3;

double kernel_at(const Context& c, const std::vector<double>& angles, double s, double t) {
    return kernel(c.g, {angles, s, t}, c.sc.series).value;
}

// Laplacian of the product kernel in the first point (metric at t) or
// equivalently in the second point with the metric at `metric_time`.
struct LaplacianParts {
    double value = 0.0;
    double laplacian = 0.0;
};

LaplacianParts product_laplacian(const Context& c, const std::vector<double>& angles, double s, double t,
                                 double metric_time) {
    const auto series = make_series(c.g, s, t, c.sc.series);
    const std::size_t m = series.size();
    std::vector<double> val(m), lap(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& fs = series[i];
        const int p = fs.factor().dim;
        const double th = angles[i];
        const double h = angle_step;
        // The kernel is even about both poles, so its angle derivative is odd.
        auto d1 = [&](double x) {
            if (x < 0.0) return -fs.sample(-x).dtheta;
            if (x > M_PI) return -fs.sample(2 * M_PI - x).dtheta;
            return fs.sample(x).dtheta;
        };
        const double second = central_diff(d1, th, h);
        const auto smp = fs.sample(th);
        double radial;
        const double sn = std::sin(th);
        if (th < 1e-8 || M_PI - th < 1e-8) {
            radial = p * second;
        } else {
            radial = second + (p - 1) * std::cos(th) / sn * smp.dtheta;
        }
        val[i] = smp.value;
        lap[i] = radial / factor_radius_sq(fs.factor(), metric_time);
    }
    LaplacianParts out;
    out.value = 1.0;
    for (double v : val) out.value *= v;
    for (std::size_t i = 0; i < m; ++i) {
        double term = lap[i];
        for (std::size_t j = 0; j < m; ++j) {
            if (j != i) term *= val[j];
        }
        out.laplacian += term;
    }
    return out;
}

std::vector<double> pole_angles(const Context& c) { return std::vector<double>(c.g.factor_count(), 0.0); }

double measured_sup(const Context& c, double s, double t) {
    double best = kernel_at(c, pole_angles(c), s, t);
    for (const auto& a : c.sc.angles) best = std::max(best, kernel_at(c, a, s, t));
    return best;
}

BoundInputs bound_inputs(const Context& c, double s, double t) {
    return make_bound_inputs(c.g, c.prof, s, t, c.convention);
}

double alpha_derivative(const Context& c, double s, double t) {
    auto a = [&](double tt) { return alpha_parseval(c.g, s, tt, c.sc.series); };
    return central_diff(a, t, time_step);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

const std::map<std::string, CheckDef>& registry() {
    static const std::map<std::string, CheckDef> defs = [] {
        std::map<std::string, CheckDef> d;
        d["envelope"] = {Kind::inequality, Scope::pair, 1e-10, [](const Context& c, const Point& pt) {
                             const auto env = curvature_envelope(c.g);
                             return inequality(env.rho(pt.times.t), scalar_curvature(c.g, pt.times.t));
                         }};
        d["normalization"] = {Kind::identity, Scope::pair, 1e-8, [](const Context& c, const Point& pt) {
                                  return identity(mass_in_y(c.g, pt.times.s, pt.times.t, c.quad, c.sc.series),
                                                  1.0);
                              }};
        d["J"] = {Kind::inequality, Scope::pair, 1e-10, [](const Context& c, const Point& pt) {
                      const double j = mass_in_x(c.g, pt.times.s, pt.times.t, c.quad, c.sc.series);
                      const double x = chi(c.g, pt.times.t, pt.times.s);
                      return inequality(j, std::pow(x, 0.5 * c.g.dimension()));
                  }};
        d["J_sharpness"] = {Kind::identity, Scope::pair, 1e-10, [](const Context& c, const Point& pt) {
                                const double j = mass_in_x(c.g, pt.times.s, pt.times.t, c.quad, c.sc.series);
                                const double x = chi(c.g, pt.times.t, pt.times.s);
                                Eval e = identity(j, std::pow(x, 0.5 * c.g.dimension()));
                                if (!c.g.is_single_sphere()) e.note = "equality expected only on a single sphere";
                                return e;
                            }};
        d["parseval"] = {Kind::identity, Scope::pair, 1e-8, [](const Context& c, const Point& pt) {
                             const double s = pt.times.s, t = pt.times.t;
                             Eval e = identity(alpha(c.g, s, t, c.quad, c.sc.series),
                                               alpha_parseval(c.g, s, t, c.sc.series));
                             const double rb = rel_residual(beta(c.g, s, t, c.quad, c.sc.series),
                                                            beta_parseval(c.g, s, t, c.sc.series), 0.0);
                             e.note = "beta residual " + fmt(rb);
                             e.residual = std::max(e.residual, rb);
                             return e;
                         }};
        d["alpha_ode"] = {Kind::identity, Scope::pair, 1e-4, [](const Context& c, const Point& pt) {
                              const double s = pt.times.s, t = pt.times.t;
                              const double da = alpha_derivative(c, s, t);
                              const double grad = gradient_energy_in_x(c.g, s, t, c.quad, c.sc.series);
                              const double a = alpha_parseval(c.g, s, t, c.sc.series);
                              return identity(da, -2.0 * grad - scalar_curvature(c.g, t) * a);
                          }};
        d["alpha_ode_inequality"] = {
            Kind::inequality, Scope::pair, 1e-10, [](const Context& c, const Point& pt) {
                const double s = pt.times.s, t = pt.times.t;
                const double grad = gradient_energy_in_x(c.g, s, t, c.quad, c.sc.series);
                const double a = alpha_parseval(c.g, s, t, c.sc.series);
                const double da = -2.0 * grad - scalar_curvature(c.g, t) * a;
                Eval e = inequality(da, -(grad + scalar_curvature(c.g, t) * a));
                e.note = "finite-difference derivative " + fmt(alpha_derivative(c, s, t));
                return e;
            }};
        d["heat_residual"] = {Kind::identity, Scope::angle, 1e-4, [](const Context& c, const Point& pt) {
                                  const double s = pt.times.s, t = pt.times.t;
                                  const auto pole = pole_angles(c);
                                  const auto lp = product_laplacian(c, pt.angles, s, t, t);
                                  auto gt = [&](double tt) { return kernel_at(c, pt.angles, s, tt); };
                                  const double dt = central_diff(gt, t, time_step);
                                  // Scaled by the time derivative at the pole, where the kernel peaks.
                                  auto gt0 = [&](double tt) { return kernel_at(c, pole, s, tt); };
                                  const double scale = std::abs(central_diff(gt0, t, time_step));
                                  return identity(lp.laplacian, dt, scale);
                              }};
        d["conjugate_residual"] = {
            Kind::identity, Scope::angle, 1e-4, [](const Context& c, const Point& pt) {
                const double s = pt.times.s, t = pt.times.t;
                auto d_source = [&](const std::vector<double>& angles) {
                    auto gs = [&](double ss) { return kernel_at(c, angles, ss, t); };
                    return s >= 2 * time_step ? central_diff(gs, s, time_step) : forward_diff(gs, s, time_step);
                };
                const auto lp = product_laplacian(c, pt.angles, s, t, s);
                const double ds = d_source(pt.angles);
                const double rg = scalar_curvature(c.g, s) * lp.value;
                // Scaled by the source-time derivative at the pole, where the kernel peaks.
                const double scale = std::abs(d_source(pole_angles(c)));
                return identity(lp.laplacian + ds, rg, scale);
            }};
        d["semigroup"] = {Kind::identity, Scope::angle, 1e-6, [](const Context& c, const Point& pt) {
                              const double s = pt.times.s, t = pt.times.t;
                              const double direct = kernel_at(c, pt.angles, s, t);
                              const double comp = semigroup_composition(c.g, pt.angles, s, 0.5 * (s + t), t,
                                                                        c.sc.series, c.sc.quad_nodes);
                              // Scaled by the kernel's sup, attained at the pole.
                              return identity(direct, comp, kernel_at(c, pole_angles(c), s, t));
                          }};
        d["holder"] = {Kind::inequality, Scope::pair, 1e-10, [](const Context& c, const Point& pt) {
                           const auto v = kernel_snapshot(c.g, pt.times.s, pt.times.t, c.quad, c.sc.series);
                           const auto sides = holder_split(c.g, pt.times.t, c.quad, v);
                           return inequality(sides.lhs, sides.rhs);
                       }};
        d["sobolev_snapshot"] = {Kind::inequality, Scope::pair, 1e-10, [](const Context& c, const Point& pt) {
                                     const auto v =
                                         kernel_snapshot(c.g, pt.times.s, pt.times.t, c.quad, c.sc.series);
                                     const auto sides = zhang_lhs_rhs(c.g, pt.times.t, c.quad, v, c.prof);
                                     return inequality(sides.lhs, sides.rhs);
                                 }};
        d["theorem_bound"] = {Kind::inequality, Scope::pair, 1e-10, [](const Context& c, const Point& pt) {
                                  const double s = pt.times.s, t = pt.times.t;
                                  const auto rep = kernel_bound(bound_inputs(c, s, t));
                                  Eval e = inequality(measured_sup(c, s, t), rep.kernel_bound);
                                  e.note = "ratio " + fmt(e.rhs / e.lhs);
                                  return e;
                              }};
        d["alpha_bound"] = {Kind::inequality, Scope::pair, 1e-10, [](const Context& c, const Point& pt) {
                                const double s = pt.times.s, t = pt.times.t;
                                const auto rep = kernel_bound(bound_inputs(c, s, t));
                                Eval e = inequality(alpha_parseval(c.g, s, 0.5 * (s + t), c.sc.series),
                                                    rep.alpha_bound);
                                e.note = "ratio " + fmt(e.rhs / e.lhs);
                                return e;
                            }};
        d["beta_bound"] = {Kind::inequality, Scope::pair, 1e-10, [](const Context& c, const Point& pt) {
                               const double s = pt.times.s, t = pt.times.t;
                               const auto rep = kernel_bound(bound_inputs(c, s, t));
                               Eval e = inequality(beta_parseval(c.g, 0.5 * (s + t), t, c.sc.series),
                                                   rep.beta_bound);
                               e.note = "ratio " + fmt(e.rhs / e.lhs);
                               return e;
                           }};
        d["corollary"] = {Kind::inequality, Scope::pair, 1e-10, [](const Context& c, const Point& pt) {
                              const double s = pt.times.s, t = pt.times.t;
                              const auto cor = corollary_bound(bound_inputs(c, s, t));
                              Eval e = inequality(measured_sup(c, s, t) * std::pow(t - s, 0.5 * c.g.dimension()),
                                                  cor.Ctilde_n);
                              e.note = "ratio " + fmt(e.rhs / e.lhs);
                              return e;
                          }};
        d["corollary_closed_form"] = {Kind::inequality, Scope::pair, 1e-10,
                                      [](const Context& c, const Point& pt) {
                                          const double s = pt.times.s, t = pt.times.t;
                                          const auto cor = corollary_bound(bound_inputs(c, s, t));
                                          Eval e = inequality(measured_sup(c, s, t), cor.closed_form);
                                          e.note = "ratio " + fmt(e.rhs / e.lhs);
                                          return e;
                                      }};
        d["corollary_taylor"] = {Kind::inequality, Scope::pair, 1e-10, [](const Context& c, const Point& pt) {
                                     const auto cor = corollary_bound(bound_inputs(c, pt.times.s, pt.times.t));
                                     Eval e = inequality(cor.closed_form, cor.power_law);
                                     e.note = "ratio " + fmt(e.rhs / e.lhs);
                                     return e;
                                 }};
        d["H_closed_form"] = {Kind::identity, Scope::pair, 1e-10, [](const Context& c, const Point& pt) {
                                  const auto inp = bound_inputs(c, pt.times.s, pt.times.t);
                                  return identity(H(inp, pt.times.t), H_closed(inp, pt.times.t));
                              }};
        d["fd_oracle"] = {Kind::identity, Scope::pair, 1e-3, [](const Context& c, const Point& pt) {
                              const double s = pt.times.s, t = pt.times.t;
                              // Error relative to the sup of the spectral kernel, worst factor.
                              double worst = 0.0;
                              for (const auto& f : c.g.factors()) {
                                  const auto grid = fd::make_zonal_grid(f.dim, c.sc.fd_nodes);
                                  const auto approx = fd::kernel_approx(f, s, t, grid, c.sc.fd_bump_width);
                                  const FactorSeries exact(f, s, t, c.sc.series);
                                  const auto th = grid.theta();
                                  double err = 0.0, peak = 0.0;
                                  for (std::size_t j = 0; j < th.size(); ++j) {
                                      const double v = exact.value(th[j]);
                                      err = std::max(err, std::abs(approx[j] - v));
                                      peak = std::max(peak, std::abs(v));
                                  }
                                  worst = std::max(worst, err / peak);
                              }
                              Eval e;
                              e.lhs = worst;
                              e.rhs = 0.0;
                              e.residual = worst;
                              e.note = "sup-relative error, worst factor";
                              return e;
                          }};
        return d;
    }();
    return defs;
}

const CheckDef& lookup(const std::string& id) {
    const auto& defs = registry();
    const auto it = defs.find(id);
    if (it == defs.end()) throw ConfigError("checks", "unknown check '" + id + "'");
    return it->second;
}

std::vector<double> fit_times(const Scenario& sc) {
    double hi = 0.0;
    for (const auto& tp : sc.times) hi = std::max(hi, tp.t);
    if (hi <= 0.0) hi = 0.5 * sc.time_margin * singular_time(sc.geometry());
    constexpr int count = 6;
    std::vector<double> out;
    for (int i = 0; i < count; ++i) out.push_back(hi * i / (count - 1));
    return out;
}

}  // namespace

std::vector<std::string> known_checks() {
    std::vector<std::string> out;
    for (const auto& [id, def] : registry()) out.push_back(id);
    return out;
}

double default_tolerance(const std::string& id) { return lookup(id).tol; }

SobolevProfile resolve_profile(const Scenario& sc, std::optional<ProfileFit>* fit) {
    const auto& ps = sc.profile;
    switch (ps.kind) {
        case ProfileSpec::Kind::constant:
            return SobolevProfile::constant(ps.A, ps.B);
        case ProfileSpec::Kind::table:
            return SobolevProfile::table(ps.table_t, ps.table_A, ps.table_B);
        case ProfileSpec::Kind::fit:
            break;
    }
    const auto g = sc.geometry();
    const ProductQuadrature quad(g, std::min(sc.quad_nodes, 200));
    const auto est = estimate_sobolev(g, sc.a_convention, TestFamily::defaults(), fit_times(sc), quad,
                                      ps.eps_fraction, ps.fit);
    if (fit) *fit = est.fit;
    return est.fit.profile;
}

RunOutcome run(Scenario sc, const RunOptions& opts) {
    if (opts.a_convention) sc.a_convention = *opts.a_convention;
    if (opts.threads) sc.threads = *opts.threads;
    if (!(opts.tol_scale > 0.0)) throw ConfigError("tol_scale", "must be positive");

    RunOutcome out;
    out.scenario = sc;
    const auto g = sc.geometry();

    // Only fit a profile if some check consumes it.
    static const std::set<std::string> uses_profile = {
        "sobolev_snapshot", "theorem_bound", "alpha_bound", "beta_bound",
        "corollary",        "corollary_closed_form", "corollary_taylor", "H_closed_form"};
    const bool need_profile = std::any_of(sc.checks.begin(), sc.checks.end(),
                                          [](const CheckSpec& c) { return uses_profile.count(c.id) > 0; });
    if (need_profile) out.profile = resolve_profile(sc, &out.fit);

    const ProductQuadrature quad(g, sc.quad_nodes);
    const Context ctx{sc, g, quad, out.profile, sc.a_convention};

    struct Item {
        const CheckSpec* check;
        const CheckDef* def;
        Point point;
    };
    std::vector<Item> items;
    for (const auto& c : sc.checks) {
        const CheckDef& def = lookup(c.id);
        for (const auto& tp : sc.times) {
            if (def.scope == Scope::pair) {
                items.push_back({&c, &def, {tp, {}}});
            } else {
                for (const auto& a : sc.angles) items.push_back({&c, &def, {tp, a}});
            }
        }
    }

    out.results.resize(items.size());
    auto evaluate = [&](std::size_t idx) {
        const Item& it = items[idx];
        CheckResult r;
        r.check_id = it.check->id;
        r.geometry = g.label();
        r.kind = it.def->kind == Kind::identity ? "identity" : "inequality";
        r.s = it.point.times.s;
        r.t = it.point.times.t;
        r.theta = it.point.angles;
        r.tol = it.check->tol * opts.tol_scale;
        try {
            const Eval e = it.def->fn(ctx, it.point);
            r.lhs = e.lhs;
            r.rhs = e.rhs;
            r.note = e.note;
            if (it.def->kind == Kind::identity) {
                r.slack = e.residual;
                r.pass = std::isfinite(e.residual) && std::abs(e.residual) <= r.tol;
            } else {
                r.slack = e.rhs - e.lhs;
                r.pass = std::isfinite(r.slack) && r.slack >= -r.tol;
            }
        } catch (const std::exception& ex) {
            r.lhs = r.rhs = r.slack = std::nan("");
            r.pass = false;
            r.note = std::string("error: ") + ex.what();
        }
        out.results[idx] = std::move(r);
    };

    unsigned workers = sc.threads > 0 ? static_cast<unsigned>(sc.threads) : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(items.size())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < items.size(); ++i) evaluate(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < items.size(); i = next++) evaluate(i);
            });
        }
        for (auto& th : pool) th.join();
    }

    out.success = std::all_of(out.results.begin(), out.results.end(), [](const CheckResult& r) { return r.pass; });
    return out;
}

}  // namespace rfheat::harness
