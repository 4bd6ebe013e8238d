#include "rfheat/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rfheat/quadrature.hpp"

namespace rfheat::fd {

double ZonalGrid::spacing() const { return std::numbers::pi / nodes; }

std::vector<double> ZonalGrid::theta() const {
    std::vector<double> th(static_cast<std::size_t>(nodes) + 1);
    const double h = spacing();
    for (int j = 0; j <= nodes; ++j) th[j] = j * h;
    th.back() = std::numbers::pi;
    return th;
}

ZonalGrid make_zonal_grid(int p, int nodes, double dt) {
    if (p < 2) throw ConfigError("grid.p", "sphere dimension must be >= 2");
    if (nodes < 64) throw ConfigError("grid.nodes", "at least 64 nodes are required");
    return ZonalGrid{p, nodes, dt};
}

std::vector<double> cell_volumes(const ZonalGrid& grid) {
    const int n = grid.nodes;
    const double h = grid.spacing();
    const auto rule = quad::gauss_legendre(8);
    std::vector<double> vol(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        const double lo = std::max(0.0, (j - 0.5) * h);
        const double hi = std::min(std::numbers::pi, (j + 0.5) * h);
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        double sum = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            sum += rule.weights[q] * std::pow(std::sin(mid + half * rule.nodes[q]), grid.p - 1);
        }
        vol[j] = half * sum;
    }
    return vol;
}

double grid_integral(const ZonalGrid& grid, std::span<const double> u) {
    const auto vol = cell_volumes(grid);
    if (u.size() != vol.size()) throw std::invalid_argument("grid_integral: size mismatch");
    double sum = 0.0;
    for (std::size_t j = 0; j < vol.size(); ++j) sum += vol[j] * u[j];
    return unit_sphere_volume(grid.p - 1) * sum;
}

namespace {

// Tridiagonal stencil of the zonal Laplacian on the unit sphere.
struct Stencil {
    std::vector<double> lower, diag, upper;
};

Stencil zonal_laplacian(const ZonalGrid& grid) {
    const int n = grid.nodes;
    const int p = grid.p;
    const double h = grid.spacing();
    const auto vol = cell_volumes(grid);
    Stencil st;
    st.lower.assign(n + 1, 0.0);
    st.diag.assign(n + 1, 0.0);
    st.upper.assign(n + 1, 0.0);
    // Flux form on the cells [theta_j - h/2, theta_j + h/2]; the face weights
    // sin^{p-1} vanish at the poles, so no separate pole closure is needed.
    for (int j = 0; j <= n; ++j) {
        const double down = j > 0 ? std::pow(std::sin((j - 0.5) * h), p - 1) : 0.0;
        const double up = j < n ? std::pow(std::sin((j + 0.5) * h), p - 1) : 0.0;
        const double scale = 1.0 / (h * vol[j]);
        st.lower[j] = down * scale;
        st.upper[j] = up * scale;
        st.diag[j] = -(down + up) * scale;
    }
    return st;
}

double sup_norm(std::span<const double> u) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

std::vector<double> solve_zonal(const RoundFactor& f, double s, double t, std::span<const double> init,
                                const ZonalGrid& grid) {
    if (grid.p != f.dim) throw ConfigError("grid.p", "grid dimension does not match the factor");
    if (!(s < t)) throw DomainError("solve_zonal: requires s < t");
    const std::size_t size = static_cast<std::size_t>(grid.nodes) + 1;
    if (init.size() != size) throw std::invalid_argument("solve_zonal: init has wrong size");
    for (double v : init) {
        if (!std::isfinite(v)) throw ConfigError("init", "initial data must be finite");
    }

    const double a2_end = factor_radius_sq(f, t);
    (void)factor_radius_sq(f, s);
    const double h = grid.spacing();
    double dt = grid.dt;
    if (!(dt > 0.0)) dt = 0.9 * h * h * a2_end / grid.p;
    const auto steps = static_cast<long>(std::ceil((t - s) / dt - 1e-12));
    dt = (t - s) / static_cast<double>(steps);

    const Stencil st = zonal_laplacian(grid);
    std::vector<double> u(init.begin(), init.end());
    std::vector<double> rhs(size), cp(size), dp(size);
    const double limit = 1e8 * (sup_norm(init) + 1.0);

    for (long step = 0; step < steps; ++step) {
        const double mid = s + (step + 0.5) * dt;
        const double coef = 0.5 * dt / factor_radius_sq(f, mid);
        for (std::size_t j = 0; j < size; ++j) {
            double lu = st.diag[j] * u[j];
            if (j > 0) lu += st.lower[j] * u[j - 1];
            if (j + 1 < size) lu += st.upper[j] * u[j + 1];
            rhs[j] = u[j] + coef * lu;
        }
        // Thomas algorithm for (I - coef L) u_new = rhs.
        double b0 = 1.0 - coef * st.diag[0];
        cp[0] = -coef * st.upper[0] / b0;
        dp[0] = rhs[0] / b0;
        for (std::size_t j = 1; j < size; ++j) {
            const double a = -coef * st.lower[j];
            const double b = 1.0 - coef * st.diag[j];
            const double c = j + 1 < size ? -coef * st.upper[j] : 0.0;
            const double denom = b - a * cp[j - 1];
            cp[j] = c / denom;
            dp[j] = (rhs[j] - a * dp[j - 1]) / denom;
        }
        u[size - 1] = dp[size - 1];
        for (std::size_t j = size - 1; j-- > 0;) u[j] = dp[j] - cp[j] * u[j + 1];

        const double sup = sup_norm(u);
        if (!std::isfinite(sup) || sup > limit) {
            std::ostringstream os;
            os << "solution blew up at step " << step << " (sup norm " << sup << ")";
            throw ConfigError("grid.dt", os.str());
        }
    }
    return u;
}

std::vector<double> kernel_approx(const RoundFactor& f, double s, double t, const ZonalGrid& grid,
                                  double bump_width) {
    if (!(bump_width > 0.0)) throw ConfigError("bump_width", "must be positive");
    const int p = f.dim;
    const double a2s = factor_radius_sq(f, s);
    const double a2_start = a2s * std::exp(-(p - 1) * bump_width * bump_width);
    const double start = (f.radius0 * f.radius0 - a2_start) / (2.0 * (p - 1));
    if (!(start < t)) throw DomainError("kernel_approx: bump age exceeds the time gap");

    const auto th = grid.theta();
    std::vector<double> bump(th.size());
    for (std::size_t j = 0; j < th.size(); ++j) {
        bump[j] = std::exp(-th[j] * th[j] / (2.0 * bump_width * bump_width));
    }
    const double mass = std::pow(a2s, 0.5 * p) * grid_integral(grid, bump);
    for (double& b : bump) b /= mass;
    return solve_zonal(f, start, t, bump, grid);
}

}  // namespace rfheat::fd
