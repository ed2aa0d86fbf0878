#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "muskat/resolvent.hpp"

namespace muskat {

std::string SolveReport::csv_header() { return "run_id,iterations,residual,seconds,probe"; }

std::string SolveReport::csv_row(const std::string& run_id) const {
    std::ostringstream out;
    out.precision(17);
    out << run_id << ',' << iterations << ',' << residual << ',' << seconds << ',' << probe;
    return out.str();
}

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vec values_of(const ScalarField& u) { return Vec(u.values().begin(), u.values().end()); }

}  // namespace

ScalarField gmres(const LinearMap& op, const ScalarField& rhs, const ScalarField& guess, const SolveOptions& options,
                  SolveReport& report) {
    const auto start = std::chrono::steady_clock::now();
    const GridSpec& grid = rhs.grid();
    const int restart = std::max(1, options.restart);
    const double rhs_norm = std::sqrt(dot(values_of(rhs), values_of(rhs)));
    report = SolveReport{};
    auto finish = [&](ScalarField x) {
        const ScalarField r = rhs - op(x);
        report.residual = rhs_norm > 0.0 ? std::sqrt(dot(values_of(r), values_of(r))) / rhs_norm : 0.0;
        report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return x;
    };
    if (rhs_norm == 0.0) return finish(ScalarField(grid));

    Vec x = values_of(guess);
    const std::size_t n = x.size();
    const double target = options.tol * rhs_norm;
    std::vector<Vec> basis;
    std::vector<std::vector<double>> hess(static_cast<std::size_t>(restart + 1), std::vector<double>(restart, 0.0));
    Vec cs(restart), sn(restart), g(restart + 1);

    while (report.iterations < options.max_iter) {
        Vec r = values_of(rhs - op(ScalarField(grid, x)));
        double beta = std::sqrt(dot(r, r));
        if (beta <= target) break;
        basis.assign(1, r);
        for (double& v : basis[0]) v /= beta;
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;
        int used = 0;
        for (int j = 0; j < restart && report.iterations < options.max_iter; ++j) {
            Vec w = values_of(op(ScalarField(grid, basis[j])));
            for (int i = 0; i <= j; ++i) {
                hess[i][j] = dot(w, basis[i]);
                for (std::size_t q = 0; q < n; ++q) w[q] -= hess[i][j] * basis[i][q];
            }
            hess[j + 1][j] = std::sqrt(dot(w, w));
            for (int i = 0; i < j; ++i) {
                const double t = cs[i] * hess[i][j] + sn[i] * hess[i + 1][j];
                hess[i + 1][j] = -sn[i] * hess[i][j] + cs[i] * hess[i + 1][j];
                hess[i][j] = t;
            }
            const double denom = std::hypot(hess[j][j], hess[j + 1][j]);
            cs[j] = hess[j][j] / denom;
            sn[j] = hess[j + 1][j] / denom;
            const double sub = hess[j + 1][j];
            hess[j][j] = denom;
            hess[j + 1][j] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];
            ++report.iterations;
            used = j + 1;
            if (std::abs(g[j + 1]) <= target || sub == 0.0) break;
            for (double& v : w) v /= sub;
            basis.push_back(std::move(w));
        }
        Vec y(used, 0.0);
        for (int i = used - 1; i >= 0; --i) {
            double s = g[i];
            for (int k = i + 1; k < used; ++k) s -= hess[i][k] * y[k];
            y[i] = s / hess[i][i];
        }
        for (int i = 0; i < used; ++i) {
            for (std::size_t q = 0; q < n; ++q) x[q] += y[i] * basis[i][q];
        }
        if (std::abs(g[used]) <= target) break;
    }
    ScalarField solution = finish(ScalarField(grid, std::move(x)));
    if (report.residual > options.tol * 10.0)
        throw SolverError("GMRES did not reach tolerance (residual " + std::to_string(report.residual) + " after " +
                              std::to_string(report.iterations) + " iterations)",
                          report);
    return solution;
}

DensitySolution solve_beta(const InterfaceGeometry& geom, double a_mu, const SolveOptions& options,
                           const ScalarField* warm) {
    if (!(std::abs(a_mu) < 1.0)) throw std::invalid_argument("a_mu must lie in (-1, 1)");
    DensitySolution sol;
    if (a_mu == 0.0) {
        // Identity operator: a single Krylov step is exact.
        sol.beta = geom.f;
        sol.report.iterations = max_abs(geom.f) > 0.0 ? 1 : 0;
        return sol;
    }
    const LinearMap op = [&](const ScalarField& b) { return b + (2.0 * a_mu) * apply_D(geom, b); };
    const ScalarField guess = warm ? *warm : ScalarField(geom.grid());
    sol.beta = gmres(op, geom.f, guess, options, sol.report);
    return sol;
}

ScalarField random_smooth_field(const GridSpec& grid, std::uint64_t seed, int band) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int width = 2 * band + 1;
    int total = 1;
    for (int d = 0; d < grid.dim; ++d) total *= width;
    std::vector<std::array<int, kMaxDim>> modes;
    std::vector<double> cos_part;
    std::vector<double> sin_part;
    for (int t = 0; t < total; ++t) {
        std::array<int, kMaxDim> k{};
        int rest = t;
        for (int d = grid.dim - 1; d >= 0; --d) {
            k[d] = rest % width - band;
            rest /= width;
        }
        modes.push_back(k);
        cos_part.push_back(normal(rng));
        sin_part.push_back(normal(rng));
    }
    if (2 * band >= grid.points) throw std::invalid_argument("probe band not resolved by the grid");
    const double unit = 2.0 * std::numbers::pi / grid.extent;
    std::vector<double> values(grid.size(), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto x = grid.position(i);
        double s = 0.0;
        for (std::size_t m = 0; m < modes.size(); ++m) {
            double phase = 0.0;
            for (int d = 0; d < grid.dim; ++d) phase += unit * modes[m][d] * x[d];
            s += cos_part[m] * std::cos(phase) + sin_part[m] * std::sin(phase);
        }
        values[i] = s;
    }
    ScalarField u(grid, std::move(values));
    return (1.0 / l2_norm(u)) * u;
}

double probe_resolvent_bound(const InterfaceGeometry& geom, double a, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("need at least one probe");
    double best = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        const ScalarField probe = random_smooth_field(geom.grid(), seed + static_cast<std::uint64_t>(t));
        best = std::min(best, l2_norm(probe - a * apply_D(geom, probe)));
    }
    return best;
}

}  // namespace muskat
