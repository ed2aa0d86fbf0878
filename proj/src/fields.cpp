#include <cmath>
#include <numbers>
#include <stdexcept>

#include "muskat/fields.hpp"
#include "muskat/spectral.hpp"
#include "muskat/sphere.hpp"

namespace muskat {

std::string to_string(Side side) { return side == Side::above ? "above" : "below"; }

FieldEvaluator::FieldEvaluator(const InterfaceGeometry& geom, ScalarField beta)
    : geom_(geom), beta_(std::move(beta)), grad_beta_(gradient(beta_)), f_hat_(forward_fft(geom.f)) {
    require_same_grid(beta_, geom.f, "field evaluator");
    for (const auto& g : geom.grad_f) grad_hat_.push_back(forward_fft(g));
}

namespace {

// Trigonometric interpolant of a grid field at an arbitrary point.
double interpolate(const GridSpec& grid, const std::vector<std::complex<double>>& spectrum,
                   const std::array<double, kMaxDim>& x) {
    const double origin = grid.coordinate(0);
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        const auto k = frequency_index(grid, i);
        const auto z = physical_frequency(grid, k);
        double phase = 0.0;
        for (int d = 0; d < grid.dim; ++d) phase += z[d] * (x[d] - origin);
        sum += spectrum[i] * std::polar(1.0, phase);
    }
    return sum.real() / static_cast<double>(grid.size());
}

}  // namespace

Side FieldEvaluator::side_of(const ProbePoint& probe, double* distance) const {
    const GridSpec& grid = geom_.grid();
    const double height = interpolate(grid, f_hat_, probe.x);
    double slope2 = 0.0;
    for (const auto& g : grad_hat_) {
        const double s = interpolate(grid, g, probe.x);
        slope2 += s * s;
    }
    if (distance) *distance = std::abs(probe.y - height) / std::sqrt(1.0 + slope2);
    return probe.y > height ? Side::above : Side::below;
}

void FieldEvaluator::require_off_interface(const ProbePoint& probe) const {
    double distance = 0.0;
    side_of(probe, &distance);
    if (distance < 0.5 * geom_.grid().spacing())
        throw std::invalid_argument("probe lies within h/2 of the interface");
}

std::array<double, kMaxDim + 1> FieldEvaluator::velocity(const ProbePoint& probe) const {
    require_off_interface(probe);
    const GridSpec& grid = geom_.grid();
    const int dim = grid.dim;
    std::array<double, kMaxDim + 1> v{};
    for (std::size_t s = 0; s < grid.size(); ++s) {
        const auto xi = grid.position(s);
        std::array<double, kMaxDim> d{};
        double r2 = 0.0;
        double slope = 0.0;
        double drift = 0.0;
        for (int a = 0; a < dim; ++a) {
            d[a] = std::remainder(probe.x[a] - xi[a], grid.extent);
            r2 += d[a] * d[a];
            slope += d[a] * geom_.grad_f[a][s];
            drift += d[a] * grad_beta_[a][s];
        }
        const double vert = probe.y - geom_.f[s];
        const double inv = 1.0 / std::pow(r2 + vert * vert, 0.5 * (dim + 1));
        const double lift = vert - slope;
        for (int i = 0; i < dim; ++i) v[i] += (lift * grad_beta_[i][s] + drift * geom_.grad_f[i][s]) * inv;
        v[dim] -= drift * inv;
    }
    const double scale = grid.cell_volume() / unit_sphere_area(dim);
    for (double& c : v) c *= scale;
    return v;
}

double FieldEvaluator::pressure(const ProbePoint& probe) const {
    require_off_interface(probe);
    const GridSpec& grid = geom_.grid();
    const int dim = grid.dim;
    double q = 0.0;
    for (std::size_t s = 0; s < grid.size(); ++s) {
        const auto xi = grid.position(s);
        double r2 = 0.0;
        double slope = 0.0;
        for (int a = 0; a < dim; ++a) {
            const double d = std::remainder(probe.x[a] - xi[a], grid.extent);
            r2 += d * d;
            slope += d * geom_.grad_f[a][s];
        }
        const double vert = probe.y - geom_.f[s];
        q += (vert - slope) / std::pow(r2 + vert * vert, 0.5 * (dim + 1)) * beta_[s];
    }
    return -q * grid.cell_volume() / unit_sphere_area(dim);
}

std::array<double, kMaxDim + 1> FieldEvaluator::layer_potential(const ProbePoint& probe) const {
    require_off_interface(probe);
    const GridSpec& grid = geom_.grid();
    const int dim = grid.dim;
    std::array<double, kMaxDim + 1> v{};
    for (std::size_t s = 0; s < grid.size(); ++s) {
        const auto xi = grid.position(s);
        std::array<double, kMaxDim + 1> d{};
        double r2 = 0.0;
        for (int a = 0; a < dim; ++a) {
            d[a] = std::remainder(probe.x[a] - xi[a], grid.extent);
            r2 += d[a] * d[a];
        }
        d[dim] = probe.y - geom_.f[s];
        r2 += d[dim] * d[dim];
        const double w = beta_[s] * std::sqrt(geom_.omega[s]) / std::pow(r2, 0.5 * (dim + 1));
        for (int a = 0; a <= dim; ++a) v[a] += d[a] * w;
    }
    const double scale = grid.cell_volume() / unit_sphere_area(dim);
    for (double& c : v) c *= scale;
    return v;
}

FieldSample FieldEvaluator::evaluate(const ProbePoint& probe) const {
    FieldSample sample;
    sample.side = side_of(probe);
    sample.velocity = velocity(probe);
    sample.pressure = pressure(probe);
    return sample;
}

std::vector<FieldSample> eval_fields(const InterfaceGeometry& geom, const ScalarField& beta,
                                     const std::vector<ProbePoint>& probes) {
    const FieldEvaluator eval(geom, beta);
    std::vector<FieldSample> out(probes.size());
    for (std::size_t p = 0; p < probes.size(); ++p) out[p] = eval.evaluate(probes[p]);
    return out;
}

bool JumpReport::decreasing() const {
    for (std::size_t i = 1; i < levels.size(); ++i) {
        if (levels[i].distance < levels[i - 1].distance && !(levels[i].deviation < levels[i - 1].deviation))
            return false;
    }
    return true;
}

JumpReport jump_check(const InterfaceGeometry& geom, const ScalarField& beta, const std::vector<std::size_t>& samples,
                      const std::vector<double>& distances) {
    const GridSpec& grid = geom.grid();
    const int dim = grid.dim;
    const FieldEvaluator eval(geom, beta);
    const VectorField grad_beta = gradient(beta);

    std::vector<std::array<double, kMaxDim + 1>> jumps;
    JumpReport report;
    for (std::size_t s : samples) {
        double tilt = 0.0;
        for (int a = 0; a < dim; ++a) tilt += geom.grad_f[a][s] * grad_beta[a][s];
        std::array<double, kMaxDim + 1> jump{};
        for (int a = 0; a < dim; ++a) jump[a] = grad_beta[a][s] - tilt * geom.grad_f[a][s] / geom.omega[s];
        jump[dim] = tilt / geom.omega[s];
        double size = 0.0;
        for (double c : jump) size += c * c;
        report.jump_scale = std::max(report.jump_scale, std::sqrt(size));
        jumps.push_back(jump);
    }

    for (double units : distances) {
        JumpLevel level;
        level.distance = units;
        const double d = units * grid.spacing();
        std::vector<double> deviation(samples.size(), 0.0);
#pragma omp parallel for schedule(static)
        for (long long n = 0; n < static_cast<long long>(samples.size()); ++n) {
            const std::size_t s = samples[static_cast<std::size_t>(n)];
            const auto base = grid.position(s);
            ProbePoint up;
            ProbePoint down;
            for (int a = 0; a < dim; ++a) {
                up.x[a] = base[a] + d * geom.normal[a][s];
                down.x[a] = base[a] - d * geom.normal[a][s];
            }
            up.y = geom.f[s] + d * geom.normal[dim][s];
            down.y = geom.f[s] - d * geom.normal[dim][s];
            const auto vp = eval.velocity(up);
            const auto vm = eval.velocity(down);
            double err = 0.0;
            for (int a = 0; a <= dim; ++a) {
                const double e = vp[a] - vm[a] - jumps[static_cast<std::size_t>(n)][a];
                err += e * e;
            }
            deviation[static_cast<std::size_t>(n)] = std::sqrt(err);
        }
        for (double e : deviation) level.deviation = std::max(level.deviation, e);
        level.relative = report.jump_scale > 0.0 ? level.deviation / report.jump_scale : 0.0;
        report.levels.push_back(level);
    }
    return report;
}

}  // namespace muskat
