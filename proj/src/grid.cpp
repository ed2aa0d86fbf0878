#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "muskat/grid.hpp"
#include "muskat/spectral.hpp"

namespace muskat {

GridSpec::GridSpec(int dim_, int points_, double extent_)
    : dim(dim_), points(points_), extent(extent_) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
    if (points < 8) throw std::invalid_argument("grid needs at least 8 points per axis");
    if (!(extent > 0.0) || !std::isfinite(extent))
        throw std::invalid_argument("grid extent must be positive and finite");
}

std::size_t GridSpec::size() const {
    std::size_t n = 1;
    for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(points);
    return n;
}

double GridSpec::cell_volume() const { return std::pow(spacing(), dim); }

std::array<int, kMaxDim> GridSpec::unravel(std::size_t linear) const {
    std::array<int, kMaxDim> idx{};
    for (int d = dim - 1; d >= 0; --d) {
        idx[d] = static_cast<int>(linear % static_cast<std::size_t>(points));
        linear /= static_cast<std::size_t>(points);
    }
    return idx;
}

std::size_t GridSpec::ravel(const std::array<int, kMaxDim>& idx) const {
    std::size_t linear = 0;
    for (int d = 0; d < dim; ++d) linear = linear * points + static_cast<std::size_t>(idx[d]);
    return linear;
}

std::array<double, kMaxDim> GridSpec::position(std::size_t linear) const {
    const auto idx = unravel(linear);
    std::array<double, kMaxDim> x{};
    for (int d = 0; d < dim; ++d) x[d] = coordinate(idx[d]);
    return x;
}

ScalarField::ScalarField(const GridSpec& grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField::ScalarField(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("field size does not match grid");
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("field contains non-finite values");
    }
}

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* what) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument(std::string("grid mismatch: ") + what);
}

namespace {

template <class Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, Op op) {
    require_same_grid(a, b, "pointwise operation");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a[i], b[i]);
    return ScalarField(a.grid(), std::move(out));
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](double x, double y) { return x + y; });
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](double x, double y) { return x - y; });
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](double x, double y) { return x * y; });
}
ScalarField operator*(double c, const ScalarField& a) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * a[i];
    return ScalarField(a.grid(), std::move(out));
}

ScalarField constant_field(const GridSpec& grid, double value) {
    return ScalarField(grid, std::vector<double>(grid.size(), value));
}

double inner(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a, b, "inner product");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum * a.grid().cell_volume();
}

double l2_norm(const ScalarField& u) { return std::sqrt(inner(u, u)); }

double l2_norm(const VectorField& u) {
    double sum = 0.0;
    for (const auto& c : u) sum += inner(c, c);
    return std::sqrt(sum);
}

double max_abs(const ScalarField& u) {
    double m = 0.0;
    for (double v : u.values()) m = std::max(m, std::abs(v));
    return m;
}

ScalarField spectral_derivative(const ScalarField& u, int axis) {
    if (axis < 0 || axis >= u.grid().dim) throw std::invalid_argument("derivative axis out of range");
    return apply_spectral_symbol(
        u, [axis](const std::array<double, kMaxDim>& z) { return std::complex<double>(0.0, z[axis]); });
}

VectorField gradient(const ScalarField& u) {
    VectorField g;
    g.reserve(u.grid().dim);
    for (int d = 0; d < u.grid().dim; ++d) g.push_back(spectral_derivative(u, d));
    return g;
}

double sobolev_norm(const ScalarField& u, SobolevOrder order) {
    const GridSpec& grid = u.grid();
    const Spectrum spec = forward_fft(u);
    double sum = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const auto z = physical_frequency(grid, frequency_index(grid, i));
        double z2 = 0.0;
        for (int d = 0; d < grid.dim; ++d) z2 += z[d] * z[d];
        sum += std::pow(1.0 + z2, order.s) * std::norm(spec[i]);
    }
    const double n = static_cast<double>(grid.size());
    return std::sqrt(sum * std::pow(grid.extent, grid.dim) / (n * n));
}

double integrate(const ScalarField& u) {
    double sum = 0.0;
    for (double v : u.values()) sum += v;
    return sum * u.grid().cell_volume();
}

ScalarField make_field(const GridSpec& grid, const FieldRecipe& recipe, bool strict) {
    std::vector<double> values(grid.size(), 0.0);
    switch (recipe.kind) {
        case FieldKind::zero:
            break;
        case FieldKind::gaussian_bump: {
            if (!(recipe.width > 0.0)) throw std::invalid_argument("bump width must be positive");
            std::array<double, kMaxDim> c{};
            if (!recipe.center.empty()) {
                if (static_cast<int>(recipe.center.size()) != grid.dim)
                    throw std::invalid_argument("bump centre has wrong dimension");
                for (int d = 0; d < grid.dim; ++d) c[d] = recipe.center[d];
            }
            const double half = grid.extent / 2.0;
            const double edge = std::exp(-half * half / (2.0 * recipe.width * recipe.width));
            if (strict && edge > 1e-8)
                throw std::invalid_argument("gaussian bump does not decay inside the cell (edge value " +
                                            std::to_string(edge) + ")");
            for (std::size_t i = 0; i < values.size(); ++i) {
                const auto x = grid.position(i);
                double r2 = 0.0;
                for (int d = 0; d < grid.dim; ++d) {
                    double dx = std::remainder(x[d] - c[d], grid.extent);
                    r2 += dx * dx;
                }
                values[i] = recipe.amplitude * std::exp(-r2 / (2.0 * recipe.width * recipe.width));
            }
            break;
        }
        case FieldKind::mode: {
            if (static_cast<int>(recipe.wave.size()) != grid.dim)
                throw std::invalid_argument("mode wave vector has wrong dimension");
            for (int d = 0; d < grid.dim; ++d) {
                if (2 * std::abs(recipe.wave[d]) >= grid.points)
                    throw std::invalid_argument("mode wave vector is not resolved by the grid");
            }
            const double unit = 2.0 * std::numbers::pi / grid.extent;
            for (std::size_t i = 0; i < values.size(); ++i) {
                const auto x = grid.position(i);
                double phase = 0.0;
                for (int d = 0; d < grid.dim; ++d) phase += unit * recipe.wave[d] * x[d];
                values[i] = recipe.amplitude * std::cos(phase);
            }
            break;
        }
    }
    return ScalarField(grid, std::move(values));
}

namespace {

static_assert(std::endian::native == std::endian::little, "snapshot IO assumes a little-endian host");

template <class T>
void put(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T take(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw std::runtime_error("truncated snapshot");
    return value;
}

}  // namespace

void write_binary(const std::string& path, const ScalarField& u) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write("MUSK", 4);
    put<std::uint32_t>(out, kSnapshotVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(u.grid().dim));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(u.grid().points));
    put<double>(out, u.grid().extent);
    out.write(reinterpret_cast<const char*>(u.data()), static_cast<std::streamsize>(u.size() * sizeof(double)));
    if (!out) throw std::runtime_error("failed writing " + path);
}

ScalarField read_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "MUSK", 4) != 0) throw std::runtime_error(path + ": bad snapshot magic");
    const auto version = take<std::uint32_t>(in);
    if (version != kSnapshotVersion)
        throw std::runtime_error(path + ": unsupported snapshot version " + std::to_string(version));
    const auto dim = take<std::uint32_t>(in);
    const auto points = take<std::uint32_t>(in);
    const auto extent = take<double>(in);
    GridSpec grid(static_cast<int>(dim), static_cast<int>(points), extent);
    std::vector<double> values(grid.size());
    in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!in) throw std::runtime_error(path + ": truncated snapshot payload");
    return ScalarField(grid, std::move(values));
}

void write_csv(std::ostream& out, const ScalarField& u) {
    const GridSpec& grid = u.grid();
    for (int d = 0; d < grid.dim; ++d) out << 'i' << d << ',';
    out << "value\n";
    out.precision(17);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto idx = grid.unravel(i);
        for (int d = 0; d < grid.dim; ++d) out << idx[d] << ',';
        out << u[i] << '\n';
    }
}

}  // namespace muskat
