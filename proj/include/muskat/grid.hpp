// Periodic lattice, scalar fields on it, and the field utilities every
// other module builds on.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace muskat {

inline constexpr int kMaxDim = 3;

// Torus of side `extent` with `points` samples per axis standing in for R^dim.
// Sample j sits at (j - points/2) * spacing, so a field centred at the origin
// is centred in the cell.
struct GridSpec {
    int dim = 1;
    int points = 8;
    double extent = 1.0;

    GridSpec() = default;
    GridSpec(int dim, int points, double extent);

    [[nodiscard]] double spacing() const { return extent / points; }
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] double coordinate(int j) const { return (j - points / 2) * spacing(); }
    [[nodiscard]] double cell_volume() const;

    // Row-major, axis 0 slowest.
    [[nodiscard]] std::array<int, kMaxDim> unravel(std::size_t linear) const;
    [[nodiscard]] std::size_t ravel(const std::array<int, kMaxDim>& idx) const;
    [[nodiscard]] std::array<double, kMaxDim> position(std::size_t linear) const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Signed integer wave vector; physical frequency is 2*pi*k/extent.
using FrequencyIndex = std::array<int, kMaxDim>;

struct SobolevOrder {
    double s = 0.0;
};

// Real field on a grid; values are finite and sized grid.size().
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const GridSpec& grid);  // zero field
    ScalarField(const GridSpec& grid, std::vector<double> values);

    [[nodiscard]] const GridSpec& grid() const { return grid_; }
    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] const double* data() const { return values_.data(); }

private:
    GridSpec grid_;
    std::vector<double> values_;
};

using VectorField = std::vector<ScalarField>;

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* what);

// Pointwise algebra. All arguments must share a grid.
[[nodiscard]] ScalarField operator+(const ScalarField& a, const ScalarField& b);
[[nodiscard]] ScalarField operator-(const ScalarField& a, const ScalarField& b);
[[nodiscard]] ScalarField operator*(double c, const ScalarField& a);
[[nodiscard]] ScalarField operator*(const ScalarField& a, const ScalarField& b);
[[nodiscard]] ScalarField constant_field(const GridSpec& grid, double value);

// Discrete L2 norm and inner product with cell volume h^N.
[[nodiscard]] double l2_norm(const ScalarField& u);
[[nodiscard]] double l2_norm(const VectorField& u);
[[nodiscard]] double inner(const ScalarField& a, const ScalarField& b);
[[nodiscard]] double max_abs(const ScalarField& u);

// Spectral calculus. Nyquist modes are dropped from odd symbols.
[[nodiscard]] ScalarField spectral_derivative(const ScalarField& u, int axis);
[[nodiscard]] VectorField gradient(const ScalarField& u);
[[nodiscard]] double sobolev_norm(const ScalarField& u, SobolevOrder s);
[[nodiscard]] double integrate(const ScalarField& u);

enum class FieldKind { gaussian_bump, mode, zero };

struct FieldRecipe {
    FieldKind kind = FieldKind::zero;
    double amplitude = 1.0;
    std::vector<double> center;  // gaussian_bump, defaults to origin
    double width = 1.0;          // gaussian_bump standard deviation
    std::vector<int> wave;       // mode: integer wave vector
};

// gaussian_bump: amplitude * exp(-|x-c|^2 / (2 width^2)) using minimal-image
// distance. In strict mode a bump whose value on the cell boundary exceeds
// 1e-8 of its peak is rejected.
// mode: amplitude * cos(2 pi k.x / extent).
[[nodiscard]] ScalarField make_field(const GridSpec& grid, const FieldRecipe& recipe,
                                     bool strict = true);

// Binary snapshot: "MUSK", u32 version, u32 dim, u32 points, f64 extent,
// then points^dim f64 values, all little-endian, row-major.
inline constexpr std::uint32_t kSnapshotVersion = 1;
void write_binary(const std::string& path, const ScalarField& u);
[[nodiscard]] ScalarField read_binary(const std::string& path);
void write_csv(std::ostream& out, const ScalarField& u);

}  // namespace muskat
