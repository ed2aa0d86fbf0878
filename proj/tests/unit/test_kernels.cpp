#include <omp.h>

#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "muskat/kernels.hpp"
#include "muskat/reference.hpp"
#include "muskat/sphere.hpp"
#include "support.hpp"

using namespace muskat;
using testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

OperatorSpec spec(ProfilePtr phi, int n, MultiIndex nu) { return OperatorSpec{std::move(phi), n, nu}; }

MultiIndex index2(int a, int b) { return MultiIndex{a, b, 0}; }

// Value at the centre of the cell (x = 0).
double at_origin(const ScalarField& u) {
    const GridSpec& g = u.grid();
    std::array<int, kMaxDim> mid{};
    for (int d = 0; d < g.dim; ++d) mid[d] = g.points / 2;
    return u[g.ravel(mid)];
}

}  // namespace

TEST_CASE("operator spec validation") {
    const ProfilePtr phi = base_profile(2);
    CHECK_NOTHROW(spec(phi, 0, unit_index(0)).validate(2));
    CHECK_NOTHROW(spec(phi, 1, MultiIndex{}).validate(2));
    CHECK_NOTHROW(spec(phi, 2, index2(1, 2)).validate(2));
    CHECK_THROWS_AS(spec(phi, 0, MultiIndex{}).validate(2), std::invalid_argument);
    CHECK_THROWS_AS(spec(phi, 1, unit_index(1)).validate(2), std::invalid_argument);
    CHECK_THROWS_AS(spec(phi, 0, unit_index(2)).validate(2), std::invalid_argument);
    CHECK_THROWS_AS(spec(phi, -1, MultiIndex{}).validate(2), std::invalid_argument);
    CHECK_THROWS_AS(spec(nullptr, 1, MultiIndex{}).validate(2), std::invalid_argument);
    CHECK(total_order(MultiIndex{1, 2, 3}) == 6);
}

TEST_CASE("offset set: symmetric, punctured, Nyquist face excluded, lexicographic") {
    for (int dim = 1; dim <= 3; ++dim) {
        for (int points : {8, 9}) {
            const GridSpec g(dim, points, 3.0);
            const PVOffsets& off = offsets_for(g);
            const int reach = (points - 1) / 2;
            CHECK(off.size() == static_cast<std::size_t>(std::pow(2 * reach + 1, dim)) - 1);
            std::set<std::array<int, kMaxDim>> seen;
            std::array<int, kMaxDim> previous{-100, -100, -100};
            for (std::size_t j = 0; j < off.size(); ++j) {
                std::array<int, kMaxDim> m{};
                bool origin = true;
                double r2 = 0.0;
                for (int d = 0; d < dim; ++d) {
                    m[d] = off.step(j, d);
                    origin = origin && m[d] == 0;
                    CHECK(2 * std::abs(m[d]) < points);
                    CHECK(off.component(j, d) == m[d] * g.spacing());
                    r2 += off.component(j, d) * off.component(j, d);
                }
                CHECK_FALSE(origin);
                CHECK(previous < m);
                previous = m;
                seen.insert(m);
                CHECK(off.radius(j) == doctest::Approx(std::sqrt(r2)).epsilon(1e-15));
                CHECK(off.factor(j) == extrapolation_factor(m, dim));
                const double expected = off.factor(j) * g.cell_volume() / (unit_sphere_area(dim) * std::pow(off.radius(j), dim));
                CHECK(off.weight(j) == doctest::Approx(expected).epsilon(1e-14));
            }
            for (const auto& m : seen) {
                auto neg = m;
                for (int d = 0; d < dim; ++d) neg[d] = -neg[d];
                CHECK(seen.count(neg) == 1);
            }
        }
    }
}

TEST_CASE("extrapolation factors combine the h and 2h punctured rules") {
    CHECK(extrapolation_factor({2, 0, 0}, 1) == 0.0);
    CHECK(extrapolation_factor({1, 0, 0}, 1) == 2.0);
    CHECK(extrapolation_factor({2, 4, 0}, 2) == -2.0);
    CHECK(extrapolation_factor({2, 3, 0}, 2) == 2.0);
    CHECK(extrapolation_factor({0, 2, -2}, 3) == -6.0);
    for (int dim = 1; dim <= 3; ++dim) {
        const GridSpec g(dim, 9, 1.0);
        const PVOffsets& off = offsets_for(g);
        double total = 0.0;
        for (std::size_t j = 0; j < off.size(); ++j) total += off.factor(j);
        // Width 9: all offsets count 2, the even ones (5^N - 1 of them) lose 2^N.
        const double expected = 2.0 * (std::pow(9.0, dim) - 1.0) - std::pow(2.0, dim) * (std::pow(5.0, dim) - 1.0);
        CHECK(total == doctest::Approx(expected));
    }
}

TEST_CASE("Riesz transform at a = 0 is half the classical symbol") {
    // B_{0,e_1}(0) has symbol -(i/2) z_1 / |z|, so cos(k.x) maps to (k_1 / (2|k|)) sin(k.x).
    const ProfilePtr phi1 = base_profile(1);
    {
        const GridSpec g(1, 64, 10.0);
        for (int k : {1, 3, 8}) {
            const ScalarField wave = make_field(g, FieldRecipe{FieldKind::mode, 1.0, {}, 1.0, {k}});
            const ScalarField out = apply_B(spec(phi1, 0, unit_index(0)), {ScalarField(g)}, {}, wave);
            const ScalarField expected = testing::sample(g, [&](const auto& x) { return 0.5 * std::sin(2.0 * kPi * k * x[0] / 10.0); });
            CHECK(max_abs(out - expected) < 1e-12);
        }
    }
    {
        const GridSpec g(2, 32, 10.0);
        const ProfilePtr phi = base_profile(2);
        for (auto [k1, k2] : {std::pair{1, 0}, std::pair{2, 3}, std::pair{-1, 4}}) {
            const ScalarField wave = make_field(g, FieldRecipe{FieldKind::mode, 1.0, {}, 1.0, {k1, k2}});
            for (int axis = 0; axis < 2; ++axis) {
                const ScalarField out = apply_B(spec(phi, 0, unit_index(axis)), {ScalarField(g)}, {}, wave);
                const double ka = axis == 0 ? k1 : k2;
                const double ratio = ka / (2.0 * std::hypot(k1, k2));
                const ScalarField expected = testing::sample(g, [&](const auto& x) {
                    return ratio * std::sin(2.0 * kPi * (k1 * x[0] + k2 * x[1]) / 10.0);
                });
                CHECK(max_abs(out - expected) < 1e-12);
            }
        }
    }
}

TEST_CASE("linear coefficients and constant density cancel on the symmetric set") {
    // At the cell centre the minimal-image differences of a sampled linear
    // field are exactly A.xi, so the kernel is odd in xi.
    Gen gen(41);
    for (int dim = 1; dim <= 2; ++dim) {
        const GridSpec g(dim, dim == 1 ? 33 : 17, 6.0);
        const ProfilePtr phi = base_profile(dim);
        for (int t = 0; t < 3; ++t) {
            const auto slope = gen.vector(dim, -2.0, 2.0);
            const auto tilt = gen.vector(dim, -2.0, 2.0);
            const ScalarField a = testing::sample(g, [&](const auto& x) {
                double s = 0.0;
                for (int d = 0; d < dim; ++d) s += slope[d] * x[d];
                return s;
            });
            const ScalarField b = testing::sample(g, [&](const auto& x) {
                double s = 0.0;
                for (int d = 0; d < dim; ++d) s += tilt[d] * x[d];
                return s;
            });
            const ScalarField one = constant_field(g, 1.0);
            CHECK(std::abs(at_origin(apply_B(spec(phi, 0, unit_index(0)), {a}, {}, one))) < 1e-13);
            CHECK(std::abs(at_origin(apply_B(spec(phi, 2, unit_index(dim - 1)), {a}, {b, a}, one))) < 1e-13);
            CHECK(std::abs(at_origin(apply_B(spec(phi->derivative(0), 3, MultiIndex{}), {a}, {b, a, b}, one))) < 1e-13);
        }
    }
}

TEST_CASE("parallel apply_B agrees with the dense double-loop oracle") {
    Gen gen(43);
    for (int dim = 1; dim <= 2; ++dim) {
        const GridSpec g(dim, dim == 1 ? 48 : 14, 8.0);
        const ProfilePtr phi = base_profile(dim);
        const ProfilePtr diff = make_difference_profile(phi, 0);
        const ScalarField a = gen.band_limited(g, 2, 0.8);
        const ScalarField a2 = gen.band_limited(g, 2, 0.8);
        const ScalarField b1 = gen.band_limited(g, 3);
        const ScalarField b2 = gen.band_limited(g, 3);
        const ScalarField beta = gen.band_limited(g, 4);
        struct Case {
            OperatorSpec op;
            std::vector<ScalarField> a;
            std::vector<ScalarField> b;
        };
        const std::vector<Case> cases{
            {spec(phi, 0, unit_index(0)), {a}, {}},
            {spec(phi, 1, MultiIndex{}), {a}, {b1}},
            {spec(phi, 2, unit_index(dim - 1)), {a}, {b1, b2}},
            {spec(phi->derivative(0), 3, MultiIndex{}), {a}, {b1, a, b2}},
            {spec(constant_profile(), 0, MultiIndex{3, 0, 0}), {a}, {}},
            {spec(diff, 2, unit_index(0)), {a, a2}, {a - a2, a + a2}},
        };
        for (const Case& c : cases) {
            const ScalarField fast = apply_B(c.op, c.a, c.b, beta);
            const ScalarField slow = reference::apply_B(c.op, c.a, c.b, beta);
            CHECK(testing::rel_diff(fast, slow) < 1e-12);
        }
    }
}

TEST_CASE("frozen regression values") {
    // Produced by the dense reference oracle on this fixed case.
    const GridSpec g(1, 32, 12.0);
    const ScalarField a = testing::Gen::gaussian(g, 0.6, 1.1, {0.3});
    const ScalarField beta = testing::Gen::gaussian(g, 1.0, 0.9, {-0.4});
    const ProfilePtr phi = base_profile(1);
    const ScalarField riesz = apply_B(spec(phi, 0, unit_index(0)), {a}, {}, beta);
    const ScalarField stretch = apply_B(spec(phi, 1, MultiIndex{}), {a}, {a}, beta);
    const ScalarField oracle_riesz = reference::apply_B(spec(phi, 0, unit_index(0)), {a}, {}, beta);
    const ScalarField oracle_stretch = reference::apply_B(spec(phi, 1, MultiIndex{}), {a}, {a}, beta);
    CHECK(at_origin(riesz) == doctest::Approx(at_origin(oracle_riesz)).epsilon(1e-12));
    CHECK(at_origin(stretch) == doctest::Approx(at_origin(oracle_stretch)).epsilon(1e-12));
    CHECK(at_origin(riesz) == doctest::Approx(0.14274406492063058).epsilon(1e-11));
    CHECK(at_origin(stretch) == doctest::Approx(0.083107055137780383).epsilon(1e-11));
}

TEST_CASE("difference identity") {
    // B(a) - B(a~) = sum_i B^{phi^i}(a, a~)[a_i - a~_i, a_i + a~_i, b, beta].
    Gen gen(47);
    for (int dim = 1; dim <= 2; ++dim) {
        const GridSpec g(dim, dim == 1 ? 64 : 16, 8.0);
        const ProfilePtr phi = base_profile(dim);
        const ProfilePtr diff = make_difference_profile(phi, 0);
        for (int t = 0; t < 3; ++t) {
            const ScalarField a = gen.band_limited(g, 2, 1.0);
            const ScalarField other = gen.band_limited(g, 2, 1.0);
            const ScalarField b = gen.band_limited(g, 3);
            const ScalarField beta = gen.band_limited(g, 3);
            for (int n : {0, 1}) {
                const MultiIndex nu = n == 0 ? unit_index(0) : MultiIndex{};
                std::vector<ScalarField> slots;
                if (n == 1) slots.push_back(b);
                const ScalarField lhs = apply_B(spec(phi, n, nu), {a}, slots, beta) -
                                        apply_B(spec(phi, n, nu), {other}, slots, beta);
                std::vector<ScalarField> wide{a - other, a + other};
                wide.insert(wide.end(), slots.begin(), slots.end());
                const ScalarField rhs = apply_B(spec(diff, n + 2, nu), {a, other}, wide, beta);
                CHECK(testing::rel_diff(lhs, rhs) < 1e-10);
            }
        }
    }
}

TEST_CASE("multilinear and symmetric in the difference slots") {
    Gen gen(53);
    const GridSpec g(2, 16, 8.0);
    const ProfilePtr phi = base_profile(2);
    const ScalarField a = gen.band_limited(g, 2, 0.7);
    const ScalarField b1 = gen.band_limited(g, 3);
    const ScalarField b2 = gen.band_limited(g, 3);
    const ScalarField b3 = gen.band_limited(g, 3);
    const ScalarField beta = gen.band_limited(g, 3);
    const OperatorSpec three = spec(phi, 3, MultiIndex{});
    const ScalarField base = apply_B(three, {a}, {b1, b2, b3}, beta);
    CHECK(testing::bit_equal(base, apply_B(three, {a}, {b3, b1, b2}, beta)));
    CHECK(testing::bit_equal(base, apply_B(three, {a}, {b2, b3, b1}, beta)));
    const OperatorSpec two = spec(phi, 2, unit_index(1));
    CHECK(testing::bit_equal(apply_B(two, {a}, {b1, b2}, beta), apply_B(two, {a}, {b2, b1}, beta)));

    const double c = -2.75;
    CHECK(testing::rel_diff(apply_B(three, {a}, {c * b1, b2, b3}, beta), c * base) < 1e-14);
    const OperatorSpec one = spec(phi, 1, MultiIndex{});
    const ScalarField sum = apply_B(one, {a}, {b1 + b2}, beta);
    CHECK(testing::rel_diff(sum, apply_B(one, {a}, {b1}, beta) + apply_B(one, {a}, {b2}, beta)) < 1e-13);
    CHECK(testing::rel_diff(apply_B(one, {a}, {b1}, c * beta), c * apply_B(one, {a}, {b1}, beta)) < 1e-14);
}

TEST_CASE("apply_B output does not depend on the thread count") {
    Gen gen(59);
    const GridSpec g(2, 20, 8.0);
    const ProfilePtr phi = base_profile(2);
    const ScalarField a = gen.band_limited(g, 2, 0.7);
    const ScalarField b = gen.band_limited(g, 3);
    const ScalarField beta = gen.band_limited(g, 3);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const ScalarField serial = apply_B(spec(phi, 2, unit_index(0)), {a}, {b, a}, beta);
    const ScalarField serial_linear = apply_B(spec(phi, 1, MultiIndex{}), {a}, {b}, beta);
    omp_set_num_threads(4);
    const ScalarField threaded = apply_B(spec(phi, 2, unit_index(0)), {a}, {b, a}, beta);
    const ScalarField threaded_linear = apply_B(spec(phi, 1, MultiIndex{}), {a}, {b}, beta);
    omp_set_num_threads(saved);
    CHECK(testing::bit_equal(serial, threaded));
    CHECK(testing::bit_equal(serial_linear, threaded_linear));
}

TEST_CASE("apply_B argument errors") {
    const GridSpec g(1, 16, 4.0);
    const ScalarField z(g);
    const ProfilePtr phi = base_profile(1);
    CHECK_THROWS_AS((void)apply_B(spec(phi, 0, MultiIndex{}), {z}, {}, z), std::invalid_argument);
    CHECK_THROWS_AS((void)apply_B(spec(phi, 0, unit_index(0)), {z, z}, {}, z), std::invalid_argument);
    CHECK_THROWS_AS((void)apply_B(spec(phi, 1, MultiIndex{}), {z}, {}, z), std::invalid_argument);
    CHECK_THROWS_AS((void)apply_B(spec(phi, 0, unit_index(0)), {ScalarField(GridSpec(1, 16, 5.0))}, {}, z),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)commutator_correction(g, unit_index(0), z, z), std::invalid_argument);
}

TEST_CASE("chain rule") {
    SUBCASE("translation invariance at a = 0") {
        Gen gen(61);
        for (int dim = 1; dim <= 2; ++dim) {
            const GridSpec g(dim, dim == 1 ? 64 : 24, 8.0);
            const ScalarField beta = gen.band_limited(g, 3);
            const OperatorSpec riesz = spec(base_profile(dim), 0, unit_index(0));
            CHECK(chain_rule_residual(riesz, ScalarField(g), {}, beta) <= 1e-8);
        }
    }
    SUBCASE("Gaussian data converge under refinement") {
        for (int dim = 1; dim <= 2; ++dim) {
            const double extent = dim == 1 ? 40.0 : 20.0;
            const int coarse_points = dim == 1 ? 64 : 32;
            double residual[2];
            for (int level = 0; level < 2; ++level) {
                const GridSpec g(dim, coarse_points << level, extent);
                const ScalarField f = make_field(g, FieldRecipe{FieldKind::gaussian_bump, 0.5, {}, 1.5, {}});
                const ScalarField beta = testing::Gen::gaussian(g, 1.0, 1.2, std::vector<double>(dim, 0.7));
                residual[level] = chain_rule_residual(spec(base_profile(dim), 1, MultiIndex{}), f, {f}, beta);
            }
            MESSAGE("dim " << dim << ": " << residual[0] << " -> " << residual[1]);
            CHECK(std::log2(residual[0] / residual[1]) >= 1.0);
        }
    }
    SUBCASE("needs a one-argument profile with a derivative") {
        const GridSpec g(1, 16, 4.0);
        const ScalarField z(g);
        CHECK_THROWS_AS((void)chain_rule_residual(spec(make_difference_profile(base_profile(1), 0), 0, unit_index(0)),
                                                  z, {}, z),
                        std::invalid_argument);
    }
}
