#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "muskat/profiles.hpp"
#include "muskat/quadrature.hpp"
#include "muskat/sphere.hpp"
#include "support.hpp"

using namespace muskat;
using testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

double eval(const SmoothProfile& phi, std::vector<double> x) { return phi.value(x); }

// Central difference of phi along coordinate i.
double central(const SmoothProfile& phi, std::vector<double> x, int i, double step) {
    auto up = x;
    auto down = x;
    up[i] += step;
    down[i] -= step;
    return (phi.value(up) - phi.value(down)) / (2.0 * step);
}

// Partials match central differences to second order in the step.
void check_partials(const SmoothProfile& phi, Gen& gen) {
    for (int t = 0; t < 10; ++t) {
        std::vector<double> x(static_cast<std::size_t>(phi.arity()));
        for (auto& v : x) v = gen.uniform(0.2, 3.0);
        for (int i = 0; i < phi.arity(); ++i) {
            const double exact = phi.partial(i, x);
            const double e1 = std::abs(central(phi, x, i, 1e-2) - exact);
            const double e2 = std::abs(central(phi, x, i, 5e-3) - exact);
            CHECK(e1 < 1e-3 * std::max(1.0, std::abs(exact)));
            if (e1 > 1e-11) CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
        }
    }
}

}  // namespace

TEST_CASE("base profile is (1 + x)^(-(N+1)/2)") {
    Gen gen(3);
    for (int dim = 1; dim <= 3; ++dim) {
        const ProfilePtr phi = base_profile(dim);
        CHECK(phi->arity() == 1);
        CHECK(phi->role() == ProfileRole::base);
        for (int t = 0; t < 20; ++t) {
            const double x = gen.uniform(0.0, 50.0);
            CHECK(eval(*phi, {x}) == doctest::Approx(std::pow(1.0 + x, -0.5 * (dim + 1))).epsilon(1e-15));
        }
        CHECK(eval(*phi, {0.0}) == 1.0);
        check_partials(*phi, gen);
    }
    CHECK_THROWS_AS((void)base_profile(0), std::invalid_argument);
}

TEST_CASE("profile derivatives are profiles") {
    Gen gen(5);
    const ProfilePtr phi = base_profile(2);
    const ProfilePtr slope = phi->derivative(0);
    REQUIRE(slope);
    CHECK(slope->role() == ProfileRole::derivative);
    for (double x : {0.0, 0.3, 4.0}) {
        CHECK(eval(*slope, {x}) == doctest::Approx(-1.5 * std::pow(1.0 + x, -2.5)).epsilon(1e-15));
        CHECK(slope->partial(0, std::vector<double>{x}) ==
              doctest::Approx(3.75 * std::pow(1.0 + x, -3.5)).epsilon(1e-15));
    }
    check_partials(*slope, gen);
    CHECK_THROWS_AS((void)phi->derivative(1), std::out_of_range);
}

TEST_CASE("constant profile") {
    const ProfilePtr one = constant_profile(2);
    CHECK(one->arity() == 2);
    CHECK(one->role() == ProfileRole::constant);
    CHECK(eval(*one, {3.0, 7.0}) == 1.0);
    CHECK(one->partial(1, std::vector<double>{3.0, 7.0}) == 0.0);
    CHECK(one->derivative(0)->role() == ProfileRole::constant);
    CHECK(to_string(ProfileRole::difference) == "difference");
}

TEST_CASE("batched evaluation equals pointwise evaluation") {
    Gen gen(7);
    const ProfilePtr two = std::make_shared<AffinePowerProfile>(0.5, std::vector<double>{1.0, 2.0}, 1.5,
                                                                ProfileRole::base);
    const ProfilePtr diff = make_difference_profile(base_profile(1), 0);
    for (const ProfilePtr& phi : {base_profile(3), two, diff}) {
        const std::size_t count = 17;
        const int p = phi->arity();
        std::vector<double> args(static_cast<std::size_t>(p) * count);
        for (auto& a : args) a = gen.uniform(0.0, 5.0);
        std::vector<double> out(count);
        phi->evaluate(args, count, out);
        for (std::size_t j = 0; j < count; ++j) {
            std::vector<double> x(static_cast<std::size_t>(p));
            for (int q = 0; q < p; ++q) x[q] = args[q * count + j];
            CHECK(out[j] == phi->value(x));
        }
    }
}

TEST_CASE("difference profile") {
    Gen gen(9);
    SUBCASE("linear profile gives its constant partial") {
        // coef (1 + w.x)^1 is affine in x.
        const ProfilePtr affine = std::make_shared<AffinePowerProfile>(2.0, std::vector<double>{0.5, -1.5}, -1.0,
                                                                       ProfileRole::base);
        const ProfilePtr d1 = make_difference_profile(affine, 1);
        CHECK(d1->arity() == 4);
        CHECK(d1->role() == ProfileRole::difference);
        for (int t = 0; t < 10; ++t) {
            const std::vector<double> xy = gen.vector(4, 0.0, 4.0);
            CHECK(d1->value(xy) == doctest::Approx(-3.0).epsilon(1e-14));
        }
    }
    SUBCASE("equal arguments give the derivative") {
        const ProfilePtr phi = base_profile(2);
        const ProfilePtr d = make_difference_profile(phi, 0);
        for (double x : {0.0, 0.7, 3.0, 25.0}) {
            CHECK(eval(*d, {x, x}) == doctest::Approx(phi->partial(0, std::vector<double>{x})).epsilon(1e-14));
        }
    }
    SUBCASE("generic point against an adaptive quadrature oracle") {
        using boost::math::quadrature::gauss_kronrod;
        for (int dim = 1; dim <= 3; ++dim) {
            const ProfilePtr phi = base_profile(dim);
            const ProfilePtr d = make_difference_profile(phi, 0);
            const double q = 0.5 * (dim + 1);
            const auto integrand = [q](double s) { return -q * std::pow(1.0 + s, -q - 1.0); };
            const double oracle = gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 15, 1e-15);
            CHECK(eval(*d, {1.0, 0.0}) == doctest::Approx(oracle).epsilon(1e-12));
            // Same value as the divided difference (phi(1) - phi(0)) / 1.
            CHECK(eval(*d, {1.0, 0.0}) == doctest::Approx(std::pow(2.0, -q) - 1.0).epsilon(1e-12));
        }
    }
    SUBCASE("partials match central differences") {
        check_partials(*make_difference_profile(base_profile(1), 0), gen);
    }
    SUBCASE("bad index") {
        CHECK_THROWS_AS((void)make_difference_profile(base_profile(1), 1), std::out_of_range);
        CHECK_THROWS_AS((void)make_difference_profile(nullptr, 0), std::invalid_argument);
    }
}

TEST_CASE("Gauss-Legendre rules integrate polynomials of degree 2n - 1") {
    for (int n : {16, 32, 64}) {
        const QuadratureRule rule = gauss_legendre(n, 0.5, 2.0);
        for (int degree : {0, 1, 7, 2 * n - 1}) {
            double sum = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], degree);
            const double exact = (std::pow(2.0, degree + 1) - std::pow(0.5, degree + 1)) / (degree + 1);
            CHECK(sum == doctest::Approx(exact).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS((void)gauss_legendre(10), std::invalid_argument);
}

TEST_CASE("unit sphere areas") {
    CHECK(unit_sphere_area(0) == doctest::Approx(2.0));
    CHECK(unit_sphere_area(1) == doctest::Approx(2.0 * kPi));
    CHECK(unit_sphere_area(2) == doctest::Approx(4.0 * kPi));
    CHECK(unit_sphere_area(3) == doctest::Approx(2.0 * kPi * kPi));
}

TEST_CASE("sphere rules: positive weights, total area, second moment") {
    Gen gen(13);
    for (int dim = 1; dim <= 3; ++dim) {
        const double area = unit_sphere_area(dim - 1);
        std::vector<SphereRule> rules{make_sphere_rule(dim)};
        const auto axis = gen.direction(dim);
        rules.push_back(make_sphere_rule(dim, axis));
        for (const SphereRule& rule : rules) {
            double total = 0.0;
            double second = 0.0;
            bool positive = true;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                positive = positive && rule.weights[q] > 0.0;
                total += rule.weights[q];
                second += rule.weights[q] * rule.nodes[q][0] * rule.nodes[q][0];
                double norm2 = 0.0;
                for (int d = 0; d < dim; ++d) norm2 += rule.nodes[q][d] * rule.nodes[q][d];
                CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-14));
            }
            CHECK(positive);
            CHECK(total == doctest::Approx(area).epsilon(1e-12));
            CHECK(std::abs(second - area / dim) < 1e-10);
        }
    }
    CHECK_THROWS_AS((void)make_sphere_rule(2, std::vector<double>{1.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)make_sphere_rule(4), std::invalid_argument);
}

TEST_CASE("split sphere rule integrates |w.z| to its closed form") {
    // int_{S^{N-1}} |w.z| dw = |S^N| |z| / pi.
    Gen gen(17);
    for (int dim = 1; dim <= 3; ++dim) {
        for (int t = 0; t < 5; ++t) {
            const auto z = gen.vector(dim, -2.0, 2.0);
            const SphereRule rule = make_sphere_rule(dim, z);
            double sum = 0.0;
            double zn = 0.0;
            for (int d = 0; d < dim; ++d) zn += z[d] * z[d];
            zn = std::sqrt(zn);
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                double dot = 0.0;
                for (int d = 0; d < dim; ++d) dot += rule.nodes[q][d] * z[d];
                sum += rule.weights[q] * std::abs(dot);
            }
            CHECK(std::abs(sum - unit_sphere_area(dim) * zn / kPi) < 1e-10 * zn);
        }
    }
}
