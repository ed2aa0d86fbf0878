// Smooth profiles phi: [0, inf)^p -> R that weight the generalised Riesz
// kernels.
#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace muskat {

enum class ProfileRole { base, derivative, difference, constant };

[[nodiscard]] std::string to_string(ProfileRole role);

class SmoothProfile {
public:
    virtual ~SmoothProfile() = default;

    [[nodiscard]] virtual int arity() const = 0;
    [[nodiscard]] virtual ProfileRole role() const = 0;
    [[nodiscard]] virtual double value(std::span<const double> x) const = 0;
    [[nodiscard]] virtual double partial(int i, std::span<const double> x) const = 0;

    // d_i phi as a profile in its own right, or null if not closed-form.
    [[nodiscard]] virtual std::shared_ptr<const SmoothProfile> derivative(int i) const;

    // Evaluates `count` argument tuples stored argument-major:
    // args[q * count + j] is coordinate q of tuple j.
    virtual void evaluate(std::span<const double> args, std::size_t count, std::span<double> out) const;
};

using ProfilePtr = std::shared_ptr<const SmoothProfile>;

// coef * (1 + w . x)^(-exponent). Closed under differentiation, which makes it
// cover the base profile, its derivatives and the constant profile.
class AffinePowerProfile final : public SmoothProfile {
public:
    AffinePowerProfile(double coef, std::vector<double> weights, double exponent, ProfileRole role);

    int arity() const override { return static_cast<int>(weights_.size()); }
    ProfileRole role() const override { return role_; }
    double value(std::span<const double> x) const override;
    double partial(int i, std::span<const double> x) const override;
    std::shared_ptr<const SmoothProfile> derivative(int i) const override;
    void evaluate(std::span<const double> args, std::size_t count, std::span<double> out) const override;

    [[nodiscard]] double coefficient() const { return coef_; }
    [[nodiscard]] double exponent() const { return exponent_; }

private:
    double power(double base) const;

    double coef_;
    std::vector<double> weights_;
    double exponent_;
    int twice_exponent_;  // >= 0 when the exponent is a half-integer, else -1
    ProfileRole role_;
};

// phi^i(x, y) = int_0^1 d_i phi(s x + (1 - s) y) ds, 16-point Gauss-Legendre.
class DifferenceProfile final : public SmoothProfile {
public:
    DifferenceProfile(ProfilePtr base, int index);

    int arity() const override { return 2 * base_->arity(); }
    ProfileRole role() const override { return ProfileRole::difference; }
    double value(std::span<const double> x) const override;
    double partial(int i, std::span<const double> x) const override;

private:
    ProfilePtr base_;
    int index_;
    ProfilePtr base_partial_;
};

// (1 + x)^(-(dim + 1) / 2): the weight of the Muskat kernels in dimension dim.
[[nodiscard]] ProfilePtr base_profile(int dim);
[[nodiscard]] ProfilePtr constant_profile(int arity = 1);
[[nodiscard]] ProfilePtr make_difference_profile(const ProfilePtr& base, int index);

}  // namespace muskat
