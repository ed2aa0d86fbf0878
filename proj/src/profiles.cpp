#include <cmath>
#include <stdexcept>

#include "muskat/profiles.hpp"
#include "muskat/quadrature.hpp"

namespace muskat {

std::string to_string(ProfileRole role) {
    switch (role) {
        case ProfileRole::base: return "base";
        case ProfileRole::derivative: return "derivative";
        case ProfileRole::difference: return "difference";
        case ProfileRole::constant: return "constant";
    }
    return "unknown";
}

std::shared_ptr<const SmoothProfile> SmoothProfile::derivative(int) const { return nullptr; }

void SmoothProfile::evaluate(std::span<const double> args, std::size_t count, std::span<double> out) const {
    const int p = arity();
    std::vector<double> x(static_cast<std::size_t>(p));
    for (std::size_t j = 0; j < count; ++j) {
        for (int q = 0; q < p; ++q) x[q] = args[q * count + j];
        out[j] = value(x);
    }
}

AffinePowerProfile::AffinePowerProfile(double coef, std::vector<double> weights, double exponent,
                                       ProfileRole role)
    : coef_(coef), weights_(std::move(weights)), exponent_(exponent), twice_exponent_(-1), role_(role) {
    if (weights_.empty()) throw std::invalid_argument("profile needs arity >= 1");
    const double twice = 2.0 * exponent_;
    if (twice >= 0.0 && twice == std::floor(twice) && twice < 64.0) twice_exponent_ = static_cast<int>(twice);
}

double AffinePowerProfile::power(double base) const {
    if (twice_exponent_ < 0) return std::pow(base, -exponent_);
    double whole = 1.0;
    for (int k = 0; k < twice_exponent_ / 2; ++k) whole *= base;
    double r = 1.0 / whole;
    if (twice_exponent_ % 2 == 1) r /= std::sqrt(base);
    return r;
}

double AffinePowerProfile::value(std::span<const double> x) const {
    double base = 1.0;
    for (std::size_t q = 0; q < weights_.size(); ++q) base += weights_[q] * x[q];
    return coef_ * power(base);
}

double AffinePowerProfile::partial(int i, std::span<const double> x) const {
    return derivative(i)->value(x);
}

std::shared_ptr<const SmoothProfile> AffinePowerProfile::derivative(int i) const {
    if (i < 0 || i >= arity()) throw std::out_of_range("profile partial index");
    const ProfileRole role = role_ == ProfileRole::constant ? ProfileRole::constant : ProfileRole::derivative;
    return std::make_shared<AffinePowerProfile>(-exponent_ * weights_[i] * coef_, weights_, exponent_ + 1.0, role);
}

void AffinePowerProfile::evaluate(std::span<const double> args, std::size_t count, std::span<double> out) const {
    const std::size_t p = weights_.size();
    for (std::size_t j = 0; j < count; ++j) {
        double base = 1.0;
        for (std::size_t q = 0; q < p; ++q) base += weights_[q] * args[q * count + j];
        out[j] = coef_ * power(base);
    }
}

namespace {

const QuadratureRule& unit_interval_rule() {
    static const QuadratureRule rule = gauss_legendre(16, 0.0, 1.0);
    return rule;
}

}  // namespace

DifferenceProfile::DifferenceProfile(ProfilePtr base, int index) : base_(std::move(base)), index_(index) {
    if (!base_) throw std::invalid_argument("difference profile needs a base profile");
    if (index_ < 0 || index_ >= base_->arity()) throw std::out_of_range("difference profile index");
    base_partial_ = base_->derivative(index_);
}

double DifferenceProfile::value(std::span<const double> xy) const {
    const int p = base_->arity();
    const auto& rule = unit_interval_rule();
    std::vector<double> point(static_cast<std::size_t>(p));
    double sum = 0.0;
    for (std::size_t n = 0; n < rule.nodes.size(); ++n) {
        const double s = rule.nodes[n];
        for (int q = 0; q < p; ++q) point[q] = s * xy[q] + (1.0 - s) * xy[p + q];
        sum += rule.weights[n] * (base_partial_ ? base_partial_->value(point) : base_->partial(index_, point));
    }
    return sum;
}

double DifferenceProfile::partial(int i, std::span<const double> xy) const {
    if (!base_partial_) throw std::logic_error("difference profile partials need a closed-form base derivative");
    const int p = base_->arity();
    if (i < 0 || i >= 2 * p) throw std::out_of_range("profile partial index");
    const int j = i % p;
    const bool first = i < p;
    const auto& rule = unit_interval_rule();
    std::vector<double> point(static_cast<std::size_t>(p));
    double sum = 0.0;
    for (std::size_t n = 0; n < rule.nodes.size(); ++n) {
        const double s = rule.nodes[n];
        for (int q = 0; q < p; ++q) point[q] = s * xy[q] + (1.0 - s) * xy[p + q];
        const double chain = first ? s : 1.0 - s;
        sum += rule.weights[n] * chain * base_partial_->partial(j, point);
    }
    return sum;
}

ProfilePtr base_profile(int dim) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("base profile dimension must be 1, 2 or 3");
    return std::make_shared<AffinePowerProfile>(1.0, std::vector<double>{1.0}, 0.5 * (dim + 1), ProfileRole::base);
}

ProfilePtr constant_profile(int arity) {
    return std::make_shared<AffinePowerProfile>(1.0, std::vector<double>(static_cast<std::size_t>(arity), 0.0), 0.0,
                                                ProfileRole::constant);
}

ProfilePtr make_difference_profile(const ProfilePtr& base, int index) {
    return std::make_shared<DifferenceProfile>(base, index);
}

}  // namespace muskat
