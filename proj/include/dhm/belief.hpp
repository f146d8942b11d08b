#pragma once

// Numerical substrate shared by every unit: generalized beliefs (value and
// first temporal derivative), diagonal precisions, prediction errors, softmax
// and the Euler belief integrator.

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace dhm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Raised when a belief update produces a non-finite value, or when an input
/// that must be finite is not. The message names the offending unit.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised on inconsistent vector/matrix shapes.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Belief over a continuous hidden state in generalized coordinates,
/// restricted to two temporal orders.
struct GeneralizedBelief {
    Vec mu;
    Vec mu_prime;

    GeneralizedBelief() = default;
    explicit GeneralizedBelief(Eigen::Index dim)
        : mu(Vec::Zero(dim)), mu_prime(Vec::Zero(dim)) {}
    GeneralizedBelief(Vec mu0, Vec mu_prime0);

    Eigen::Index dim() const { return mu.size(); }
    bool finite() const { return mu.allFinite() && mu_prime.allFinite(); }
};

/// Diagonal precision (inverse variance). Entries are nonnegative.
class Precision {
public:
    Precision() = default;
    explicit Precision(Vec values);
    static Precision scalar(double value, Eigen::Index dim);

    const Vec& values() const { return values_; }
    Eigen::Index dim() const { return values_.size(); }

    /// Elementwise Π·x.
    Vec weight(const Vec& x) const;

private:
    Vec values_;
};

struct PredictionError {
    Vec value;
    Precision precision;

    /// Π·ε, the quantity every update rule consumes.
    Vec weighted() const { return precision.weight(value); }
    /// ½ εᵀΠε.
    double energy() const { return 0.5 * value.dot(weighted()); }
};

/// Max-subtracted softmax. Throws NumericalError on non-finite input.
Vec softmax(const Vec& logits);

/// Elementwise log with the categorical floor applied first.
Vec log_floored(const Vec& p);

/// Floor applied before any log of a categorical entry.
inline constexpr double kProbabilityFloor = 1e-16;

/// One Euler step: mu += dt·dmu, mu_prime += dt·dmu_prime.
/// `unit` is only used to label the diagnostic if the result is not finite.
GeneralizedBelief integrate_belief(const GeneralizedBelief& b, const Vec& dmu, const Vec& dmu_prime,
                                   double dt, const std::string& unit = "belief");

/// ε = observed − predicted, carrying `precision`.
PredictionError weighted_error(const Vec& observed, const Vec& predicted, const Precision& precision);

} // namespace dhm
