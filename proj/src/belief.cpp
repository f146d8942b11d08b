#include "dhm/belief.hpp"

#include <cmath>
#include <sstream>

namespace dhm {

GeneralizedBelief::GeneralizedBelief(Vec mu0, Vec mu_prime0)
    : mu(std::move(mu0)), mu_prime(std::move(mu_prime0)) {
    if (mu.size() != mu_prime.size())
        throw DimensionError("GeneralizedBelief: mu and mu_prime differ in dimension");
}

Precision::Precision(Vec values) : values_(std::move(values)) {
    for (Eigen::Index i = 0; i < values_.size(); ++i)
        if (!(values_[i] >= 0.0)) throw std::invalid_argument("Precision: entries must be finite and >= 0");
}

Precision Precision::scalar(double value, Eigen::Index dim) {
    return Precision(Vec::Constant(dim, value));
}

Vec Precision::weight(const Vec& x) const {
    if (x.size() != values_.size()) throw DimensionError("Precision::weight: dimension mismatch");
    return values_.cwiseProduct(x);
}

Vec softmax(const Vec& logits) {
    if (logits.size() == 0) throw DimensionError("softmax: empty input");
    if (!logits.allFinite()) throw NumericalError("softmax: non-finite logit");
    const Vec shifted = (logits.array() - logits.maxCoeff()).exp().matrix();
    return shifted / shifted.sum();
}

Vec log_floored(const Vec& p) {
    return p.array().max(kProbabilityFloor).log().matrix();
}

GeneralizedBelief integrate_belief(const GeneralizedBelief& b, const Vec& dmu, const Vec& dmu_prime,
                                   double dt, const std::string& unit) {
    if (dmu.size() != b.dim() || dmu_prime.size() != b.dim())
        throw DimensionError("integrate_belief: dimension mismatch in " + unit);
    GeneralizedBelief out{b.mu + dt * dmu, b.mu_prime + dt * dmu_prime};
    if (!out.finite()) {
        std::ostringstream msg;
        msg << "non-finite belief update in unit '" << unit << "'";
        throw NumericalError(msg.str());
    }
    return out;
}

PredictionError weighted_error(const Vec& observed, const Vec& predicted, const Precision& precision) {
    if (observed.size() != predicted.size() || observed.size() != precision.dim())
        throw DimensionError("weighted_error: dimension mismatch");
    return {observed - predicted, precision};
}

} // namespace dhm
