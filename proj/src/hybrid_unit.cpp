#include "dhm/hybrid_unit.hpp"

#include <stdexcept>

namespace dhm {

PotentialTrajectory PotentialTrajectory::linear(std::string name, Mat k) {
    if (k.rows() != k.cols()) throw DimensionError("PotentialTrajectory::linear: K must be square");
    PotentialTrajectory t;
    t.name = std::move(name);
    t.dynamics = [k](const Vec& x) -> Vec { return k * x; };
    t.jacobian = [k](const Vec&) -> Mat { return k; };
    return t;
}

PotentialTrajectory PotentialTrajectory::stay(std::string name, Eigen::Index dim) {
    return linear(std::move(name), Mat::Zero(dim, dim));
}

HiddenCauses HiddenCauses::from_prior(Vec prior) {
    HiddenCauses c;
    c.log_evidence = Vec::Zero(prior.size());
    c.prior = std::move(prior);
    c.posterior = softmax(log_floored(c.prior));
    return c;
}

HiddenCauses HiddenCauses::uniform(Eigen::Index m) {
    return from_prior(Vec::Constant(m, 1.0 / static_cast<double>(m)));
}

Vec bma_trajectory(const Vec& causes, std::span<const PotentialTrajectory> trajectories, const Vec& mu) {
    if (static_cast<Eigen::Index>(trajectories.size()) != causes.size())
        throw DimensionError("bma_trajectory: number of trajectories differs from number of causes");
    Vec eta = Vec::Zero(mu.size());
    for (std::size_t m = 0; m < trajectories.size(); ++m) {
        const Vec f = trajectories[m].dynamics(mu);
        if (f.size() != mu.size()) throw DimensionError("bma_trajectory: f_m has wrong dimension");
        eta += causes[static_cast<Eigen::Index>(m)] * f;
    }
    return eta;
}

Mat bma_jacobian(const Vec& causes, std::span<const PotentialTrajectory> trajectories, const Vec& mu) {
    if (static_cast<Eigen::Index>(trajectories.size()) != causes.size())
        throw DimensionError("bma_jacobian: number of trajectories differs from number of causes");
    Mat j = Mat::Zero(mu.size(), mu.size());
    for (std::size_t m = 0; m < trajectories.size(); ++m)
        j += causes[static_cast<Eigen::Index>(m)] * trajectories[m].jacobian(mu);
    return j;
}

GaussianPosterior reduced_posterior(const Vec& full_post_mean, const Precision& full_post_prec,
                                    const Vec& full_prior_mean, const Precision& full_prior_prec,
                                    const Vec& reduced_prior_mean, const Precision& reduced_prior_prec) {
    const auto n = full_post_mean.size();
    if (full_post_prec.dim() != n || full_prior_mean.size() != n || full_prior_prec.dim() != n ||
        reduced_prior_mean.size() != n || reduced_prior_prec.dim() != n)
        throw DimensionError("reduced_posterior: dimension mismatch");

    const Vec& p = full_post_prec.values();
    const Vec& pi = full_prior_prec.values();
    const Vec& pi_m = reduced_prior_prec.values();
    GaussianPosterior out;
    out.precision = p - pi + pi_m;
    if ((out.precision.array() <= 0.0).any()) throw std::domain_error("degenerate reduced precision");
    out.mean = (p.cwiseProduct(full_post_mean) - pi.cwiseProduct(full_prior_mean) +
                pi_m.cwiseProduct(reduced_prior_mean))
                   .cwiseQuotient(out.precision);
    return out;
}

double log_evidence_increment(const Vec& full_post_mean, const Precision& full_post_prec,
                              const Vec& full_prior_mean, const Precision& full_prior_prec,
                              const Vec& reduced_prior_mean, const Precision& reduced_prior_prec) {
    const GaussianPosterior r = reduced_posterior(full_post_mean, full_post_prec, full_prior_mean, full_prior_prec,
                                                  reduced_prior_mean, reduced_prior_prec);
    const double reduced_post = r.mean.dot(r.precision.cwiseProduct(r.mean));
    const double reduced_prior = reduced_prior_mean.dot(reduced_prior_prec.weight(reduced_prior_mean));
    const double full_post = full_post_mean.dot(full_post_prec.weight(full_post_mean));
    const double full_prior = full_prior_mean.dot(full_prior_prec.weight(full_prior_mean));
    return 0.5 * (reduced_post - reduced_prior - full_post + full_prior);
}

void accumulate_log_evidence(HiddenCauses& causes, std::span<const PotentialTrajectory> trajectories,
                             const Vec& mu, const Vec& mu_prime, const Vec& full_prior_mean,
                             const Precision& full_prior_prec, const Precision& full_post_prec, double dt) {
    if (static_cast<Eigen::Index>(trajectories.size()) != causes.size())
        throw DimensionError("accumulate_log_evidence: number of trajectories differs from number of causes");
    if (dt == 0.0) return;
    for (std::size_t m = 0; m < trajectories.size(); ++m) {
        const auto& t = trajectories[m];
        const Precision& reduced_prec = t.prior_precision.dim() ? t.prior_precision : full_prior_prec;
        causes.log_evidence[static_cast<Eigen::Index>(m)] +=
            dt * log_evidence_increment(mu_prime, full_post_prec, full_prior_mean, full_prior_prec, t.dynamics(mu),
                                        reduced_prec);
    }
}

const Vec& posterior_causes(HiddenCauses& causes) {
    if (causes.log_evidence.size() != causes.prior.size())
        throw DimensionError("posterior_causes: evidence and prior differ in size");
    causes.posterior = softmax(log_floored(causes.prior) + causes.log_evidence);
    return causes.posterior;
}

HybridUnit::HybridUnit(std::string name, GeneralizedBelief belief, std::vector<PotentialTrajectory> trajectories,
                       Precision dynamics_precision)
    : name_(std::move(name)),
      belief_(std::move(belief)),
      trajectories_(std::move(trajectories)),
      causes_(HiddenCauses::uniform(static_cast<Eigen::Index>(trajectories_.size()))),
      dynamics_precision_(std::move(dynamics_precision)) {
    if (trajectories_.empty()) throw std::invalid_argument("HybridUnit '" + name_ + "': needs at least one trajectory");
    if (dynamics_precision_.dim() != belief_.dim())
        throw DimensionError("HybridUnit '" + name_ + "': dynamics precision dimension mismatch");
    for (auto& t : trajectories_) {
        if (t.prior_precision.dim() == 0) t.prior_precision = dynamics_precision_;
        if (t.prior_precision.dim() != belief_.dim())
            throw DimensionError("HybridUnit '" + name_ + "': trajectory precision dimension mismatch");
    }
}

Vec HybridUnit::trajectory_prior() const {
    return bma_trajectory(causes_.posterior, trajectories_, belief_.mu);
}

PredictionError HybridUnit::dynamics_error() const {
    return {belief_.mu_prime - trajectory_prior(), dynamics_precision_};
}

Vec HybridUnit::backward_dynamics_force() const {
    const Mat j = bma_jacobian(causes_.posterior, trajectories_, belief_.mu);
    return j.transpose() * dynamics_error().weighted();
}

std::vector<Vec> HybridUnit::trajectory_predictions() const {
    std::vector<Vec> out;
    out.reserve(trajectories_.size());
    for (const auto& t : trajectories_) out.push_back(t.dynamics(belief_.mu));
    return out;
}

void HybridUnit::accumulate(const Precision& posterior_precision, double dt) {
    accumulate_log_evidence(causes_, trajectories_, belief_.mu, belief_.mu_prime, trajectory_prior(),
                            dynamics_precision_, posterior_precision, dt);
}

void HybridUnit::set_prior(const Vec& prior) {
    if (prior.size() != causes_.size()) throw DimensionError("HybridUnit '" + name_ + "': prior size mismatch");
    causes_.prior = prior;
    causes_.reset_evidence();
    posterior_causes(causes_);
}

void HybridUnit::integrate(const Vec& dmu, const Vec& dmu_prime, double dt) {
    belief_ = integrate_belief(belief_, dmu, dmu_prime, dt, name_);
}

} // namespace dhm
