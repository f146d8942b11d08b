#pragma once

// Hybrid unit: a continuous belief whose first-order prior is a mixture of
// potential trajectories, weighted by discrete hidden causes. Top-down the
// causes are averaged into a trajectory prior; bottom-up the fit of each
// trajectory is scored by Bayesian model reduction and accumulated as log
// evidence over a replanning window.

#include "dhm/belief.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace dhm {

/// Hypothesised dynamics f_m(mu) for one discrete cause, a reduced model of
/// the unit's full first-order prior.
struct PotentialTrajectory {
    std::string name;
    std::function<Vec(const Vec&)> dynamics;
    std::function<Mat(const Vec&)> jacobian;
    /// Π_{x,m}. Left empty, the owning unit fills in its own dynamics precision.
    Precision prior_precision;

    /// f(x) = K·x.
    static PotentialTrajectory linear(std::string name, Mat k);
    /// f(x) ≡ 0.
    static PotentialTrajectory stay(std::string name, Eigen::Index dim);
};

struct HiddenCauses {
    Vec prior;         // H_v
    Vec posterior;     // v
    Vec log_evidence;  // l, reset at each replanning boundary

    static HiddenCauses from_prior(Vec prior);
    static HiddenCauses uniform(Eigen::Index m);

    Eigen::Index size() const { return prior.size(); }
    void reset_evidence() { log_evidence.setZero(); }
};

/// Σ_m v_m f_m(mu).
Vec bma_trajectory(const Vec& causes, std::span<const PotentialTrajectory> trajectories, const Vec& mu);

/// Σ_m v_m ∂f_m/∂mu.
Mat bma_jacobian(const Vec& causes, std::span<const PotentialTrajectory> trajectories, const Vec& mu);

struct GaussianPosterior {
    Vec mean;
    Vec precision;
};

/// Posterior of a reduced model under the Laplace approximation, diagonal
/// precisions:  P_m = P − Π + Π_m,  μ_m = P_m⁻¹ (Pμ − Πη + Π_m η_m).
/// Throws std::domain_error("degenerate reduced precision") if P_m ≤ 0.
GaussianPosterior reduced_posterior(const Vec& full_post_mean, const Precision& full_post_prec,
                                    const Vec& full_prior_mean, const Precision& full_prior_prec,
                                    const Vec& reduced_prior_mean, const Precision& reduced_prior_prec);

/// ½ (μ_mᵀP_mμ_m − η_mᵀΠ_mη_m − μᵀPμ + ηᵀΠη) for one reduced model.
double log_evidence_increment(const Vec& full_post_mean, const Precision& full_post_prec,
                              const Vec& full_prior_mean, const Precision& full_prior_prec,
                              const Vec& reduced_prior_mean, const Precision& reduced_prior_prec);

/// Adds dt times the per-trajectory increment to causes.log_evidence.
/// The reduced prior means are f_m(mu), re-evaluated at the call.
void accumulate_log_evidence(HiddenCauses& causes, std::span<const PotentialTrajectory> trajectories,
                             const Vec& mu, const Vec& mu_prime, const Vec& full_prior_mean,
                             const Precision& full_prior_prec, const Precision& full_post_prec, double dt);

/// v = σ(ln H + l); the result is stored in causes.posterior and returned.
const Vec& posterior_causes(HiddenCauses& causes);

/// A belief plus its potential trajectories and hidden causes.
class HybridUnit {
public:
    HybridUnit() = default;
    HybridUnit(std::string name, GeneralizedBelief belief, std::vector<PotentialTrajectory> trajectories,
               Precision dynamics_precision);

    const std::string& name() const { return name_; }
    Eigen::Index dim() const { return belief_.dim(); }
    Eigen::Index num_causes() const { return causes_.size(); }

    GeneralizedBelief& belief() { return belief_; }
    const GeneralizedBelief& belief() const { return belief_; }
    HiddenCauses& causes() { return causes_; }
    const HiddenCauses& causes() const { return causes_; }
    const std::vector<PotentialTrajectory>& trajectories() const { return trajectories_; }
    const Precision& dynamics_precision() const { return dynamics_precision_; }

    /// η' = Σ_m v_m f_m(μ) with the current posterior.
    Vec trajectory_prior() const;
    /// ε_x = μ' − η'.
    PredictionError dynamics_error() const;
    /// ∂η'ᵀ Π_x ε_x, the backward dynamics force on the 0th order.
    Vec backward_dynamics_force() const;
    /// f_m(μ) for every trajectory.
    std::vector<Vec> trajectory_predictions() const;

    /// Accumulates one step of evidence given the full posterior precision P
    /// of the first-order belief.
    void accumulate(const Precision& posterior_precision, double dt);
    /// Recomputes the posterior from prior and accumulated evidence.
    const Vec& refresh_posterior() { return posterior_causes(causes_); }
    /// New top-down prior; clears the evidence and resets the posterior to it.
    void set_prior(const Vec& prior);

    /// Integrates the belief, labelling any numerical failure with the unit name.
    void integrate(const Vec& dmu, const Vec& dmu_prime, double dt);

private:
    std::string name_;
    GeneralizedBelief belief_;
    std::vector<PotentialTrajectory> trajectories_;
    HiddenCauses causes_;
    Precision dynamics_precision_;
};

} // namespace dhm
