#pragma once

// Property generators and independent oracles shared by the unit tests and
// the acceptance run.

#include "dhm/discrete.hpp"
#include "dhm/hybrid_unit.hpp"
#include "dhm/kinematics.hpp"

#include <functional>
#include <random>
#include <vector>

namespace dhm::test {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    Vec vec(Eigen::Index n, double lo, double hi);
    /// Strictly positive probability vector.
    Vec simplex(Eigen::Index n);
    /// Column-stochastic matrix with strictly positive entries.
    Mat stochastic(Eigen::Index rows, Eigen::Index cols);
    Joint joint() { return {uniform(-3.0, 3.0), uniform(0.2, 2.0)}; }
    Pose pose() { return {uniform(-3.0, 3.0), uniform(-3.0, 3.0), uniform(-3.0, 3.0)}; }
    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Central differences, one column per input coordinate.
Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h = 1e-6);

/// ‖a − b‖ / max(‖a‖, ‖b‖), with a tiny floor for all-zero pairs.
double relative_error(const Mat& a, const Mat& b);

/// Angle difference wrapped to (−π, π].
double angle_diff(double a, double b);

/// Serial chain via 3×3 homogeneous transforms: rotate by θ, then translate by l along x.
std::vector<Pose> homogeneous_chain(const Pose& base, const std::vector<Joint>& joints);

/// G per policy by explicit enumeration of every state path; marginals are
/// summed path probabilities rather than rolled-forward beliefs.
Vec brute_force_efe(const DiscreteModel& model);

/// Random column-stochastic A, B, C, D, s on the 6-state layout with the
/// given policy length.
DiscreteModel random_model(Gen& g, int policy_length);

} // namespace dhm::test
