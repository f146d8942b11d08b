#include "support.hpp"

#include <cmath>
#include <numbers>

namespace dhm::test {

Vec Gen::vec(Eigen::Index n, double lo, double hi) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
}

Vec Gen::simplex(Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = -std::log(uniform(1e-3, 1.0));
    return v / v.sum();
}

Mat Gen::stochastic(Eigen::Index rows, Eigen::Index cols) {
    Mat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) m.col(j) = simplex(rows);
    return m;
}

Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h) {
    const Vec f0 = f(x);
    Mat j(f0.size(), x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        j.col(i) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return j;
}

double relative_error(const Mat& a, const Mat& b) {
    const double scale = std::max({a.norm(), b.norm(), 1e-300});
    return (a - b).norm() / scale;
}

double angle_diff(double a, double b) {
    double d = std::fmod(a - b, 2.0 * std::numbers::pi);
    if (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
    if (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
    return d;
}

std::vector<Pose> homogeneous_chain(const Pose& base, const std::vector<Joint>& joints) {
    auto rot = [](double a) {
        Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
        m(0, 0) = std::cos(a);
        m(0, 1) = -std::sin(a);
        m(1, 0) = std::sin(a);
        m(1, 1) = std::cos(a);
        return m;
    };
    auto trans = [](double x, double y) {
        Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
        m(0, 2) = x;
        m(1, 2) = y;
        return m;
    };
    Eigen::Matrix3d t = trans(base.x(), base.y()) * rot(base.z());
    double phi = base.z();
    std::vector<Pose> out;
    for (const Joint& j : joints) {
        t = t * rot(j[0]) * trans(j[1], 0.0);
        phi += j[0];  // kept unwrapped to compare with the accumulated angle
        out.emplace_back(t(0, 2), t(1, 2), phi);
    }
    return out;
}

Vec brute_force_efe(const DiscreteModel& model) {
    const auto n = model.s.size();
    const Vec log_c = model.c.array().max(kProbabilityFloor).log().matrix();
    Vec g = Vec::Zero(static_cast<Eigen::Index>(model.policies.size()));
    for (std::size_t k = 0; k < model.policies.size(); ++k) {
        const auto& pol = model.policies[k];
        const int depth = static_cast<int>(pol.size());
        // Every path s_0 → s_1 → … → s_depth, odometer style.
        std::vector<Vec> marginals(static_cast<std::size_t>(depth), Vec::Zero(n));
        std::vector<int> path(static_cast<std::size_t>(depth + 1), 0);
        while (true) {
            double p = model.s[path[0]];
            for (int t = 0; t < depth; ++t) {
                const auto& b = model.b[static_cast<std::size_t>(pol[static_cast<std::size_t>(t)])];
                p *= b(path[static_cast<std::size_t>(t + 1)], path[static_cast<std::size_t>(t)]);
            }
            for (int t = 0; t < depth; ++t) marginals[static_cast<std::size_t>(t)][path[static_cast<std::size_t>(t + 1)]] += p;
            int i = depth;
            while (i >= 0 && ++path[static_cast<std::size_t>(i)] == n) path[static_cast<std::size_t>(i--)] = 0;
            if (i < 0) break;
        }
        double total = 0.0;
        for (const Vec& q : marginals)
            for (Eigen::Index s = 0; s < n; ++s)
                if (q[s] > 0.0) total += q[s] * (std::log(std::max(q[s], kProbabilityFloor)) - log_c[s]);
        g[static_cast<Eigen::Index>(k)] = total;
    }
    return g;
}

DiscreteModel random_model(Gen& g, int policy_length) {
    DiscreteModel m;
    const int n = task::kNumStates;
    m.a_e4 = g.stochastic(3, n);
    m.a_e5 = g.stochastic(2, n);
    m.a_t = g.stochastic(2, n);
    for (int a = 0; a < task::kNumActions; ++a) m.b.push_back(g.stochastic(n, n));
    m.c = g.simplex(n);
    m.d = g.simplex(n);
    m.s = g.simplex(n);
    m.policies = all_policies(task::kNumActions, policy_length);
    m.validate();
    return m;
}

} // namespace dhm::test
