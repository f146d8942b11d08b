#include "support.hpp"

#include "dhm/belief.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace dhm;

namespace {

std::vector<long double> softmax_ld(const Vec& x) {
    long double m = x.maxCoeff(), z = 0.0L;
    std::vector<long double> out(static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) z += out[static_cast<std::size_t>(i)] = std::exp((long double)x[i] - m);
    for (auto& v : out) v /= z;
    return out;
}

} // namespace

TEST_CASE("softmax matches a long-double reference on random logits") {
    test::Gen g(1);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec x = g.vec(g.integer(1, 20), -50.0, 50.0);
        const Vec p = softmax(x);
        const auto ref = softmax_ld(x);
        CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-14));
        for (Eigen::Index i = 0; i < x.size(); ++i)
            CHECK(std::abs(p[i] - static_cast<double>(ref[static_cast<std::size_t>(i)])) < 1e-15);
    }
}

TEST_CASE("softmax is shift invariant and survives extreme logits") {
    test::Gen g(2);
    const Vec x = g.vec(6, -3.0, 3.0);
    CHECK((softmax(x) - softmax(x.array() + 700.0).matrix()).cwiseAbs().maxCoeff() < 1e-14);
    Vec big(3);
    big << 1000.0, -1000.0, 0.0;
    const Vec p = softmax(big);
    CHECK(p.allFinite());
    CHECK(p[0] == doctest::Approx(1.0));
    Vec bad(2);
    bad << 0.0, std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(softmax(bad), NumericalError);
}

TEST_CASE("log_floored applies the categorical floor") {
    Vec p(3);
    p << 0.0, 1e-300, 0.5;
    const Vec l = log_floored(p);
    CHECK(l[0] == doctest::Approx(std::log(kProbabilityFloor)));
    CHECK(l[1] == doctest::Approx(std::log(kProbabilityFloor)));
    CHECK(l[2] == doctest::Approx(std::log(0.5)));
}

TEST_CASE("Euler step") {
    GeneralizedBelief b(Vec::Zero(1), Vec::Zero(1));
    CHECK(integrate_belief(b, Vec::Ones(1), Vec::Zero(1), 0.1).mu[0] == doctest::Approx(0.1));

    Vec mu(2), dmu(2);
    mu << 1, 2;
    dmu << -1, 1;
    const auto r = integrate_belief({mu, Vec::Zero(2)}, dmu, Vec::Ones(2), 0.5);
    CHECK(r.mu[0] == doctest::Approx(0.5));
    CHECK(r.mu[1] == doctest::Approx(2.5));
    CHECK(r.mu_prime[1] == doctest::Approx(0.5));

    CHECK(integrate_belief(b, Vec::Ones(1), Vec::Ones(1), 0.0).mu[0] == 0.0);
}

TEST_CASE("non-finite updates name the unit") {
    GeneralizedBelief b(1);
    Vec inf = Vec::Constant(1, std::numeric_limits<double>::infinity());
    try {
        integrate_belief(b, inf, Vec::Zero(1), 1.0, "L3.extrinsic");
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("L3.extrinsic") != std::string::npos);
    }
}

TEST_CASE("prediction error weighting and energy") {
    Vec obs(2), pred(2), pi(2);
    obs << 1.0, 2.0;
    pred << 0.5, 3.0;
    pi << 2.0, 0.5;
    const auto e = weighted_error(obs, pred, Precision(pi));
    CHECK(e.value[0] == doctest::Approx(0.5));
    CHECK(e.weighted()[1] == doctest::Approx(-0.5));
    CHECK(e.energy() == doctest::Approx(0.5 * (2.0 * 0.25 + 0.5 * 1.0)));
    CHECK_THROWS_AS(Precision(Vec::Constant(1, -1.0)), std::invalid_argument);
    CHECK_THROWS_AS(weighted_error(obs, Vec::Zero(3), Precision(pi)), DimensionError);
}
