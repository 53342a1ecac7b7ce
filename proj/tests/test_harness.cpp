#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "holderim/gauss.hpp"
#include "holderim/harness.hpp"

using namespace holderim;

namespace {

ExperimentConfig two_point_config() {
    ExperimentConfig ec;
    ec.n_points = 2;
    ec.trials = 100;
    ec.seed = 1234;
    ec.truth = TruthFn::sqrt_fn;
    ec.design = Design::uniform_random;
    ec.cfg = {1.0, 0.5, 1.0, 0.05};
    return ec;
}

} // namespace

TEST_CASE("run_two_point reproducibility and figure properties") {
    auto ec = two_point_config();
    auto recs = run_two_point(ec);
    REQUIRE(recs.size() == 100);

    const double z = gauss::critical_value(0.05).z;
    for (const auto& r : recs) {
        CHECK(std::abs(r.width_marginal - 2 * z) < 1e-12);
        CHECK(r.width_mixture <= r.width_cond_nearest + 1e-12);
        CHECK(r.width_mixture <= r.width_marginal + 1e-12);
        if (r.bounds[0] >= z) CHECK(r.width_mixture == r.width_marginal);
    }

    auto again = run_two_point(ec);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(recs[i].bounds[0] == again[i].bounds[0]);
        CHECK(recs[i].width_mixture == again[i].width_mixture);
        CHECK(recs[i].covered_mixture == again[i].covered_mixture);
    }

    ec.seed = 999;
    auto other = run_two_point(ec);
    bool any_diff = false;
    for (std::size_t i = 0; i < recs.size(); ++i)
        any_diff |= recs[i].bounds[0] != other[i].bounds[0];
    CHECK(any_diff);
}

TEST_CASE("run_n_point per-trial dominance") {
    ExperimentConfig ec = two_point_config();
    ec.n_points = 4;
    ec.trials = 30;
    auto recs = run_n_point(ec);
    REQUIRE(recs.size() == 30u * 4u);
    for (const auto& r : recs) {
        double floor = std::min({r.width_marginal, r.width_cond_nearest, r.width_cond_all});
        CHECK(r.width_mixture <= floor + 1e-9);
        CHECK(r.width_mixture > 0.0);
    }
}

TEST_CASE("equispaced design with huge M degenerates to the marginal") {
    ExperimentConfig ec = two_point_config();
    ec.n_points = 3;
    ec.trials = 10;
    ec.design = Design::equally_spaced;
    ec.cfg.M = 1e6;
    auto recs = run_n_point(ec);
    const double z = gauss::critical_value(0.05).z;
    for (const auto& r : recs) CHECK(std::abs(r.width_mixture - 2 * z) < 1e-8);
}

TEST_CASE("coverage_estimate sanity") {
    ExperimentConfig ec = two_point_config();
    ec.n_points = 1;
    ec.trials = 4000;

    SUBCASE("alpha = 0.5 one-point coverage near 0.5") {
        ec.cfg.alpha = 0.5;
        auto res = coverage_estimate(ec, Method::one_point);
        CHECK(std::abs(res.rate - 0.5) <= 3.0 * res.se + 1e-12);
    }
    SUBCASE("trials = 1 degenerate") {
        ec.trials = 1;
        auto res = coverage_estimate(ec, Method::one_point);
        CHECK((res.rate == 0.0 || res.rate == 1.0));
        CHECK(res.se == 0.0);
    }
    SUBCASE("partial conditioning conservative at n=2") {
        ec.n_points = 2;
        ec.trials = 2000;
        auto res = coverage_estimate(ec, Method::partial_conditioning);
        CHECK(res.rate >= 0.95 - 3.0 * res.se);
    }
}

TEST_CASE("envelope_at") {
    HolderConfig cfg{1.0, 0.5, 1.0, 0.05};
    Dataset d({{0.2, 0.5}, {0.8, 1.0}});
    std::vector<double> obs_t{0.2, 0.8};
    std::vector<PlausibilityInterval> obs_iv{interval_for_point(d, cfg, 0),
                                             interval_for_point(d, cfg, 1)};

    SUBCASE("exact hit on an observed point returns its interval") {
        auto iv = envelope_at(0.2, obs_t, obs_iv, cfg);
        CHECK(iv.lower == obs_iv[0].lower);
        CHECK(iv.upper == obs_iv[0].upper);
    }
    SUBCASE("one-sided rule outside the observed range") {
        double t = 0.05;
        double b = pairwise_bound(cfg, t, 0.2);
        auto iv = envelope_at(t, obs_t, obs_iv, cfg);
        CHECK(iv.lower == doctest::Approx(obs_iv[0].lower - b));
        CHECK(iv.upper == doctest::Approx(obs_iv[0].upper + b));
    }
    SUBCASE("interior rule intersects the widened flanking intervals") {
        double t = 0.5;
        double bl = pairwise_bound(cfg, t, 0.2), br = pairwise_bound(cfg, t, 0.8);
        auto iv = envelope_at(t, obs_t, obs_iv, cfg);
        CHECK(iv.lower ==
              doctest::Approx(std::max(obs_iv[0].lower - bl, obs_iv[1].lower - br)));
        CHECK(iv.upper ==
              doctest::Approx(std::min(obs_iv[0].upper + bl, obs_iv[1].upper + br)));
    }
}

TEST_CASE("fit_curve") {
    HolderConfig cfg{1.0, 0.5, 1.0, 0.05};

    SUBCASE("single observed point: one-point region widened one-sidedly") {
        Dataset d({{0.3, 1.0}, {0.6, std::nullopt}});
        auto curve = fit_curve(d, cfg);
        REQUIRE(curve.size() == 2);
        auto base = one_point_region(1.0, cfg);
        double b = pairwise_bound(cfg, 0.6, 0.3);
        CHECK(curve[1].second.lower == doctest::Approx(base.lower - b));
        CHECK(curve[1].second.upper == doctest::Approx(base.upper + b));
    }

    SUBCASE("envelope widens with distance inside a half-gap") {
        // Model-generated data; within the half-gap nearest to one observed
        // point the envelope width is nondecreasing in the distance.
        SplitMix64 rng(2024);
        std::vector<DataPoint> pts;
        for (int i = 0; i < 6; ++i) {
            double t = rng.uniform();
            pts.push_back({t, std::sqrt(t) + rng.normal()});
        }
        Dataset d(pts);
        auto curve = fit_curve(d, cfg);
        std::vector<double> obs_t;
        std::vector<PlausibilityInterval> obs_iv;
        for (std::size_t i = 0; i < d.size(); ++i) {
            obs_t.push_back(d[i].t);
            obs_iv.push_back(curve[i].second);
        }
        for (std::size_t i = 0; i + 1 < obs_t.size(); ++i) {
            double gap = obs_t[i + 1] - obs_t[i];
            double prev = obs_iv[i].width();
            for (double f = 0.05; f <= 0.45; f += 0.05) {
                double w = envelope_at(obs_t[i] + f * gap, obs_t, obs_iv, cfg).width();
                CHECK(w >= prev - 1e-9);
                prev = w;
            }
        }
    }

    SUBCASE("empty / fully-unobserved dataset rejected") {
        Dataset d({{0.3, std::nullopt}});
        CHECK_THROWS_AS(fit_curve(d, cfg), std::invalid_argument);
    }
}
