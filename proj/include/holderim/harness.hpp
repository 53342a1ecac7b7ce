#pragma once

// Seeded Monte Carlo engine: width comparisons across methods, empirical
// coverage estimation, and whole-curve interval fitting (observed points plus
// Holder-widened envelopes at unobserved design points).

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "holderim/im_core.hpp"
#include "holderim/model.hpp"
#include "holderim/partial_cond.hpp"
#include "holderim/rng.hpp"

namespace holderim {

enum class TruthFn { sqrt_fn, zero_fn };
enum class Design { uniform_random, equally_spaced };

inline double truth_value(TruthFn f, double t) {
    return f == TruthFn::sqrt_fn ? std::sqrt(t) : 0.0;
}

struct ExperimentConfig {
    int n_points = 2;
    int trials = 100;
    std::uint64_t seed = 1234;
    TruthFn truth = TruthFn::sqrt_fn;
    Design design = Design::uniform_random;
    HolderConfig cfg;

    void validate() const {
        if (n_points < 1) throw std::invalid_argument("ExperimentConfig: n_points >= 1");
        if (trials < 1) throw std::invalid_argument("ExperimentConfig: trials >= 1");
        cfg.validate();
    }
};

struct TrialRecord {
    int trial = 0;
    int point_index = 0;
    std::vector<double> bounds;
    double width_marginal = 0.0;
    double width_mixture = 0.0;
    double width_cond_nearest = 0.0;
    double width_cond_all = 0.0;
    bool covered_marginal = false;
    bool covered_mixture = false;
    bool covered_cond_nearest = false;
    bool covered_cond_all = false;
};

namespace detail {

inline unsigned thread_count() {
    if (const char* env = std::getenv("HOLDER_IM_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Deterministic parallel loop over trials; fn(trial) must only touch
/// trial-indexed slots.
template <class F>
inline void parallel_trials(int trials, F&& fn) {
    unsigned nthreads = std::min<unsigned>(thread_count(), static_cast<unsigned>(trials));
    if (nthreads <= 1) {
        for (int t = 0; t < trials; ++t) fn(t);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(nthreads);
    for (unsigned w = 0; w < nthreads; ++w) {
        workers.emplace_back([&, w] {
            for (int t = static_cast<int>(w); t < trials; t += static_cast<int>(nthreads))
                fn(t);
        });
    }
    for (auto& th : workers) th.join();
}

/// One simulated dataset: design points, responses, and the true means.
struct SimData {
    Dataset data;
    std::vector<double> theta;
};

inline SimData simulate_trial(const ExperimentConfig& ec, int trial) {
    SplitMix64 rng(substream_seed(ec.seed, static_cast<std::uint64_t>(trial)));
    const int n = ec.n_points;
    std::vector<double> ts(n);
    if (ec.design == Design::uniform_random) {
        for (double& t : ts) t = rng.uniform();
        std::sort(ts.begin(), ts.end());
    } else {
        for (int i = 0; i < n; ++i)
            ts[i] = n == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(n - 1);
    }
    std::vector<DataPoint> pts(n);
    std::vector<double> theta(n);
    for (int i = 0; i < n; ++i) {
        theta[i] = truth_value(ec.truth, ts[i]);
        pts[i] = {ts[i], theta[i] + ec.cfg.sigma * rng.normal()};
    }
    return {Dataset(std::move(pts)), std::move(theta)};
}

} // namespace detail

/// Two-point width/coverage experiment. The mixture interval comes from the
/// closed-form lambda-hat; the target is the second point.
inline std::vector<TrialRecord> run_two_point(const ExperimentConfig& ec) {
    ec.validate();
    if (ec.n_points != 2) throw std::invalid_argument("run_two_point: n_points must be 2");

    const double z = gauss::critical_value(ec.cfg.alpha).z;
    const double sigma = ec.cfg.sigma;
    std::vector<TrialRecord> out(ec.trials);

    detail::parallel_trials(ec.trials, [&](int trial) {
        detail::SimData sim = detail::simulate_trial(ec, trial);
        const std::size_t i = 1;
        NeighborView view = neighbor_view(sim.data, ec.cfg, i);
        double b_norm = view.bounds[0] / sigma;

        TrialRecord rec;
        rec.trial = trial;
        rec.point_index = static_cast<int>(i);
        rec.bounds = view.bounds;
        TwoPointSolution sol = two_point_optimal(b_norm, z);
        rec.width_marginal = sigma * 2.0 * z;
        rec.width_mixture = sigma * sol.width;
        rec.width_cond_nearest = sigma * (b_norm + gauss::sqrt2 * z);
        rec.width_cond_all = rec.width_cond_nearest;

        double y_i = *sim.data[i].y;
        std::vector<double> lam{sol.lambda_hat};
        PlausibilityInterval mix = detail::interval_from_weights(
            lam, view, y_i, ec.cfg, Method::partial_conditioning);
        PlausibilityInterval marg = one_point_region(y_i, ec.cfg);
        PlausibilityInterval cond =
            baseline_interval(sim.data, ec.cfg, i, BaselineMethod::conditional_nearest);

        double truth = sim.theta[i];
        rec.covered_marginal = marg.contains(truth);
        rec.covered_mixture = mix.contains(truth);
        rec.covered_cond_nearest = cond.contains(truth);
        rec.covered_cond_all = rec.covered_cond_nearest;
        out[trial] = std::move(rec);
    });
    return out;
}

/// General-n experiment: one record per (trial, observed point).
inline std::vector<TrialRecord> run_n_point(const ExperimentConfig& ec,
                                            const OptimizerOptions& opts = {}) {
    ec.validate();
    if (ec.n_points < 3) throw std::invalid_argument("run_n_point: n_points must be >= 3");

    const int n = ec.n_points;
    std::vector<TrialRecord> out(static_cast<std::size_t>(ec.trials) * n);

    detail::parallel_trials(ec.trials, [&](int trial) {
        detail::SimData sim = detail::simulate_trial(ec, trial);
        for (int i = 0; i < n; ++i) {
            TrialRecord rec;
            rec.trial = trial;
            rec.point_index = i;
            NeighborView view = neighbor_view(sim.data, ec.cfg, static_cast<std::size_t>(i));
            rec.bounds = view.bounds;

            PlausibilityInterval mix =
                interval_for_point(sim.data, ec.cfg, static_cast<std::size_t>(i), opts);
            PlausibilityInterval marg =
                baseline_interval(sim.data, ec.cfg, i, BaselineMethod::marginal);
            PlausibilityInterval cond1 =
                baseline_interval(sim.data, ec.cfg, i, BaselineMethod::conditional_nearest);
            PlausibilityInterval condm =
                baseline_interval(sim.data, ec.cfg, i, BaselineMethod::conditional_all);

            rec.width_marginal = marg.width();
            rec.width_mixture = mix.width();
            rec.width_cond_nearest = cond1.width();
            rec.width_cond_all = condm.width();

            double truth = sim.theta[i];
            rec.covered_marginal = marg.contains(truth);
            rec.covered_mixture = mix.contains(truth);
            rec.covered_cond_nearest = cond1.contains(truth);
            rec.covered_cond_all = condm.contains(truth);
            out[static_cast<std::size_t>(trial) * n + i] = std::move(rec);
        }
    });
    return out;
}

struct CoverageResult {
    double rate = 0.0;
    double se = 0.0;
    int trials = 0;
};

/// Empirical coverage of theta0(t_i) at a designated target point (the second
/// point for n = 2, the middle point otherwise), one target per trial.
inline CoverageResult coverage_estimate(const ExperimentConfig& ec, Method method,
                                        const OptimizerOptions& opts = {}) {
    ec.validate();
    if (ec.n_points < 1) throw std::invalid_argument("coverage_estimate: n_points >= 1");
    const std::size_t target =
        ec.n_points == 2 ? 1 : static_cast<std::size_t>(ec.n_points / 2);

    std::vector<char> covered(ec.trials, 0);
    detail::parallel_trials(ec.trials, [&](int trial) {
        detail::SimData sim = detail::simulate_trial(ec, trial);
        double truth = sim.theta[target];
        PlausibilityInterval iv;
        switch (method) {
            case Method::one_point:
                iv = one_point_region(*sim.data[target].y, ec.cfg);
                break;
            case Method::marginal:
                iv = baseline_interval(sim.data, ec.cfg, target, BaselineMethod::marginal);
                break;
            case Method::partial_conditioning:
                iv = interval_for_point(sim.data, ec.cfg, target, opts);
                break;
            case Method::conservative_conditional:
                iv = baseline_interval(sim.data, ec.cfg, target,
                                       BaselineMethod::conditional_nearest);
                break;
            case Method::conditional_full:
                iv = baseline_interval(sim.data, ec.cfg, target,
                                       BaselineMethod::conditional_all);
                break;
        }
        covered[trial] = iv.contains(truth) ? 1 : 0;
    });

    double hits = 0.0;
    for (char c : covered) hits += c;
    double rate = hits / ec.trials;
    double se = std::sqrt(rate * (1.0 - rate) / ec.trials);
    return {rate, se, ec.trials};
}

/// Holder-widened interval at an arbitrary t from the flanking observed
/// points: the intersection of each flank's interval widened by M|t-t_j|^gamma.
/// One-sided at the edges; an exact hit on an observed t returns its interval.
inline PlausibilityInterval envelope_at(double t, std::span<const double> obs_t,
                                        std::span<const PlausibilityInterval> obs_iv,
                                        const HolderConfig& cfg) {
    if (obs_t.empty()) throw std::invalid_argument("envelope_at: no observed points");
    auto widened = [&](std::size_t j) {
        double b = pairwise_bound(cfg, t, obs_t[j]);
        PlausibilityInterval iv = obs_iv[j];
        iv.lower -= b;
        iv.upper += b;
        return iv;
    };
    // obs_t ascending; find first index with obs_t >= t
    std::size_t r = std::lower_bound(obs_t.begin(), obs_t.end(), t) - obs_t.begin();
    if (r < obs_t.size() && obs_t[r] == t) return obs_iv[r];
    if (r == 0) return widened(0);
    if (r == obs_t.size()) return widened(obs_t.size() - 1);
    PlausibilityInterval left = widened(r - 1);
    PlausibilityInterval right = widened(r);
    PlausibilityInterval iv;
    iv.lower = std::max(left.lower, right.lower);
    iv.upper = std::min(left.upper, right.upper);
    iv.alpha = cfg.alpha;
    iv.method = Method::partial_conditioning;
    return iv;
}

/// Pointwise intervals for every design point of the dataset: observed points
/// by partial conditioning, unobserved points by the flanking envelope rule.
inline std::vector<std::pair<double, PlausibilityInterval>>
fit_curve(const Dataset& data, const HolderConfig& cfg, const OptimizerOptions& opts = {}) {
    cfg.validate();
    if (data.observed_count() == 0)
        throw std::invalid_argument("fit_curve: no observed points");

    std::vector<double> obs_t;
    std::vector<PlausibilityInterval> obs_iv;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!data[i].y) continue;
        obs_t.push_back(data[i].t);
        obs_iv.push_back(interval_for_point(data, cfg, i, opts));
    }

    std::vector<std::pair<double, PlausibilityInterval>> out;
    out.reserve(data.size());
    std::size_t next_obs = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i].y) {
            out.emplace_back(data[i].t, obs_iv[next_obs++]);
        } else {
            out.emplace_back(data[i].t, envelope_at(data[i].t, obs_t, obs_iv, cfg));
        }
    }
    return out;
}

} // namespace holderim
