#pragma once

// Partial-conditioning inference: the width objective over mixing weights on
// the simplex {lambda >= 0, sum <= 1}, its analytic gradient, the closed-form
// two-point solution, the projected-gradient minimizer, the resulting
// box-union plausibility intervals, and the baseline methods.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "holderim/gauss.hpp"
#include "holderim/im_core.hpp"
#include "holderim/model.hpp"
#include "holderim/rng.hpp"

namespace holderim {

struct MixingWeights {
    std::vector<double> lambda;

    double sum() const { return std::accumulate(lambda.begin(), lambda.end(), 0.0); }
};

inline constexpr double feasibility_tol = 1e-9;

inline bool is_feasible(std::span<const double> lambda) {
    double s = 0.0;
    for (double l : lambda) {
        if (l < -feasibility_tol) return false;
        s += l;
    }
    return s <= 1.0 + feasibility_tol;
}

inline void require_feasible(std::span<const double> lambda) {
    if (!is_feasible(lambda))
        throw std::invalid_argument("mixing weights infeasible: need lambda >= 0, sum <= 1");
}

/// The coefficients c_j applied to the normalized differences v_j, and the
/// residual SD Delta of the partial regression. On the feasible simplex
/// Delta lies in [1/sqrt(n), 1], so the Gaussian term is always smooth.
struct PredictiveSpec {
    std::vector<double> center_coeff; // c_j = sum_{k>=j} lambda_k/(k+1), nonincreasing
    double delta = 1.0;
};

inline PredictiveSpec predictive_spec(std::span<const double> lambda) {
    require_feasible(lambda);
    const std::size_t m = lambda.size();
    PredictiveSpec spec;
    spec.center_coeff.resize(m);
    double r0 = 1.0; // 1 - sum lambda_k k/(k+1)
    double tail = 0.0;
    for (std::size_t k = m; k-- > 0;) {
        tail += lambda[k] / static_cast<double>(k + 2);
        spec.center_coeff[k] = tail;
        r0 -= lambda[k] * static_cast<double>(k + 1) / static_cast<double>(k + 2);
    }
    double var = r0 * r0;
    for (double c : spec.center_coeff) var += c * c;
    spec.delta = std::sqrt(var);
    return spec;
}

inline double delta_lambda(const MixingWeights& w) {
    return predictive_spec(w.lambda).delta;
}

/// Full interval width 2 sum_k lambda_k/(k+1) sum_{j<=k} B_j + 2 z Delta.
/// Bounds must be in sigma-normalized units.
inline double width_objective(std::span<const double> lambda,
                              std::span<const double> bounds, double z) {
    require_feasible(lambda);
    if (lambda.size() != bounds.size())
        throw std::invalid_argument("width_objective: lambda/bounds size mismatch");
    const std::size_t m = lambda.size();
    double linear = 0.0;
    double prefix_b = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        prefix_b += bounds[k];
        linear += lambda[k] * prefix_b / static_cast<double>(k + 2);
    }
    return 2.0 * linear + 2.0 * z * predictive_spec(lambda).delta;
}

inline double width_objective(const MixingWeights& w, const NeighborView& view, double z) {
    return width_objective(w.lambda, view.bounds, z);
}

/// Analytic gradient of width_objective.
inline std::vector<double> width_gradient(std::span<const double> lambda,
                                          std::span<const double> bounds, double z) {
    require_feasible(lambda);
    if (lambda.size() != bounds.size())
        throw std::invalid_argument("width_gradient: lambda/bounds size mismatch");
    const std::size_t m = lambda.size();
    PredictiveSpec spec = predictive_spec(lambda);
    double r0 = 1.0;
    for (std::size_t k = 0; k < m; ++k)
        r0 -= lambda[k] * static_cast<double>(k + 1) / static_cast<double>(k + 2);

    std::vector<double> grad(m);
    double prefix_b = 0.0;
    double prefix_c = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        prefix_b += bounds[k];
        prefix_c += spec.center_coeff[k];
        double inv = 1.0 / static_cast<double>(k + 2);
        double ddelta = (-static_cast<double>(k + 1) * inv * r0 + inv * prefix_c) / spec.delta;
        grad[k] = 2.0 * (prefix_b * inv + z * ddelta);
    }
    return grad;
}

inline std::vector<double> width_gradient(const MixingWeights& w, const NeighborView& view,
                                          double z) {
    return width_gradient(w.lambda, view.bounds, z);
}

struct TwoPointSolution {
    double lambda_hat = 0.0;
    double width = 0.0;
};

/// Closed-form two-point minimizer of lambda B + 2 z sqrt(1 - lambda + lambda^2/2).
inline TwoPointSolution two_point_optimal(double B, double z) {
    if (!(B >= 0.0)) throw std::invalid_argument("two_point_optimal: B must be >= 0");
    if (!(z > 0.0)) throw std::invalid_argument("two_point_optimal: z must be > 0");
    if (B >= z) return {0.0, 2.0 * z};
    double root = std::sqrt(2.0 * z * z - B * B);
    return {1.0 - B / root, B + root};
}

/// Euclidean projection onto {x >= 0, sum(x) <= 1}. Clip to the nonnegative
/// orthant; if the clipped sum exceeds 1, project onto the unit simplex by
/// the standard sorting method.
inline void project_to_simplex_cap(std::vector<double>& x) {
    double clipped_sum = 0.0;
    for (double v : x) clipped_sum += std::max(v, 0.0);
    if (clipped_sum <= 1.0) {
        for (double& v : x) v = std::max(v, 0.0);
        return;
    }
    std::vector<double> u(x);
    std::sort(u.begin(), u.end(), std::greater<>());
    double cum = 0.0;
    double tau = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        cum += u[j];
        double t = (cum - 1.0) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0) tau = t;
    }
    for (double& v : x) v = std::max(v - tau, 0.0);
}

struct OptimizerOptions {
    double tol = 1e-8;         // absolute objective accuracy target
    int max_iters = 10000;
    int restarts = 0;          // extra random feasible starts
    std::uint64_t seed = 0;    // used only when restarts > 0
};

struct OptimizeResult {
    MixingWeights weights;
    double width = 0.0;
    int iterations = 0;
};

namespace detail {

inline OptimizeResult pgd_minimize(std::span<const double> bounds, double z,
                                   std::vector<double> lambda,
                                   const OptimizerOptions& opts) {
    const std::size_t m = bounds.size();
    project_to_simplex_cap(lambda);
    double f = width_objective(lambda, bounds, z);
    double step = 1.0;
    int iter = 0;
    for (; iter < opts.max_iters; ++iter) {
        std::vector<double> g = width_gradient(lambda, bounds, z);

        // Unit-step gradient mapping as the stationarity measure.
        std::vector<double> probe(m);
        for (std::size_t k = 0; k < m; ++k) probe[k] = lambda[k] - g[k];
        project_to_simplex_cap(probe);
        double pg_norm = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            double d = lambda[k] - probe[k];
            pg_norm += d * d;
        }
        if (std::sqrt(pg_norm) < 1e-9) break;

        // Backtracking line search with the prox-gradient sufficient-decrease rule.
        std::vector<double> trial(m);
        double f_new = f;
        while (true) {
            for (std::size_t k = 0; k < m; ++k) trial[k] = lambda[k] - step * g[k];
            project_to_simplex_cap(trial);
            f_new = width_objective(trial, bounds, z);
            double gd = 0.0, dd = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                double d = trial[k] - lambda[k];
                gd += g[k] * d;
                dd += d * d;
            }
            if (f_new <= f + gd + 0.5 * dd / step + 1e-16) break;
            step *= 0.5;
            if (step < 1e-18) { trial = lambda; f_new = f; break; }
        }

        double decrease = f - f_new;
        lambda.swap(trial);
        f = f_new;
        step = std::min(step * 2.0, 1e6);
        if (decrease >= 0.0 && decrease < 1e-12 && std::sqrt(pg_norm) < 1e-6) break;
    }
    return {MixingWeights{std::move(lambda)}, f, iter};
}

} // namespace detail

/// Minimize the interval width over the feasible simplex. The objective is
/// convex (linear term plus z times the norm of an affine map), so the
/// warm start at lambda = 0 suffices; restarts are available for paranoia.
inline OptimizeResult optimize_weights(std::span<const double> bounds, double z,
                                       const OptimizerOptions& opts = {}) {
    if (bounds.empty())
        throw std::invalid_argument("optimize_weights: need at least one neighbor");
    if (!(z > 0.0)) throw std::invalid_argument("optimize_weights: z must be > 0");
    if (opts.max_iters < 1 || !(opts.tol > 0.0) || opts.restarts < 0)
        throw std::invalid_argument("optimize_weights: invalid options");

    OptimizeResult best =
        detail::pgd_minimize(bounds, z, std::vector<double>(bounds.size(), 0.0), opts);
    if (opts.restarts > 0) {
        SplitMix64 rng(opts.seed);
        for (int r = 0; r < opts.restarts; ++r) {
            std::vector<double> start(bounds.size());
            for (double& v : start) v = rng.uniform() / static_cast<double>(bounds.size());
            OptimizeResult cand = detail::pgd_minimize(bounds, z, std::move(start), opts);
            if (cand.width < best.width) best = std::move(cand);
        }
    }
    return best;
}

inline OptimizeResult optimize_weights(const NeighborView& view, double z,
                                       const OptimizerOptions& opts = {}) {
    return optimize_weights(std::span<const double>(view.bounds), z, opts);
}

namespace detail {

/// Box-union interval in theta-units for fixed weights. diffs/bounds are the
/// raw (response-unit) NeighborView values; normalization by sigma happens here.
/// Every c_j >= 0, so the union endpoints are reached at the v-box corners.
inline PlausibilityInterval interval_from_weights(std::span<const double> lambda,
                                                  const NeighborView& view, double y_i,
                                                  const HolderConfig& cfg, Method method) {
    double z = gauss::critical_value(cfg.alpha).z;
    PredictiveSpec spec = predictive_spec(lambda);
    double center_lo = 0.0, center_hi = 0.0;
    for (std::size_t j = 0; j < lambda.size(); ++j) {
        double d = view.diffs[j] / cfg.sigma;
        double b = view.bounds[j] / cfg.sigma;
        center_lo += spec.center_coeff[j] * (d - b);
        center_hi += spec.center_coeff[j] * (d + b);
    }
    double u_lo = center_lo - z * spec.delta;
    double u_hi = center_hi + z * spec.delta;
    return {y_i - cfg.sigma * u_hi, y_i - cfg.sigma * u_lo, cfg.alpha, method};
}

} // namespace detail

/// Width-minimizing partial-conditioning interval for theta0(t_i). Falls back
/// to the one-point region when point i has no observed neighbor.
inline PlausibilityInterval interval_for_point(const Dataset& data, const HolderConfig& cfg,
                                               std::size_t i,
                                               const OptimizerOptions& opts = {}) {
    cfg.validate();
    if (i >= data.size()) throw std::out_of_range("interval_for_point: index out of range");
    if (!data[i].y) throw std::invalid_argument("interval_for_point: point unobserved");
    if (data.observed_count() < 2) return one_point_region(*data[i].y, cfg);

    NeighborView view = neighbor_view(data, cfg, i);
    std::vector<double> norm_bounds(view.bounds);
    for (double& b : norm_bounds) b /= cfg.sigma;
    double z = gauss::critical_value(cfg.alpha).z;
    OptimizeResult opt = optimize_weights(norm_bounds, z, opts);
    return detail::interval_from_weights(opt.weights.lambda, view, *data[i].y, cfg,
                                         Method::partial_conditioning);
}

enum class BaselineMethod {
    marginal,            // single-observation interval, lambda = 0
    conditional_nearest, // conservative conditioning on the nearest neighbor
    conditional_all,     // conservative conditioning on all neighbors
};

inline PlausibilityInterval baseline_interval(const Dataset& data, const HolderConfig& cfg,
                                              std::size_t i, BaselineMethod method) {
    cfg.validate();
    if (i >= data.size()) throw std::out_of_range("baseline_interval: index out of range");
    if (!data[i].y) throw std::invalid_argument("baseline_interval: point unobserved");

    if (method == BaselineMethod::marginal || data.observed_count() < 2) {
        PlausibilityInterval r = one_point_region(*data[i].y, cfg);
        r.method = Method::marginal;
        return r;
    }

    NeighborView view = neighbor_view(data, cfg, i);
    std::vector<double> lambda(view.neighbor_count(), 0.0);
    Method tag;
    if (method == BaselineMethod::conditional_nearest) {
        lambda.front() = 1.0;
        tag = Method::conservative_conditional;
    } else {
        lambda.back() = 1.0;
        tag = Method::conditional_full;
    }
    return detail::interval_from_weights(lambda, view, *data[i].y, cfg, tag);
}

} // namespace holderim
