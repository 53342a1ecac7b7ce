#pragma once

// Basic inferential-model machinery for a single observation, plus the exact
// conditional construction for two coincident design points (B = 0):
// plausibility of singleton assertions, belief, and plausibility regions.

#include <cmath>
#include <stdexcept>

#include "holderim/gauss.hpp"
#include "holderim/model.hpp"

namespace holderim {

enum class Method {
    marginal,
    conditional_full,
    conservative_conditional,
    partial_conditioning,
    one_point,
};

inline const char* method_name(Method m) {
    switch (m) {
        case Method::marginal: return "marginal";
        case Method::conditional_full: return "conditional_full";
        case Method::conservative_conditional: return "conservative_conditional";
        case Method::partial_conditioning: return "partial_conditioning";
        case Method::one_point: return "one_point";
    }
    return "?";
}

struct PlausibilityInterval {
    double lower = 0.0;
    double upper = 0.0;
    double alpha = 0.0;
    Method method = Method::one_point;

    double width() const { return upper - lower; }
    bool contains(double v) const { return lower <= v && v <= upper; }
};

/// A hypothesis that the mean function takes the value theta0 at design point t.
struct SingletonAssertion {
    double t = 0.0;
    double theta0 = 0.0;
};

/// pl(theta0) = 2 (1 - Phi(|theta0 - y1| / sigma))
inline double one_point_plausibility(double y1, const HolderConfig& cfg, double theta0) {
    cfg.validate();
    return 2.0 * (1.0 - gauss::phi(std::abs(theta0 - y1) / cfg.sigma));
}

/// Singleton assertions carry zero belief under the default random set.
inline double one_point_belief(double /*y1*/, const HolderConfig& cfg,
                               const SingletonAssertion& /*assertion*/) {
    cfg.validate();
    return 0.0;
}

/// The alpha-superlevel set of the one-point plausibility: an exact
/// 100(1-alpha)% interval y1 +/- sigma z_{1-alpha/2}.
inline PlausibilityInterval one_point_region(double y1, const HolderConfig& cfg) {
    cfg.validate();
    double z = gauss::critical_value(cfg.alpha).z;
    return {y1 - cfg.sigma * z, y1 + cfg.sigma * z, cfg.alpha, Method::one_point};
}

/// Conditional plausibility for the two-point problem when the pairwise bound
/// is exactly zero: 2 [1 - Phi(sqrt(2) |theta0 - (y1+y2)/2| / sigma)].
inline double conditional_two_point_plausibility(double y1, double y2,
                                                 const HolderConfig& cfg, double theta0,
                                                 double pairwise_b = 0.0) {
    cfg.validate();
    if (pairwise_b > 0.0)
        throw std::invalid_argument(
            "conditional_two_point_plausibility: exact only at B = 0");
    double center = 0.5 * (y1 + y2);
    return 2.0 * (1.0 - gauss::phi(gauss::sqrt2 * std::abs(theta0 - center) / cfg.sigma));
}

} // namespace holderim
