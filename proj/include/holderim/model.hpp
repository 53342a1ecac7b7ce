#pragma once

// Domain types for the constrained many-normal-means problem: the Holder
// neighborhood parameters, the design/response dataset, and the per-target
// neighbor geometry every solver consumes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace holderim {

struct HolderConfig {
    double M = 1.0;      // Holder constant, response units
    double gamma = 0.5;  // Holder exponent in (0,1]
    double sigma = 1.0;  // noise SD, response units
    double alpha = 0.05; // significance level in (0,1)

    void validate() const {
        if (!(M >= 0.0)) throw std::invalid_argument("HolderConfig: M must be >= 0");
        if (!(gamma > 0.0 && gamma <= 1.0))
            throw std::invalid_argument("HolderConfig: gamma must lie in (0,1]");
        if (!(sigma > 0.0)) throw std::invalid_argument("HolderConfig: sigma must be > 0");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("HolderConfig: alpha must lie in (0,1)");
    }
};

/// |theta(t_i) - theta(t_j)| <= M |t_i - t_j|^gamma
inline double pairwise_bound(const HolderConfig& cfg, double t_i, double t_j) {
    cfg.validate();
    double d = std::abs(t_i - t_j);
    if (d == 0.0) return 0.0;
    return cfg.M * std::pow(d, cfg.gamma);
}

struct DataPoint {
    double t = 0.0;
    std::optional<double> y; // empty = unobserved design point
};

/// Ordered design points; canonicalized to ascending t on construction.
/// Duplicate t values are rejected.
class Dataset {
public:
    Dataset() = default;

    explicit Dataset(std::vector<DataPoint> pts) : points_(std::move(pts)) {
        std::sort(points_.begin(), points_.end(),
                  [](const DataPoint& a, const DataPoint& b) { return a.t < b.t; });
        for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
            if (points_[i].t == points_[i + 1].t)
                throw std::invalid_argument("Dataset: duplicate design point t = " +
                                            std::to_string(points_[i].t));
        }
        for (const auto& p : points_)
            if (p.t < 0.0 || p.t > 1.0) outside_unit_interval_ = true;
    }

    std::size_t size() const { return points_.size(); }
    const DataPoint& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<DataPoint>& points() const { return points_; }

    bool outside_unit_interval() const { return outside_unit_interval_; }

    std::size_t observed_count() const {
        std::size_t n = 0;
        for (const auto& p : points_) n += p.y.has_value();
        return n;
    }

    std::vector<std::size_t> observed_indices() const {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < points_.size(); ++i)
            if (points_[i].y) idx.push_back(i);
        return idx;
    }

private:
    std::vector<DataPoint> points_;
    bool outside_unit_interval_ = false; // t outside [0,1]: accepted, flagged
};

/// The other observed points sorted by ascending distance from the target,
/// with the Holder bounds B_j = M * distance_j^gamma and the response
/// differences y_i - y_j. Distance ties break by ascending t.
struct NeighborView {
    std::size_t target_index = 0;
    std::vector<std::size_t> ordered_indices;
    std::vector<double> distances;
    std::vector<double> bounds;
    std::vector<double> diffs; // y_i - y_j

    std::size_t neighbor_count() const { return ordered_indices.size(); }
};

inline NeighborView neighbor_view(const Dataset& data, const HolderConfig& cfg,
                                  std::size_t i) {
    cfg.validate();
    if (i >= data.size()) throw std::out_of_range("neighbor_view: index out of range");
    if (!data[i].y) throw std::invalid_argument("neighbor_view: target point unobserved");

    NeighborView view;
    view.target_index = i;
    const double t_i = data[i].t;
    const double y_i = *data[i].y;

    for (std::size_t j = 0; j < data.size(); ++j) {
        if (j == i || !data[j].y) continue;
        view.ordered_indices.push_back(j);
    }
    if (view.ordered_indices.empty())
        throw std::invalid_argument("neighbor_view: no other observed point");

    std::sort(view.ordered_indices.begin(), view.ordered_indices.end(),
              [&](std::size_t a, std::size_t b) {
                  double da = std::abs(data[a].t - t_i);
                  double db = std::abs(data[b].t - t_i);
                  if (da != db) return da < db;
                  return data[a].t < data[b].t;
              });

    for (std::size_t j : view.ordered_indices) {
        view.distances.push_back(std::abs(data[j].t - t_i));
        view.bounds.push_back(pairwise_bound(cfg, t_i, data[j].t));
        view.diffs.push_back(y_i - *data[j].y);
    }
    return view;
}

} // namespace holderim
