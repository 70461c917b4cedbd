#pragma once

#include <algorithm>
#include <functional>
#include <limits>

#include "core.hpp"

/*
 * Compact metric spaces, given by samples rather than symbols.
 *
 * A MetricSpace owns the distance function and a stratified sampler; every
 * other module works through those two callables. Metric conventions used
 * by the bundled scenarios:
 *
 *   - circles have unit circumference and carry the intrinsic arc metric
 *     d(s,t) = min(|s-t|, 1-|s-t|), so the diameter of a bare circle is 1/2;
 *   - spaces embedded in R^3 or R^4 carry the chord (Euclidean) metric;
 *   - product spaces use the sum metric d((j,u),(j',u')) = |j-j'| + d(u,u').
 *
 * Subsets are "compact at resolution": an indicator plus a finite witness
 * sample standing in for the set. Coverage and packing statements about a
 * CompactSubset are statements about its witness sample.
 */

namespace orbitkit {

class MetricSpace {
  public:
    MetricSpace() = default;
    MetricSpace(int scenario_id, double diameter, int stratum_count,
                std::function<double(const Point&, const Point&)> dist,
                std::function<std::vector<Point>(int count, std::uint64_t seed)> sampler)
        : scenario_id_(scenario_id),
          diameter_(diameter),
          stratum_count_(stratum_count),
          dist_(std::move(dist)),
          sampler_(std::move(sampler)) {}

    int scenario_id() const { return scenario_id_; }
    double diameter() const { return diameter_; }
    int stratum_count() const { return stratum_count_; }

    double distance(const Point& a, const Point& b) const {
        require(a.scenario_id == scenario_id_ && b.scenario_id == scenario_id_,
                "distance: point belongs to a different scenario");
        return dist_(a, b);
    }

    // Stratified: every stratum receives a positive share of the sample.
    // Same seed and count reproduce the same points; a longer sample with the
    // same seed extends a shorter one.
    std::vector<Point> sample_points(int count, std::uint64_t seed) const {
        require(count >= 0, "sample_points: negative count");
        return sampler_(count, seed);
    }

  private:
    int scenario_id_ = -1;
    double diameter_ = 0.0;
    int stratum_count_ = 0;
    std::function<double(const Point&, const Point&)> dist_;
    std::function<std::vector<Point>(int, std::uint64_t)> sampler_;
};

struct CompactSubset {
    std::function<bool(const Point&)> indicator;
    std::vector<Point> witness_sample;
    // analytic eps-neighborhood builder, when the subset's shape admits one;
    // consumers fall back to a witness-distance neighborhood otherwise
    std::function<CompactSubset(double)> widen;
};

inline bool points_equal(const MetricSpace& space, const Point& a, const Point& b) {
    return space.distance(a, b) < point_eq_tol;
}

// Farthest-point greedy epsilon-net over an explicit point list.
//
// Starts from the first input point, then repeatedly adjoins the input point
// farthest from the current net while that distance exceeds eps (ties go to
// the lowest index). On return every input point lies within eps of a net
// point and net points are pairwise more than eps apart. `dist` defaults to
// the ambient metric; a custom callable lets callers build nets in other
// metrics (e.g. empirical sup distance between function translates).
template <typename Item, typename DistFn>
std::vector<int> greedy_epsilon_net_indices(const std::vector<Item>& pts, double eps,
                                            DistFn&& dist) {
    require(eps > 0.0, "greedy_epsilon_net: eps must be positive");
    std::vector<int> net;
    if (pts.empty()) return net;
    const int n = static_cast<int>(pts.size());
    std::vector<double> to_net(n, std::numeric_limits<double>::infinity());
    int next = 0;
    while (true) {
        net.push_back(next);
        for (int i = 0; i < n; ++i) {
            double d = dist(pts[i], pts[next]);
            if (d < to_net[i]) to_net[i] = d;
        }
        int best = -1;
        double best_d = eps;
        for (int i = 0; i < n; ++i) {
            if (to_net[i] > best_d) {
                best_d = to_net[i];
                best = i;
            }
        }
        if (best < 0) break;
        next = best;
    }
    return net;
}

inline std::vector<Point> greedy_epsilon_net(const MetricSpace& space,
                                             const std::vector<Point>& pts, double eps) {
    auto idx = greedy_epsilon_net_indices(
        pts, eps, [&](const Point& a, const Point& b) { return space.distance(a, b); });
    std::vector<Point> net;
    net.reserve(idx.size());
    for (int i : idx) net.push_back(pts[i]);
    return net;
}

}  // namespace orbitkit
