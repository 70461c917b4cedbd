#pragma once

#include <optional>
#include <unordered_map>

#include "group.hpp"
#include "space.hpp"

// A scenario bundles one compact metric space with one group action on it:
// the space, the acting group, the action itself, a catalog of observables,
// and the declared structural facts other modules consume (orbit-closure
// quadratures, stability declaration, proximity proposals).

namespace orbitkit {

struct CatalogFunction {
    std::string name;
    std::function<cx(const Point&)> eval;
};

struct ScenarioFlags {
    bool metric_space = true;      // all bundled scenarios are compact metric
    bool lyapunov_stable = false;  // declared, not measured
    bool isometric_action = false;
    // every group element maps each stratum to itself and preserves distances
    // inside it, even when cross-stratum distances are distorted
    bool stratum_isometric = false;
    std::optional<int> finite_card_bound;  // declared uniform bound on finite orbit sizes
};

// Which coordinates of a stratum vary continuously (everything else is an
// exact label, e.g. a dyadic digit). Angle coordinates wrap modulo 1.
struct StratumCoords {
    int continuous_index = -1;  // -1: no continuous coordinate
    bool wraps = false;
};

class ActionScenario {
  public:
    int id = 0;
    std::string name;
    GroupDescriptor group;
    MetricSpace space;
    ScenarioFlags flags;

    // action: writes g.x into `out` (reuses out.coords storage in hot loops)
    std::function<void(const GroupElement&, const Point&, Point&)> apply_into;

    std::vector<CatalogFunction> catalog;

    // generators whose BFS closure is the orbit of the given point (for
    // digit-flip groups this is the finite effective generator list)
    std::function<std::vector<GroupElement>(const Point&)> orbit_generators;

    // integral of fn over the closure of the orbit of x against the declared
    // invariant measure, at the given quadrature size
    std::function<cx(const Point&, const std::function<cx(const Point&)>&, int)>
        closure_average;

    // proposal generator for points near x (callers filter by distance)
    std::function<Point(const Point&, double, Rng&)> perturb;

    // canonical evaluation grid for field scans
    std::function<std::vector<Point>(int)> field_grid;

    // textual point forms used by the experiment runner
    std::function<std::string(const Point&)> format_point;
    std::function<Point(const std::string&)> parse_point;

    // compact subsets by textual spec ("arc:center:len", ...); empty when the
    // scenario does not support covering/measure runs
    std::function<CompactSubset(const std::string&)> subset_from_spec;

    std::vector<StratumCoords> stratum_coords;  // indexed by stratum

    std::string expected_classification;  // fixture ground truth ("" if none)

    Point apply(const GroupElement& g, const Point& x) const {
        require(x.scenario_id == id, "apply: point belongs to a different scenario");
        Point out;
        apply_into(g, x, out);
        return out;
    }

    const CatalogFunction& function_named(const std::string& fname) const {
        for (const auto& f : catalog)
            if (f.name == fname) return f;
        throw std::domain_error("unknown catalog function '" + fname + "' in scenario " + name);
    }

    StratumCoords coords_info(int stratum) const {
        if (stratum < 0 || stratum >= static_cast<int>(stratum_coords.size()))
            throw std::domain_error("point stratum outside declared strata");
        return stratum_coords[static_cast<std::size_t>(stratum)];
    }
};

struct ScenarioSpec {
    std::string name;
    std::vector<std::pair<std::string, double>> params;

    double get(const std::string& key, double fallback) const {
        for (const auto& [k, v] : params)
            if (k == key) return v;
        return fallback;
    }
    void set(const std::string& key, double v) { params.emplace_back(key, v); }
};

// Hash-bucket index over points of one scenario, used for orbit revisit
// detection. Buckets quantize the continuous coordinate at point_eq_tol;
// candidate lookups probe adjacent buckets (with wrap for angles) so any
// point within point_eq_tol of a stored one is always found.
class PointIndex {
  public:
    explicit PointIndex(const ActionScenario& sc) : sc_(&sc) {}

    int find(const Point& p) const {
        auto probe = [&](long long q) -> int {
            auto it = buckets_.find(key_of(p.stratum, q));
            if (it == buckets_.end()) return -1;
            for (int id : it->second)
                if (sc_->space.distance(p, (*store_)[static_cast<std::size_t>(id)]) <
                    point_eq_tol)
                    return id;
            return -1;
        };
        StratumCoords info = sc_->coords_info(p.stratum);
        long long q = quantize(p, info);
        for (long long dq : {0ll, -1ll, 1ll}) {
            long long qq = q + dq;
            if (info.continuous_index >= 0 && info.wraps) qq = wrap_bucket(qq);
            if (int id = probe(qq); id >= 0) return id;
            if (info.continuous_index < 0) break;  // single bucket suffices
        }
        return -1;
    }

    void insert(const Point& p, int id, const std::vector<Point>& store) {
        store_ = &store;
        StratumCoords info = sc_->coords_info(p.stratum);
        buckets_[key_of(p.stratum, quantize(p, info))].push_back(id);
    }

  private:
    static long long wrap_bucket(long long q) {
        const long long n = static_cast<long long>(1.0 / point_eq_tol);  // buckets per turn
        if (q < 0) return q + n;
        if (q >= n) return q - n;
        return q;
    }

    long long quantize(const Point& p, const StratumCoords& info) const {
        if (info.continuous_index < 0) {
            // exact-label strata: fold all coords into one integer key
            long long h = 1469598103934665603ll;
            for (double c : p.coords) {
                h ^= static_cast<long long>(c * 2.0 + 1.0);
                h *= 1099511628211ll;
            }
            return h;
        }
        double c = p.coords[static_cast<std::size_t>(info.continuous_index)];
        return static_cast<long long>(std::floor(c / point_eq_tol));
    }

    static std::uint64_t key_of(int stratum, long long q) {
        std::uint64_t h = static_cast<std::uint64_t>(q);
        h ^= static_cast<std::uint64_t>(stratum) * 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }

    const ActionScenario* sc_;
    const std::vector<Point>* store_ = nullptr;
    std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
};

}  // namespace orbitkit
