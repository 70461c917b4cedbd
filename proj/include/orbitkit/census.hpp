#pragma once

#include <deque>

#include "scenario.hpp"

// Orbit enumeration at a point budget, a sampled census of orbit structure,
// and the module classification rules driven by that census.

namespace orbitkit {

struct OrbitProbe {
    bool finite = false;
    long long cardinality = 0;          // meaningful when finite
    std::vector<Point> visited;         // distinct orbit points found (BFS order)
    std::vector<GroupElement> words;    // first-reach word per visited point
    double diameter_estimate = 0.0;
};

// Breadth-first closure of x under the scenario's declared orbit generators.
// Finite verdict means the closure was exhausted within `cutoff` points;
// otherwise the orbit is reported infinite-likely at this resolution. Every
// visited point is produced by applying its first-reach word to x directly,
// so coordinates do not accumulate drift along generator chains.
inline OrbitProbe orbit_probe(const ActionScenario& sc, const Point& x, int cutoff = 4096) {
    require(x.scenario_id == sc.id, "orbit_probe: point belongs to a different scenario");
    require(cutoff >= 1, "orbit_probe: cutoff must be positive");

    OrbitProbe probe;
    PointIndex index(sc);
    auto gens = sc.orbit_generators(x);

    probe.visited.push_back(x);
    probe.words.push_back(identity(sc.group, sc.id));
    index.insert(x, 0, probe.visited);

    std::deque<int> frontier{0};
    Point candidate;
    bool truncated = false;
    while (!frontier.empty()) {
        int h = frontier.front();
        frontier.pop_front();
        const GroupElement base = probe.words[static_cast<std::size_t>(h)];
        for (const auto& gen : gens) {
            GroupElement w = compose(sc.group, base, gen);
            sc.apply_into(w, x, candidate);
            candidate.scenario_id = x.scenario_id;
            if (index.find(candidate) >= 0) continue;
            if (static_cast<int>(probe.visited.size()) >= cutoff) {
                truncated = true;
                break;
            }
            int id = static_cast<int>(probe.visited.size());
            probe.visited.push_back(candidate);
            probe.words.push_back(w);
            index.insert(candidate, id, probe.visited);
            frontier.push_back(id);
        }
        if (truncated) break;
    }

    probe.finite = !truncated;
    probe.cardinality = probe.finite ? static_cast<long long>(probe.visited.size()) : 0;

    // two-sweep diameter estimate (exact on path-like sets, a lower bound always)
    auto farthest = [&](const Point& from) {
        int best = 0;
        double bd = -1.0;
        for (std::size_t i = 0; i < probe.visited.size(); ++i) {
            double d = sc.space.distance(from, probe.visited[i]);
            if (d > bd) {
                bd = d;
                best = static_cast<int>(i);
            }
        }
        return std::pair<int, double>(best, bd);
    };
    auto [f1, d1] = farthest(probe.visited.front());
    auto [f2, d2] = farthest(probe.visited[static_cast<std::size_t>(f1)]);
    (void)f2;
    probe.diameter_estimate = std::max(d1, d2);
    return probe;
}

// Sampled Hausdorff distance between two finite point sets.
inline double hausdorff_distance(const MetricSpace& space, const std::vector<Point>& a,
                                 const std::vector<Point>& b) {
    require(!a.empty() && !b.empty(), "hausdorff_distance: empty point set");
    double h = 0.0;
    auto one_sided = [&](const std::vector<Point>& from, const std::vector<Point>& to) {
        for (const auto& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : to) best = std::min(best, space.distance(p, q));
            h = std::max(h, best);
        }
    };
    one_sided(a, b);
    one_sided(b, a);
    return h;
}

struct CensusOptions {
    int cutoff = 1024;          // per-orbit BFS budget
    double cluster_sep = -1.0;  // <0: use 0.05 * space diameter
    int hausdorff_cap = 192;    // orbit subsample size for cluster comparisons
    std::uint64_t seed = 1;
};

struct OrbitCensus {
    std::vector<long long> finite_cardinalities;  // one entry per finite orbit, sorted
    int infinite_cluster_count = 0;
    std::vector<Point> cluster_representatives;   // base point of first orbit per cluster
    std::vector<int> cluster_sizes;               // orbits per cluster
    int sample_size = 0;
    double cluster_sep = 0.0;
    int cutoff = 0;
};

// Probes a stratified sample of base points and clusters the infinite-likely
// orbits by sampled Hausdorff distance between their visited sets. Growing
// the sample with the same seed refines the census monotonically (the point
// stream is a prefix-stable sequence).
inline OrbitCensus census(const ActionScenario& sc, int sample_size,
                          const CensusOptions& opts = {}) {
    require(sample_size >= 1, "census: sample_size must be positive");
    OrbitCensus out;
    out.sample_size = sample_size;
    out.cutoff = opts.cutoff;
    out.cluster_sep =
        opts.cluster_sep > 0.0 ? opts.cluster_sep : 0.05 * sc.space.diameter();

    std::vector<std::vector<Point>> cluster_samples;
    auto subsample = [&](const std::vector<Point>& v) {
        std::vector<Point> s;
        std::size_t step = std::max<std::size_t>(1, v.size() / static_cast<std::size_t>(
                                                            opts.hausdorff_cap));
        for (std::size_t i = 0; i < v.size(); i += step) s.push_back(v[i]);
        return s;
    };

    for (const Point& base : sc.space.sample_points(sample_size, opts.seed)) {
        OrbitProbe probe = orbit_probe(sc, base, opts.cutoff);
        if (probe.finite) {
            out.finite_cardinalities.push_back(probe.cardinality);
            continue;
        }
        std::vector<Point> sample = subsample(probe.visited);
        int joined = -1;
        for (std::size_t c = 0; c < cluster_samples.size(); ++c) {
            if (hausdorff_distance(sc.space, sample, cluster_samples[c]) <= out.cluster_sep) {
                joined = static_cast<int>(c);
                break;
            }
        }
        if (joined >= 0) {
            out.cluster_sizes[static_cast<std::size_t>(joined)] += 1;
        } else {
            cluster_samples.push_back(std::move(sample));
            out.cluster_representatives.push_back(base);
            out.cluster_sizes.push_back(1);
        }
    }
    out.infinite_cluster_count = static_cast<int>(cluster_samples.size());
    std::sort(out.finite_cardinalities.begin(), out.finite_cardinalities.end());
    return out;
}

enum class ModuleLabel { SelfDual, Reflexive, NotSelfDualSelfDualFails, Inconclusive };

inline const char* to_string(ModuleLabel l) {
    switch (l) {
        case ModuleLabel::SelfDual: return "SelfDual";
        case ModuleLabel::Reflexive: return "Reflexive";
        case ModuleLabel::NotSelfDualSelfDualFails: return "NotSelfDual-SelfDualFails";
        case ModuleLabel::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

struct ClassifyOptions {
    int cluster_bound = 4;  // "finitely many" at resolution: clusters beyond this overflow
};

struct ModuleClassification {
    ModuleLabel label = ModuleLabel::Inconclusive;
    std::vector<std::string> reasons;
};

// Classification rules, applied in order. Rule ids are stable strings:
//
//   rule:closure-count-overflow   more infinite-orbit closure clusters than the
//                                 configured bound; self-duality needs finitely
//                                 many infinite-orbit closures, so it fails
//   rule:equal-finite-orbits      finitely many infinite closures and all
//                                 sampled finite orbits share one cardinality
//                                 (vacuously true with no finite orbits):
//                                 the module is self-dual
//   rule:bounded-finite-orbits    finite orbit sizes under a declared uniform
//                                 bound and finitely many infinite closures:
//                                 the module is C*-reflexive
//   rule:metric-stable-reflexive  compact metric space with declared
//                                 Lyapunov-stable action: C*-reflexive
//
// Positive labels besides the overflow rule require the scenario to declare
// Lyapunov stability, since the averaging structure the labels speak about
// is only available in that regime.
inline ModuleClassification classify_module(const OrbitCensus& cen, const ScenarioFlags& flags,
                                            const ClassifyOptions& opts = {}) {
    ModuleClassification out;
    const auto& cards = cen.finite_cardinalities;
    const bool cards_equal =
        cards.empty() || std::all_of(cards.begin(), cards.end(),
                                     [&](long long c) { return c == cards.front(); });
    const int clusters = cen.infinite_cluster_count;
    const bool overflow = clusters > opts.cluster_bound;

    if (cards_equal && !overflow) {
        out.label = ModuleLabel::SelfDual;
        out.reasons.push_back(
            "rule:equal-finite-orbits: " +
            (cards.empty()
                 ? std::string("no finite orbits sampled")
                 : "all " + std::to_string(cards.size()) +
                       " sampled finite orbits have cardinality " +
                       std::to_string(cards.front())) +
            " and infinite-orbit closure clusters (" + std::to_string(clusters) +
            ") stay within bound " + std::to_string(opts.cluster_bound));
        return out;
    }

    if (!cards.empty() && cards_equal && overflow) {
        out.label = ModuleLabel::NotSelfDualSelfDualFails;
        out.reasons.push_back(
            "rule:closure-count-overflow: a finite orbit of cardinality " +
            std::to_string(cards.front()) + " coexists with " + std::to_string(clusters) +
            " infinite-orbit closure clusters at resolution, exceeding bound " +
            std::to_string(opts.cluster_bound) +
            "; the closures accumulate only at the finite orbit, so the dual module "
            "contains sections supported along the cluster family that no element "
            "of the module represents");
        if (flags.metric_space && flags.lyapunov_stable)
            out.reasons.push_back(
                "rule:metric-stable-reflexive: compact metric space with declared "
                "Lyapunov-stable action keeps the module C*-reflexive");
        return out;
    }

    if (!cards_equal)
        out.reasons.push_back("finite orbit cardinalities vary across the sample (" +
                              std::to_string(cards.front()) + ".." +
                              std::to_string(cards.back()) + ")");
    if (overflow)
        out.reasons.push_back(
            "infinite-orbit closure clusters (" + std::to_string(clusters) +
            ") exceed bound " + std::to_string(opts.cluster_bound) + " at resolution");

    if (flags.lyapunov_stable && flags.finite_card_bound && !overflow &&
        (cards.empty() || cards.back() <= *flags.finite_card_bound)) {
        out.label = ModuleLabel::Reflexive;
        out.reasons.push_back(
            "rule:bounded-finite-orbits: finite orbit cardinalities stay under the "
            "declared bound " +
            std::to_string(*flags.finite_card_bound) +
            " and infinite-orbit closure clusters are finitely many at resolution");
        return out;
    }

    if (flags.metric_space && flags.lyapunov_stable) {
        out.label = ModuleLabel::Reflexive;
        out.reasons.push_back(
            "rule:metric-stable-reflexive: compact metric space with declared "
            "Lyapunov-stable action is C*-reflexive");
        return out;
    }

    out.label = ModuleLabel::Inconclusive;
    if (!flags.lyapunov_stable)
        out.reasons.push_back("action is not declared Lyapunov stable; no positive rule applies");
    if (out.reasons.empty()) out.reasons.push_back("no classification rule applies");
    return out;
}

}  // namespace orbitkit
