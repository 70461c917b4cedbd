#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "scenario.hpp"
#include "space.hpp"

/*
 * Stability and almost-periodicity probes.
 *
 * An action is Lyapunov stable at x when for every eps there is a delta such
 * that d(x, y) < delta forces d(g.x, g.y) < eps for every group element g.
 * The probe below searches for counterexamples over a finite group horizon
 * and finitely many perturbations y; it can certify instability (by exhibiting
 * a witness pair) but only ever reports stability "at resolution", meaning no
 * violation was found within the sampled budget.
 *
 * Almost periodicity of an orbit function phi_x(g) = phi(g.x) is probed
 * through its translates L_g phi_x(h) = phi(hg.x): the function is almost
 * periodic iff every eps admits a finite eps-net of translates in the sup
 * metric. The test evaluates a family of translates on a common probe set of
 * group elements, builds a greedy net in the resulting empirical sup metric,
 * and reports either the net (small: almost periodic at resolution) or a
 * large pairwise-separated family of translates (evidence against).
 */

namespace orbitkit {

struct StabilityOptions {
    int horizon_elements = 1 << 16;  // group horizon measured in element count
    int trials = 1000;               // perturbations tested
    double probe_radius = -1.0;      // <=0: use eps
    std::uint64_t seed = 2026;
    int attempt_factor = 50;  // candidate-generation attempts per requested trial
};

struct StabilityWitness {
    Point y;
    GroupElement g;
    double base_distance = 0.0;      // d(x, y)
    double attained_distance = 0.0;  // d(g.x, g.y)
};

struct StabilityReport {
    double eps = 0.0;
    double probe_radius = 0.0;
    double delta_estimate = 0.0;  // clean run: probe_radius; else tightest violating d(x, y)
    std::optional<StabilityWitness> witness;
    int trials_used = 0;
    int horizon_index = 0;
    long long horizon_size = 0;
    long long stabilizer_size = -1;  // set by the uniform-continuity variant only

    bool stable_at_resolution() const { return !witness.has_value(); }
};

namespace detail {

// perturbation candidates near x: scenario proposals mixed with global samples
inline std::vector<Point> perturbation_candidates(const ActionScenario& sc, const Point& x,
                                                  double radius, int want,
                                                  const StabilityOptions& opts) {
    Rng rng(opts.seed);
    std::vector<Point> pool =
        sc.space.sample_points(std::max(64, want), opts.seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(want));
    std::size_t pool_at = 0;
    long long attempts_left = static_cast<long long>(want) * opts.attempt_factor;
    while (static_cast<int>(out.size()) < want && attempts_left-- > 0) {
        Point cand;
        bool from_pool = (attempts_left % 2 == 0) && pool_at < pool.size();
        if (from_pool) {
            cand = pool[pool_at++];
        } else if (sc.perturb) {
            cand = sc.perturb(x, radius, rng);
        } else if (pool_at < pool.size()) {
            cand = pool[pool_at++];
        } else {
            break;
        }
        double d = sc.space.distance(x, cand);
        if (d > 0.0 && d < radius) out.push_back(std::move(cand));
    }
    return out;
}

inline StabilityReport stability_scan(const ActionScenario& sc, const Point& x, double eps,
                                      const StabilityOptions& opts, bool stabilizer_only) {
    require(x.scenario_id == sc.id, "stability_probe: point belongs to a different scenario");
    require(eps > 0.0, "stability_probe: eps must be positive");

    StabilityReport rep;
    rep.eps = eps;
    rep.probe_radius = opts.probe_radius > 0.0 ? opts.probe_radius : eps;
    rep.horizon_index = folner_index_within(sc.group, opts.horizon_elements);

    std::vector<GroupElement> elements = folner_set(sc.group, rep.horizon_index, sc.id).elements;
    std::vector<Point> gx(elements.size());
    for (std::size_t i = 0; i < elements.size(); ++i) {
        sc.apply_into(elements[i], x, gx[i]);
        gx[i].scenario_id = x.scenario_id;
    }

    std::vector<std::size_t> scan_order;
    scan_order.reserve(elements.size());
    if (stabilizer_only) {
        for (std::size_t i = 0; i < elements.size(); ++i)
            if (sc.space.distance(gx[i], x) < point_eq_tol) scan_order.push_back(i);
        rep.stabilizer_size = static_cast<long long>(scan_order.size());
    } else {
        for (std::size_t i = 0; i < elements.size(); ++i) scan_order.push_back(i);
    }
    rep.horizon_size = static_cast<long long>(scan_order.size());

    std::vector<Point> trials = perturbation_candidates(sc, x, rep.probe_radius,
                                                        opts.trials, opts);
    rep.trials_used = static_cast<int>(trials.size());

    double tightest = rep.probe_radius;
    Point buf;
    for (const Point& y : trials) {
        double base = sc.space.distance(x, y);
        for (std::size_t i : scan_order) {
            sc.apply_into(elements[i], y, buf);
            buf.scenario_id = x.scenario_id;
            double d = sc.space.distance(gx[i], buf);
            if (d >= eps) {
                if (!rep.witness || base < tightest) {
                    rep.witness = StabilityWitness{y, elements[i], base, d};
                    tightest = base;
                }
                break;  // one violation per trial point is enough
            }
        }
    }
    rep.delta_estimate = rep.witness ? tightest : rep.probe_radius;
    return rep;
}

}  // namespace detail

// Searches for a pair y near x whose orbit separates from the orbit of x by
// at least eps within the group horizon.
inline StabilityReport stability_probe(const ActionScenario& sc, const Point& x, double eps,
                                       const StabilityOptions& opts = {}) {
    return detail::stability_scan(sc, x, eps, opts, false);
}

// Same scan restricted to the stabilizer of x within the horizon: elements
// fixing x exactly may still move nearby points far when the action is not
// equicontinuous.
inline StabilityReport uniform_continuity_probe(const ActionScenario& sc, const Point& x,
                                                double eps,
                                                const StabilityOptions& opts = {}) {
    return detail::stability_scan(sc, x, eps, opts, true);
}

struct AlmostPeriodicityOptions {
    int translate_count = 48;
    int probe_count = 96;     // random probe elements, on top of targeted ones
    int net_cap = 40;         // nets larger than this refute almost periodicity
    int pool_elements = 1 << 12;
    std::uint64_t seed = 7;
};

struct AlmostPeriodicityReport {
    double eps = 0.0;
    bool almost_periodic = false;  // at the sampled resolution
    int net_size = 0;
    int net_cap = 0;
    int translate_count = 0;
    int probe_count = 0;  // probe columns actually evaluated
    // translate indices forming the greedy net; pairwise more than eps apart
    // in the empirical sup metric, so when the net overflows the cap this is
    // a separated family witnessing failure of total boundedness
    std::vector<int> family;
    // every translate that was evaluated, in row order; family indexes into it
    std::vector<GroupElement> translates;
};

inline AlmostPeriodicityReport almost_periodicity_test(const ActionScenario& sc,
                                                       const std::function<cx(const Point&)>& fn,
                                                       const Point& x, double eps,
                                                       const AlmostPeriodicityOptions& opts = {}) {
    require(x.scenario_id == sc.id,
            "almost_periodicity_test: point belongs to a different scenario");
    require(eps > 0.0, "almost_periodicity_test: eps must be positive");
    require(opts.translate_count >= 1, "almost_periodicity_test: need at least one translate");

    AlmostPeriodicityReport rep;
    rep.eps = eps;
    rep.net_cap = opts.net_cap;

    int pool_index = folner_index_within(sc.group, opts.pool_elements);
    std::vector<GroupElement> pool = folner_set(sc.group, pool_index, sc.id).elements;
    Rng rng(opts.seed);

    std::vector<GroupElement> translates;
    translates.push_back(identity(sc.group, sc.id));
    const int translate_target =
        std::min<int>(opts.translate_count, static_cast<int>(pool.size()));
    long long draw_budget = static_cast<long long>(opts.translate_count) * 64;
    while (static_cast<int>(translates.size()) < translate_target && draw_budget-- > 0) {
        const GroupElement& g = pool[rng.below(pool.size())];
        bool dup = false;
        for (const auto& t : translates)
            if (t == g) {
                dup = true;
                break;
            }
        if (!dup) translates.push_back(g);
    }
    rep.translate_count = static_cast<int>(translates.size());

    // probe elements: random draws plus, for each translate, its inverse and
    // the inverse shifted by one generator step; the targeted ones guarantee
    // that a pair of translates differing near the identity is actually
    // separated by some evaluated column
    std::vector<GroupElement> probes;
    probes.push_back(identity(sc.group, sc.id));
    for (int k = 0; k < opts.probe_count; ++k) probes.push_back(pool[rng.below(pool.size())]);
    auto gens = sc.orbit_generators(x);
    for (const auto& g : translates) {
        GroupElement gi = inverse(sc.group, g);
        probes.push_back(gi);
        for (const auto& s : gens) {
            probes.push_back(compose(sc.group, gi, s));
            probes.push_back(compose(sc.group, gi, inverse(sc.group, s)));
        }
    }
    rep.probe_count = static_cast<int>(probes.size());

    // V[i][j] = phi(h_j . (g_i . x)) = (L_{g_i} phi_x)(h_j)
    std::vector<std::vector<cx>> rows(translates.size());
    Point buf;
    for (std::size_t i = 0; i < translates.size(); ++i) {
        Point yi = sc.apply(translates[i], x);
        rows[i].reserve(probes.size());
        for (const auto& h : probes) {
            sc.apply_into(h, yi, buf);
            buf.scenario_id = x.scenario_id;
            rows[i].push_back(fn(buf));
        }
    }

    auto sup_dist = [](const std::vector<cx>& a, const std::vector<cx>& b) {
        double m = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
        return m;
    };
    rep.family = greedy_epsilon_net_indices(rows, eps, sup_dist);
    rep.net_size = static_cast<int>(rep.family.size());
    rep.almost_periodic = rep.net_size <= opts.net_cap;
    rep.translates = std::move(translates);
    return rep;
}

inline AlmostPeriodicityReport almost_periodicity_test(const ActionScenario& sc,
                                                       const std::string& fname, const Point& x,
                                                       double eps,
                                                       const AlmostPeriodicityOptions& opts = {}) {
    return almost_periodicity_test(sc, sc.function_named(fname).eval, x, eps, opts);
}

}  // namespace orbitkit
