#pragma once

#include <algorithm>
#include <cstdlib>
#include <limits>

#include "census.hpp"
#include "scenario.hpp"

/*
 * Ergodic averaging along Folner schedules.
 *
 * The invariant mean of a bounded observable phi along the orbit of x is
 * approximated by stage averages
 *
 *     A_N(phi, x) = |F_N|^{-1} * sum_{g in F_N} phi(g.x)
 *
 * over the group's canonical Folner sets F_N. The stage index schedule
 * doubles N for integer-lattice groups and increments it for digit-flip
 * groups (whose set size doubles per index step); a run converges when two
 * consecutive stage values agree within tol. Orbits that close up within a
 * small budget skip the schedule entirely: the mean of finitely many orbit
 * points is their exact arithmetic mean, computed over one canonical
 * enumeration of the orbit.
 *
 * The inner product of two observables and the conditional-expectation field
 * are both derived from the same stage machinery:
 *
 *     <phi, psi>(x) = M(phi(g.x) * conj(psi(g.x))),   E(phi)(x) = M(phi(g.x)).
 */

namespace orbitkit {

struct AveragingOptions {
    double tol = 1e-3;
    int n_max = 1 << 20;  // Folner index cap
    int quadrature = 4096;
    int fast_path_cutoff = 4096;  // orbit budget for the finite-orbit test
    double jump_window = -1.0;    // <=0: twice the median nearest-neighbor grid spacing
    double jump_threshold = 0.1;
    int geometric_start = 32;
    int additive_start = 4;
    int z2_index_cap = 22;  // digit groups: indices beyond this are unaffordable
};

struct AverageReport {
    cx value{0.0, 0.0};
    bool converged = false;
    std::vector<std::pair<int, cx>> stages;  // (folner index, stage average)
    double tol_used = 0.0;
    int n_max_used = 0;
    double sup_norm = 0.0;  // max |phi| over the points actually evaluated
    bool finite_orbit = false;
    long long orbit_cardinality = 0;
};

namespace detail {

inline bool group_has_z2(const GroupDescriptor& g) {
    if (g.kind == GroupDescriptor::Kind::InfiniteSumZ2) return true;
    for (const auto& p : g.parts)
        if (group_has_z2(p)) return true;
    return false;
}

// true when the word already belongs to the index-`prev` Folner set
inline bool word_in_folner(const GroupDescriptor& g, const std::vector<std::int64_t>& w,
                           int prev) {
    std::vector<const GroupDescriptor*> flat;
    flatten(g, flat);
    std::size_t pos = 0;
    for (const auto* slot : flat) {
        switch (slot->kind) {
            case GroupDescriptor::Kind::FreeAbelian: {
                std::int64_t v = pos < w.size() ? w[pos] : 0;
                if (std::llabs(v) > prev) return false;
                ++pos;
                break;
            }
            case GroupDescriptor::Kind::FiniteCyclic: ++pos; break;
            case GroupDescriptor::Kind::InfiniteSumZ2: {
                // trailing zeros are trimmed, so length bounds the top digit
                std::size_t len = w.size() > pos ? w.size() - pos : 0;
                return static_cast<int>(len) <= prev;
            }
            case GroupDescriptor::Kind::DirectSum: break;
        }
    }
    return true;
}

// Canonical word enumeration of a finite orbit, one word per orbit point.
// Tries, in order: powers of the first generator (cyclic orbits), the binary
// span of involution generators (digit-flip orbits), and finally the BFS
// first-reach words recorded by the probe.
inline std::vector<GroupElement> finite_orbit_words(const ActionScenario& sc, const Point& x,
                                                    const OrbitProbe& probe) {
    const long long c = probe.cardinality;
    auto gens = sc.orbit_generators(x);

    if (!gens.empty() && c >= 1) {
        // cyclic walk along the first generator
        std::vector<GroupElement> words;
        words.reserve(static_cast<std::size_t>(c));
        PointIndex seen(sc);
        std::vector<Point> pts;
        pts.reserve(static_cast<std::size_t>(c));
        GroupElement w = identity(sc.group, sc.id);
        bool ok = true;
        for (long long k = 0; k < c; ++k) {
            Point p = sc.apply(w, x);
            if (seen.find(p) >= 0) {
                ok = false;  // walk closed early: orbit is not one cycle
                break;
            }
            pts.push_back(p);
            seen.insert(pts.back(), static_cast<int>(k), pts);
            words.push_back(w);
            w = compose(sc.group, w, gens.front());
        }
        if (ok && points_equal(sc.space, sc.apply(w, x), x)) return words;
    }

    bool all_involutions = !gens.empty();
    for (const auto& g : gens) {
        if (!(compose(sc.group, g, g) == identity(sc.group, sc.id))) {
            all_involutions = false;
            break;
        }
    }
    if (all_involutions && gens.size() < 63 && (1ll << gens.size()) == c) {
        // span of commuting involutions, binary counting with generator 0 fastest
        std::vector<GroupElement> words;
        words.reserve(static_cast<std::size_t>(c));
        for (long long i = 0; i < c; ++i) {
            GroupElement w = identity(sc.group, sc.id);
            for (std::size_t k = 0; k < gens.size(); ++k)
                if ((i >> k) & 1ll) w = compose(sc.group, w, gens[k]);
            words.push_back(std::move(w));
        }
        return words;
    }

    return probe.words;
}

}  // namespace detail

// Averages fn(g.x) over the canonical Folner schedule, with the exact
// finite-orbit mean as a fast path.
inline AverageReport folner_average(const ActionScenario& sc,
                                    const std::function<cx(const Point&)>& fn, const Point& x,
                                    const AveragingOptions& opts = {}) {
    require(x.scenario_id == sc.id, "folner_average: point belongs to a different scenario");
    require(opts.tol > 0.0, "folner_average: tol must be positive");
    require(opts.n_max >= 1, "folner_average: n_max must be positive");

    AverageReport rep;
    rep.tol_used = opts.tol;
    rep.n_max_used = opts.n_max;

    OrbitProbe probe = orbit_probe(sc, x, opts.fast_path_cutoff);
    if (probe.finite) {
        auto words = detail::finite_orbit_words(sc, x, probe);
        cx sum{0.0, 0.0};
        Point buf;
        for (const auto& w : words) {
            sc.apply_into(w, x, buf);
            buf.scenario_id = x.scenario_id;
            cx v = fn(buf);
            rep.sup_norm = std::max(rep.sup_norm, std::abs(v));
            sum += v;
        }
        rep.value = sum / static_cast<double>(probe.cardinality);
        rep.converged = true;
        rep.finite_orbit = true;
        rep.orbit_cardinality = probe.cardinality;
        rep.stages.emplace_back(0, rep.value);
        return rep;
    }

    // stage schedule
    std::vector<int> schedule;
    if (detail::group_has_z2(sc.group)) {
        int cap = std::min(opts.n_max, opts.z2_index_cap);
        for (int n = std::min(opts.additive_start, cap); n <= cap; ++n) schedule.push_back(n);
    } else {
        if (opts.n_max < opts.geometric_start) {
            schedule.push_back(opts.n_max);
        } else {
            int n = opts.geometric_start;
            for (; n <= opts.n_max; n *= 2) {
                schedule.push_back(n);
                if (n > opts.n_max / 2) break;
            }
            if (schedule.back() != opts.n_max) schedule.push_back(opts.n_max);
        }
    }

    cx sum{0.0, 0.0};
    int prev = -1;
    Point buf;
    for (int stage_index : schedule) {
        // add the shell F_N \ F_prev to the running sum
        for_each_folner(
            sc.group, stage_index,
            [&](const GroupElement& g) {
                if (prev >= 0 && detail::word_in_folner(sc.group, g.word, prev)) return;
                sc.apply_into(g, x, buf);
                buf.scenario_id = x.scenario_id;
                cx v = fn(buf);
                rep.sup_norm = std::max(rep.sup_norm, std::abs(v));
                sum += v;
            },
            sc.id);
        prev = stage_index;
        cx stage_value = sum / static_cast<double>(folner_size(sc.group, stage_index));
        rep.stages.emplace_back(stage_index, stage_value);
        rep.value = stage_value;
        std::size_t s = rep.stages.size();
        if (s >= 2 &&
            std::abs(rep.stages[s - 1].second - rep.stages[s - 2].second) < opts.tol) {
            rep.converged = true;
            break;
        }
    }
    return rep;
}

inline AverageReport folner_average(const ActionScenario& sc, const std::string& fname,
                                    const Point& x, const AveragingOptions& opts = {}) {
    return folner_average(sc, sc.function_named(fname).eval, x, opts);
}

// Quadrature of fn against the declared invariant measure on the closure of
// the orbit of x. Single-stage by construction.
inline AverageReport orbit_closure_average(const ActionScenario& sc,
                                           const std::function<cx(const Point&)>& fn,
                                           const Point& x, const AveragingOptions& opts = {}) {
    require(x.scenario_id == sc.id,
            "orbit_closure_average: point belongs to a different scenario");
    require(static_cast<bool>(sc.closure_average),
            "orbit_closure_average: scenario declares no closure parametrization");
    AverageReport rep;
    rep.value = sc.closure_average(x, fn, opts.quadrature);
    rep.converged = true;
    rep.tol_used = opts.tol;
    rep.sup_norm = std::abs(rep.value);
    rep.stages.emplace_back(0, rep.value);
    return rep;
}

inline AverageReport orbit_closure_average(const ActionScenario& sc, const std::string& fname,
                                           const Point& x, const AveragingOptions& opts = {}) {
    return orbit_closure_average(sc, sc.function_named(fname).eval, x, opts);
}

// <phi, psi>(x) = M(phi(g.x) * conj(psi(g.x)))
inline AverageReport inner_product(const ActionScenario& sc, const std::string& fname,
                                   const std::string& gname, const Point& x,
                                   const AveragingOptions& opts = {}) {
    const auto& f = sc.function_named(fname).eval;
    const auto& g = sc.function_named(gname).eval;
    return folner_average(
        sc, [&](const Point& p) { return f(p) * std::conj(g(p)); }, x, opts);
}

struct FieldReport {
    std::vector<Point> grid;
    std::vector<AverageReport> values;  // aligned with grid
    bool jump_detected = false;
    int jump_i = -1, jump_j = -1;  // grid indices of the extremal close pair
    double jump_magnitude = 0.0;
    double jump_window = 0.0;
    double jump_threshold = 0.0;
    int unconverged_count = 0;

    const char* verdict() const {
        return jump_detected ? "Jump-detected" : "Continuous-at-resolution";
    }
};

// Evaluates the expectation field x -> M(phi(g.x)) on a grid and scans close
// grid pairs for value jumps. Non-converged entries are kept (flagged in
// their report) but excluded from the continuity scan.
inline FieldReport expectation_field(const ActionScenario& sc,
                                     const std::function<cx(const Point&)>& fn,
                                     std::vector<Point> grid,
                                     const AveragingOptions& opts = {}) {
    FieldReport rep;
    rep.grid = std::move(grid);
    rep.jump_threshold = opts.jump_threshold;
    rep.values.reserve(rep.grid.size());
    for (const Point& p : rep.grid) {
        rep.values.push_back(folner_average(sc, fn, p, opts));
        if (!rep.values.back().converged) ++rep.unconverged_count;
    }

    const std::size_t n = rep.grid.size();
    if (n < 2) {
        rep.jump_window = opts.jump_window > 0.0 ? opts.jump_window : 0.0;
        return rep;
    }

    if (opts.jump_window > 0.0) {
        rep.jump_window = opts.jump_window;
    } else {
        // twice the median nearest-neighbor spacing
        std::vector<double> nn(n, std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                double d = sc.space.distance(rep.grid[i], rep.grid[j]);
                nn[i] = std::min(nn[i], d);
                nn[j] = std::min(nn[j], d);
            }
        std::vector<double> sorted = nn;
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n / 2),
                         sorted.end());
        rep.jump_window = 2.0 * sorted[n / 2];
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (!rep.values[i].converged) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!rep.values[j].converged) continue;
            if (sc.space.distance(rep.grid[i], rep.grid[j]) >= rep.jump_window) continue;
            double mag = std::abs(rep.values[i].value - rep.values[j].value);
            if (mag > rep.jump_magnitude) {
                rep.jump_magnitude = mag;
                rep.jump_i = static_cast<int>(i);
                rep.jump_j = static_cast<int>(j);
            }
        }
    }
    rep.jump_detected = rep.jump_magnitude > rep.jump_threshold;
    return rep;
}

inline FieldReport expectation_field(const ActionScenario& sc, const std::string& fname,
                                     const std::vector<Point>& grid,
                                     const AveragingOptions& opts = {}) {
    return expectation_field(sc, sc.function_named(fname).eval, grid, opts);
}

}  // namespace orbitkit
