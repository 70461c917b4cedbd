#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "averaging.hpp"
#include "scenario.hpp"
#include "space.hpp"

/*
 * Covering indices and the invariant measure they induce.
 *
 * For compact subsets A, B with B fat enough to cover, the covering index
 * (A : B) is the least number of group translates of B needed to cover A.
 * Translating by isometries preserves the index structure; for actions that
 * are not isometric the index is not translation-invariant and the functions
 * below refuse to compute it rather than return a number with no meaning.
 *
 * The normalized index
 *
 *     lambda_k(A) = (N_k(A) : U_k) / (A0 : U_k),
 *
 * with U_k a ball of radius 2^-k about a fixed anchor and N_k(A) the 2^-k
 * neighborhood of A, stabilizes as k grows and recovers the invariant measure
 * of A relative to the reference subset A0. Both numerator and denominator
 * are greedy covers over the same translate pool, so their systematic biases
 * cancel in the ratio.
 *
 * Computation is witness-based: A is represented by its declared witness
 * sample, and a translate g.B covers witness w when B contains g^-1.w. The
 * greedy cover is an upper bound on the pool-restricted index; the packing
 * bound below it is a lower bound. Both are exact counts for the given pool
 * and witness resolution, not for the continuum objects.
 */

namespace orbitkit {

struct CoveringOptions {
    int pool_target = 4096;   // translate pool size (rounded to a Folner set)
    int witness_cap = 4096;   // witnesses of A actually used (even subsample)
    bool compute_lower_bound = true;
    std::uint64_t seed = 1;
};

struct CoveringResult {
    long long index_value = 0;  // greedy cover size, upper bound for the pool
    long long lower_bound = 0;  // packing bound; 0 when not computed
    std::vector<GroupElement> chosen_translates;
    bool exhaustive = false;  // greedy search, never certified minimal
    int pool_index = 0;
    long long pool_size = 0;
    long long witnesses_used = 0;
};

// g.S as a subset: p lies in g.S iff g^-1.p lies in S
inline CompactSubset translate_subset(const ActionScenario& sc, const CompactSubset& s,
                                      const GroupElement& g) {
    CompactSubset out;
    GroupElement ginv = inverse(sc.group, g);
    out.indicator = [&sc, s, ginv](const Point& p) { return s.indicator(sc.apply(ginv, p)); };
    out.witness_sample.reserve(s.witness_sample.size());
    for (const Point& w : s.witness_sample) out.witness_sample.push_back(sc.apply(g, w));
    return out;
}

inline CompactSubset ball_subset(const ActionScenario& sc, const Point& center, double radius) {
    require(radius > 0.0, "ball_subset: radius must be positive");
    CompactSubset out;
    const MetricSpace* space = &sc.space;
    out.indicator = [space, center, radius](const Point& p) {
        return space->distance(center, p) <= radius;
    };
    out.witness_sample = {center};
    return out;
}

// eps-neighborhood of a subset: analytic when declared, witness-based otherwise
inline CompactSubset widen_subset(const ActionScenario& sc, const CompactSubset& s,
                                  double eps) {
    require(eps >= 0.0, "widen_subset: eps must be nonnegative");
    if (s.widen) return s.widen(eps);
    CompactSubset out;
    const MetricSpace* space = &sc.space;
    auto witnesses = s.witness_sample;
    auto inner = s.indicator;
    out.indicator = [space, witnesses, inner, eps](const Point& p) {
        if (inner(p)) return true;
        for (const Point& w : witnesses)
            if (space->distance(w, p) <= eps) return true;
        return false;
    };
    out.witness_sample = s.witness_sample;
    return out;
}

// Least number of pool translates of B whose union covers the witness sample
// of A, chosen greedily in canonical pool order. Throws resource_error when
// the pool cannot cover at all.
inline CoveringResult covering_index(const ActionScenario& sc, const CompactSubset& a,
                                     const CompactSubset& b, const CoveringOptions& opts = {}) {
    require(static_cast<bool>(a.indicator) && static_cast<bool>(b.indicator),
            "covering_index: both subsets need indicators");
    require(!a.witness_sample.empty(), "covering_index: subset A has no witness sample");
    if (!sc.flags.isometric_action) {
        // translate counts stay comparable when the action is isometric on the
        // one stratum that hosts every witness of both subsets
        bool one_stratum = sc.flags.stratum_isometric;
        if (one_stratum) {
            const int s0 = a.witness_sample.front().stratum;
            for (const Point& p : a.witness_sample) one_stratum &= (p.stratum == s0);
            for (const Point& p : b.witness_sample) one_stratum &= (p.stratum == s0);
        }
        require(one_stratum,
                "covering_index: the action is not isometric and the subsets are not "
                "confined to a single isometric stratum, so translate counts are not "
                "comparable and the index is undefined");
    }

    CoveringResult res;
    res.pool_index = folner_index_reaching(sc.group, opts.pool_target);
    std::vector<GroupElement> pool = folner_set(sc.group, res.pool_index, sc.id).elements;
    res.pool_size = static_cast<long long>(pool.size());

    // even witness subsample, stride preserving the declared order
    std::vector<const Point*> wit;
    {
        const auto& full = a.witness_sample;
        std::size_t stride = std::max<std::size_t>(
            1, full.size() / static_cast<std::size_t>(std::max(1, opts.witness_cap)));
        for (std::size_t i = 0; i < full.size(); i += stride) wit.push_back(&full[i]);
    }
    const std::size_t nw = wit.size();
    res.witnesses_used = static_cast<long long>(nw);
    const std::size_t blocks = (nw + 63) / 64;

    // masks[gi] = bitset over witnesses covered by pool[gi].B
    std::vector<std::uint64_t> masks(pool.size() * blocks, 0ull);
    Point buf;
    for (std::size_t gi = 0; gi < pool.size(); ++gi) {
        GroupElement ginv = inverse(sc.group, pool[gi]);
        std::uint64_t* row = &masks[gi * blocks];
        for (std::size_t w = 0; w < nw; ++w) {
            sc.apply_into(ginv, *wit[w], buf);
            buf.scenario_id = sc.id;
            if (b.indicator(buf)) row[w / 64] |= 1ull << (w % 64);
        }
    }

    std::vector<std::uint64_t> uncovered(blocks, ~0ull);
    if (nw % 64) uncovered[blocks - 1] = (1ull << (nw % 64)) - 1;
    std::size_t remaining = nw;
    while (remaining > 0) {
        std::size_t best = pool.size();
        int best_gain = 0;
        for (std::size_t gi = 0; gi < pool.size(); ++gi) {
            const std::uint64_t* row = &masks[gi * blocks];
            int gain = 0;
            for (std::size_t blk = 0; blk < blocks; ++blk)
                gain += __builtin_popcountll(row[blk] & uncovered[blk]);
            if (gain > best_gain) {
                best_gain = gain;
                best = gi;
            }
        }
        if (best == pool.size())
            throw resource_error(
                "covering_index: translate pool exhausted with witnesses still uncovered; "
                "enlarge pool_target or fatten B");
        const std::uint64_t* row = &masks[best * blocks];
        for (std::size_t blk = 0; blk < blocks; ++blk) uncovered[blk] &= ~row[blk];
        remaining -= static_cast<std::size_t>(best_gain);
        res.chosen_translates.push_back(pool[best]);
    }
    res.index_value = static_cast<long long>(res.chosen_translates.size());

    if (opts.compute_lower_bound) {
        // witnesses no single pool translate covers two of; any cover needs
        // one translate per packed witness
        const std::size_t pblocks = (pool.size() + 63) / 64;
        std::vector<std::uint64_t> tmask(nw * pblocks, 0ull);
        for (std::size_t gi = 0; gi < pool.size(); ++gi) {
            const std::uint64_t* row = &masks[gi * blocks];
            for (std::size_t w = 0; w < nw; ++w)
                if ((row[w / 64] >> (w % 64)) & 1ull)
                    tmask[w * pblocks + gi / 64] |= 1ull << (gi % 64);
        }
        std::vector<std::size_t> packed;
        for (std::size_t w = 0; w < nw; ++w) {
            bool ok = true;
            for (std::size_t k : packed) {
                const std::uint64_t* a_row = &tmask[w * pblocks];
                const std::uint64_t* b_row = &tmask[k * pblocks];
                for (std::size_t blk = 0; blk < pblocks; ++blk)
                    if (a_row[blk] & b_row[blk]) {
                        ok = false;
                        break;
                    }
                if (!ok) break;
            }
            if (ok) packed.push_back(w);
        }
        res.lower_bound = static_cast<long long>(packed.size());
    }
    return res;
}

struct MeasureOptions {
    int k_lo = 2;
    int k_hi = 12;        // finest scale 2^-k_hi
    double tol = 5e-3;    // consecutive-stage agreement
    int pool_factor = 2;  // stage-k pool target: pool_factor << k
    int witness_factor = 2;
    std::uint64_t seed = 1;
};

struct MeasureEstimate {
    std::vector<std::pair<int, double>> stages;  // (k, lambda_k)
    double value = 0.0;
    bool converged = false;
    long long last_numerator = 0;
    long long last_denominator = 0;
};

// lambda(K) relative to `reference`, via covering indices against shrinking
// balls about `anchor`. Stops as soon as two consecutive scales agree.
inline MeasureEstimate invariant_measure_estimate(const ActionScenario& sc,
                                                  const CompactSubset& k_set,
                                                  const CompactSubset& reference,
                                                  const Point& anchor,
                                                  const MeasureOptions& opts = {}) {
    require(opts.k_lo >= 1 && opts.k_hi >= opts.k_lo,
            "invariant_measure_estimate: need 1 <= k_lo <= k_hi");
    MeasureEstimate est;
    for (int k = opts.k_lo; k <= opts.k_hi; ++k) {
        double eps = std::ldexp(1.0, -k);
        CompactSubset nbhd = widen_subset(sc, k_set, eps);
        CompactSubset ball = ball_subset(sc, anchor, eps);
        CoveringOptions cov;
        cov.pool_target = opts.pool_factor << k;
        cov.witness_cap = opts.witness_factor << k;
        cov.compute_lower_bound = false;
        cov.seed = opts.seed;
        long long num = covering_index(sc, nbhd, ball, cov).index_value;
        long long den = covering_index(sc, reference, ball, cov).index_value;
        require(den > 0, "invariant_measure_estimate: reference subset produced an empty cover");
        double lambda = static_cast<double>(num) / static_cast<double>(den);
        est.stages.emplace_back(k, lambda);
        est.value = lambda;
        est.last_numerator = num;
        est.last_denominator = den;
        std::size_t s = est.stages.size();
        if (s >= 2 && std::abs(est.stages[s - 1].second - est.stages[s - 2].second) < opts.tol) {
            est.converged = true;
            break;
        }
    }
    return est;
}

// Folner visit frequency of a subset along the orbit of `anchor`: the measure
// the unique invariant probability assigns to it when the orbit
// equidistributes.
inline AverageReport visit_frequency(const ActionScenario& sc, const CompactSubset& s,
                                     const Point& anchor, const AveragingOptions& opts = {}) {
    require(static_cast<bool>(s.indicator), "visit_frequency: subset needs an indicator");
    return folner_average(
        sc, [&s](const Point& p) { return cx(s.indicator(p) ? 1.0 : 0.0, 0.0); }, anchor, opts);
}

struct UniquenessReport {
    double lambda1 = 0.0, lambda2 = 0.0;  // covering-derived measures
    double nu1 = 0.0, nu2 = 0.0;          // visit frequencies
    double lhs = 0.0, rhs = 0.0;          // lambda1*nu2 vs lambda2*nu1
    double rel_error = 0.0;
    double tol = 0.0;
    bool consistent = false;
    MeasureEstimate estimate1, estimate2;
};

// When the orbit closure carries a unique invariant probability, the
// covering-derived measure and the visit frequency are proportional, so
// lambda(K1) * nu(K2) = lambda(K2) * nu(K1). Checks that identity within a
// relative tolerance.
inline UniquenessReport uniqueness_check(const ActionScenario& sc, const CompactSubset& k1,
                                         const CompactSubset& k2,
                                         const CompactSubset& reference, const Point& anchor,
                                         double rel_tol = 3e-2,
                                         const MeasureOptions& mopts = {},
                                         const AveragingOptions& aopts = {}) {
    UniquenessReport rep;
    rep.tol = rel_tol;
    rep.estimate1 = invariant_measure_estimate(sc, k1, reference, anchor, mopts);
    rep.estimate2 = invariant_measure_estimate(sc, k2, reference, anchor, mopts);
    rep.lambda1 = rep.estimate1.value;
    rep.lambda2 = rep.estimate2.value;
    rep.nu1 = visit_frequency(sc, k1, anchor, aopts).value.real();
    rep.nu2 = visit_frequency(sc, k2, anchor, aopts).value.real();
    rep.lhs = rep.lambda1 * rep.nu2;
    rep.rhs = rep.lambda2 * rep.nu1;
    double scale = std::max({std::abs(rep.lhs), std::abs(rep.rhs), 1e-12});
    rep.rel_error = std::abs(rep.lhs - rep.rhs) / scale;
    rep.consistent = rep.rel_error <= rel_tol;
    return rep;
}

}  // namespace orbitkit
