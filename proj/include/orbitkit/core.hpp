#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace orbitkit {

using cx = std::complex<double>;

// Two points of the same scenario closer than this are treated as equal
// (orbit revisit detection, stabilizer detection, net membership).
inline constexpr double point_eq_tol = 1e-9;

// A point of a compact space. Spaces are stratified (finitely many named
// parameter charts); `stratum` selects the chart, `coords` are the chart
// parameters. Angles live in [0,1) (unit-circumference convention), dyadic
// digits are stored exactly as 0.0 / 1.0.
struct Point {
    int scenario_id = 0;
    int stratum = 0;
    std::vector<double> coords;
};

// Thrown when a resource cap is exceeded (set materialization, BFS budget).
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic RNG. mt19937_64 is fully specified by the standard; the
// uniform derivations below avoid std::uniform_* distributions, whose
// output is implementation-defined, so streams are reproducible everywhere.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform in [0, 1)
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform in {0, ..., n-1}, n >= 1; rejection keeps it unbiased
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = eng_();
        while (v >= limit) v = eng_();
        return v % n;
    }

    // uniform integer in [lo, hi] inclusive
    std::int64_t int_in(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw std::invalid_argument("Rng::int_in: empty range");
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    double in(double lo, double hi) { return lo + (hi - lo) * unit(); }

  private:
    std::mt19937_64 eng_;
};

// wrap into [0, 1)
inline double mod1(double t) {
    double r = t - std::floor(t);
    if (r >= 1.0) r -= 1.0;  // guard against floor rounding at negative epsilons
    return r;
}

inline void require(bool cond, const char* what) {
    if (!cond) throw std::domain_error(what);
}

}  // namespace orbitkit
