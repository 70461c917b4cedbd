#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "scenario.hpp"

/*
 * The bundled scenario catalog. Seven actions on compact metric spaces:
 *
 *   rotation                 irrational circle rotation (golden ratio angle)
 *   rational_rotation        rotation by p/q, every orbit has q points
 *   varying_angle_cylinder   stack of circles {1/i} x S^1 plus a limit
 *                            circle, level i rotating by angle + 1/(i*sqrt2)
 *   spiral_two_circles       two horizontal circles and a spiral accumulating
 *                            on both, shifted along itself
 *   spiral_identified        the same spiral with its two limit circles glued
 *                            into one ring
 *   triple_cone              three sheets of shrinking circles glued at a
 *                            common apex, rotated level-wise and cycled by Z/3
 *   dyadic_product           levels {1/n} x {0,1}^depth plus a limit fiber,
 *                            digit flips acting on a growing prefix
 *
 * Every builder fills the full ActionScenario contract: metric, sampler,
 * action, observable catalog, orbit generators, closure quadrature,
 * perturbation proposals, field grid, point syntax, and declared flags.
 */

namespace orbitkit {

inline constexpr double golden_alpha = 0.618033988749894848204586834366;

namespace detail {

inline constexpr double pi_d = 3.141592653589793238462643383279;

inline double arc_dist(double s, double t) {
    double d = std::fabs(s - t);
    return d > 0.5 ? 1.0 - d : d;
}

// chord length between angles s, t on a radius-r circle
inline double chord(double r, double s, double t) {
    return 2.0 * r * std::fabs(std::sin(pi_d * (s - t)));
}

inline std::string format_angle(const char* prefix, double t) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s%.17g", prefix, t);
    return buf;
}

inline std::vector<std::string> split_spec(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_double(const std::string& tok, const std::string& what) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw std::domain_error("cannot parse number '" + tok + "' in " + what);
    }
}

inline long long parse_int(const std::string& tok, const std::string& what) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw std::domain_error("cannot parse integer '" + tok + "' in " + what);
    }
}

inline Point make_point(int scenario_id, int stratum, std::vector<double> coords) {
    Point p;
    p.scenario_id = scenario_id;
    p.stratum = stratum;
    p.coords = std::move(coords);
    return p;
}

// observable catalog shared by the circle-valued scenarios; `angle` extracts
// the angular coordinate of a point
template <typename AngleFn>
std::vector<CatalogFunction> circle_catalog(AngleFn angle) {
    auto harmonics = [angle](double k, bool is_cos) {
        return [angle, k, is_cos](const Point& p) {
            double a = 2.0 * pi_d * k * angle(p);
            return cx(is_cos ? std::cos(a) : std::sin(a), 0.0);
        };
    };
    std::vector<CatalogFunction> cat;
    cat.push_back({"one", [](const Point&) { return cx(1.0, 0.0); }});
    cat.push_back({"cos1", harmonics(1.0, true)});
    cat.push_back({"sin1", harmonics(1.0, false)});
    cat.push_back({"cos2", harmonics(2.0, true)});
    cat.push_back({"sin2", harmonics(2.0, false)});
    cat.push_back({"cossq", [angle](const Point& p) {
                       double c = std::cos(2.0 * pi_d * angle(p));
                       return cx(c * c, 0.0);
                   }});
    return cat;
}

// arc subsets of a plain circle scenario: "all" or "arc:<center>:<halfwidth>"
inline CompactSubset circle_arc_subset(int scenario_id, double center, double halfwidth);

inline CompactSubset circle_subset_from_spec(int scenario_id, const std::string& spec) {
    auto parts = split_spec(spec, ':');
    if (parts.size() == 1 && parts[0] == "all") return circle_arc_subset(scenario_id, 0.0, 0.5);
    if (parts.size() == 3 && parts[0] == "arc") {
        double center = mod1(parse_double(parts[1], "arc spec"));
        double halfwidth = parse_double(parts[2], "arc spec");
        require(halfwidth > 0.0 && halfwidth <= 0.5, "arc halfwidth must lie in (0, 1/2]");
        return circle_arc_subset(scenario_id, center, halfwidth);
    }
    throw std::domain_error("unknown subset spec '" + spec +
                            "' (expected 'all' or 'arc:<center>:<halfwidth>')");
}

inline CompactSubset circle_arc_subset(int scenario_id, double center, double halfwidth) {
    CompactSubset s;
    const bool full = halfwidth >= 0.5;
    s.indicator = [center, halfwidth, full](const Point& p) {
        return full || arc_dist(p.coords[0], center) <= halfwidth;
    };
    int count = std::max(512, std::min(8192, static_cast<int>(std::ceil(2.0 * halfwidth * 8192.0))));
    s.witness_sample.reserve(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        // midpoints keep every witness strictly inside the arc, so boundary
        // rounding can never push a witness past its own indicator
        double t = full ? static_cast<double>(j) / count
                        : center + halfwidth * ((2.0 * j + 1.0) / count - 1.0);
        s.witness_sample.push_back(make_point(scenario_id, 0, {mod1(t)}));
    }
    s.widen = [scenario_id, center, halfwidth](double eps) {
        return circle_arc_subset(scenario_id, center, std::min(0.5, halfwidth + eps));
    };
    return s;
}

// ---------------------------------------------------------------- rotation

inline ActionScenario build_rotation(int id, const std::string& name, double angle,
                                     bool rational, long long q) {
    ActionScenario sc;
    sc.id = id;
    sc.name = name;
    sc.group = GroupDescriptor::free_abelian(1);
    sc.flags.lyapunov_stable = true;
    sc.flags.isometric_action = true;
    sc.flags.stratum_isometric = true;
    if (rational) sc.flags.finite_card_bound = static_cast<int>(q);
    sc.expected_classification = "SelfDual";
    sc.stratum_coords = {{0, true}};

    sc.space = MetricSpace(
        id, 0.5, 1,
        [](const Point& a, const Point& b) { return arc_dist(a.coords[0], b.coords[0]); },
        [id](int count, std::uint64_t seed) {
            Rng rng(seed);
            std::vector<Point> out;
            out.reserve(static_cast<std::size_t>(count));
            for (int i = 0; i < count; ++i) out.push_back(make_point(id, 0, {rng.unit()}));
            return out;
        });

    sc.apply_into = [id, angle](const GroupElement& g, const Point& x, Point& out) {
        double n = g.word.empty() ? 0.0 : static_cast<double>(g.word[0]);
        out.scenario_id = id;
        out.stratum = 0;
        out.coords.assign(1, mod1(x.coords[0] + n * angle));
    };

    sc.catalog = circle_catalog([](const Point& p) { return p.coords[0]; });

    sc.orbit_generators = [id](const Point&) {
        return std::vector<GroupElement>{{id, {1}}, {id, {-1}}};
    };

    sc.closure_average = [id, rational, q, angle](const Point& x,
                                                  const std::function<cx(const Point&)>& fn,
                                                  int quad) {
        Point p = x;
        if (rational) {
            // the orbit is exactly q equispaced points
            cx sum{0.0, 0.0};
            for (long long k = 0; k < q; ++k) {
                p.coords[0] = mod1(x.coords[0] + static_cast<double>(k) * angle);
                sum += fn(p);
            }
            return sum / static_cast<double>(q);
        }
        cx sum{0.0, 0.0};
        for (int k = 0; k < quad; ++k) {
            p.coords[0] = mod1(x.coords[0] + static_cast<double>(k) / quad);
            sum += fn(p);
        }
        return sum / static_cast<double>(quad);
    };

    sc.perturb = [id](const Point& x, double scale, Rng& rng) {
        return make_point(id, 0, {mod1(x.coords[0] + scale * (2.0 * rng.unit() - 1.0))});
    };

    sc.field_grid = [id](int size) {
        std::vector<Point> out;
        out.reserve(static_cast<std::size_t>(size));
        for (int k = 0; k < size; ++k)
            out.push_back(make_point(id, 0, {static_cast<double>(k) / size}));
        return out;
    };

    sc.format_point = [](const Point& p) { return format_angle("circle:", p.coords[0]); };
    sc.parse_point = [id, name](const std::string& s) {
        auto parts = split_spec(s, ':');
        if (parts.size() != 2 || parts[0] != "circle")
            throw std::domain_error("point in " + name + " must look like 'circle:<t>'");
        return make_point(id, 0, {mod1(parse_double(parts[1], "point spec"))});
    };

    sc.subset_from_spec = [id](const std::string& spec) {
        return circle_subset_from_spec(id, spec);
    };
    return sc;
}

// ------------------------------------------------- varying_angle_cylinder

inline double cylinder_level_pos(int stratum) {
    return stratum == 0 ? 0.0 : 1.0 / stratum;
}

inline ActionScenario build_cylinder(int id, double angle, int levels) {
    require(levels >= 2, "varying_angle_cylinder needs at least 2 levels");
    ActionScenario sc;
    sc.id = id;
    sc.name = "varying_angle_cylinder";
    sc.group = GroupDescriptor::free_abelian(1);
    sc.flags.lyapunov_stable = false;
    sc.flags.isometric_action = false;
    // each level circle is rotated rigidly; only the cross-level speeds differ
    sc.flags.stratum_isometric = true;
    sc.expected_classification = "Inconclusive";
    sc.stratum_coords.assign(static_cast<std::size_t>(levels + 1), {0, true});

    sc.space = MetricSpace(
        id, 1.5, levels + 1,
        [](const Point& a, const Point& b) {
            return std::fabs(cylinder_level_pos(a.stratum) - cylinder_level_pos(b.stratum)) +
                   arc_dist(a.coords[0], b.coords[0]);
        },
        [id, levels](int count, std::uint64_t seed) {
            Rng rng(seed);
            std::vector<Point> out;
            out.reserve(static_cast<std::size_t>(count));
            for (int i = 0; i < count; ++i)
                out.push_back(make_point(id, i % (levels + 1), {rng.unit()}));
            return out;
        });

    // level i rotates by angle + 1/(i*sqrt2); the limit circle by the bare angle
    auto level_angle = [angle](int stratum) {
        return stratum == 0 ? angle : angle + 1.0 / (stratum * std::sqrt(2.0));
    };

    sc.apply_into = [id, level_angle](const GroupElement& g, const Point& x, Point& out) {
        double n = g.word.empty() ? 0.0 : static_cast<double>(g.word[0]);
        out.scenario_id = id;
        out.stratum = x.stratum;
        out.coords.assign(1, mod1(x.coords[0] + n * level_angle(x.stratum)));
    };

    sc.catalog = circle_catalog([](const Point& p) { return p.coords[0]; });
    sc.catalog.push_back(
        {"jcoord", [](const Point& p) { return cx(cylinder_level_pos(p.stratum), 0.0); }});

    sc.orbit_generators = [id](const Point&) {
        return std::vector<GroupElement>{{id, {1}}, {id, {-1}}};
    };

    sc.closure_average = [](const Point& x, const std::function<cx(const Point&)>& fn,
                            int quad) {
        Point p = x;
        cx sum{0.0, 0.0};
        for (int k = 0; k < quad; ++k) {
            p.coords[0] = mod1(x.coords[0] + static_cast<double>(k) / quad);
            sum += fn(p);
        }
        return sum / static_cast<double>(quad);
    };

    sc.perturb = [id, levels](const Point& x, double scale, Rng& rng) {
        if (rng.unit() < 0.5) {
            // hop to the neighboring level, keeping the phase
            int s = x.stratum;
            int ns;
            if (s == 0) {
                ns = levels;  // nearest level to the limit circle
            } else if (s == levels) {
                ns = levels - 1;
            } else {
                ns = s + (rng.unit() < 0.5 ? 1 : -1);
            }
            return make_point(id, ns, {x.coords[0]});
        }
        return make_point(id, x.stratum,
                          {mod1(x.coords[0] + scale * (2.0 * rng.unit() - 1.0))});
    };

    sc.field_grid = [id, levels](int size) {
        std::vector<Point> out;
        int per = std::max(1, size / (levels + 1));
        for (int s = 0; s <= levels; ++s)
            for (int k = 0; k < per; ++k)
                out.push_back(make_point(id, s, {static_cast<double>(k) / per}));
        return out;
    };

    sc.format_point = [](const Point& p) {
        return "level:" + std::to_string(p.stratum) + ":" +
               format_angle("", p.coords[0]);
    };
    sc.parse_point = [id, levels](const std::string& s) {
        auto parts = split_spec(s, ':');
        if (parts.size() != 3 || parts[0] != "level")
            throw std::domain_error(
                "point in varying_angle_cylinder must look like 'level:<i>:<t>'");
        long long lev = parse_int(parts[1], "point spec");
        require(lev >= 0 && lev <= levels, "cylinder level outside the declared range");
        return make_point(id, static_cast<int>(lev),
                          {mod1(parse_double(parts[2], "point spec"))});
    };
    return sc;
}

// ------------------------------------------------------ spiral_two_circles

// spiral height: z runs through (-1, 1) as tau runs through the line
inline double spiral_z(double tau) { return (2.0 / pi_d) * std::atan(tau); }

// embedding angle of the spiral at parameter tau; the step tau -> tau + 1
// advances it by the same angle the limit circles rotate by, so the action
// extends continuously to the closure
inline double spiral_angle(double tau) { return mod1(golden_alpha * tau); }

inline std::array<double, 3> spiral_embed(const Point& p) {
    if (p.stratum == 2) {
        double a = 2.0 * pi_d * spiral_angle(p.coords[0]);
        return {std::cos(a), std::sin(a), spiral_z(p.coords[0])};
    }
    double a = 2.0 * pi_d * p.coords[0];
    return {std::cos(a), std::sin(a), p.stratum == 0 ? 1.0 : -1.0};
}

inline ActionScenario build_spiral(int id) {
    ActionScenario sc;
    sc.id = id;
    sc.name = "spiral_two_circles";
    sc.group = GroupDescriptor::free_abelian(1);
    sc.flags.lyapunov_stable = false;
    sc.flags.isometric_action = false;
    sc.expected_classification = "Inconclusive";
    sc.stratum_coords = {{0, true}, {0, true}, {0, false}};

    sc.space = MetricSpace(
        id, 2.0 * std::sqrt(2.0), 3,
        [](const Point& a, const Point& b) {
            auto ea = spiral_embed(a), eb = spiral_embed(b);
            double dx = ea[0] - eb[0], dy = ea[1] - eb[1], dz = ea[2] - eb[2];
            return std::sqrt(dx * dx + dy * dy + dz * dz);
        },
        [id](int count, std::uint64_t seed) {
            Rng rng(seed);
            std::vector<Point> out;
            out.reserve(static_cast<std::size_t>(count));
            for (int i = 0; i < count; ++i) {
                int s = i % 3;
                if (s < 2) {
                    out.push_back(make_point(id, s, {rng.unit()}));
                } else {
                    double u = rng.unit();
                    double tau;
                    if (u < 0.4) {
                        tau = rng.in(-5.0, 5.0);
                    } else if (u < 0.8) {
                        tau = rng.in(-50.0, 50.0);
                    } else {
                        double mag = std::exp(rng.in(std::log(50.0), std::log(1e6)));
                        tau = (rng.unit() < 0.5 ? -1.0 : 1.0) * mag;
                    }
                    out.push_back(make_point(id, 2, {tau}));
                }
            }
            return out;
        });

    sc.apply_into = [id](const GroupElement& g, const Point& x, Point& out) {
        double n = g.word.empty() ? 0.0 : static_cast<double>(g.word[0]);
        out.scenario_id = id;
        out.stratum = x.stratum;
        if (x.stratum == 2)
            out.coords.assign(1, x.coords[0] + n);
        else
            out.coords.assign(1, mod1(x.coords[0] + n * golden_alpha));
    };

    auto angle_of = [](const Point& p) {
        return p.stratum == 2 ? spiral_angle(p.coords[0]) : p.coords[0];
    };
    sc.catalog.push_back({"one", [](const Point&) { return cx(1.0, 0.0); }});
    sc.catalog.push_back({"z", [](const Point& p) { return cx(spiral_embed(p)[2], 0.0); }});
    sc.catalog.push_back({"zsq", [](const Point& p) {
                              double z = spiral_embed(p)[2];
                              return cx(z * z, 0.0);
                          }});
    sc.catalog.push_back({"cos1", [angle_of](const Point& p) {
                              return cx(std::cos(2.0 * pi_d * angle_of(p)), 0.0);
                          }});
    sc.catalog.push_back({"sin1", [angle_of](const Point& p) {
                              return cx(std::sin(2.0 * pi_d * angle_of(p)), 0.0);
                          }});

    sc.orbit_generators = [id](const Point&) {
        return std::vector<GroupElement>{{id, {1}}, {id, {-1}}};
    };

    // invariant measures on closures: arc length on a limit circle; a spiral
    // orbit spends half its time near each circle in the Folner limit
    sc.closure_average = [id](const Point& x, const std::function<cx(const Point&)>& fn,
                              int quad) {
        cx sum{0.0, 0.0};
        Point p = x;
        if (x.stratum < 2) {
            for (int k = 0; k < quad; ++k) {
                p.coords[0] = mod1(x.coords[0] + static_cast<double>(k) / quad);
                sum += fn(p);
            }
            return sum / static_cast<double>(quad);
        }
        double base = spiral_angle(x.coords[0]);
        for (int k = 0; k < quad; ++k) {
            double t = mod1(base + static_cast<double>(k) / quad);
            sum += fn(make_point(id, 0, {t}));
            sum += fn(make_point(id, 1, {t}));
        }
        return sum / static_cast<double>(2 * quad);
    };

    sc.perturb = [id](const Point& x, double scale, Rng& rng) {
        if (x.stratum == 2)
            return make_point(id, 2, {x.coords[0] + scale * (2.0 * rng.unit() - 1.0)});
        if (rng.unit() < 0.5)
            return make_point(id, x.stratum,
                              {mod1(x.coords[0] + 0.2 * scale * (2.0 * rng.unit() - 1.0))});
        // angle-aligned spiral point on the side of this circle
        std::int64_t k = rng.int_in(1, 6) * (x.stratum == 0 ? 1 : -1);
        double tau = (x.coords[0] + static_cast<double>(k)) / golden_alpha;
        return make_point(id, 2, {tau});
    };

    sc.field_grid = [id](int size) {
        std::vector<Point> out;
        int ns = std::max(8, size / 5);
        for (int s = 0; s < 2; ++s)
            for (int j = 0; j < ns; ++j)
                out.push_back(make_point(id, s, {static_cast<double>(j) / ns}));
        // spiral tail points whose angle matches a circle grid point exactly
        for (int j = 0; j < ns; ++j) {
            double t = static_cast<double>(j) / ns;
            out.push_back(make_point(id, 2, {(t - (10.0 + j)) / golden_alpha}));
        }
        int rem = std::max(0, size - 3 * ns);
        for (int m = 0; m < rem; ++m)
            out.push_back(make_point(id, 2, {-40.0 + 80.0 * (m + 0.5) / rem}));
        return out;
    };

    sc.format_point = [](const Point& p) {
        static const char* prefix[] = {"splus:", "sminus:", "sigma:"};
        return format_angle(prefix[p.stratum], p.coords[0]);
    };
    sc.parse_point = [id](const std::string& s) {
        auto parts = split_spec(s, ':');
        if (parts.size() == 2 && parts[0] == "splus")
            return make_point(id, 0, {mod1(parse_double(parts[1], "point spec"))});
        if (parts.size() == 2 && parts[0] == "sminus")
            return make_point(id, 1, {mod1(parse_double(parts[1], "point spec"))});
        if (parts.size() == 2 && parts[0] == "sigma")
            return make_point(id, 2, {parse_double(parts[1], "point spec")});
        throw std::domain_error(
            "point in spiral_two_circles must look like 'splus:<t>', 'sminus:<t>' or "
            "'sigma:<tau>'");
    };
    return sc;
}

// ------------------------------------------------------- spiral_identified

// the quotient that glues the two limit circles into one ring, realized by an
// embedding into R^4 that maps both spiral ends onto the same circle
inline std::array<double, 4> identified_embed(const Point& p) {
    if (p.stratum == 0) {
        double a = 2.0 * pi_d * p.coords[0];
        return {std::cos(a), std::sin(a), 1.0, 0.0};
    }
    double a = 2.0 * pi_d * spiral_angle(p.coords[0]);
    double z = spiral_z(p.coords[0]);
    return {std::cos(a), std::sin(a), z * z, z * (1.0 - z * z)};
}

inline ActionScenario build_identified(int id) {
    ActionScenario sc;
    sc.id = id;
    sc.name = "spiral_identified";
    sc.group = GroupDescriptor::free_abelian(1);
    sc.flags.lyapunov_stable = false;
    sc.flags.isometric_action = false;
    sc.expected_classification = "Inconclusive";
    sc.stratum_coords = {{0, true}, {0, false}};

    sc.space = MetricSpace(
        id, std::sqrt(5.0), 2,
        [](const Point& a, const Point& b) {
            auto ea = identified_embed(a), eb = identified_embed(b);
            double s = 0.0;
            for (int i = 0; i < 4; ++i) s += (ea[i] - eb[i]) * (ea[i] - eb[i]);
            return std::sqrt(s);
        },
        [id](int count, std::uint64_t seed) {
            Rng rng(seed);
            std::vector<Point> out;
            out.reserve(static_cast<std::size_t>(count));
            for (int i = 0; i < count; ++i) {
                if (i % 2 == 0) {
                    out.push_back(make_point(id, 0, {rng.unit()}));
                } else {
                    double u = rng.unit();
                    double tau = u < 0.5 ? rng.in(-50.0, 50.0)
                                         : (rng.unit() < 0.5 ? -1.0 : 1.0) *
                                               std::exp(rng.in(std::log(50.0), std::log(1e6)));
                    out.push_back(make_point(id, 1, {tau}));
                }
            }
            return out;
        });

    sc.apply_into = [id](const GroupElement& g, const Point& x, Point& out) {
        double n = g.word.empty() ? 0.0 : static_cast<double>(g.word[0]);
        out.scenario_id = id;
        out.stratum = x.stratum;
        if (x.stratum == 1)
            out.coords.assign(1, x.coords[0] + n);
        else
            out.coords.assign(1, mod1(x.coords[0] + n * golden_alpha));
    };

    auto angle_of = [](const Point& p) {
        return p.stratum == 1 ? spiral_angle(p.coords[0]) : p.coords[0];
    };
    sc.catalog.push_back({"one", [](const Point&) { return cx(1.0, 0.0); }});
    sc.catalog.push_back({"cos1", [angle_of](const Point& p) {
                              return cx(std::cos(2.0 * pi_d * angle_of(p)), 0.0);
                          }});
    sc.catalog.push_back({"sin1", [angle_of](const Point& p) {
                              return cx(std::sin(2.0 * pi_d * angle_of(p)), 0.0);
                          }});
    sc.catalog.push_back({"zsq", [](const Point& p) {
                              return cx(identified_embed(p)[2], 0.0);
                          }});

    sc.orbit_generators = [id](const Point&) {
        return std::vector<GroupElement>{{id, {1}}, {id, {-1}}};
    };

    // every orbit closure carries the ring's arc length as its invariant
    // measure (spiral orbits accumulate on the ring from both ends)
    sc.closure_average = [id, angle_of](const Point& x,
                                        const std::function<cx(const Point&)>& fn, int quad) {
        double base = angle_of(x);
        cx sum{0.0, 0.0};
        for (int k = 0; k < quad; ++k)
            sum += fn(make_point(id, 0, {mod1(base + static_cast<double>(k) / quad)}));
        return sum / static_cast<double>(quad);
    };

    sc.perturb = [id](const Point& x, double scale, Rng& rng) {
        if (x.stratum == 1)
            return make_point(id, 1, {x.coords[0] + scale * (2.0 * rng.unit() - 1.0)});
        if (rng.unit() < 0.4)
            return make_point(id, 0,
                              {mod1(x.coords[0] + 0.2 * scale * (2.0 * rng.unit() - 1.0))});
        // far spiral point gluing onto the ring at this angle
        double sign = rng.unit() < 0.5 ? -1.0 : 1.0;
        std::int64_t k = rng.int_in(50, 400);
        double tau = (x.coords[0] + sign * static_cast<double>(k)) / golden_alpha;
        return make_point(id, 1, {tau});
    };

    sc.field_grid = [id](int size) {
        std::vector<Point> out;
        int nr = std::max(8, size / 4);
        for (int j = 0; j < nr; ++j)
            out.push_back(make_point(id, 0, {static_cast<double>(j) / nr}));
        int rem = std::max(0, size - nr);
        for (int m = 0; m < rem; ++m)
            out.push_back(make_point(id, 1, {-40.0 + 80.0 * (m + 0.5) / rem}));
        return out;
    };

    sc.format_point = [](const Point& p) {
        return format_angle(p.stratum == 0 ? "ring:" : "sigma:", p.coords[0]);
    };
    sc.parse_point = [id](const std::string& s) {
        auto parts = split_spec(s, ':');
        if (parts.size() == 2 && parts[0] == "ring")
            return make_point(id, 0, {mod1(parse_double(parts[1], "point spec"))});
        if (parts.size() == 2 && parts[0] == "sigma")
            return make_point(id, 1, {parse_double(parts[1], "point spec")});
        throw std::domain_error(
            "point in spiral_identified must look like 'ring:<t>' or 'sigma:<tau>'");
    };
    return sc;
}

// ------------------------------------------------------------- triple_cone

struct ConeChart {
    int copy = 0;   // which of the three sheets
    int level = 0;  // signed circle index k, never 0
};

inline ConeChart cone_decode(int stratum, int cone_levels) {
    ConeChart c;
    int li = (stratum - 1) % (2 * cone_levels);
    c.copy = (stratum - 1) / (2 * cone_levels);
    c.level = li < cone_levels ? li + 1 : -(li - cone_levels + 1);
    return c;
}

inline int cone_encode(int copy, int level, int cone_levels) {
    int li = level > 0 ? level - 1 : cone_levels + (-level - 1);
    return 1 + copy * 2 * cone_levels + li;
}

inline std::array<double, 3> cone_embed(const Point& p, int cone_levels) {
    if (p.stratum == 0) return {0.0, 0.0, 0.0};
    ConeChart c = cone_decode(p.stratum, cone_levels);
    double r = 1.0 / std::abs(c.level);
    double a = 2.0 * pi_d * p.coords[0];
    return {r * std::cos(a), r * std::sin(a), 1.0 / c.level};
}

inline ActionScenario build_cone(int id, double angle, int cone_levels) {
    require(cone_levels >= 2, "triple_cone needs at least 2 circle levels per sign");
    ActionScenario sc;
    sc.id = id;
    sc.name = "triple_cone";
    sc.group = GroupDescriptor::direct_sum(
        {GroupDescriptor::free_abelian(1), GroupDescriptor::finite_cyclic(3)});
    sc.flags.lyapunov_stable = true;
    sc.flags.isometric_action = false;
    sc.expected_classification = "NotSelfDual-SelfDualFails";
    sc.stratum_coords.assign(static_cast<std::size_t>(1 + 6 * cone_levels), {0, true});
    sc.stratum_coords[0] = {-1, false};

    sc.space = MetricSpace(
        id, 2.0 * std::sqrt(2.0), 1 + 6 * cone_levels,
        [cone_levels](const Point& a, const Point& b) {
            auto ea = cone_embed(a, cone_levels), eb = cone_embed(b, cone_levels);
            auto norm = [](const std::array<double, 3>& v) {
                return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
            };
            int ca = a.stratum == 0 ? -1 : cone_decode(a.stratum, cone_levels).copy;
            int cb = b.stratum == 0 ? -1 : cone_decode(b.stratum, cone_levels).copy;
            if (ca >= 0 && cb >= 0 && ca != cb) return norm(ea) + norm(eb);  // via the apex
            double dx = ea[0] - eb[0], dy = ea[1] - eb[1], dz = ea[2] - eb[2];
            return std::sqrt(dx * dx + dy * dy + dz * dz);
        },
        [id, cone_levels](int count, std::uint64_t seed) {
            Rng rng(seed);
            std::vector<Point> out;
            out.reserve(static_cast<std::size_t>(count));
            int strata = 1 + 6 * cone_levels;
            for (int i = 0; i < count; ++i) {
                int s = i % strata;
                if (s == 0)
                    out.push_back(make_point(id, 0, {}));
                else
                    out.push_back(make_point(id, s, {rng.unit()}));
            }
            return out;
        });

    sc.apply_into = [id, angle, cone_levels](const GroupElement& g, const Point& x,
                                             Point& out) {
        out.scenario_id = id;
        if (x.stratum == 0) {
            out.stratum = 0;
            out.coords.clear();
            return;
        }
        double n = g.word.empty() ? 0.0 : static_cast<double>(g.word[0]);
        std::int64_t m = g.word.size() > 1 ? g.word[1] : 0;
        ConeChart c = cone_decode(x.stratum, cone_levels);
        double level_angle = angle / (std::abs(c.level) + 1);
        int copy = static_cast<int>(((c.copy + m) % 3 + 3) % 3);
        out.stratum = cone_encode(copy, c.level, cone_levels);
        out.coords.assign(1, mod1(x.coords[0] + n * level_angle));
    };

    sc.catalog.push_back({"one", [](const Point&) { return cx(1.0, 0.0); }});
    sc.catalog.push_back({"xcoord", [cone_levels](const Point& p) {
                              return cx(cone_embed(p, cone_levels)[0], 0.0);
                          }});
    sc.catalog.push_back({"zcoord", [cone_levels](const Point& p) {
                              return cx(cone_embed(p, cone_levels)[2], 0.0);
                          }});

    GroupDescriptor grp = sc.group;
    sc.orbit_generators = [grp, id](const Point&) { return generators(grp, id); };

    // orbit closures: the apex alone, or one circle level swept through all
    // three sheets with arc length on each
    sc.closure_average = [id, cone_levels](const Point& x,
                                           const std::function<cx(const Point&)>& fn,
                                           int quad) {
        if (x.stratum == 0) return fn(x);
        ConeChart c = cone_decode(x.stratum, cone_levels);
        cx sum{0.0, 0.0};
        for (int copy = 0; copy < 3; ++copy) {
            Point p = make_point(id, cone_encode(copy, c.level, cone_levels), {0.0});
            for (int k = 0; k < quad; ++k) {
                p.coords[0] = mod1(x.coords[0] + static_cast<double>(k) / quad);
                sum += fn(p);
            }
        }
        return sum / static_cast<double>(3 * quad);
    };

    sc.perturb = [id, cone_levels](const Point& x, double scale, Rng& rng) {
        if (x.stratum == 0) {
            // nearest circles to the apex
            int copy = static_cast<int>(rng.below(3));
            int level = rng.unit() < 0.5 ? cone_levels : -cone_levels;
            return make_point(id, cone_encode(copy, level, cone_levels), {rng.unit()});
        }
        ConeChart c = cone_decode(x.stratum, cone_levels);
        double u = rng.unit();
        if (u < 0.4)
            return make_point(id, x.stratum,
                              {mod1(x.coords[0] + 0.2 * scale * (2.0 * rng.unit() - 1.0))});
        if (u < 0.7) {
            int mag = std::abs(c.level);
            int nmag = mag == cone_levels ? mag - 1 : mag + 1;
            int level = c.level > 0 ? nmag : -nmag;
            return make_point(id, cone_encode(c.copy, level, cone_levels), {x.coords[0]});
        }
        return make_point(id, cone_encode((c.copy + 1) % 3, c.level, cone_levels),
                          {x.coords[0]});
    };

    sc.field_grid = [id, cone_levels](int size) {
        std::vector<Point> out;
        out.push_back(make_point(id, 0, {}));
        int strata = 6 * cone_levels;
        int per = std::max(1, (size - 1) / strata);
        for (int s = 1; s <= strata; ++s)
            for (int k = 0; k < per; ++k)
                out.push_back(make_point(id, s, {static_cast<double>(k) / per}));
        return out;
    };

    sc.format_point = [cone_levels](const Point& p) {
        if (p.stratum == 0) return std::string("apex");
        ConeChart c = cone_decode(p.stratum, cone_levels);
        return "cone:" + std::to_string(c.copy) + ":" + std::to_string(c.level) + ":" +
               format_angle("", p.coords[0]);
    };
    sc.parse_point = [id, cone_levels](const std::string& s) {
        if (s == "apex") return make_point(id, 0, {});
        auto parts = split_spec(s, ':');
        if (parts.size() != 4 || parts[0] != "cone")
            throw std::domain_error(
                "point in triple_cone must look like 'apex' or 'cone:<copy>:<level>:<t>'");
        long long copy = parse_int(parts[1], "point spec");
        long long level = parse_int(parts[2], "point spec");
        require(copy >= 0 && copy < 3, "cone copy must be 0, 1 or 2");
        require(level != 0 && std::llabs(level) <= cone_levels,
                "cone level outside the declared range");
        return make_point(id,
                          cone_encode(static_cast<int>(copy), static_cast<int>(level),
                                      cone_levels),
                          {mod1(parse_double(parts[3], "point spec"))});
    };
    return sc;
}

// ---------------------------------------------------------- dyadic_product

inline double dyadic_level_pos(int stratum) {
    return stratum == 0 ? 0.0 : 1.0 / stratum;
}

// number of digits the action touches at this level; the limit fiber
// (stratum 0) is acted on by every digit
inline int dyadic_prefix(int stratum, int depth) {
    return stratum == 0 ? depth : std::min(stratum, depth);
}

inline ActionScenario build_dyadic(int id, int levels, int depth) {
    require(levels >= 2, "dyadic_product needs at least 2 levels");
    require(depth >= levels && depth <= 62, "dyadic_product depth must lie in [levels, 62]");
    ActionScenario sc;
    sc.id = id;
    sc.name = "dyadic_product";
    sc.group = GroupDescriptor::infinite_sum_z2();
    sc.flags.lyapunov_stable = true;
    sc.flags.isometric_action = false;
    // flipping a digit block moves both members of a pair identically, so
    // distances inside one level are exact; across levels the truncation of
    // the acting word to the shorter prefix breaks the symmetry
    sc.flags.stratum_isometric = true;
    sc.expected_classification = "Reflexive";
    sc.stratum_coords.assign(static_cast<std::size_t>(levels + 1), {-1, false});

    sc.space = MetricSpace(
        id, 2.0, levels + 1,
        [depth](const Point& a, const Point& b) {
            double d = std::fabs(dyadic_level_pos(a.stratum) - dyadic_level_pos(b.stratum));
            double w = 0.5;
            for (int k = 0; k < depth; ++k, w *= 0.5)
                if (a.coords[static_cast<std::size_t>(k)] !=
                    b.coords[static_cast<std::size_t>(k)])
                    d += w;
            return d;
        },
        [id, levels, depth](int count, std::uint64_t seed) {
            Rng rng(seed);
            std::vector<Point> out;
            out.reserve(static_cast<std::size_t>(count));
            for (int i = 0; i < count; ++i) {
                std::vector<double> digits(static_cast<std::size_t>(depth));
                for (double& d : digits) d = rng.unit() < 0.5 ? 0.0 : 1.0;
                out.push_back(make_point(id, i % (levels + 1), std::move(digits)));
            }
            return out;
        });

    sc.apply_into = [id, depth](const GroupElement& g, const Point& x, Point& out) {
        int plen = dyadic_prefix(x.stratum, depth);
        out.scenario_id = id;
        out.stratum = x.stratum;
        out.coords = x.coords;
        int touched = std::min<int>(plen, static_cast<int>(g.word.size()));
        for (int k = 0; k < touched; ++k)
            if (g.word[static_cast<std::size_t>(k)] & 1)
                out.coords[static_cast<std::size_t>(k)] =
                    1.0 - out.coords[static_cast<std::size_t>(k)];
    };

    sc.catalog.push_back({"one", [](const Point&) { return cx(1.0, 0.0); }});
    sc.catalog.push_back({"cyl1", [](const Point& p) { return cx(p.coords[0], 0.0); }});
    sc.catalog.push_back(
        {"cyl11", [](const Point& p) { return cx(p.coords[0] * p.coords[1], 0.0); }});
    sc.catalog.push_back({"wsum", [depth](const Point& p) {
                              double s = 0.0, w = 0.5;
                              for (int k = 0; k < depth; ++k, w *= 0.5)
                                  s += w * p.coords[static_cast<std::size_t>(k)];
                              return cx(s, 0.0);
                          }});

    sc.orbit_generators = [id, depth](const Point& x) {
        int plen = dyadic_prefix(x.stratum, depth);
        std::vector<GroupElement> gens;
        gens.reserve(static_cast<std::size_t>(plen));
        for (int i = 1; i <= plen; ++i) {
            GroupElement e{id, std::vector<std::int64_t>(static_cast<std::size_t>(i), 0)};
            e.word.back() = 1;
            gens.push_back(std::move(e));
        }
        return gens;
    };

    // level orbits are exact finite XOR classes; the limit fiber carries the
    // uniform coin measure, integrated digit-exactly to the quadrature depth
    sc.closure_average = [depth](const Point& x, const std::function<cx(const Point&)>& fn,
                                 int quad) {
        int plen = dyadic_prefix(x.stratum, depth);
        int m = plen;
        if (x.stratum == 0) {
            m = 0;
            while ((1ll << (m + 1)) <= quad && m < plen) ++m;
        }
        cx sum{0.0, 0.0};
        Point p = x;
        for (long long pat = 0; pat < (1ll << m); ++pat) {
            p.coords = x.coords;
            for (int k = 0; k < m; ++k)
                if ((pat >> k) & 1ll)
                    p.coords[static_cast<std::size_t>(k)] =
                        1.0 - p.coords[static_cast<std::size_t>(k)];
            sum += fn(p);
        }
        return sum / static_cast<double>(1ll << m);
    };

    sc.perturb = [id, levels, depth](const Point& x, double scale, Rng& rng) {
        if (rng.unit() < 0.25) {
            // hop toward the adjacent level in {0} + {1/n}; the limit fiber's
            // nearest neighbor is the deepest finite level
            int ns = x.stratum == 0 ? levels
                                    : (x.stratum == levels ? levels - 1 : x.stratum + 1);
            return make_point(id, ns, std::vector<double>(x.coords));
        }
        // flip one digit light enough to stay within scale
        int kmin = 0;
        while (kmin < depth - 1 && std::ldexp(1.0, -(kmin + 1)) > scale) ++kmin;
        int k = kmin + static_cast<int>(rng.below(static_cast<std::uint64_t>(depth - kmin)));
        Point p = make_point(id, x.stratum, std::vector<double>(x.coords));
        p.coords[static_cast<std::size_t>(k)] = 1.0 - p.coords[static_cast<std::size_t>(k)];
        return p;
    };

    sc.field_grid = [id, levels, depth](int size) {
        std::vector<Point> out;
        int per = std::max(1, size / (levels + 1));
        for (int s = 0; s <= levels; ++s)
            for (int m = 0; m < per; ++m) {
                std::vector<double> digits(static_cast<std::size_t>(depth), 0.0);
                for (int b = 0; b < 16 && b < depth; ++b)
                    digits[static_cast<std::size_t>(b)] = (m >> b) & 1 ? 1.0 : 0.0;
                out.push_back(make_point(id, s, std::move(digits)));
            }
        return out;
    };

    sc.format_point = [depth](const Point& p) {
        std::string bits(static_cast<std::size_t>(depth), '0');
        for (int k = 0; k < depth; ++k)
            if (p.coords[static_cast<std::size_t>(k)] == 1.0)
                bits[static_cast<std::size_t>(k)] = '1';
        return "level:" + std::to_string(p.stratum) + ":" + bits;
    };
    sc.parse_point = [id, levels, depth](const std::string& s) {
        auto parts = split_spec(s, ':');
        if (parts.size() != 3 || parts[0] != "level")
            throw std::domain_error(
                "point in dyadic_product must look like 'level:<n>:<bits>'");
        long long lev = parse_int(parts[1], "point spec");
        require(lev >= 0 && lev <= levels, "dyadic level outside the declared range");
        const std::string& bits = parts[2];
        require(bits.size() <= static_cast<std::size_t>(depth),
                "dyadic digit string longer than the declared depth");
        std::vector<double> digits(static_cast<std::size_t>(depth), 0.0);
        for (std::size_t k = 0; k < bits.size(); ++k) {
            require(bits[k] == '0' || bits[k] == '1', "dyadic digits must be 0 or 1");
            digits[k] = bits[k] == '1' ? 1.0 : 0.0;
        }
        return make_point(id, static_cast<int>(lev), std::move(digits));
    };

    sc.subset_from_spec = [id, levels, depth](const std::string& spec) {
        auto parts = split_spec(spec, ':');
        std::string prefix;
        if (parts.size() == 1 && parts[0] == "all") {
            prefix = "";
        } else if (parts.size() == 2 && parts[0] == "cyl") {
            prefix = parts[1];
            require(!prefix.empty() && prefix.size() <= static_cast<std::size_t>(depth),
                    "cylinder prefix must have between 1 and depth digits");
            for (char c : prefix)
                require(c == '0' || c == '1', "cylinder digits must be 0 or 1");
        } else {
            throw std::domain_error("unknown subset spec '" + spec +
                                    "' (expected 'all' or 'cyl:<bits>')");
        }
        CompactSubset s;
        s.indicator = [prefix](const Point& p) {
            for (std::size_t k = 0; k < prefix.size(); ++k) {
                double want = prefix[k] == '1' ? 1.0 : 0.0;
                if (p.coords[k] != want) return false;
            }
            return true;
        };
        int free_digits = std::min<int>(6, depth - static_cast<int>(prefix.size()));
        for (long long pat = 0; pat < (1ll << free_digits); ++pat) {
            std::vector<double> digits(static_cast<std::size_t>(depth), 0.0);
            for (std::size_t k = 0; k < prefix.size(); ++k)
                digits[k] = prefix[k] == '1' ? 1.0 : 0.0;
            for (int b = 0; b < free_digits; ++b)
                digits[prefix.size() + static_cast<std::size_t>(b)] =
                    (pat >> b) & 1ll ? 1.0 : 0.0;
            s.witness_sample.push_back(make_point(id, 0, std::move(digits)));
        }
        (void)levels;
        return s;
    };
    return sc;
}

}  // namespace detail

// The canonical fixture list, in build order.
inline std::vector<std::string> scenario_names() {
    return {"rotation",          "rational_rotation", "varying_angle_cylinder",
            "spiral_two_circles", "spiral_identified", "triple_cone",
            "dyadic_product"};
}

// Builds a scenario from its name and numeric parameters. Unknown names and
// out-of-range parameters throw domain_error.
inline ActionScenario build_scenario(const ScenarioSpec& spec) {
    if (spec.name == "rotation") {
        double angle = spec.get("angle", golden_alpha);
        require(angle > 0.0 && angle < 1.0, "rotation angle must lie in (0, 1)");
        return detail::build_rotation(1, "rotation", angle, false, 0);
    }
    if (spec.name == "rational_rotation") {
        long long p = static_cast<long long>(spec.get("p", 1.0));
        long long q = static_cast<long long>(spec.get("q", 7.0));
        require(q >= 2 && p >= 1 && p < q, "rational_rotation needs 1 <= p < q");
        require(std::gcd(p, q) == 1, "rational_rotation needs p, q coprime");
        return detail::build_rotation(2, "rational_rotation",
                                      static_cast<double>(p) / static_cast<double>(q), true,
                                      q);
    }
    if (spec.name == "varying_angle_cylinder")
        return detail::build_cylinder(3, spec.get("angle", golden_alpha),
                                      static_cast<int>(spec.get("levels", 12.0)));
    if (spec.name == "spiral_two_circles") return detail::build_spiral(4);
    if (spec.name == "spiral_identified") return detail::build_identified(5);
    if (spec.name == "triple_cone")
        return detail::build_cone(6, spec.get("angle", golden_alpha),
                                  static_cast<int>(spec.get("levels", 12.0)));
    if (spec.name == "dyadic_product")
        return detail::build_dyadic(7, static_cast<int>(spec.get("levels", 6.0)),
                                    static_cast<int>(spec.get("depth", 20.0)));
    throw std::domain_error("unknown scenario '" + spec.name + "'");
}

inline ActionScenario build_scenario(const std::string& name) {
    ScenarioSpec spec;
    spec.name = name;
    return build_scenario(spec);
}

}  // namespace orbitkit

