#pragma once

// Movement-set families {A(x,t)} for the Tug-of-War game.
//
// A family assigns to every state (x,t) a compact set of unscaled moves
// (y,s) inside B(0,1) x [-c/2, c/2] with 0 < c < 1. The required structure:
//
//   A1  compact subset of the box, containing (0,0);
//   A2  every time slice {y : (y,s) in A} is symmetric about the origin;
//   A3  the sets vary continuously with (x,t);
//   A4  for every direction v != 0 the linear form <v,.> has a unique
//       minimizing pair (z,r) over the set; z depends only on the
//       direction of v, the mirror point -z realizes the maximum, and the
//       minimizers sweep the whole boundary of the spatial projection.
//
// Built-in families:
//   ball        {(y,s) : |y|^2 + s^2 <= rho^2},     0 < rho < min(1, c/2)
//   paraboloid  {(y,s) : |y|^2 <= 2 rho s / c, 0 <= s <= c/2},  0 < rho < 1
//   tabulated   an explicit point cloud, possibly depending on (x,t)
//
// The paraboloid set is implemented exactly as written above; note that its
// spatial projection is the ball of radius sqrt(rho), so the minimizer for
// a direction v has magnitude sqrt(rho) (not rho) and time coordinate c/2.
//
// The actual game moves are the scaled displacements
//   x' = x + eps*y,   t' = t + eps^2*((1-c)/c * s - (c+1)/2),
// whose time offset always lies in [-eps^2, -c*eps^2]: the game clock
// strictly decreases every round.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "towgame/vec.hpp"

namespace towgame {

/// One unscaled move: spatial displacement direction y, time fiber s.
struct Move {
    Vec y;
    double s = 0.0;
};

enum class FamilyKind { ball, paraboloid, tabulated };

using TabulatedGenerator = std::function<std::vector<Move>(const Vec& x, double t)>;

struct FamilySpec {
    FamilyKind kind = FamilyKind::ball;
    double rho = 0.0;        // ball / paraboloid size parameter
    double c = 0.5;          // time-scaling constant, 0 < c < 1
    std::size_t dim = 1;     // spatial dimension N >= 1
    TabulatedGenerator generator;   // tabulated only
    bool constant_in_state = true;  // generator independent of (x,t)

    static FamilySpec ball(double rho, double c, std::size_t dim) {
        FamilySpec f;
        f.kind = FamilyKind::ball;
        f.rho = rho;
        f.c = c;
        f.dim = dim;
        f.validate();
        return f;
    }

    static FamilySpec paraboloid(double rho, double c, std::size_t dim) {
        FamilySpec f;
        f.kind = FamilyKind::paraboloid;
        f.rho = rho;
        f.c = c;
        f.dim = dim;
        f.validate();
        return f;
    }

    static FamilySpec tabulated(std::vector<Move> points, double c, std::size_t dim) {
        FamilySpec f;
        f.kind = FamilyKind::tabulated;
        f.c = c;
        f.dim = dim;
        f.generator = [pts = std::move(points)](const Vec&, double) { return pts; };
        f.constant_in_state = true;
        f.validate();
        return f;
    }

    static FamilySpec tabulated(TabulatedGenerator gen, double c, std::size_t dim,
                                bool constant_in_state) {
        FamilySpec f;
        f.kind = FamilyKind::tabulated;
        f.c = c;
        f.dim = dim;
        f.generator = std::move(gen);
        f.constant_in_state = constant_in_state;
        f.validate();
        return f;
    }

    void validate() const {
        if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("family: c must be in (0,1)");
        if (dim < 1 || dim > kMaxDim)
            throw std::invalid_argument("family: dimension out of range");
        switch (kind) {
            case FamilyKind::ball:
                if (!(rho > 0.0 && rho < std::min(1.0, c / 2.0)))
                    throw std::invalid_argument("ball family requires 0 < rho < min(1, c/2)");
                break;
            case FamilyKind::paraboloid:
                if (!(rho > 0.0 && rho < 1.0))
                    throw std::invalid_argument("paraboloid family requires 0 < rho < 1");
                break;
            case FamilyKind::tabulated:
                if (!generator) throw std::invalid_argument("tabulated family needs a generator");
                break;
        }
    }

    std::string describe() const {
        switch (kind) {
            case FamilyKind::ball:
                return "ball(rho=" + std::to_string(rho) + ",c=" + std::to_string(c) +
                       ",dim=" + std::to_string(dim) + ")";
            case FamilyKind::paraboloid:
                return "paraboloid(rho=" + std::to_string(rho) + ",c=" + std::to_string(c) +
                       ",dim=" + std::to_string(dim) + ")";
            case FamilyKind::tabulated:
                return "tabulated(c=" + std::to_string(c) + ",dim=" + std::to_string(dim) + ")";
        }
        return {};
    }
};

// A finite point cloud standing in for A(x,t). Built-in families sample a
// deterministic product grid over (direction, radius, time slice); mirror
// points are emitted by negation so slice symmetry holds exactly, and
// (0,0) is always a member.
struct SampledSet {
    std::vector<Move> points;
    int resolution = 0;
    Vec anchor_x;
    double anchor_t = 0.0;
};

namespace detail {

inline std::vector<Vec> direction_fan(std::size_t dim, int resolution) {
    std::vector<Vec> dirs;
    if (dim == 1) {
        dirs.push_back(Vec{1.0});
    } else if (dim == 2) {
        // angles in [0, pi); mirrors come from explicit negation later
        for (int i = 0; i < resolution; ++i) {
            const double theta = std::numbers::pi * static_cast<double>(i) / resolution;
            dirs.push_back(Vec{std::cos(theta), std::sin(theta)});
        }
    } else {
        throw std::invalid_argument("set sampling supports dimensions 1 and 2");
    }
    return dirs;
}

}  // namespace detail

inline SampledSet sample_set(const FamilySpec& family, const Vec& x, double t,
                             int resolution) {
    if (resolution < 2) throw std::invalid_argument("sample_set: resolution must be >= 2");
    if (x.size() != family.dim) throw std::invalid_argument("sample_set: dimension mismatch");

    SampledSet set;
    set.resolution = resolution;
    set.anchor_x = x;
    set.anchor_t = t;

    if (family.kind == FamilyKind::tabulated) {
        set.points = family.generator(x, t);
        const double s_max = family.c / 2.0;
        for (const Move& m : set.points) {
            if (m.y.size() != family.dim)
                throw std::domain_error("tabulated move has wrong dimension");
            if (norm(m.y) > 1.0 + 1e-12 || std::abs(m.s) > s_max + 1e-12)
                throw std::domain_error(
                    "tabulated move outside B(0,1) x [-c/2, c/2]");
        }
        return set;
    }

    const int q = resolution;
    const std::vector<Vec> dirs = detail::direction_fan(family.dim, q);

    // slice times and the radius bound for each slice
    std::vector<double> slices;
    double radius_cap = 0.0;
    if (family.kind == FamilyKind::ball) {
        for (int k = -q; k <= q; ++k) slices.push_back(family.rho * k / q);
        radius_cap = family.rho;
    } else {  // paraboloid
        for (int k = 0; k <= q; ++k) slices.push_back((family.c / 2.0) * k / q);
        radius_cap = std::sqrt(family.rho);
    }

    auto slice_radius_sq = [&](double s) {
        if (family.kind == FamilyKind::ball) return family.rho * family.rho - s * s;
        return 2.0 * family.rho * s / family.c;
    };

    const double tol = 1e-12 * std::max(1.0, radius_cap * radius_cap);
    for (double s : slices) {
        const double r2max = slice_radius_sq(s);
        if (r2max < -tol) continue;
        set.points.push_back({Vec::zero(family.dim), s});
        for (int j = 1; j <= q; ++j) {
            const double r = radius_cap * j / q;
            if (r * r > r2max + tol) break;
            for (const Vec& u : dirs) {
                Vec y = u * r;
                set.points.push_back({y, s});
                set.points.push_back({-y, s});
            }
        }
    }
    return set;
}

/// Time offset of a scaled move: eps^2*((1-c)/c * s - (c+1)/2).
inline double scaled_time_offset(double eps, double c, double s) {
    return eps * eps * ((1.0 - c) / c * s - (c + 1.0) / 2.0);
}

/// The scaled game move: (x + eps*y, t + eps^2*((1-c)/c*s - (c+1)/2)).
inline std::pair<Vec, double> scale_move(const Vec& x, double t, double eps,
                                         const Move& move, double c) {
    if (!(eps > 0.0)) throw std::invalid_argument("scale_move: eps must be positive");
    if (norm(move.y) > 1.0 + 1e-12 || std::abs(move.s) > c / 2.0 + 1e-12)
        throw std::invalid_argument("scale_move: move outside B(0,1) x [-c/2, c/2]");
    return {x + move.y * eps, t + scaled_time_offset(eps, c, move.s)};
}

/// One eps-scaled displacement; the clock offset is always in [-eps^2, -c*eps^2].
struct ScaledMove {
    Vec dx;
    double dt = 0.0;
};

inline std::vector<ScaledMove> scaled_moves(const SampledSet& set, double eps, double c) {
    std::vector<ScaledMove> out;
    out.reserve(set.points.size());
    for (const Move& m : set.points) {
        ScaledMove sm{m.y * eps, scaled_time_offset(eps, c, m.s)};
        // the clock never loses less than c*eps^2 or more than eps^2
        if (sm.dt > -c * eps * eps * (1.0 - 1e-9) || sm.dt < -eps * eps * (1.0 + 1e-9))
            throw std::domain_error("scaled move escapes the admissible time window");
        out.push_back(std::move(sm));
    }
    return out;
}

// Directional data extracted from a set: the unique minimizer of <v, .>
// over the spatial projection, its time coordinate, and the induced
// coefficient of the time derivative in the limit equation,
//   time_coefficient = -((1-c)/c) * min_time + (c+1)/2  in [c, 1].
struct ExtremalData {
    Vec min_point;           // minimizing spatial point (depends on v only via direction)
    double min_time = 0.0;   // its time coordinate
    double time_coefficient = 0.0;
};

inline double time_coefficient_from(double c, double min_time) {
    return -((1.0 - c) / c) * min_time + (c + 1.0) / 2.0;
}

namespace detail {

inline ExtremalData extremal_from_points(std::span<const Move> points, const Vec& v,
                                         double c, double* tie_gap = nullptr) {
    if (points.empty()) throw std::invalid_argument("extremal data: empty sampled set");
    std::size_t best = 0;
    double best_val = dot(v, points[0].y);
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double val = dot(v, points[i].y);
        if (val < best_val ||
            (val == best_val &&
             (points[i].s < points[best].s ||
              (points[i].s == points[best].s && lex_less(points[i].y, points[best].y))))) {
            best = i;
            best_val = val;
        }
    }
    if (tie_gap) {
        // distance (in value) to the nearest distinct minimizer candidate
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (i == best) continue;
            if (points[i].y == points[best].y) continue;
            gap = std::min(gap, dot(v, points[i].y) - best_val);
        }
        *tie_gap = gap;
    }
    ExtremalData out;
    out.min_point = points[best].y;
    out.min_time = points[best].s;
    out.time_coefficient = time_coefficient_from(c, out.min_time);
    return out;
}

}  // namespace detail

inline ExtremalData extremal_data(const FamilySpec& family, const Vec& x, double t,
                                  const Vec& v) {
    if (norm2(v) == 0.0) throw std::invalid_argument("extremal_data: v must be nonzero");
    ExtremalData out;
    switch (family.kind) {
        case FamilyKind::ball:
            out.min_point = unit_direction(v) * (-family.rho);
            out.min_time = 0.0;
            break;
        case FamilyKind::paraboloid:
            out.min_point = unit_direction(v) * (-std::sqrt(family.rho));
            out.min_time = family.c / 2.0;
            break;
        case FamilyKind::tabulated: {
            auto pts = family.generator(x, t);
            return detail::extremal_from_points(pts, v, family.c);
        }
    }
    out.time_coefficient = time_coefficient_from(family.c, out.min_time);
    return out;
}

// The extremal time along the zero-displacement fiber: the unique r with
// (0,r) in the set and r*s minimal; 0 when s = 0. Used by the limit
// operator when the gradient vanishes.
inline double hat_time(const FamilySpec& family, const Vec& x, double t, double s) {
    if (s == 0.0) return 0.0;
    switch (family.kind) {
        case FamilyKind::ball:
            return s > 0.0 ? -family.rho : family.rho;
        case FamilyKind::paraboloid:
            // fiber {(0,r) : 0 <= r <= c/2}
            return s > 0.0 ? 0.0 : family.c / 2.0;
        case FamilyKind::tabulated: {
            auto pts = family.generator(x, t);
            bool found = false;
            double best = 0.0;
            for (const Move& m : pts) {
                if (norm(m.y) > 1e-12) continue;
                if (!found || m.s * s < best * s || (m.s * s == best * s && m.s < best)) {
                    best = m.s;
                    found = true;
                }
            }
            if (!found)
                throw std::domain_error(
                    "hat_time: tabulated set has no point on the zero fiber");
            return best;
        }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Axiom checking

struct AxiomProbe {
    Vec x;
    double t = 0.0;
    Vec v;
};

struct AxiomFinding {
    std::string axiom;   // "A1", "A2", "A3", "A4"
    bool passed = true;
    std::string detail;  // witness data on failure
};

struct AxiomReport {
    std::vector<AxiomFinding> findings;
    double tolerance = 0.0;
    int resolution = 0;
    bool all_passed() const {
        for (const auto& f : findings)
            if (!f.passed) return false;
        return true;
    }
};

namespace detail {

inline std::string move_string(const Move& m) {
    std::string s = "(y=[";
    for (std::size_t i = 0; i < m.y.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(m.y[i]);
    }
    s += "], s=" + std::to_string(m.s) + ")";
    return s;
}

inline double hausdorff_distance(const std::vector<Move>& a, const std::vector<Move>& b) {
    auto one_sided = [](const std::vector<Move>& p, const std::vector<Move>& q) {
        double worst = 0.0;
        for (const Move& mp : p) {
            double best = std::numeric_limits<double>::infinity();
            for (const Move& mq : q) {
                const double d = norm(mp.y - mq.y) + std::abs(mp.s - mq.s);
                best = std::min(best, d);
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace detail

// Runs the A1-A4 checks at each probe. Failures are findings with a
// concrete witness, not exceptions. The continuity check (A3) is a finite
// surrogate: sampled-set Hausdorff distance under perturbations of size
// 1e-3 must stay below 10x the perturbation. The boundary-coverage clause
// of A4 is checked on the finite direction fan only.
inline AxiomReport check_axioms(const FamilySpec& family,
                                std::span<const AxiomProbe> probes,
                                int resolution = 8) {
    if (probes.empty()) throw std::invalid_argument("check_axioms: probes must be nonempty");
    AxiomReport report;
    report.tolerance = 1e-9;
    report.resolution = resolution;
    const double tol = report.tolerance;
    const double perturbation = 1e-3;

    for (std::size_t pi = 0; pi < probes.size(); ++pi) {
        const AxiomProbe& probe = probes[pi];
        const std::string tag = " (probe " + std::to_string(pi) + ")";
        SampledSet set = sample_set(family, probe.x, probe.t, resolution);

        // A1: containment and (0,0) membership
        {
            AxiomFinding f{"A1", true, ""};
            bool has_origin = false;
            for (const Move& m : set.points) {
                if (norm(m.y) > 1.0 + tol || std::abs(m.s) > family.c / 2.0 + tol) {
                    f.passed = false;
                    f.detail = "point outside bounding box: " + detail::move_string(m) + tag;
                    break;
                }
                if (norm(m.y) <= 1e-12 && std::abs(m.s) <= 1e-12) has_origin = true;
            }
            if (f.passed && !has_origin) {
                f.passed = false;
                f.detail = "(0,0) is not a member" + tag;
            }
            report.findings.push_back(std::move(f));
        }

        // A2: slice symmetry
        {
            AxiomFinding f{"A2", true, ""};
            for (const Move& m : set.points) {
                bool mirrored = false;
                for (const Move& n : set.points) {
                    if (std::abs(n.s - m.s) <= 1e-12 && norm(n.y + m.y) <= 1e-12) {
                        mirrored = true;
                        break;
                    }
                }
                if (!mirrored) {
                    f.passed = false;
                    f.detail = "missing mirror of " + detail::move_string(m) + tag;
                    break;
                }
            }
            report.findings.push_back(std::move(f));
        }

        // A3: finite continuity surrogate
        {
            AxiomFinding f{"A3", true, ""};
            std::vector<std::pair<Vec, double>> perturbed;
            for (std::size_t d = 0; d < family.dim; ++d) {
                Vec xp = probe.x;
                xp[d] += perturbation;
                perturbed.push_back({xp, probe.t});
            }
            perturbed.push_back({probe.x, probe.t + perturbation});
            for (const auto& [xp, tp] : perturbed) {
                SampledSet other = sample_set(family, xp, tp, resolution);
                const double d = detail::hausdorff_distance(set.points, other.points);
                if (d > 10.0 * perturbation) {
                    f.passed = false;
                    f.detail = "Hausdorff distance " + std::to_string(d) +
                               " under perturbation " + std::to_string(perturbation) + tag;
                    break;
                }
            }
            report.findings.push_back(std::move(f));
        }

        // A4: minimizer structure
        if (norm2(probe.v) > 0.0) {
            AxiomFinding f{"A4", true, ""};
            const double vscale = norm(probe.v);
            double tie_gap = std::numeric_limits<double>::infinity();
            ExtremalData base;
            if (family.kind == FamilyKind::tabulated)
                base = detail::extremal_from_points(set.points, probe.v, family.c, &tie_gap);
            else
                base = extremal_data(family, probe.x, probe.t, probe.v);

            // uniqueness (tabulated sets only; closed forms are unique analytically)
            if (tie_gap < 1e-12 * std::max(1.0, vscale)) {
                f.passed = false;
                f.detail = "minimizer of <v,.> not unique within 1e-12" + tag;
            }

            // <v, J> < 0
            if (f.passed && !(dot(probe.v, base.min_point) < 0.0)) {
                f.passed = false;
                f.detail = "<v, min_point> is not negative" + tag;
            }

            // homogeneity in the direction
            if (f.passed) {
                for (double lambda : {0.5, 1.0, 7.0}) {
                    ExtremalData scaled =
                        family.kind == FamilyKind::tabulated
                            ? detail::extremal_from_points(set.points, probe.v * lambda,
                                                           family.c)
                            : extremal_data(family, probe.x, probe.t, probe.v * lambda);
                    if (norm(scaled.min_point - base.min_point) > tol ||
                        std::abs(scaled.min_time - base.min_time) > tol) {
                        f.passed = false;
                        f.detail = "minimizer changed under scaling lambda=" +
                                   std::to_string(lambda) + tag;
                        break;
                    }
                }
            }

            // mirror clause: max <v,y> over samples attained at -min_point
            if (f.passed) {
                double max_val = -std::numeric_limits<double>::infinity();
                for (const Move& m : set.points) max_val = std::max(max_val, dot(probe.v, m.y));
                const double mirror_val = dot(probe.v, -base.min_point);
                double slack = 1e-12 * std::max(1.0, vscale);
                if (family.kind != FamilyKind::tabulated) {
                    // closed-form minimizer vs finite samples: allow the fan gap
                    slack = vscale * norm(base.min_point) * 4.0 /
                                (double(resolution) * resolution) +
                            1e-9;
                }
                if (max_val > mirror_val + slack || max_val < mirror_val - slack) {
                    f.passed = false;
                    f.detail = "max <v,y> not attained at mirror of minimizer" + tag;
                }
            }

            // boundary coverage on the sampled direction fan
            if (f.passed) {
                double max_radius = 0.0;
                for (const Move& m : set.points) max_radius = std::max(max_radius, norm(m.y));
                if (max_radius > 0.0) {
                    const double cover_tol =
                        max_radius * (2.0 / resolution) + 1e-9;
                    for (const Move& m : set.points) {
                        const double r = norm(m.y);
                        if (r < max_radius - 1e-12) continue;  // not a boundary sample
                        ExtremalData hit =
                            family.kind == FamilyKind::tabulated
                                ? detail::extremal_from_points(set.points, -m.y, family.c)
                                : extremal_data(family, probe.x, probe.t, -m.y);
                        if (norm(hit.min_point - m.y) > cover_tol) {
                            f.passed = false;
                            f.detail = "boundary sample " + detail::move_string(m) +
                                       " unreachable by minimizers" + tag;
                            break;
                        }
                    }
                }
            }
            report.findings.push_back(std::move(f));
        }
    }
    return report;
}

}  // namespace towgame
