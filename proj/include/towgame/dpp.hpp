#pragma once

// The dynamic-programming-principle solver.
//
// The eps-game value is the unique field with
//
//   u(x,t) = 1/2 sup u + 1/2 inf u   over the scaled move set of (x,t)
//
// at interior nodes and u = payoff on the boundary strip. Every scaled
// move decreases the clock by at least c*eps^2 >= dt, so values on a slice
// depend only on strictly earlier slices and one ascending sweep computes
// the exact discrete fixed point; no iteration is involved.
//
// brute_force_oracle solves the same fixed point by exhaustive backward
// induction on instances where all moves map nodes to nodes exactly. It
// never interpolates, which makes it the independent reference for the
// sweep: on aligned instances the two agree bit for bit.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "towgame/domain.hpp"
#include "towgame/movement_sets.hpp"
#include "towgame/payoff.hpp"
#include "towgame/value_field.hpp"

namespace towgame {

struct SolveOptions {
    int resolution = 4;
    unsigned threads = 1;
};

namespace detail {

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    if (threads <= 1 || n < 2 * threads) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

/// A move's grid footprint: integer node offset + interpolation weights.
struct MoveStencil {
    long di[2] = {0, 0};
    double wx[2] = {0.0, 0.0};
};

inline void validate_solve(const DomainSpec& domain, const FamilySpec& family, double eps,
                           int resolution) {
    domain.validate();
    family.validate();
    if (family.dim != domain.dim)
        throw std::invalid_argument("solver: family and domain dimensions differ");
    if (!(eps > 0.0)) throw std::invalid_argument("solver: eps must be positive");
    if (eps > domain.eta)
        throw std::invalid_argument("solver: eps exceeds the strip width eta");
    if (domain.diameter() < 2.0 * eps)
        throw std::invalid_argument("solver: domain too thin for this eps");
    if (resolution < 2) throw std::invalid_argument("solver: resolution must be >= 2");
}

inline void fill_boundary_data(ValueField& field, const Payoff& payoff) {
    const std::size_t nnodes = field.node_count();
    std::vector<double> f(nnodes);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < nnodes; ++i) {
        f[i] = payoff(field.node_coords(i));
        lo = std::min(lo, f[i]);
        hi = std::max(hi, f[i]);
    }
    for (std::size_t j = 0; j < field.slice_count(); ++j) {
        double* v = field.slice_data(j);
        std::copy(f.begin(), f.end(), v);
    }
    field.set_boundary_data_range(lo, hi);
}

inline std::vector<std::size_t> interior_nodes(const ValueField& field) {
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < field.node_count(); ++i)
        if (field.node_in_domain(i)) nodes.push_back(i);
    return nodes;
}

}  // namespace detail

inline ValueField dpp_sweep(const DomainSpec& domain, const FamilySpec& family,
                            const Payoff& payoff, double eps, const GridSpec& grid,
                            const SolveOptions& opts = {}) {
    detail::validate_solve(domain, family, eps, opts.resolution);
    ValueField field(domain, eps, grid, family.c);
    field.meta = {family.describe(), domain.describe(), payoff.source(),
                  payoff.hash(),     family.c,          eps,
                  opts.resolution};
    detail::fill_boundary_data(field, payoff);

    const std::vector<std::size_t> targets = detail::interior_nodes(field);
    const std::size_t nx = field.axis_count(0);
    const double h = field.grid().h;
    const double dt = field.grid().dt;
    const std::size_t dim = field.dim();

    const bool constant = family.kind != FamilyKind::tabulated || family.constant_in_state;

    if (!constant) {
        // general path: the move set depends on the state; sample per node
        for (std::size_t j = 0; j < field.slice_count(); ++j) {
            const double t = field.slice_time(j);
            if (!(t > 0.0)) continue;
            detail::parallel_for(targets.size(), opts.threads, [&](std::size_t k) {
                const std::size_t idx = targets[k];
                const Vec x = field.node_coords(idx);
                const SampledSet set = sample_set(family, x, t, opts.resolution);
                const auto moves = scaled_moves(set, eps, family.c);
                double hi = -std::numeric_limits<double>::infinity();
                double lo = std::numeric_limits<double>::infinity();
                for (const ScaledMove& m : moves) {
                    const double v = field.interpolate(x + m.dx, t + m.dt);
                    hi = std::max(hi, v);
                    lo = std::min(lo, v);
                }
                field.value(j, idx) = 0.5 * hi + 0.5 * lo;
            });
        }
        return field;
    }

    // constant family: hoist the move stencils out of the node loop
    Vec anchor(dim);
    if (domain.shape == DomainSpec::Shape::interval)
        anchor[0] = (domain.a + domain.b) / 2.0;
    else
        anchor = domain.center;
    const SampledSet set = sample_set(family, anchor, domain.final_time, opts.resolution);
    const auto moves = scaled_moves(set, eps, family.c);
    const std::size_t nmoves = moves.size();

    std::vector<detail::MoveStencil> stencils(nmoves);
    for (std::size_t m = 0; m < nmoves; ++m) {
        for (std::size_t d = 0; d < dim; ++d) {
            const double f = moves[m].dx[d] / h;
            double fl = std::floor(f);
            double w = f - fl;
            if (w <= 1e-9) {
                w = 0.0;
            } else if (w >= 1.0 - 1e-9) {
                fl += 1.0;
                w = 0.0;
            }
            stencils[m].di[d] = static_cast<long>(fl);
            stencils[m].wx[d] = w;
        }
    }

    for (std::size_t j = 0; j < field.slice_count(); ++j) {
        const double t = field.slice_time(j);
        if (!(t > 0.0)) continue;

        // time bracket per move, shared by every node of the slice
        struct TimePos {
            const double* s0;
            const double* s1;
            double wt;
        };
        std::vector<TimePos> tpos(nmoves);
        for (std::size_t m = 0; m < nmoves; ++m) {
            const double f = (t + moves[m].dt - field.tmin()) / dt;
            double fl = std::floor(f);
            double w = f - fl;
            if (w <= 1e-9) {
                w = 0.0;
            } else if (w >= 1.0 - 1e-9) {
                fl += 1.0;
                w = 0.0;
            }
            const auto j0 = static_cast<std::size_t>(fl);
            tpos[m] = {field.slice_data(j0), w > 0.0 ? field.slice_data(j0 + 1) : nullptr, w};
        }

        detail::parallel_for(targets.size(), opts.threads, [&](std::size_t k) {
            const std::size_t idx = targets[k];
            double hi = -std::numeric_limits<double>::infinity();
            double lo = std::numeric_limits<double>::infinity();
            for (std::size_t m = 0; m < nmoves; ++m) {
                const detail::MoveStencil& st = stencils[m];
                const TimePos& tp = tpos[m];
                double v;
                if (dim == 1) {
                    const std::size_t base = idx + st.di[0];
                    double v0 = st.wx[0] == 0.0
                                    ? tp.s0[base]
                                    : ValueField::lerp(tp.s0[base], tp.s0[base + 1], st.wx[0]);
                    if (tp.wt == 0.0) {
                        v = v0;
                    } else {
                        double v1 = st.wx[0] == 0.0
                                        ? tp.s1[base]
                                        : ValueField::lerp(tp.s1[base], tp.s1[base + 1], st.wx[0]);
                        v = ValueField::lerp(v0, v1, tp.wt);
                    }
                } else {
                    const std::size_t base = idx + st.di[0] + static_cast<long>(nx) * st.di[1];
                    auto bilinear = [&](const double* s) {
                        const double low =
                            st.wx[0] == 0.0 ? s[base]
                                            : ValueField::lerp(s[base], s[base + 1], st.wx[0]);
                        if (st.wx[1] == 0.0) return low;
                        const double high =
                            st.wx[0] == 0.0
                                ? s[base + nx]
                                : ValueField::lerp(s[base + nx], s[base + nx + 1], st.wx[0]);
                        return ValueField::lerp(low, high, st.wx[1]);
                    };
                    const double v0 = bilinear(tp.s0);
                    v = tp.wt == 0.0 ? v0 : ValueField::lerp(v0, bilinear(tp.s1), tp.wt);
                }
                hi = std::max(hi, v);
                lo = std::min(lo, v);
            }
            field.value(j, idx) = 0.5 * hi + 0.5 * lo;
        });
    }
    return field;
}

// Exhaustive backward induction on an instance where every scaled move maps
// grid nodes to grid nodes. Throws on non-aligned instances or when the
// instance exceeds 10^4 interior node-move pairs.
inline ValueField brute_force_oracle(const DomainSpec& domain, const FamilySpec& family,
                                     const Payoff& payoff, double eps, const GridSpec& grid,
                                     int resolution = 4) {
    detail::validate_solve(domain, family, eps, resolution);
    if (family.kind == FamilyKind::tabulated && !family.constant_in_state)
        throw std::invalid_argument("oracle: move set must not depend on the state");
    ValueField field(domain, eps, grid, family.c);
    field.meta = {family.describe(), domain.describe(), payoff.source(),
                  payoff.hash(),     family.c,          eps,
                  resolution};
    detail::fill_boundary_data(field, payoff);

    Vec anchor(domain.dim);
    if (domain.shape == DomainSpec::Shape::interval)
        anchor[0] = (domain.a + domain.b) / 2.0;
    else
        anchor = domain.center;
    const SampledSet set = sample_set(family, anchor, domain.final_time, resolution);
    const auto moves = scaled_moves(set, eps, family.c);

    const std::size_t nx = field.axis_count(0);
    const double h = field.grid().h;
    const double dt = field.grid().dt;

    struct NodeMove {
        long dnode;
        long dslice;
    };
    std::vector<NodeMove> offsets;
    offsets.reserve(moves.size());
    for (const ScaledMove& m : moves) {
        long dnode = 0;
        for (std::size_t d = 0; d < domain.dim; ++d) {
            const double f = m.dx[d] / h;
            const double r = std::round(f);
            if (std::abs(f - r) > 1e-6)
                throw std::invalid_argument("oracle: spatial move not lattice-aligned");
            dnode += static_cast<long>(r) * (d == 0 ? 1l : static_cast<long>(nx));
        }
        const double f = m.dt / dt;
        const double r = std::round(f);
        if (std::abs(f - r) > 1e-6)
            throw std::invalid_argument("oracle: time offset not lattice-aligned");
        offsets.push_back({dnode, static_cast<long>(r)});
    }

    const std::vector<std::size_t> targets = detail::interior_nodes(field);
    std::size_t positive_slices = 0;
    for (std::size_t j = 0; j < field.slice_count(); ++j)
        if (field.slice_time(j) > 0.0) ++positive_slices;
    if (targets.size() * positive_slices * moves.size() > 10000)
        throw std::invalid_argument("oracle: instance exceeds 10^4 node-move pairs");

    for (std::size_t j = 0; j < field.slice_count(); ++j) {
        if (!(field.slice_time(j) > 0.0)) continue;
        for (const std::size_t idx : targets) {
            double hi = -std::numeric_limits<double>::infinity();
            double lo = std::numeric_limits<double>::infinity();
            for (const NodeMove& om : offsets) {
                const double v = field.value(j + om.dslice, idx + om.dnode);
                hi = std::max(hi, v);
                lo = std::min(lo, v);
            }
            field.value(j, idx) = 0.5 * hi + 0.5 * lo;
        }
    }
    return field;
}

// u(x,t) - 1/2 sup - 1/2 inf over the sampled scaled set at a grid node.
// Zero (to round-off) on swept fields; the sign separates DPP sub- from
// supersolutions (u >= mean of sup and inf is the subsolution inequality).
inline double dpp_residual(const ValueField& field, const FamilySpec& family,
                           std::size_t slice, std::size_t node, int resolution) {
    const Vec x = field.node_coords(node);
    const double t = field.slice_time(slice);
    if (classify_point(field.domain(), field.eps(), x, t) != Region::interior)
        throw std::invalid_argument("dpp_residual: node is not interior");
    const SampledSet set = sample_set(family, x, t, resolution);
    const auto moves = scaled_moves(set, field.eps(), family.c);
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (const ScaledMove& m : moves) {
        const double v = field.interpolate(x + m.dx, t + m.dt);
        hi = std::max(hi, v);
        lo = std::min(lo, v);
    }
    return field.value(slice, node) - (0.5 * hi + 0.5 * lo);
}

}  // namespace towgame
