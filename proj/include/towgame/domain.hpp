#pragma once

// Parabolic cylinders and their boundary strips.
//
// The game lives on Omega x (0,T] for a bounded convex domain Omega
// (an interval in 1d, a disk in 2d). For a scale eps the boundary strip is
//
//   {dist(x, Omega) <= eps} x (-eps^2, 0]   (time strip)
//   union  {x outside Omega, dist(x, boundary) <= eps} x (0, T]  (side strip)
//
// The payoff is read on the strip; the game stops on first entry.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "towgame/vec.hpp"

namespace towgame {

enum class Region { interior, boundary_strip, outside };

struct DomainSpec {
    enum class Shape { interval, disk };
    Shape shape = Shape::interval;
    double a = 0.0, b = 1.0;  // interval
    Vec center;               // disk
    double radius = 1.0;      // disk
    std::size_t dim = 1;
    double final_time = 1.0;  // T
    double eta = 0.1;         // strip width the payoff is defined on

    static DomainSpec interval(double a, double b, double final_time, double eta) {
        DomainSpec d;
        d.shape = Shape::interval;
        d.a = a;
        d.b = b;
        d.dim = 1;
        d.final_time = final_time;
        d.eta = eta;
        d.validate();
        return d;
    }

    static DomainSpec disk(Vec center, double radius, double final_time, double eta) {
        DomainSpec d;
        d.shape = Shape::disk;
        d.center = center;
        d.radius = radius;
        d.dim = 2;
        d.final_time = final_time;
        d.eta = eta;
        d.validate();
        return d;
    }

    void validate() const {
        if (!(final_time > 0.0)) throw std::invalid_argument("domain: T must be positive");
        if (!(eta > 0.0)) throw std::invalid_argument("domain: eta must be positive");
        if (shape == Shape::interval) {
            if (!(a < b)) throw std::invalid_argument("domain: interval requires a < b");
        } else {
            if (!(radius > 0.0)) throw std::invalid_argument("domain: disk radius must be positive");
            if (center.size() != 2) throw std::invalid_argument("domain: disk center must be 2d");
        }
    }

    bool contains(const Vec& x) const {  // open set
        if (shape == Shape::interval) return x[0] > a && x[0] < b;
        return distance(x, center) < radius;
    }

    /// dist(x, closure of Omega)
    double dist_to_domain(const Vec& x) const {
        if (shape == Shape::interval) return std::max({a - x[0], x[0] - b, 0.0});
        return std::max(distance(x, center) - radius, 0.0);
    }

    /// dist(x, boundary of Omega)
    double dist_to_boundary(const Vec& x) const {
        if (shape == Shape::interval) return std::min(std::abs(x[0] - a), std::abs(x[0] - b));
        return std::abs(distance(x, center) - radius);
    }

    Vec project_to_boundary(const Vec& x) const {
        if (shape == Shape::interval)
            return Vec{std::abs(x[0] - a) <= std::abs(x[0] - b) ? a : b};
        const Vec d = x - center;
        const double n = norm(d);
        if (n == 0.0) return center + Vec{radius, 0.0};
        return center + d * (radius / n);
    }

    double diameter() const {
        return shape == Shape::interval ? b - a : 2.0 * radius;
    }

    /// Axis-aligned box containing Omega fattened by pad.
    std::pair<Vec, Vec> bounding_box(double pad) const {
        if (shape == Shape::interval) return {Vec{a - pad}, Vec{b + pad}};
        Vec lo = center, hi = center;
        for (std::size_t d = 0; d < 2; ++d) {
            lo[d] -= radius + pad;
            hi[d] += radius + pad;
        }
        return {lo, hi};
    }

    std::string describe() const {
        if (shape == Shape::interval)
            return "interval(" + std::to_string(a) + "," + std::to_string(b) +
                   ",T=" + std::to_string(final_time) + ")";
        return "disk(r=" + std::to_string(radius) + ",T=" + std::to_string(final_time) + ")";
    }
};

inline Region classify_point(const DomainSpec& domain, double eps, const Vec& x, double t) {
    if (domain.contains(x) && t > 0.0 && t <= domain.final_time) return Region::interior;
    const double eps2 = eps * eps;
    if (t > -eps2 && t <= 0.0 && domain.dist_to_domain(x) <= eps)
        return Region::boundary_strip;
    if (t > 0.0 && t <= domain.final_time && !domain.contains(x) &&
        domain.dist_to_boundary(x) <= eps)
        return Region::boundary_strip;
    return Region::outside;
}

}  // namespace towgame
