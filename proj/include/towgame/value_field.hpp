#pragma once

// Discrete value fields on the parabolic cylinder.
//
// A ValueField stores u on a uniform tensor grid covering the domain
// fattened by eps (plus a padding ring so every interpolation cell a game
// move can touch has data), across uniform time slices from -eps^2 up to
// the final time. Nodes with x in Omega and t > 0 are unknowns; every
// other node carries the payoff, which is a globally defined expression.
//
// Interpolation is multilinear in space and linear in time, with two fast
// paths: queries within 1e-9 of a node snap to the stored value exactly,
// and interpolating between equal values returns that value bit-for-bit.
// Both matter for the lattice-aligned oracle comparisons.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "towgame/domain.hpp"
#include "towgame/io.hpp"
#include "towgame/vec.hpp"

namespace towgame {

struct GridSpec {
    double h = 0.0;             // spatial step
    double dt = 0.0;            // time step; <= 0 requests c*eps^2 subdivision
    bool lattice_aligned = false;  // oracle mode: moves must map nodes to nodes
};

struct FieldMeta {
    std::string family;
    std::string domain;
    std::string payoff_source;
    std::uint64_t payoff_hash = 0;
    double c = 0.0;
    double eps = 0.0;
    int resolution = 0;
};

class ValueField {
public:
    ValueField() = default;

    ValueField(const DomainSpec& domain, double eps, const GridSpec& grid, double c)
        : domain_(domain), eps_(eps), grid_(grid) {
        if (!(grid.h > 0.0)) throw std::invalid_argument("grid: h must be positive");
        if (!(eps > 0.0)) throw std::invalid_argument("grid: eps must be positive");
        const double horizon = domain.final_time + eps * eps;
        if (grid.dt > 0.0) {
            if (grid.dt > c * eps * eps * (1.0 + 1e-12))
                throw std::invalid_argument("grid: dt must satisfy dt <= c*eps^2");
            const double steps = horizon / grid.dt;
            const double rounded = std::round(steps);
            if (std::abs(steps - rounded) > 1e-6 * std::max(1.0, rounded))
                throw std::invalid_argument("grid: dt must divide T + eps^2");
            nt_ = static_cast<std::size_t>(rounded) + 1;
        } else {
            const auto slices = static_cast<std::size_t>(
                std::ceil(horizon / (c * eps * eps) - 1e-12));
            nt_ = std::max<std::size_t>(slices, 1) + 1;
            grid_.dt = horizon / static_cast<double>(nt_ - 1);
        }
        tmin_ = -eps * eps;

        // spatial lattice: centered so the domain midpoint is a node
        for (std::size_t d = 0; d < domain.dim; ++d) {
            double mid, half;
            if (domain.shape == DomainSpec::Shape::interval) {
                mid = (domain.a + domain.b) / 2.0;
                half = (domain.b - domain.a) / 2.0;
            } else {
                mid = domain.center[d];
                half = domain.radius;
            }
            const auto ncells = static_cast<long>(std::ceil((half + eps) / grid_.h)) + 2;
            std::vector<double> coords(2 * ncells + 1);
            for (long i = 0; i <= 2 * ncells; ++i)
                coords[i] = mid + static_cast<double>(i - ncells) * grid_.h;
            coords_[d] = std::move(coords);
        }

        in_domain_.resize(node_count());
        for (std::size_t i = 0; i < node_count(); ++i)
            in_domain_[i] = domain.contains(node_coords(i)) ? 1 : 0;
        values_.assign(nt_ * node_count(), 0.0);
    }

    const DomainSpec& domain() const { return domain_; }
    double eps() const { return eps_; }
    const GridSpec& grid() const { return grid_; }
    std::size_t dim() const { return domain_.dim; }

    std::size_t slice_count() const { return nt_; }
    double slice_time(std::size_t j) const {
        return j + 1 == nt_ ? domain_.final_time
                            : tmin_ + static_cast<double>(j) * grid_.dt;
    }
    double tmin() const { return tmin_; }

    std::size_t axis_count(std::size_t d) const { return coords_[d].size(); }
    double axis_coord(std::size_t d, std::size_t i) const { return coords_[d][i]; }

    std::size_t node_count() const {
        std::size_t n = coords_[0].size();
        if (dim() == 2) n *= coords_[1].size();
        return n;
    }
    std::size_t node_index(std::size_t ix, std::size_t iy = 0) const {
        return ix + coords_[0].size() * iy;
    }
    Vec node_coords(std::size_t idx) const {
        if (dim() == 1) return Vec{coords_[0][idx]};
        const std::size_t nx = coords_[0].size();
        return Vec{coords_[0][idx % nx], coords_[1][idx / nx]};
    }
    /// x in Omega: the node is an unknown on positive-time slices.
    bool node_in_domain(std::size_t idx) const { return in_domain_[idx] != 0; }

    double value(std::size_t slice, std::size_t idx) const {
        return values_[slice * node_count() + idx];
    }
    double& value(std::size_t slice, std::size_t idx) {
        return values_[slice * node_count() + idx];
    }
    const double* slice_data(std::size_t slice) const {
        return values_.data() + slice * node_count();
    }
    double* slice_data(std::size_t slice) {
        return values_.data() + slice * node_count();
    }

    static double lerp(double a, double b, double w) {
        if (w == 0.0 || a == b) return a;
        return (1.0 - w) * a + w * b;
    }

    struct AxisPos {
        std::size_t i0;
        double w;  // 0 means exactly on node i0
    };

    AxisPos locate(double coord, const std::vector<double>& axis, double step) const {
        const double f = (coord - axis.front()) / step;
        double fl = std::floor(f);
        double w = f - fl;
        if (w <= 1e-9) {
            w = 0.0;
        } else if (w >= 1.0 - 1e-9) {
            fl += 1.0;
            w = 0.0;
        }
        if (fl < 0.0 || fl > static_cast<double>(axis.size() - 1) ||
            (w > 0.0 && fl >= static_cast<double>(axis.size() - 1)))
            throw std::out_of_range("interpolation query outside gridded region");
        return {static_cast<std::size_t>(fl), w};
    }

    double interpolate_slice(std::size_t j, const Vec& x) const {
        const double* v = slice_data(j);
        const AxisPos px = locate(x[0], coords_[0], grid_.h);
        if (dim() == 1) {
            if (px.w == 0.0) return v[px.i0];
            return lerp(v[px.i0], v[px.i0 + 1], px.w);
        }
        const AxisPos py = locate(x[1], coords_[1], grid_.h);
        const std::size_t nx = coords_[0].size();
        const std::size_t base = px.i0 + nx * py.i0;
        const double low = px.w == 0.0 ? v[base] : lerp(v[base], v[base + 1], px.w);
        if (py.w == 0.0) return low;
        const double high =
            px.w == 0.0 ? v[base + nx] : lerp(v[base + nx], v[base + nx + 1], px.w);
        return lerp(low, high, py.w);
    }

    double interpolate(const Vec& x, double t) const {
        const double f = (t - tmin_) / grid_.dt;
        double fl = std::floor(f);
        double w = f - fl;
        if (w <= 1e-9) {
            w = 0.0;
        } else if (w >= 1.0 - 1e-9) {
            fl += 1.0;
            w = 0.0;
        }
        if (fl < 0.0 || fl > static_cast<double>(nt_ - 1) ||
            (w > 0.0 && fl >= static_cast<double>(nt_ - 1)))
            throw std::out_of_range("interpolation query outside gridded region");
        const auto j = static_cast<std::size_t>(fl);
        const double v0 = interpolate_slice(j, x);
        if (w == 0.0) return v0;
        const double v1 = interpolate_slice(j + 1, x);
        return lerp(v0, v1, w);
    }

    double min_value() const {
        double m = values_.front();
        for (double v : values_) m = std::min(m, v);
        return m;
    }
    double max_value() const {
        double m = values_.front();
        for (double v : values_) m = std::max(m, v);
        return m;
    }

    /// Range of the boundary data the field was filled with.
    double boundary_data_min() const { return data_min_; }
    double boundary_data_max() const { return data_max_; }
    void set_boundary_data_range(double lo, double hi) {
        data_min_ = lo;
        data_max_ = hi;
    }

    FieldMeta meta;

    /// FNV hash of the raw value bytes; identifies the solved field.
    std::uint64_t checksum() const {
        return fnv1a64(values_.data(), values_.size() * sizeof(double));
    }

    // CSV body: header x1..xN,t,u then one row per node of the cylinder and
    // its boundary strip. Returns the hash of the written bytes.
    std::uint64_t write_csv(std::ostream& out) const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        auto emit = [&](const std::string& chunk) {
            h = fnv1a64(chunk.data(), chunk.size(), h);
            out << chunk;
        };
        std::string header;
        {
            std::vector<std::string> cols;
            for (std::size_t d = 1; d <= dim(); ++d) cols.push_back("x" + std::to_string(d));
            cols.push_back("t");
            cols.push_back("u");
            csv_row(header, cols);
        }
        emit(header);
        std::string chunk;
        for (std::size_t j = 0; j < nt_; ++j) {
            chunk.clear();
            const double t = slice_time(j);
            for (std::size_t idx = 0; idx < node_count(); ++idx) {
                const Vec x = node_coords(idx);
                if (classify_point(domain_, eps_, x, t) == Region::outside) continue;
                std::vector<std::string> cols;
                for (std::size_t d = 0; d < dim(); ++d) cols.push_back(format_float(x[d]));
                cols.push_back(format_float(t));
                cols.push_back(format_float(value(j, idx)));
                csv_row(chunk, cols);
            }
            emit(chunk);
        }
        return h;
    }

    nlohmann::json meta_json(std::uint64_t csv_hash, bool with_timestamp = true) const {
        nlohmann::json meta_obj{
            {"eps", meta.eps},
            {"c", meta.c},
            {"family", meta.family},
            {"domain", meta.domain},
            {"grid",
             {{"h", grid_.h},
              {"dt", grid_.dt},
              {"slices", nt_},
              {"nodes", node_count()},
              {"lattice_aligned", grid_.lattice_aligned}}},
            {"payoff", {{"source", meta.payoff_source}, {"hash", format_hash(meta.payoff_hash)}}},
            {"resolution", meta.resolution},
            {"checksum", format_hash(csv_hash)},
        };
        if (with_timestamp) {
            const auto now = std::chrono::system_clock::now();
            meta_obj["written_unix_ms"] =
                std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch())
                    .count();
        }
        return meta_obj;
    }

private:
    DomainSpec domain_;
    double eps_ = 0.0;
    GridSpec grid_;
    double tmin_ = 0.0;
    std::size_t nt_ = 0;
    std::array<std::vector<double>, 2> coords_;
    std::vector<std::uint8_t> in_domain_;
    std::vector<double> values_;
    double data_min_ = 0.0, data_max_ = 0.0;
};

}  // namespace towgame
