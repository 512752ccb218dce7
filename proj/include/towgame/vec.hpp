#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>

namespace towgame {

/// Largest spatial dimension the toolkit handles.
inline constexpr std::size_t kMaxDim = 4;

// Fixed-capacity euclidean vector with runtime dimension (1..kMaxDim).
// Value semantics, no allocation. The solver domains are 1d and 2d; the
// operator-side code also uses 3d/4d arguments.
class Vec {
public:
    Vec() = default;
    explicit Vec(std::size_t dim) : dim_(dim) { assert(dim <= kMaxDim); }
    Vec(std::initializer_list<double> xs) : dim_(xs.size()) {
        assert(xs.size() <= kMaxDim);
        std::size_t i = 0;
        for (double v : xs) comp_[i++] = v;
    }

    static Vec zero(std::size_t dim) { return Vec(dim); }
    static Vec unit(std::size_t dim, std::size_t axis) {
        Vec e(dim);
        e[axis] = 1.0;
        return e;
    }

    std::size_t size() const { return dim_; }
    double operator[](std::size_t i) const { assert(i < dim_); return comp_[i]; }
    double& operator[](std::size_t i) { assert(i < dim_); return comp_[i]; }

    Vec operator+(const Vec& r) const {
        assert(dim_ == r.dim_);
        Vec out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) out.comp_[i] = comp_[i] + r.comp_[i];
        return out;
    }
    Vec operator-(const Vec& r) const {
        assert(dim_ == r.dim_);
        Vec out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) out.comp_[i] = comp_[i] - r.comp_[i];
        return out;
    }
    Vec operator-() const {
        Vec out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) out.comp_[i] = -comp_[i];
        return out;
    }
    Vec operator*(double s) const {
        Vec out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) out.comp_[i] = comp_[i] * s;
        return out;
    }
    friend Vec operator*(double s, const Vec& v) { return v * s; }
    Vec& operator+=(const Vec& r) {
        assert(dim_ == r.dim_);
        for (std::size_t i = 0; i < dim_; ++i) comp_[i] += r.comp_[i];
        return *this;
    }

    /// Exact component-wise equality (used by the lattice-aligned paths).
    bool operator==(const Vec& r) const {
        if (dim_ != r.dim_) return false;
        for (std::size_t i = 0; i < dim_; ++i)
            if (comp_[i] != r.comp_[i]) return false;
        return true;
    }
    bool operator!=(const Vec& r) const { return !(*this == r); }

private:
    std::array<double, kMaxDim> comp_{};
    std::size_t dim_ = 0;
};

inline double dot(const Vec& a, const Vec& b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& v) { return dot(v, v); }
inline double norm(const Vec& v) { return std::sqrt(norm2(v)); }

inline double distance(const Vec& a, const Vec& b) { return norm(a - b); }

/// v / |v|; caller guarantees v != 0.
inline Vec unit_direction(const Vec& v) {
    const double n = norm(v);
    assert(n > 0.0);
    return v * (1.0 / n);
}

/// Deterministic total order on vectors: dimension first, then components.
inline bool lex_less(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

// Symmetric NxN matrix, dense storage, symmetric by construction: set()
// writes both triangles.
class SymMat {
public:
    SymMat() = default;
    explicit SymMat(std::size_t dim) : dim_(dim) { assert(dim <= kMaxDim); }

    static SymMat zero(std::size_t dim) { return SymMat(dim); }
    static SymMat identity(std::size_t dim) {
        SymMat m(dim);
        for (std::size_t i = 0; i < dim; ++i) m.set(i, i, 1.0);
        return m;
    }
    static SymMat diagonal(const Vec& d) {
        SymMat m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
        return m;
    }

    std::size_t size() const { return dim_; }
    double operator()(std::size_t i, std::size_t j) const {
        assert(i < dim_ && j < dim_);
        return m_[i * kMaxDim + j];
    }
    void set(std::size_t i, std::size_t j, double v) {
        assert(i < dim_ && j < dim_);
        m_[i * kMaxDim + j] = v;
        m_[j * kMaxDim + i] = v;
    }

    Vec apply(const Vec& v) const {
        assert(v.size() == dim_);
        Vec out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < dim_; ++j) s += (*this)(i, j) * v[j];
            out[i] = s;
        }
        return out;
    }

    /// <Mv, v>
    double quad(const Vec& v) const { return dot(apply(v), v); }

    double max_abs() const {
        double m = 0.0;
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) m = std::max(m, std::abs((*this)(i, j)));
        return m;
    }

private:
    std::array<double, kMaxDim * kMaxDim> m_{};
    std::size_t dim_ = 0;
};

}  // namespace towgame
