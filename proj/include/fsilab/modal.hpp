#ifndef FSILAB_MODAL_HPP
#define FSILAB_MODAL_HPP

// Sine basis on the interface Gamma = (0,L) x {R} and conversions between
// grid traces and modal coefficients.
//
// A trace function vanishing at z = 0 and z = L is represented as
//     v(z) = sum_{j=1}^{J} c_j sin(j*pi*z/L)
// with unnormalized basis functions; the discrete analysis/synthesis pair
// below is the DST-I transform on the interior nodes of a uniform grid and
// is exact (round trip is the identity) whenever J <= Nz - 2.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "fsilab/params.hpp"

namespace fsilab {

// Coefficients c_j, j = 1..J, of a Gamma-trace in the sine basis.
class ModalVector {
public:
    ModalVector() = default;
    explicit ModalVector(std::size_t J, double value = 0.0) : c_(J, value) {}
    explicit ModalVector(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

    static ModalVector basis(std::size_t J, std::size_t j) {
        if (j < 1 || j > J) throw std::invalid_argument("ModalVector::basis: mode index out of range");
        ModalVector m(J);
        m.c_[j - 1] = 1.0;
        return m;
    }

    std::size_t size() const { return c_.size(); }
    double operator[](std::size_t i) const { return c_[i]; }
    double& operator[](std::size_t i) { return c_[i]; }

    const std::vector<double>& coeffs() const { return c_; }
    std::vector<double>& coeffs() { return c_; }

    auto begin() const { return c_.begin(); }
    auto end() const { return c_.end(); }

    bool all_finite() const {
        for (double v : c_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : c_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::vector<double> c_;
};

inline ModalVector operator+(const ModalVector& a, const ModalVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("ModalVector: size mismatch");
    ModalVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline ModalVector operator*(double s, const ModalVector& a) {
    ModalVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

// Uniform axial grid including both endpoints, z_i = i*L/(N-1).
inline std::vector<double> uniform_grid(double L, int N) {
    if (N < 2) throw std::invalid_argument("uniform_grid: need at least 2 points");
    std::vector<double> z(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) z[static_cast<std::size_t>(i)] = L * static_cast<double>(i) / (N - 1);
    return z;
}

// Discrete sine analysis of samples on a uniform grid (endpoints included in
// `values` but ignored: the basis vanishes there).
//   c_j = 2/(N-1) * sum_{i=1}^{N-2} v_i sin(pi*j*i/(N-1))
inline ModalVector trace_to_modal(std::span<const double> values, const Geometry& geom, int J) {
    const int N = static_cast<int>(values.size());
    if (N < 3) throw std::invalid_argument("trace_to_modal: need at least 3 grid points");
    const int modes_resolvable = N - 2;
    if (J < 1) throw std::invalid_argument("trace_to_modal: J must be >= 1");
    if (J > modes_resolvable)
        throw std::invalid_argument("trace_to_modal: insufficient grid resolution (J = " + std::to_string(J) +
                                    " > " + std::to_string(modes_resolvable) + " resolvable modes)");
    (void)geom; // the transform depends only on index ratios on a uniform grid
    ModalVector m(static_cast<std::size_t>(J));
    const double scale = 2.0 / (N - 1);
    for (int j = 1; j <= J; ++j) {
        double acc = 0.0;
        for (int i = 1; i <= N - 2; ++i)
            acc += values[static_cast<std::size_t>(i)] * std::sin(kPi * j * i / (N - 1));
        m[static_cast<std::size_t>(j - 1)] = scale * acc;
    }
    return m;
}

// Pointwise synthesis sum_j c_j sin(j*pi*z/L) on an arbitrary set of z locations.
inline std::vector<double> modal_to_trace(const ModalVector& m, const Geometry& geom,
                                          std::span<const double> z_grid) {
    std::vector<double> v(z_grid.size(), 0.0);
    for (std::size_t i = 0; i < z_grid.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= m.size(); ++j)
            acc += m[j - 1] * std::sin(static_cast<double>(j) * kPi * z_grid[i] / geom.L);
        v[i] = acc;
    }
    return v;
}

inline std::vector<double> modal_to_trace(const ModalVector& m, const Geometry& geom, int Nz) {
    auto z = uniform_grid(geom.L, Nz);
    return modal_to_trace(m, geom, z);
}

// L^2(0,L) norm of the represented trace; by Parseval ||v||^2 = (L/2) sum c_j^2.
inline double modal_l2_norm(const ModalVector& m, const Geometry& geom) {
    double s = 0.0;
    for (double c : m) s += c * c;
    return std::sqrt(0.5 * geom.L * s);
}

// Trapezoid L^2(0,L) norm of grid samples that vanish at the endpoints.
inline double grid_l2_norm(std::span<const double> values, double hz) {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(hz * s);
}

// Sine coefficients of the linear lift p_in*(1 - z/L) + p_out*z/L:
//   c_j = 2*(p_in - (-1)^j p_out)/(j*pi).
// This lift is harmonic, matches the inlet/outlet data and has zero normal
// derivative on both horizontal boundaries.
inline ModalVector linear_lift_modal(double p_in, double p_out, int J) {
    ModalVector m(static_cast<std::size_t>(J));
    for (int j = 1; j <= J; ++j) {
        const double sgn = (j % 2 == 0) ? 1.0 : -1.0; // (-1)^j
        m[static_cast<std::size_t>(j - 1)] = 2.0 * (p_in - sgn * p_out) / (j * kPi);
    }
    return m;
}

} // namespace fsilab

#endif
