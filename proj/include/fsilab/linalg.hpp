#ifndef FSILAB_LINALG_HPP
#define FSILAB_LINALG_HPP

// Small self-contained linear-algebra kernels: banded LU for the tensor-grid
// Laplace systems, cyclic Jacobi for symmetric spectra, and closed-form
// quadratic/cubic root finders for 2x2/3x3 amplification analyses.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fsilab/params.hpp"

namespace fsilab {

struct DenseMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a; // row-major

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
};

inline double frobenius_norm(const DenseMatrix& m) {
    double s = 0.0;
    for (double v : m.a) s += v * v;
    return std::sqrt(s);
}

inline DenseMatrix transpose(const DenseMatrix& m) {
    DenseMatrix t(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

// Band matrix with kl sub- and ku super-diagonals; entry (i, j) is stored at
// band_[j - i + kl][i] for -kl <= j - i <= ku.
class BandedMatrix {
public:
    BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
        : n_(n), kl_(kl), ku_(ku), band_(kl + ku + 1, std::vector<double>(n, 0.0)) {}

    std::size_t size() const { return n_; }

    double at(std::size_t i, std::size_t j) const {
        return in_band(i, j) ? band_[j - i + kl_][i] : 0.0;
    }
    void set(std::size_t i, std::size_t j, double v) {
        if (!in_band(i, j)) throw std::out_of_range("BandedMatrix::set outside band");
        band_[j - i + kl_][i] = v;
    }
    void add(std::size_t i, std::size_t j, double v) {
        if (!in_band(i, j)) throw std::out_of_range("BandedMatrix::add outside band");
        band_[j - i + kl_][i] += v;
    }

    std::vector<double> multiply(const std::vector<double>& x) const {
        std::vector<double> y(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t j0 = i >= kl_ ? i - kl_ : 0;
            const std::size_t j1 = std::min(n_ - 1, i + ku_);
            double acc = 0.0;
            for (std::size_t j = j0; j <= j1; ++j) acc += at(i, j) * x[j];
            y[i] = acc;
        }
        return y;
    }

    double inf_norm() const {
        double m = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t j0 = i >= kl_ ? i - kl_ : 0;
            const std::size_t j1 = std::min(n_ - 1, i + ku_);
            double row = 0.0;
            for (std::size_t j = j0; j <= j1; ++j) row += std::abs(at(i, j));
            m = std::max(m, row);
        }
        return m;
    }

private:
    bool in_band(std::size_t i, std::size_t j) const {
        return (j + kl_ >= i) && (j <= i + ku_) && i < n_ && j < n_;
    }

    std::size_t n_, kl_, ku_;
    std::vector<std::vector<double>> band_;

    friend class BandedLU;
};

// In-band LU without pivoting. Intended for (irreducibly) diagonally dominant
// systems such as the discrete Laplacian; fill stays inside the band.
class BandedLU {
public:
    explicit BandedLU(BandedMatrix m) : lu_(std::move(m)) {
        const std::size_t n = lu_.n_, kl = lu_.kl_, ku = lu_.ku_;
        for (std::size_t k = 0; k < n; ++k) {
            const double piv = lu_.at(k, k);
            if (piv == 0.0 || !std::isfinite(piv))
                throw std::runtime_error("BandedLU: zero or non-finite pivot");
            const std::size_t imax = std::min(n - 1, k + kl);
            for (std::size_t i = k + 1; i <= imax && i < n; ++i) {
                const double m = lu_.at(i, k) / piv;
                lu_.band_[k - i + kl][i] = m;
                const std::size_t jmax = std::min(n - 1, k + ku);
                for (std::size_t j = k + 1; j <= jmax; ++j)
                    lu_.band_[j - i + kl][i] -= m * lu_.at(k, j);
            }
        }
    }

    std::vector<double> solve(std::vector<double> b) const {
        const std::size_t n = lu_.n_, kl = lu_.kl_, ku = lu_.ku_;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j0 = i >= kl ? i - kl : 0;
            for (std::size_t j = j0; j < i; ++j) b[i] -= lu_.at(i, j) * b[j];
        }
        for (std::size_t ii = n; ii-- > 0;) {
            const std::size_t j1 = std::min(n - 1, ii + ku);
            for (std::size_t j = ii + 1; j <= j1; ++j) b[ii] -= lu_.at(ii, j) * b[j];
            b[ii] /= lu_.at(ii, ii);
        }
        return b;
    }

private:
    BandedMatrix lu_;
};

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> symmetric_eigenvalues(DenseMatrix m, int max_sweeps = 64) {
    if (m.rows != m.cols) throw std::invalid_argument("symmetric_eigenvalues: matrix not square");
    const std::size_t n = m.rows;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
        if (std::sqrt(off) < 1e-14 * (1.0 + frobenius_norm(m))) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (m(p, q) == 0.0) continue;
                const double tau = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = m(i, i);
    return ev;
}

// Roots of x^2 + b x + c (real coefficients, possibly complex roots),
// using the cancellation-safe variant for the real case.
inline std::array<std::complex<double>, 2> quadratic_roots(double b, double c) {
    const double disc = b * b - 4.0 * c;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
        const double r0 = q;
        const double r1 = (q != 0.0) ? c / q : -b - q;
        return {std::complex<double>(r0, 0.0), std::complex<double>(r1, 0.0)};
    }
    const double re = -0.5 * b, im = 0.5 * std::sqrt(-disc);
    return {std::complex<double>(re, im), std::complex<double>(re, -im)};
}

// Roots of x^3 + a x^2 + b x + c with real coefficients: one real root via
// the trigonometric/Cardano form polished by Newton, then deflation to a
// quadratic. Root magnitudes are accurate to a few ulps.
inline std::array<std::complex<double>, 3> cubic_roots(double a, double b, double c) {
    // depressed form y^3 + p y + q, x = y - a/3
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    double y;
    const double disc = 0.25 * q * q + p * p * p / 27.0;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double u = std::cbrt(-0.5 * q + sq);
        const double v = std::cbrt(-0.5 * q - sq);
        y = u + v;
    } else {
        const double rr = std::sqrt(-p * p * p / 27.0);
        const double phi = std::acos(std::clamp(-0.5 * q / rr, -1.0, 1.0));
        // pick the real root farthest from the other two for stable deflation
        const double m = 2.0 * std::sqrt(-p / 3.0);
        double best = m * std::cos(phi / 3.0), best_abs = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double cand = m * std::cos((phi + 2.0 * kPi * k) / 3.0);
            if (std::abs(cand) >= best_abs) {
                best = cand;
                best_abs = std::abs(cand);
            }
        }
        y = best;
    }
    double x = y - a / 3.0;
    for (int it = 0; it < 3; ++it) { // Newton polish on the original cubic
        const double f = ((x + a) * x + b) * x + c;
        const double df = (3.0 * x + 2.0 * a) * x + b;
        if (df == 0.0) break;
        const double step = f / df;
        x -= step;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) break;
    }
    // deflate: x^3 + a x^2 + b x + c = (x - x0)(x^2 + b1 x + c1)
    const double b1 = a + x;
    const double c1 = b + x * b1;
    auto rest = quadratic_roots(b1, c1);
    return {std::complex<double>(x, 0.0), rest[0], rest[1]};
}

inline double spectral_radius(const std::array<std::complex<double>, 3>& roots) {
    double r = 0.0;
    for (const auto& z : roots) r = std::max(r, std::abs(z));
    return r;
}

} // namespace fsilab

#endif
