#ifndef FSILAB_PRESSURE_HPP
#define FSILAB_PRESSURE_HPP

// The interface pressure problem on the fixed rectangle Omega = (0,L) x (0,R):
//
//   -Lap p = 0                       in Omega
//        p = p_in / p_out            on z = 0 / z = L
//   dp/dn  = 0                       on r = 0 (symmetry)
//   p + alpha*dp/dn = w              on r = R (Robin, alpha = rho_s*h/rho_f)
//
// solved two independent ways: exact separation of variables per sine mode,
// and a second-order finite-difference scheme (5-point Laplacian, ghost-point
// Neumann/Robin closures) on the tensor grid. The FD route doubles as the
// discrete check of the Robin-trace operator's symmetry and positivity.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fsilab/linalg.hpp"
#include "fsilab/modal.hpp"
#include "fsilab/params.hpp"
#include "fsilab/spectral.hpp"

namespace fsilab {

struct PressureField {
    int Nz = 0, Nr = 0;
    double hz = 0.0, hr = 0.0;
    std::vector<double> values; // row-major: values[i*Nr + m] = p(z_i, r_m)

    PressureField() = default;
    PressureField(int nz, int nr, double L, double R)
        : Nz(nz), Nr(nr), hz(L / (nz - 1)), hr(R / (nr - 1)),
          values(static_cast<std::size_t>(nz) * static_cast<std::size_t>(nr), 0.0) {}

    double at(int i, int m) const { return values[static_cast<std::size_t>(i) * Nr + m]; }
    double& at(int i, int m) { return values[static_cast<std::size_t>(i) * Nr + m]; }

    // samples along the deformable boundary r = R
    std::vector<double> top_trace() const {
        std::vector<double> t(static_cast<std::size_t>(Nz));
        for (int i = 0; i < Nz; ++i) t[static_cast<std::size_t>(i)] = at(i, Nr - 1);
        return t;
    }
};

// Right side w of the Robin condition plus inlet/outlet pressure values
// (taken constant in r).
struct RobinProblemData {
    std::variant<ModalVector, std::vector<double>> gamma_data; // modal or Gamma-grid samples
    double inlet = 0.0;
    double outlet = 0.0;

    static RobinProblemData modal(ModalVector w, double p_in = 0.0, double p_out = 0.0) {
        return {std::move(w), p_in, p_out};
    }
    static RobinProblemData grid(std::vector<double> w, double p_in = 0.0, double p_out = 0.0) {
        return {std::move(w), p_in, p_out};
    }

    std::vector<double> gamma_on_grid(const Geometry& geom, int Nz) const {
        if (std::holds_alternative<ModalVector>(gamma_data))
            return modal_to_trace(std::get<ModalVector>(gamma_data), geom, Nz);
        const auto& g = std::get<std::vector<double>>(gamma_data);
        if (static_cast<int>(g.size()) != Nz)
            throw std::invalid_argument("RobinProblemData: Gamma grid size mismatch");
        return g;
    }
};

struct ModalSolveResult {
    PressureField field;
    ModalVector trace; // p restricted to Gamma, modally
};

// Exact solution for homogeneous inlet/outlet data and modal Robin datum w:
// per mode, p_j(z,r) = A_j cosh(k_j r) sin(k_j z) with
//   A_j = w_j / (cosh(k_j R) + alpha k_j sinh(k_j R)),
// so the Gamma-trace is lambda_j w_j. cosh ratios are evaluated in
// exponential form to stay finite for large k_j R.
inline ModalSolveResult solve_robin_modal(const ModalVector& w, const ProblemParams& p, int Nz, int Nr) {
    p.validate();
    const double alpha = p.alpha();
    const double R = p.geom.R, L = p.geom.L;
    ModalSolveResult out;
    out.field = PressureField(Nz, Nr, L, R);
    out.trace = ModalVector(w.size());

    std::vector<double> trace_coeff(w.size());
    for (std::size_t j = 1; j <= w.size(); ++j) {
        const double k = static_cast<double>(j) * kPi / L;
        const double lambda = 1.0 / (1.0 + alpha * k * std::tanh(k * R));
        trace_coeff[j - 1] = lambda * w[j - 1];
        out.trace[j - 1] = trace_coeff[j - 1];
    }
    for (int i = 0; i < Nz; ++i) {
        const double z = i * out.field.hz;
        for (int m = 0; m < Nr; ++m) {
            const double r = m * out.field.hr;
            double acc = 0.0;
            for (std::size_t j = 1; j <= w.size(); ++j) {
                const double k = static_cast<double>(j) * kPi / L;
                // cosh(k r)/cosh(k R) without overflow
                const double ratio = std::exp(k * (r - R)) * (1.0 + std::exp(-2.0 * k * r)) /
                                     (1.0 + std::exp(-2.0 * k * R));
                acc += trace_coeff[j - 1] * ratio * std::sin(k * z);
            }
            out.field.at(i, m) = acc;
        }
    }
    return out;
}

// Normal derivative of the modal Robin solution on Gamma, mode by mode,
// from the Robin identity alpha * dp/dn = w - p|_Gamma.
inline ModalVector robin_normal_derivative(const ModalVector& w, const ModalVector& trace, double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("robin_normal_derivative: alpha must be > 0");
    ModalVector d(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) d[i] = (w[i] - trace[i]) / alpha;
    return d;
}

enum class TopBoundary { robin, neumann };

struct FdSolveResult {
    PressureField field;
    std::vector<double> trace; // Gamma samples, size Nz
    double residual = 0.0;     // final relative residual (inf-norm, backward-error scaled)
};

// Second-order finite-difference discretization of the pressure problem,
// assembled and factored once, reusable across right-hand sides.
//
// Unknowns are the nodes i = 1..Nz-2 (Dirichlet columns eliminated),
// m = 0..Nr-1. The symmetry and top conditions use ghost points:
//   r = 0:  p_{i,-1} = p_{i,1}
//   r = R (Robin):   p_{i,Nr} = p_{i,Nr-2} + 2 hr (w_i - p_{i,Nr-1})/alpha
//   r = R (Neumann): p_{i,Nr} = p_{i,Nr-2} + 2 hr w_i
// Corner nodes belong to the Dirichlet sides. The banded system is solved by
// LU (diagonally dominant, no pivoting) plus iterative refinement until the
// relative residual drops below tol.
class FdPressureSolver {
public:
    FdPressureSolver(const ProblemParams& p, int Nz, int Nr, TopBoundary top = TopBoundary::robin)
        : params_(p), Nz_(Nz), Nr_(Nr), top_(top),
          hz_(p.geom.L / (Nz - 1)), hr_(p.geom.R / (Nr - 1)),
          A_(make_matrix(p, Nz, Nr, top)), lu_(A_) {
        p.validate();
        anorm_ = A_.inf_norm();
    }

    FdSolveResult solve(const RobinProblemData& data, double tol = 1e-10) const {
        if (tol <= 0.0) throw std::invalid_argument("FdPressureSolver: tol must be > 0");
        const double az = 1.0 / (hz_ * hz_), ar = 1.0 / (hr_ * hr_);
        const auto w = data.gamma_on_grid(params_.geom, Nz_);
        const std::size_t nun = A_.size();
        std::vector<double> rhs(nun, 0.0);
        for (int m = 0; m < Nr_; ++m) {
            rhs[idx(1, m)] += az * data.inlet;
            rhs[idx(Nz_ - 2, m)] += az * data.outlet;
        }
        const double top_coef =
            top_ == TopBoundary::robin ? 2.0 * ar * hr_ / params_.alpha() : 2.0 * ar * hr_;
        for (int i = 1; i <= Nz_ - 2; ++i)
            rhs[idx(i, Nr_ - 1)] += top_coef * w[static_cast<std::size_t>(i)];

        std::vector<double> x = lu_.solve(rhs);

        double bnorm = 0.0;
        for (double v : rhs) bnorm = std::max(bnorm, std::abs(v));
        auto rel_residual = [&](const std::vector<double>& sol) {
            auto ax = A_.multiply(sol);
            double rnorm = 0.0, xnorm = 0.0;
            for (std::size_t q = 0; q < nun; ++q) {
                rnorm = std::max(rnorm, std::abs(rhs[q] - ax[q]));
                xnorm = std::max(xnorm, std::abs(sol[q]));
            }
            const double scale = anorm_ * xnorm + bnorm;
            return scale > 0.0 ? rnorm / scale : rnorm;
        };

        double res = rel_residual(x);
        const int max_refine = 20;
        for (int it = 0; it < max_refine && res >= tol; ++it) {
            auto ax = A_.multiply(x);
            std::vector<double> r(nun);
            for (std::size_t q = 0; q < nun; ++q) r[q] = rhs[q] - ax[q];
            auto dx = lu_.solve(std::move(r));
            for (std::size_t q = 0; q < nun; ++q) x[q] += dx[q];
            res = rel_residual(x);
        }
        if (res >= tol)
            throw std::runtime_error("FdPressureSolver: no convergence, final relative residual = " +
                                     std::to_string(res));

        FdSolveResult out;
        out.residual = res;
        out.field = PressureField(Nz_, Nr_, params_.geom.L, params_.geom.R);
        for (int m = 0; m < Nr_; ++m) {
            out.field.at(0, m) = data.inlet;
            out.field.at(Nz_ - 1, m) = data.outlet;
        }
        for (int i = 1; i <= Nz_ - 2; ++i)
            for (int m = 0; m < Nr_; ++m) out.field.at(i, m) = x[idx(i, m)];
        out.trace = out.field.top_trace();
        return out;
    }

private:
    std::size_t idx(int i, int m) const {
        return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(Nr_) +
               static_cast<std::size_t>(m);
    }

    static BandedMatrix make_matrix(const ProblemParams& p, int Nz, int Nr, TopBoundary top) {
        if (Nz < 3 || Nr < 3) throw std::invalid_argument("FdPressureSolver: grid sizes must be >= 3");
        const double hz = p.geom.L / (Nz - 1), hr = p.geom.R / (Nr - 1);
        const double az = 1.0 / (hz * hz), ar = 1.0 / (hr * hr);
        const std::size_t nun = static_cast<std::size_t>(Nz - 2) * static_cast<std::size_t>(Nr);
        const std::size_t band = static_cast<std::size_t>(Nr);
        auto id = [Nr](int i, int m) {
            return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(Nr) +
                   static_cast<std::size_t>(m);
        };
        BandedMatrix A(nun, band, band);
        for (int i = 1; i <= Nz - 2; ++i) {
            for (int m = 0; m < Nr; ++m) {
                const std::size_t row = id(i, m);
                double diag = 2.0 * az + 2.0 * ar;
                if (i - 1 >= 1) A.add(row, id(i - 1, m), -az);
                if (i + 1 <= Nz - 2) A.add(row, id(i + 1, m), -az);
                if (m == 0) {
                    A.add(row, id(i, 1), -2.0 * ar);
                } else if (m == Nr - 1) {
                    A.add(row, id(i, Nr - 2), -2.0 * ar);
                    if (top == TopBoundary::robin) diag += 2.0 * ar * hr / p.alpha();
                } else {
                    A.add(row, id(i, m - 1), -ar);
                    A.add(row, id(i, m + 1), -ar);
                }
                A.add(row, row, diag);
            }
        }
        return A;
    }

    ProblemParams params_;
    int Nz_, Nr_;
    TopBoundary top_;
    double hz_, hr_;
    BandedMatrix A_;
    BandedLU lu_;
    double anorm_ = 0.0;
};

inline FdSolveResult solve_robin_fd(const RobinProblemData& data, const ProblemParams& p, int Nz, int Nr,
                                    double tol = 1e-10, TopBoundary top = TopBoundary::robin) {
    return FdPressureSolver(p, Nz, Nr, top).solve(data, tol);
}

// Gamma-trace contribution of the inlet/outlet data to the Robin pressure
// solution ("p_ext"): lifting the data by p_in(1 - z/L) + p_out z/L (harmonic,
// zero normal derivative on both horizontal boundaries) and removing its
// S-image gives, per mode, (1 - lambda_j) times the lift coefficients.
inline ModalVector compute_p_ext(double p_in, double p_out, const OperatorSpectrum& spec) {
    ModalVector lift = linear_lift_modal(p_in, p_out, static_cast<int>(spec.modes()));
    ModalVector out(lift.size());
    for (std::size_t i = 0; i < lift.size(); ++i) out[i] = (1.0 - spec.lambda[i]) * lift[i];
    return out;
}

// External Gamma-trace of the Neumann (added-mass) pressure decomposition:
// the linear lift itself, since it already has dp/dn = 0 on Gamma.
inline ModalVector compute_p_ext_neumann(double p_in, double p_out, int J) {
    return linear_lift_modal(p_in, p_out, J);
}

// Discrete Robin-trace operator: column j is the modal Gamma-trace of the FD
// solve with datum e_j and homogeneous inlet/outlet data. Approximates
// diag(lambda_j); on the tensor grid the discrete problem separates, so the
// matrix is diagonal up to solver round-off.
inline DenseMatrix discrete_S_matrix(const ProblemParams& p, int J, int Nz, int Nr, double tol = 1e-10) {
    if (J > Nz - 2) throw std::invalid_argument("discrete_S_matrix: insufficient grid resolution");
    FdPressureSolver solver(p, Nz, Nr, TopBoundary::robin);
    DenseMatrix S(static_cast<std::size_t>(J), static_cast<std::size_t>(J));
    for (int j = 1; j <= J; ++j) {
        auto data = RobinProblemData::modal(ModalVector::basis(static_cast<std::size_t>(J),
                                                               static_cast<std::size_t>(j)));
        auto sol = solver.solve(data, tol);
        auto col = trace_to_modal(sol.trace, p.geom, J);
        for (int i = 0; i < J; ++i)
            S(static_cast<std::size_t>(i), static_cast<std::size_t>(j - 1)) =
                col[static_cast<std::size_t>(i)];
    }
    return S;
}

} // namespace fsilab

#endif
