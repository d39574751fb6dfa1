#ifndef FSILAB_ORACLE_HPP
#define FSILAB_ORACLE_HPP

// Reference solutions of the modal interface dynamics, computed without any
// time-marching recursion: each mode is a driven (possibly damped) oscillator
//
//     m_j eta_j'' + d_j eta_j' + ell_j eta_j = f_j(t),   eta_j(0) = eta_j'(0) = 0,
//
// integrated by Duhamel's formula. The state is advanced interval by interval
// with the exact homogeneous propagator plus a Simpson rule for the local
// convolution, so the error is O(fine_dt^4) quadrature error only.
//
// Two forcing configurations are provided:
//   * monolithic: the unsplit coupled problem. The interface pressure is the
//     data lift minus the added-mass reaction, which moves rho_f*mu_j onto the
//     structure inertia:  (rho_s h + rho_f mu_j) eta'' + d eta' + ell eta = lift_j(t).
//   * beta_limit: the time-continuous limit of the kinematically coupled
//     beta-scheme. Its pressure recursion is autonomous and relaxes, per step,
//     toward P_j(t) = (1-lambda_j)/(1-beta*lambda_j) * lift_j(t); the wall then
//     obeys  rho_s h eta'' + d eta' + ell eta = beta*P_j(t)  with no added mass.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fsilab/modal.hpp"
#include "fsilab/params.hpp"
#include "fsilab/schemes.hpp"
#include "fsilab/spectral.hpp"

namespace fsilab {

enum class OracleKind {
    monolithic, // added-mass inertia, lift forcing
    beta_limit  // wall inertia only, filtered-lift forcing
};

struct OracleSnapshot {
    ModalVector eta, u, p;
    double t = 0.0;
};

namespace detail {

// One damped oscillator advanced exactly (homogeneous part) with Simpson
// quadrature for the particular part.
class OscillatorChannel {
public:
    OscillatorChannel(double m, double d, double ell) : m_(m) {
        if (m <= 0.0 || ell <= 0.0) throw std::invalid_argument("OscillatorChannel: need m, ell > 0");
        nu_ = 0.5 * d / m;
        const double w2 = ell / m - nu_ * nu_;
        if (w2 <= 0.0)
            throw std::invalid_argument("OscillatorChannel: overdamped mode not supported");
        w_ = std::sqrt(w2);
    }

    double eta() const { return eta_; }
    double u() const { return u_; }

    // advance from t to t+h with forcing samples f0 = f(t), fm = f(t+h/2), f1 = f(t+h)
    void advance(double h, double f0, double fm, double f1) {
        const double e1 = std::exp(-nu_ * h), c1 = std::cos(w_ * h), s1 = std::sin(w_ * h);
        const double eh = std::exp(-nu_ * 0.5 * h), ch = std::cos(0.5 * w_ * h),
                     sh = std::sin(0.5 * w_ * h);
        // homogeneous propagation
        const double a = eta_, b = (u_ + nu_ * eta_) / w_;
        double eta_h = e1 * (a * c1 + b * s1);
        double u_h = e1 * ((b * w_ - nu_ * a) * c1 - (a * w_ + nu_ * b) * s1);
        // Simpson for int_0^h K(h-s) f(t+s) ds; K(tau) = e^{-nu tau} sin(w tau)/(m w),
        // K' (the velocity kernel) has K(0) = 0, K'(0) = 1/m at the right endpoint.
        const double K_h = e1 * s1 / (m_ * w_);
        const double K_hm = eh * sh / (m_ * w_);
        const double Ku_h = e1 * (c1 - nu_ / w_ * s1) / m_;
        const double Ku_hm = eh * (ch - nu_ / w_ * sh) / m_;
        eta_ = eta_h + h / 6.0 * (K_h * f0 + 4.0 * K_hm * fm);
        u_ = u_h + h / 6.0 * (Ku_h * f0 + 4.0 * Ku_hm * fm + f1 / m_);
    }

private:
    double m_, nu_ = 0.0, w_ = 0.0;
    double eta_ = 0.0, u_ = 0.0;
};

} // namespace detail

// Exact-in-time modal reference integrator.
class ModalOracle {
public:
    ModalOracle(OracleKind kind, const ProblemParams& params, int J, double beta)
        : kind_(kind), params_(params), beta_(beta), spec_(params, J) {
        params_.validate();
        const double mw = params.wall.rho_s * params.wall.h;
        for (int j = 0; j < J; ++j) {
            const std::size_t i = static_cast<std::size_t>(j);
            const double m = kind == OracleKind::monolithic ? mw + params.fluid.rho_f * spec_.mu[i] : mw;
            channels_.emplace_back(m, spec_.damp[i], spec_.ell[i]);
        }
    }

    double t() const { return t_; }
    const OperatorSpectrum& spectrum() const { return spec_; }

    // modal forcing of mode i at time t
    double forcing(std::size_t i, double t) const {
        const double lift = lift_coeff(i, t);
        if (kind_ == OracleKind::monolithic) return lift;
        const double lam = spec_.lambda[i];
        return beta_ * (1.0 - lam) / (1.0 - beta_ * lam) * lift;
    }

    void advance(double h, int substeps) {
        if (h <= 0.0 || substeps < 1) throw std::invalid_argument("ModalOracle::advance: bad step");
        const double hs = h / substeps;
        for (int s = 0; s < substeps; ++s) {
            for (std::size_t i = 0; i < channels_.size(); ++i)
                channels_[i].advance(hs, forcing(i, t_), forcing(i, t_ + 0.5 * hs), forcing(i, t_ + hs));
            t_ += hs;
        }
    }

    OracleSnapshot snapshot() const {
        const std::size_t J = channels_.size();
        OracleSnapshot s{ModalVector(J), ModalVector(J), ModalVector(J), t_};
        const double mw = params_.wall.rho_s * params_.wall.h;
        for (std::size_t i = 0; i < J; ++i) {
            s.eta[i] = channels_[i].eta();
            s.u[i] = channels_[i].u();
            if (kind_ == OracleKind::monolithic) {
                // p|Gamma = lift - rho_f mu eta'' with eta'' from the effective equation
                const double m_eff = mw + params_.fluid.rho_f * spec_.mu[i];
                const double acc = (lift_coeff(i, t_) - spec_.damp[i] * s.u[i] - spec_.ell[i] * s.eta[i]) /
                                   m_eff;
                s.p[i] = lift_coeff(i, t_) - params_.fluid.rho_f * spec_.mu[i] * acc;
            } else {
                const double lam = spec_.lambda[i];
                s.p[i] = (1.0 - lam) / (1.0 - beta_ * lam) * lift_coeff(i, t_);
            }
        }
        return s;
    }

private:
    double lift_coeff(std::size_t i, double t) const {
        const double p_in = inlet_pressure(t, params_.pulse);
        const double p_out = outlet_pressure(t, params_.pulse);
        const double j = static_cast<double>(i + 1);
        const double sgn = (i % 2 == 1) ? 1.0 : -1.0; // (-1)^(i+1)
        return 2.0 * (p_in - sgn * p_out) / (j * kPi);
    }

    OracleKind kind_;
    ProblemParams params_;
    double beta_;
    OperatorSpectrum spec_;
    std::vector<detail::OscillatorChannel> channels_;
    double t_ = 0.0;
};

// Reference trajectory sampled at the scheme's steps: snapshot k corresponds to
// t = k*dt, with `substeps` quadrature intervals per scheme step.
inline std::vector<OracleSnapshot> oracle_trajectory(OracleKind kind, const ProblemParams& params, int J,
                                                     double beta, double dt, long n_steps, int substeps) {
    ModalOracle oracle(kind, params, J, beta);
    std::vector<OracleSnapshot> out;
    out.reserve(static_cast<std::size_t>(n_steps) + 1);
    out.push_back(oracle.snapshot());
    for (long k = 0; k < n_steps; ++k) {
        oracle.advance(dt, substeps);
        out.push_back(oracle.snapshot());
    }
    return out;
}

// Reference solution of the unsplit coupled problem as a plottable series.
inline TimeSeries monolithic_solve(const ProblemParams& params, int J, double t_end, double fine_dt,
                                   long record_every = 1) {
    if (fine_dt <= 0.0 || t_end <= 0.0) throw std::invalid_argument("monolithic_solve: bad time data");
    ModalOracle oracle(OracleKind::monolithic, params, J, 1.0);
    const long n = std::lround(t_end / fine_dt);
    TimeSeries ts;
    auto push = [&](const OracleSnapshot& s) {
        ts.rows.push_back({s.t, midpoint_value(s.eta), s.eta.max_abs(), midpoint_value(s.p),
                           midpoint_value(s.u)});
    };
    push(oracle.snapshot());
    for (long k = 0; k < n; ++k) {
        oracle.advance(fine_dt, 1);
        if ((k + 1) % record_every == 0 || k + 1 == n) push(oracle.snapshot());
    }
    return ts;
}

} // namespace fsilab

#endif
