#ifndef FSILAB_SCHEMES_HPP
#define FSILAB_SCHEMES_HPP

// Partitioned time integrators for the modal interface system.
//
// Kinematically coupled beta-scheme (per mode j, all modes decoupled):
//   fluid sub-step:   p^{n+1} = p_ext(t^{n+1}) + beta*lambda_j*p^n
//                     (the Robin pressure solve applied to the explicit datum
//                     beta*p^n; the Gamma velocity gains dt*(p^{n+1}-beta*p^n)/(rho_s h))
//   structure sub-step (three-level theta scheme, load beta*p^{n+1}):
//     rho_s h (eta^{n+1}-2 eta^n+eta^{n-1})/dt^2
//       + d_j (eta^{n+1}-eta^{n-1})/(2 dt)
//       + ell_j (theta eta^{n+1} + (1-2 theta) eta^n + theta eta^{n-1}) = beta p^{n+1}
//   then u^{n+1} = (eta^{n+1}-eta^n)/dt (kinematic condition).
//
// Classical Dirichlet-Neumann scheme: the added mass rides on lagged
// structure accelerations,
//   rho_s h (eta^{n+1}-2 eta^n+eta^{n-1})/dt^2
//     + rho_f mu_j (eta^n-2 eta^{n-1}+eta^{n-2})/dt^2 + ell_j eta^n = lift_j(t^n).

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fsilab/modal.hpp"
#include "fsilab/params.hpp"
#include "fsilab/pressure.hpp"
#include "fsilab/spectral.hpp"

namespace fsilab {

// Modal amplitude beyond which a run is declared diverged (instead of letting
// overflow propagate NaNs).
inline constexpr double kDivergenceGuard = 1e300;

struct SchemeState {
    ModalVector eta;       // displacement trace [cm]
    ModalVector eta_prev;  // previous step (three-level schemes)
    ModalVector eta_prev2; // two steps back (Dirichlet-Neumann only)
    ModalVector u_gamma;   // structure velocity trace [cm/s]
    ModalVector u_fluid;   // Gamma velocity after the fluid sub-step (diagnostic)
    ModalVector p_gamma;   // pressure trace [dyn/cm^2]
    long step = 0;
    double t = 0.0;

    explicit SchemeState(std::size_t J)
        : eta(J), eta_prev(J), eta_prev2(J), u_gamma(J), u_fluid(J), p_gamma(J) {}

    bool finite_and_bounded() const {
        return eta.all_finite() && p_gamma.all_finite() && eta.max_abs() < kDivergenceGuard &&
               p_gamma.max_abs() < kDivergenceGuard;
    }
};

// Backward-Taylor ghost level for the three-level structure scheme:
//   eta^{-1}_j = eta0_j - dt u0_j + dt^2/2 * (beta p0_j - ell_j eta0_j - d_j u0_j)/(rho_s h),
// second-order consistent with the structure equation at t = 0.
inline ModalVector theta_startup(const ModalVector& eta0, const ModalVector& u0, const ModalVector& p0,
                                 const OperatorSpectrum& spec, const WallParams& wall, double dt,
                                 double beta) {
    const double m = wall.rho_s * wall.h;
    ModalVector em1(eta0.size());
    for (std::size_t i = 0; i < eta0.size(); ++i) {
        const double acc = (beta * p0[i] - spec.ell[i] * eta0[i] - spec.damp[i] * u0[i]) / m;
        em1[i] = eta0[i] - dt * u0[i] + 0.5 * dt * dt * acc;
    }
    return em1;
}

// Inlet/outlet pressure signals driving a run; defaults to the half-cosine pulse.
struct PressureData {
    std::function<double(double)> p_in;
    std::function<double(double)> p_out;
};

class BetaScheme {
public:
    BetaScheme(const ProblemParams& params, const Discretization& disc, PressureData data = {})
        : params_(params), disc_(disc), spec_(params, disc.J), data_(std::move(data)) {
        params_.validate();
        disc_.validate();
        if (!data_.p_in) data_.p_in = [p = params_.pulse](double t) { return inlet_pressure(t, p); };
        if (!data_.p_out) data_.p_out = [p = params_.pulse](double t) { return outlet_pressure(t, p); };
    }

    const OperatorSpectrum& spectrum() const { return spec_; }
    double dt() const { return disc_.dt; }

    // p_ext(t), modally: the inlet/outlet contribution to the Robin solve.
    ModalVector p_ext(double t) const {
        return compute_p_ext(data_.p_in(t), data_.p_out(t), spec_);
    }

    SchemeState initial_state() const {
        SchemeState s(static_cast<std::size_t>(disc_.J));
        s.eta_prev = theta_startup(s.eta, s.u_gamma, s.p_gamma, spec_, params_.wall, disc_.dt, disc_.beta);
        return s;
    }

    SchemeState step(const SchemeState& state) const {
        const double dt = disc_.dt, beta = disc_.beta, theta = disc_.theta;
        const double m = params_.wall.rho_s * params_.wall.h;
        const double tn1 = state.t + dt;
        const ModalVector pe = p_ext(tn1);

        SchemeState next(state.eta.size());
        for (std::size_t i = 0; i < state.eta.size(); ++i) {
            const double lam = spec_.lambda[i], ell = spec_.ell[i], d = spec_.damp[i];
            const double p_new = pe[i] + beta * lam * state.p_gamma[i];
            next.u_fluid[i] = state.u_gamma[i] + dt / m * (p_new - beta * state.p_gamma[i]);

            const double lhs = m / (dt * dt) + 0.5 * d / dt + theta * ell;
            const double rhs = beta * p_new + m * (2.0 * state.eta[i] - state.eta_prev[i]) / (dt * dt) +
                               0.5 * d * state.eta_prev[i] / dt -
                               ell * ((1.0 - 2.0 * theta) * state.eta[i] + theta * state.eta_prev[i]);
            const double eta_new = rhs / lhs;

            next.eta[i] = eta_new;
            next.eta_prev[i] = state.eta[i];
            next.u_gamma[i] = (eta_new - state.eta[i]) / dt;
            next.p_gamma[i] = p_new;
        }
        next.step = state.step + 1;
        next.t = tn1;
        return next;
    }

private:
    ProblemParams params_;
    Discretization disc_;
    OperatorSpectrum spec_;
    PressureData data_;
};

class DnScheme {
public:
    DnScheme(const ProblemParams& params, const Discretization& disc)
        : params_(params), disc_(disc), spec_(params, disc.J) {
        params_.validate();
        disc_.validate();
    }

    const OperatorSpectrum& spectrum() const { return spec_; }
    double dt() const { return disc_.dt; }

    // External pressure trace of the Neumann decomposition: the linear lift.
    ModalVector p_ext(double t) const {
        return compute_p_ext_neumann(inlet_pressure(t, params_.pulse),
                                     outlet_pressure(t, params_.pulse), disc_.J);
    }

    SchemeState initial_state() const { return SchemeState(static_cast<std::size_t>(disc_.J)); }

    SchemeState step(const SchemeState& state) const {
        const double dt = disc_.dt;
        const double m = params_.wall.rho_s * params_.wall.h;
        const double rho_f = params_.fluid.rho_f;
        const ModalVector pe = p_ext(state.t);

        SchemeState next(state.eta.size());
        for (std::size_t i = 0; i < state.eta.size(); ++i) {
            const double added = rho_f * spec_.mu[i] *
                                 (state.eta[i] - 2.0 * state.eta_prev[i] + state.eta_prev2[i]) / (dt * dt);
            const double eta_new = 2.0 * state.eta[i] - state.eta_prev[i] +
                                   dt * dt / m * (pe[i] - spec_.ell[i] * state.eta[i] - added);
            next.eta[i] = eta_new;
            next.eta_prev[i] = state.eta[i];
            next.eta_prev2[i] = state.eta_prev[i];
            next.u_gamma[i] = (eta_new - state.eta[i]) / dt;
            next.u_fluid[i] = next.u_gamma[i];
            next.p_gamma[i] = pe[i] - added; // fluid stress loading the wall
        }
        next.step = state.step + 1;
        next.t = state.t + dt;
        return next;
    }

private:
    ProblemParams params_;
    Discretization disc_;
    OperatorSpectrum spec_;
};

// Unrolled form of the pressure recursion after n steps:
//   beta*p^{n+1} = beta*pe^{n+1} + sum_{i=1..n} beta^{i+1} lambda^i pe^{n+1-i}
//                  + beta^{n+2} lambda^{n+1} p0,
// where pext_history[k] = pe(t^{k+1}), k = 0..n. Equals the recursion value to
// round-off; the geometric tail converges because |beta*lambda| < 1.
inline double pressure_series(long n, double beta, double lambda, std::span<const double> pext_history,
                              double p0) {
    if (static_cast<long>(pext_history.size()) != n + 1)
        throw std::invalid_argument("pressure_series: need p_ext at steps 1..n+1");
    double acc = beta * pext_history[static_cast<std::size_t>(n)];
    double fac = beta;
    for (long i = 1; i <= n; ++i) {
        fac *= beta * lambda;
        acc += fac * pext_history[static_cast<std::size_t>(n - i)];
    }
    fac *= beta * lambda;
    acc += fac * p0;
    return acc;
}

struct TimeSeriesRow {
    double t;
    double eta_mid;     // eta at z = L/2 [cm]
    double eta_maxmode; // max_j |eta_j| [cm]
    double p_mid;       // pressure trace at z = L/2 [dyn/cm^2]
    double u_mid;       // velocity trace at z = L/2 [cm/s]
};

struct TimeSeries {
    std::vector<TimeSeriesRow> rows;
    bool diverged = false;
    long diverged_step = -1;

    double max_eta(double t_from = 0.0, double t_to = 1e300) const {
        double m = 0.0;
        for (const auto& r : rows)
            if (r.t >= t_from && r.t <= t_to) m = std::max(m, r.eta_maxmode);
        return m;
    }
};

// sum of c_j sin(j pi/2): trace value at the channel midpoint
inline double midpoint_value(const ModalVector& m) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= m.size(); j += 2) acc += m[j - 1] * ((j - 1) % 4 == 0 ? 1.0 : -1.0);
    return acc;
}

inline TimeSeriesRow make_row(const SchemeState& s) {
    return {s.t, midpoint_value(s.eta), s.eta.max_abs(), midpoint_value(s.p_gamma),
            midpoint_value(s.u_gamma)};
}

template <class Scheme>
TimeSeries run_simulation(const Scheme& scheme, long n_steps) {
    TimeSeries ts;
    ts.rows.reserve(static_cast<std::size_t>(n_steps) + 1);
    SchemeState state = scheme.initial_state();
    ts.rows.push_back(make_row(state));
    for (long n = 0; n < n_steps; ++n) {
        state = scheme.step(state);
        if (!state.finite_and_bounded()) {
            ts.diverged = true;
            ts.diverged_step = state.step;
            break;
        }
        ts.rows.push_back(make_row(state));
    }
    return ts;
}

} // namespace fsilab

#endif
