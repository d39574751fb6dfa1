#ifndef FSILAB_STABILITY_HPP
#define FSILAB_STABILITY_HPP

// Quantitative stability and accuracy studies.
//
// Per mode, both schemes reduce to small linear one-step maps whose spectral
// radius decides growth:
//
//   beta-scheme, state (eta^{n+1}, eta^n, p^{n+1}): block triangular, so the
//   spectrum is the pressure eigenvalue beta*lambda_j together with the roots of
//     (m/dt^2 + d/2dt + theta ell) x^2 - (2m/dt^2 - (1-2 theta) ell) x
//       + (m/dt^2 - d/2dt + theta ell) = 0.
//   For d = 0 the root product is exactly 1: the scheme is marginally stable
//   (radius 1) iff dt^2 ell (1 - 4 theta) <= 4 m, hence unconditionally for
//   theta >= 1/4.
//
//   Dirichlet-Neumann, state (eta^n, eta^{n-1}, eta^{n-2}): companion cubic
//     x^3 - (2 - g - q) x^2 - (2g - 1) x + g = 0,
//   g = rho_f mu_j/(rho_s h), q = dt^2 ell_j/(rho_s h). The root product is -g,
//   so for g > 1 (the added-mass condition) some root exceeds 1 in modulus for
//   every dt: the instability is dt-independent.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fsilab/linalg.hpp"
#include "fsilab/oracle.hpp"
#include "fsilab/params.hpp"
#include "fsilab/schemes.hpp"
#include "fsilab/spectral.hpp"

namespace fsilab {

// radii up to 1 + this slack count as stable (unit-circle roots in floating point)
inline constexpr double kRadiusTol = 1e-12;

struct AmplificationResult {
    std::array<std::array<double, 3>, 3> matrix{};
    std::array<std::complex<double>, 3> eigenvalues{};
    double radius = 0.0;
};

// One-step map of the beta-scheme for a single mode, homogeneous data.
inline AmplificationResult beta_amplification(double m, double ell, double damp, double lambda,
                                              double dt, double beta, double theta) {
    if (m <= 0.0 || dt <= 0.0) throw std::invalid_argument("beta_amplification: need m, dt > 0");
    const double A = m / (dt * dt) + 0.5 * damp / dt + theta * ell;     // eta^{n+1}
    const double B = 2.0 * m / (dt * dt) - (1.0 - 2.0 * theta) * ell;   // eta^n
    const double C = -(m / (dt * dt) - 0.5 * damp / dt + theta * ell);  // eta^{n-1}
    const double g = beta * lambda;

    AmplificationResult r;
    r.matrix = {{{B / A, C / A, beta * g / A}, {1.0, 0.0, 0.0}, {0.0, 0.0, g}}};
    auto quad = quadratic_roots(-B / A, -C / A);
    r.eigenvalues = {quad[0], quad[1], std::complex<double>(g, 0.0)};
    r.radius = spectral_radius(r.eigenvalues);
    return r;
}

inline AmplificationResult beta_amplification(const ProblemParams& p, const OperatorSpectrum& spec,
                                              std::size_t mode, double dt, double beta, double theta) {
    if (mode < 1 || mode > spec.modes())
        throw std::invalid_argument("beta_amplification: mode out of range");
    return beta_amplification(p.wall.rho_s * p.wall.h, spec.ell[mode - 1], spec.damp[mode - 1],
                              spec.lambda[mode - 1], dt, beta, theta);
}

// One-step companion map of the Dirichlet-Neumann three-level recurrence.
inline AmplificationResult dn_amplification(double m, double mu, double ell, double rho_f, double dt) {
    if (m <= 0.0 || dt <= 0.0) throw std::invalid_argument("dn_amplification: need m, dt > 0");
    const double g = rho_f * mu / m;
    const double q = dt * dt * ell / m;

    AmplificationResult r;
    r.matrix = {{{2.0 - g - q, 2.0 * g - 1.0, -g}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}};
    // characteristic polynomial x^3 + a x^2 + b x + c of the companion matrix
    const double a = -(2.0 - g - q), b = -(2.0 * g - 1.0), c = g;
    r.eigenvalues = cubic_roots(a, b, c);
    r.radius = spectral_radius(r.eigenvalues);
    return r;
}

inline AmplificationResult dn_amplification(const ProblemParams& p, const OperatorSpectrum& spec,
                                            std::size_t mode, double dt) {
    if (mode < 1 || mode > spec.modes())
        throw std::invalid_argument("dn_amplification: mode out of range");
    return dn_amplification(p.wall.rho_s * p.wall.h, spec.mu[mode - 1], spec.ell[mode - 1],
                            p.fluid.rho_f, dt);
}

enum class SchemeKind { beta, dn, monolithic };

inline SchemeKind scheme_from_string(const std::string& s) {
    if (s == "beta") return SchemeKind::beta;
    if (s == "dn") return SchemeKind::dn;
    if (s == "monolithic") return SchemeKind::monolithic;
    throw std::invalid_argument("unknown scheme '" + s + "' (expected beta|dn|monolithic)");
}

struct StabilityReport {
    double varied_value = 0.0;       // value of the swept parameter (or dt)
    std::vector<double> radii;       // per-mode spectral radii
    std::size_t worst_mode = 1;      // 1-based index of the largest radius
    double worst_radius = 0.0;
    bool stable = true;              // all radii <= 1 + kRadiusTol
    double dn_ratio = 0.0;           // rho_s h/(rho_f mu_max)
};

inline StabilityReport stability_report(const ProblemParams& p, const Discretization& disc,
                                        SchemeKind scheme, double varied_value = 0.0) {
    OperatorSpectrum spec(p, disc.J);
    StabilityReport rep;
    rep.varied_value = varied_value;
    rep.dn_ratio = p.alpha() / spec.mu_max();
    rep.radii.resize(spec.modes());
    for (std::size_t j = 1; j <= spec.modes(); ++j) {
        const double radius = scheme == SchemeKind::dn
                                  ? dn_amplification(p, spec, j, disc.dt).radius
                                  : beta_amplification(p, spec, j, disc.dt, disc.beta, disc.theta).radius;
        rep.radii[j - 1] = radius;
        if (radius > rep.worst_radius) {
            rep.worst_radius = radius;
            rep.worst_mode = j;
        }
    }
    rep.stable = rep.worst_radius <= 1.0 + kRadiusTol;
    return rep;
}

// Stability map of the structure theta-scheme over a (theta, dt) grid for one
// mode. The theta >= 1/4 half is unconditionally stable; below it the boundary
// is dt^2 ell (1 - 4 theta) = 4 m.
struct ThetaRegionMap {
    std::vector<double> thetas;
    std::vector<double> dts;
    std::vector<double> radii;   // row-major: radii[it*dts.size() + id]
    std::vector<char> stable;    // same layout

    double radius(std::size_t it, std::size_t id) const { return radii[it * dts.size() + id]; }
    bool is_stable(std::size_t it, std::size_t id) const { return stable[it * dts.size() + id] != 0; }
};

inline ThetaRegionMap theta_region(const ProblemParams& p, const Discretization& disc, std::size_t mode,
                                   std::vector<double> thetas, std::vector<double> dts) {
    if (thetas.empty() || dts.empty()) throw std::invalid_argument("theta_region: empty grid");
    OperatorSpectrum spec(p, disc.J);
    ThetaRegionMap map;
    map.thetas = std::move(thetas);
    map.dts = std::move(dts);
    map.radii.resize(map.thetas.size() * map.dts.size());
    map.stable.resize(map.radii.size());
    for (std::size_t it = 0; it < map.thetas.size(); ++it) {
        for (std::size_t id = 0; id < map.dts.size(); ++id) {
            const double radius =
                beta_amplification(p, spec, mode, map.dts[id], disc.beta, map.thetas[it]).radius;
            map.radii[it * map.dts.size() + id] = radius;
            map.stable[it * map.dts.size() + id] = radius <= 1.0 + kRadiusTol ? 1 : 0;
        }
    }
    return map;
}

// Explicit-scheme stability limit at theta < 1/4: dt* = 2 sqrt(m/(ell (1-4 theta))).
inline double theta_dt_limit(double m, double ell, double theta) {
    if (theta >= 0.25) return std::numeric_limits<double>::infinity();
    return 2.0 * std::sqrt(m / (ell * (1.0 - 4.0 * theta)));
}

inline int sweep_thread_count(std::size_t n_points) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("FSI_LAB_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && cap < static_cast<long>(hw)) hw = static_cast<unsigned>(cap);
    }
    return static_cast<int>(std::min<std::size_t>(hw, std::max<std::size_t>(n_points, 1)));
}

// Parameter sweep: one stability report per grid point, evaluated in parallel
// (grid points are independent; FSI_LAB_THREADS caps the worker count).
inline std::vector<StabilityReport> sweep(const ProblemParams& base, const Discretization& disc,
                                          const std::string& vary, const std::vector<double>& values,
                                          SchemeKind scheme) {
    static const char* known[] = {"rho_s", "beta", "theta", "dt", "R", "L"};
    if (std::find(std::begin(known), std::end(known), vary) == std::end(known))
        throw std::invalid_argument("sweep: unknown parameter '" + vary + "'");
    std::vector<StabilityReport> out(values.size());
    if (values.empty()) return out;

    auto eval_point = [&](std::size_t i) {
        ProblemParams p = base;
        Discretization d = disc;
        const double v = values[i];
        if (vary == "rho_s") p.wall.rho_s = v;
        else if (vary == "beta") d.beta = v;
        else if (vary == "theta") d.theta = v;
        else if (vary == "dt") d.dt = v;
        else if (vary == "R") p.geom.R = v;
        else if (vary == "L") p.geom.L = v;
        p.validate();
        d.validate();
        out[i] = stability_report(p, d, scheme, v);
    };

    const int n_threads = sweep_thread_count(values.size());
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < values.size(); ++i) eval_point(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < values.size(); i = next.fetch_add(1))
                eval_point(i);
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

// One dt of a temporal-accuracy study. Errors are relative L2(Gamma) norms
// against the scheme's exact-in-time modal reference: eta/u/p sampled at
// t_eval, and additionally accumulated over all steps in [0, t_eval]
// (L2 in time), which stays well defined when the endpoint reference is zero.
struct ConvergenceRow {
    double dt = 0.0;
    double err_eta = 0.0, err_u = 0.0, err_p = 0.0;          // at t_eval
    double err_eta_l2t = 0.0, err_u_l2t = 0.0, err_p_l2t = 0.0; // over [0, t_eval]
    double ord_eta = std::numeric_limits<double>::quiet_NaN(); // between this row and the previous
    double ord_u = std::numeric_limits<double>::quiet_NaN();
    double ord_p = std::numeric_limits<double>::quiet_NaN();
    bool diverged = false;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
};

namespace detail {

inline double modal_norm(const ModalVector& v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

inline double modal_err(const ModalVector& a, const ModalVector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

// reference scale for relative endpoint errors: the endpoint norm unless the
// reference happens to (nearly) vanish there (post-pulse pressure), then the
// run RMS; 1 if the whole reference is zero
inline double ref_scale(double endpoint_norm, double r2_sum, long n_steps) {
    const double rms = std::sqrt(r2_sum / static_cast<double>(n_steps));
    if (endpoint_norm >= 1e-8 * rms && endpoint_norm > 0.0) return endpoint_norm;
    return rms > 0.0 ? rms : 1.0;
}

} // namespace detail

// Temporal-convergence study of a scheme against its exact modal reference at
// each dt in a strictly decreasing list. A diverged run yields an "n/a" order
// (NaN) in its row and the next one.
inline ConvergenceTable convergence_study(const ProblemParams& params, const Discretization& disc,
                                          const std::vector<double>& dts, double t_eval,
                                          SchemeKind scheme, double oracle_dt = 1e-6) {
    if (dts.empty()) throw std::invalid_argument("convergence_study: empty dt list");
    for (std::size_t i = 1; i < dts.size(); ++i)
        if (dts[i] >= dts[i - 1])
            throw std::invalid_argument("convergence_study: dt list must be strictly decreasing");

    const OracleKind okind = scheme == SchemeKind::beta ? OracleKind::beta_limit : OracleKind::monolithic;
    ConvergenceTable table;
    for (double dt : dts) {
        const long n_steps = std::lround(t_eval / dt);
        if (std::abs(n_steps * dt - t_eval) > 1e-9 * t_eval)
            throw std::invalid_argument("convergence_study: t_eval must be divisible by dt");
        const int substeps = std::max(1, static_cast<int>(std::lround(dt / oracle_dt)));
        auto ref = oracle_trajectory(okind, params, disc.J, disc.beta, dt, n_steps, substeps);

        ConvergenceRow row;
        row.dt = dt;
        Discretization d = disc;
        d.dt = dt;
        d.n_steps = n_steps;

        double e2_eta = 0, e2_u = 0, e2_p = 0, r2_eta = 0, r2_u = 0, r2_p = 0;
        bool diverged = false;
        SchemeState last(static_cast<std::size_t>(disc.J));
        if (scheme == SchemeKind::monolithic) {
            // self-comparison: re-run the reference at the row's dt as quadrature step
            ModalOracle coarse(okind, params, disc.J, disc.beta);
            for (long n = 0; n < n_steps; ++n) {
                coarse.advance(dt, 1);
                auto s = coarse.snapshot();
                const auto& r = ref[static_cast<std::size_t>(n + 1)];
                e2_eta += std::pow(detail::modal_err(s.eta, r.eta), 2);
                e2_u += std::pow(detail::modal_err(s.u, r.u), 2);
                e2_p += std::pow(detail::modal_err(s.p, r.p), 2);
                r2_eta += std::pow(detail::modal_norm(r.eta), 2);
                r2_u += std::pow(detail::modal_norm(r.u), 2);
                r2_p += std::pow(detail::modal_norm(r.p), 2);
                if (n + 1 == n_steps) {
                    row.err_eta = detail::modal_err(s.eta, r.eta) /
                                  detail::ref_scale(detail::modal_norm(r.eta), r2_eta, n_steps);
                    row.err_u = detail::modal_err(s.u, r.u) /
                                detail::ref_scale(detail::modal_norm(r.u), r2_u, n_steps);
                    row.err_p = detail::modal_err(s.p, r.p) /
                                detail::ref_scale(detail::modal_norm(r.p), r2_p, n_steps);
                }
            }
        } else {
            auto run_one = [&](const auto& stepper) {
                SchemeState state = stepper.initial_state();
                for (long n = 0; n < n_steps; ++n) {
                    state = stepper.step(state);
                    if (!state.finite_and_bounded()) {
                        diverged = true;
                        return;
                    }
                    const auto& r = ref[static_cast<std::size_t>(n + 1)];
                    e2_eta += std::pow(detail::modal_err(state.eta, r.eta), 2);
                    e2_u += std::pow(detail::modal_err(state.u_gamma, r.u), 2);
                    e2_p += std::pow(detail::modal_err(state.p_gamma, r.p), 2);
                    r2_eta += std::pow(detail::modal_norm(r.eta), 2);
                    r2_u += std::pow(detail::modal_norm(r.u), 2);
                    r2_p += std::pow(detail::modal_norm(r.p), 2);
                }
                last = state;
            };
            if (scheme == SchemeKind::beta)
                run_one(BetaScheme(params, d));
            else
                run_one(DnScheme(params, d));
            if (!diverged) {
                const auto& r = ref.back();
                row.err_eta = detail::modal_err(last.eta, r.eta) /
                              detail::ref_scale(detail::modal_norm(r.eta), r2_eta, n_steps);
                row.err_u = detail::modal_err(last.u_gamma, r.u) /
                            detail::ref_scale(detail::modal_norm(r.u), r2_u, n_steps);
                row.err_p = detail::modal_err(last.p_gamma, r.p) /
                            detail::ref_scale(detail::modal_norm(r.p), r2_p, n_steps);
            }
        }
        if (!diverged) {
            auto rel = [](double e2, double r2) { return r2 > 0.0 ? std::sqrt(e2 / r2) : std::sqrt(e2); };
            row.err_eta_l2t = rel(e2_eta, r2_eta);
            row.err_u_l2t = rel(e2_u, r2_u);
            row.err_p_l2t = rel(e2_p, r2_p);
            // an exploded comparison is divergence even if the overflow guard never fired
            if (row.err_eta_l2t > 1e6 || row.err_u_l2t > 1e6 || row.err_p_l2t > 1e6) diverged = true;
        }
        row.diverged = diverged;
        table.rows.push_back(row);
    }

    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        auto& cur = table.rows[i];
        const auto& prev = table.rows[i - 1];
        if (cur.diverged || prev.diverged) continue;
        const double f = std::log(prev.dt / cur.dt);
        cur.ord_eta = std::log(prev.err_eta / cur.err_eta) / f;
        cur.ord_u = std::log(prev.err_u / cur.err_u) / f;
        cur.ord_p = std::log(prev.err_p / cur.err_p) / f;
    }
    return table;
}

} // namespace fsilab

#endif
