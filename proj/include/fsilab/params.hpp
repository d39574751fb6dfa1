#ifndef FSILAB_PARAMS_HPP
#define FSILAB_PARAMS_HPP

// Physical and numerical parameters of the pressure-driven channel/elastic-wall
// test problem. Units are CGS throughout (cm, g, s, dyn).

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fsilab {

inline constexpr double kPi = std::numbers::pi;

namespace detail {

inline void require(bool ok, const std::string& name, double given, const std::string& allowed) {
    if (!ok) {
        throw std::invalid_argument("parameter '" + name + "' = " + std::to_string(given) +
                                    " violates constraint " + allowed);
    }
}

} // namespace detail

// Fixed rectangular channel (0,L) x (0,R): z along the axis, r across.
struct Geometry {
    double R = 0.5; // channel half-height [cm]
    double L = 6.0; // channel length [cm]

    void validate() const {
        detail::require(R > 0.0, "R", R, "R > 0");
        detail::require(L > 0.0, "L", L, "L > 0");
    }
};

struct FluidParams {
    double rho_f = 1.0; // fluid density [g/cm^3]

    void validate() const { detail::require(rho_f > 0.0, "rho_f", rho_f, "rho_f > 0"); }
};

// Generalized string wall: rho_s*h*eta_tt + C0*eta - C1*eta_zz
//                          + D0*eta_t - D1*eta_tzz = f.
struct WallParams {
    double rho_s = 1.1;  // structure density [g/cm^3]
    double h = 0.1;      // wall thickness [cm]
    double C0 = 4.0e5;   // elastic coefficient [dyn/cm^3]
    double C1 = 2.5e4;   // elastic coefficient [dyn/cm]
    double D0 = 0.0;     // viscoelastic coefficient [dyn s/cm^3]
    double D1 = 0.0;     // viscoelastic coefficient [dyn s/cm]

    void validate() const {
        detail::require(rho_s > 0.0, "rho_s", rho_s, "rho_s > 0");
        detail::require(h > 0.0, "h", h, "h > 0");
        detail::require(C0 > 0.0, "C0", C0, "C0 > 0");
        detail::require(C1 > 0.0, "C1", C1, "C1 > 0");
        detail::require(D0 >= 0.0, "D0", D0, "D0 >= 0");
        detail::require(D1 >= 0.0, "D1", D1, "D1 >= 0");
    }
};

// Inlet pressure pulse; the outlet is held at a constant pressure.
struct PulseParams {
    double p_max = 2.0e4;  // peak inlet pressure [dyn/cm^2]
    double t_max = 5.0e-3; // pulse duration [s]
    double p_out = 0.0;    // constant outlet pressure [dyn/cm^2]

    void validate() const {
        detail::require(std::isfinite(p_max), "p_max", p_max, "finite");
        detail::require(t_max > 0.0, "t_max", t_max, "t_max > 0");
        detail::require(std::isfinite(p_out), "p_out", p_out, "finite");
    }
};

struct Discretization {
    int J = 64;         // number of sine modes on the interface
    int Nz = 129;       // axial grid points (including endpoints)
    int Nr = 65;        // radial grid points (including endpoints)
    double dt = 1.0e-4; // time step [s]
    long n_steps = 120; // step count
    double beta = 1.0;  // pressure-splitting parameter
    double theta = 0.5; // three-level structure scheme parameter

    void validate() const {
        detail::require(J >= 1, "J", J, "J >= 1");
        detail::require(Nz >= 3, "Nz", Nz, "Nz >= 3");
        detail::require(Nr >= 3, "Nr", Nr, "Nr >= 3");
        detail::require(dt > 0.0, "dt", dt, "dt > 0");
        detail::require(n_steps >= 1, "n_steps", static_cast<double>(n_steps), "n_steps >= 1");
        detail::require(beta >= 0.0 && beta <= 1.0, "beta", beta, "0 <= beta <= 1");
        detail::require(theta >= 0.0 && theta <= 0.5, "theta", theta, "0 <= theta <= 1/2");
    }
};

struct ProblemParams {
    Geometry geom;
    FluidParams fluid;
    WallParams wall;
    PulseParams pulse;

    // mass ratio rho_s*h/rho_f [cm]; the Robin coefficient of the pressure problem
    double alpha() const { return wall.rho_s * wall.h / fluid.rho_f; }

    void validate() const {
        geom.validate();
        fluid.validate();
        wall.validate();
        pulse.validate();
    }
};

// Half-cosine inlet pulse: (p_max/2)(1 - cos(2*pi*t/t_max)) for t <= t_max, 0 after.
// Continuous (and C^1) at t = t_max.
inline double inlet_pressure(double t, const PulseParams& pulse) {
    if (t < 0.0) throw std::invalid_argument("inlet_pressure: t must be >= 0");
    if (t > pulse.t_max) return 0.0;
    return 0.5 * pulse.p_max * (1.0 - std::cos(2.0 * kPi * t / pulse.t_max));
}

inline double outlet_pressure(double /*t*/, const PulseParams& pulse) { return pulse.p_out; }

} // namespace fsilab

#endif
