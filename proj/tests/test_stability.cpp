#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fsilab/stability.hpp"

using namespace fsilab;

namespace {

ProblemParams bench() { return ProblemParams{}; }

// residual of the characteristic polynomial det(A - x I) for a 3x3 matrix
double char_residual(const std::array<std::array<double, 3>, 3>& a, std::complex<double> x) {
    std::array<std::array<std::complex<double>, 3>, 3> m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = a[i][j] - (i == j ? x : 0.0);
    const auto det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    return std::abs(det);
}

} // namespace

TEST_CASE("beta amplification") {
    ProblemParams p = bench();
    OperatorSpectrum spec(p, 8);

    SUBCASE("benchmark point is marginally stable") {
        auto r = beta_amplification(p, spec, 1, 1e-4, 1.0, 0.5);
        CHECK(r.radius <= 1.0 + kRadiusTol);
        CHECK(r.radius > 0.99);
        for (const auto& ev : r.eigenvalues)
            CHECK(char_residual(r.matrix, ev) < 1e-10 * (1.0 + std::abs(ev)));
    }

    SUBCASE("beta = 0 decouples the pressure block with eigenvalue zero") {
        auto r = beta_amplification(p, spec, 1, 1e-4, 0.0, 0.5);
        bool has_zero = false;
        for (const auto& ev : r.eigenvalues) has_zero |= std::abs(ev) == 0.0;
        CHECK(has_zero);
        CHECK(r.radius <= 1.0 + kRadiusTol);
    }

    SUBCASE("theta = 1/4 is unconditionally stable") {
        for (double dt : {1e-3, 1e-4, 1e-5})
            CHECK(beta_amplification(p, spec, 1, dt, 1.0, 0.25).radius <= 1.0 + kRadiusTol);
    }

    SUBCASE("explicit scheme flips across the derived dt limit") {
        const double m = p.wall.rho_s * p.wall.h;
        const double dt_star = theta_dt_limit(m, spec.ell[0], 0.0);
        CHECK(dt_star == doctest::Approx(2.0 * std::sqrt(m / spec.ell[0])).epsilon(1e-14));
        CHECK(beta_amplification(p, spec, 1, 0.999 * dt_star, 1.0, 0.0).radius <= 1.0 + kRadiusTol);
        CHECK(beta_amplification(p, spec, 1, 1.001 * dt_star, 1.0, 0.0).radius > 1.0 + kRadiusTol);
    }

    SUBCASE("wall damping pulls the radius strictly inside the unit circle") {
        ProblemParams pd = bench();
        pd.wall.D0 = 50.0;
        OperatorSpectrum specd(pd, 8);
        auto r = beta_amplification(pd, specd, 1, 1e-4, 1.0, 0.5);
        CHECK(r.radius < 1.0 - 1e-6);
    }
}

TEST_CASE("Dirichlet-Neumann amplification") {
    ProblemParams p = bench();
    OperatorSpectrum spec(p, 8);

    SUBCASE("light wall: radius above one, dt-independent") {
        for (double dt : {1e-3, 1e-4, 1e-5}) {
            auto r = dn_amplification(p, spec, 1, dt);
            CHECK(r.radius > 1.0);
            // the root product is -rho_f mu_1/(rho_s h), so the radius is at least its cube root
            const double g = p.fluid.rho_f * spec.mu[0] / (p.wall.rho_s * p.wall.h);
            CHECK(r.radius >= std::cbrt(g) * (1.0 - 1e-12));
            for (const auto& ev : r.eigenvalues)
                CHECK(char_residual(r.matrix, ev) < 1e-8 * (1.0 + std::pow(std::abs(ev), 3)));
        }
    }

    SUBCASE("heavy wall: stable at small dt") {
        ProblemParams heavy = bench();
        heavy.wall.rho_s = 200.0;
        OperatorSpectrum spech(heavy, 8);
        for (double dt : {1e-4, 1e-5}) {
            auto r = dn_amplification(heavy, spech, 1, dt);
            CHECK(r.radius <= 1.0 + kRadiusTol);
        }
    }

    SUBCASE("free drift: double root on the unit circle") {
        auto r = dn_amplification(0.11, 0.0, 0.0, 1.0, 1e-4);
        CHECK(r.radius == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("instability is unconditional whenever the mass ratio is below one") {
        for (double rho_s : {0.3, 0.55, 1.1, 10.0, 70.0}) {
            ProblemParams q = bench();
            q.wall.rho_s = rho_s;
            OperatorSpectrum sq(q, 4);
            const double ratio = q.alpha() / sq.mu_max();
            REQUIRE(ratio < 1.0);
            for (double dt : {1e-3, 1e-4, 1e-5})
                CHECK(dn_amplification(q, sq, 1, dt).radius > 1.0);
        }
    }
}

TEST_CASE("spectral radius matches the observed growth rate") {
    ProblemParams p = bench();
    p.wall.rho_s = 70.0; // just below critical: radius a little above 1
    p.pulse.p_max = 0.0; // homogeneous run
    Discretization d;
    d.J = 1;
    d.dt = 1e-4;
    OperatorSpectrum spec(p, 1);
    const double radius = dn_amplification(p, spec, 1, d.dt).radius;
    REQUIRE(radius > 1.01);

    DnScheme scheme(p, d);
    SchemeState s = scheme.initial_state();
    s.eta[0] = 1e-8;
    s.eta_prev[0] = 1e-8;
    s.eta_prev2[0] = 1e-8;

    std::vector<double> lognorm;
    for (int n = 0; n < 2000; ++n) {
        s = scheme.step(s);
        const double norm = std::sqrt(s.eta[0] * s.eta[0] + s.eta_prev[0] * s.eta_prev[0] +
                                      s.eta_prev2[0] * s.eta_prev2[0]);
        lognorm.push_back(std::log(norm));
    }
    // least-squares slope over the tail
    const int a = 1000, b = 2000;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int n = a; n < b; ++n) {
        sx += n;
        sy += lognorm[static_cast<std::size_t>(n)];
        sxx += static_cast<double>(n) * n;
        sxy += n * lognorm[static_cast<std::size_t>(n)];
    }
    const int cnt = b - a;
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    CHECK(slope == doctest::Approx(std::log(radius)).epsilon(0.05));
}

TEST_CASE("theta region map") {
    ProblemParams p = bench();
    Discretization d;
    d.J = 4;
    OperatorSpectrum spec(p, 4);
    const double m = p.wall.rho_s * p.wall.h;
    const double dt_star = theta_dt_limit(m, spec.ell[0], 0.0);

    std::vector<double> thetas{0.0, 0.1, 0.25, 0.35, 0.5};
    std::vector<double> dts;
    for (int k = -6; k <= 6; ++k) dts.push_back(dt_star * std::pow(1.25, k));
    auto map = theta_region(p, d, 1, thetas, dts);

    SUBCASE("theta >= 1/4 rows are fully stable; theta = 1/2 in particular") {
        for (std::size_t it = 0; it < thetas.size(); ++it)
            if (thetas[it] >= 0.25)
                for (std::size_t id = 0; id < dts.size(); ++id) CHECK(map.is_stable(it, id));
    }

    SUBCASE("theta = 0 row flips within one grid cell of the derived limit") {
        std::size_t last_stable = 0, first_unstable = dts.size();
        for (std::size_t id = 0; id < dts.size(); ++id) {
            if (map.is_stable(0, id)) last_stable = id;
            else if (first_unstable == dts.size()) first_unstable = id;
        }
        REQUIRE(first_unstable < dts.size());
        CHECK(first_unstable == last_stable + 1);
        CHECK(dts[last_stable] <= dt_star * (1.0 + 1e-12));
        CHECK(dts[first_unstable] >= dt_star * (1.0 - 1e-12));
    }

    SUBCASE("huge explicit step is unstable") {
        auto wild = theta_region(p, d, 1, {0.0}, {1.0});
        CHECK(!wild.is_stable(0, 0));
    }

    CHECK_THROWS_AS(theta_region(p, d, 1, {}, {1e-4}), std::invalid_argument);
}

TEST_CASE("parameter sweeps") {
    ProblemParams p = bench();
    Discretization d;
    d.J = 16;
    d.dt = 1e-4;

    SUBCASE("dn verdict transition brackets the critical density") {
        std::vector<double> rho;
        for (int i = 0; i <= 60; ++i) rho.push_back(0.5 + (150.0 - 0.5) * i / 60.0);
        auto reports = sweep(p, d, "rho_s", rho, SchemeKind::dn);
        REQUIRE(reports.size() == rho.size());
        double last_unstable = 0.0, first_stable = 1e9;
        for (const auto& r : reports) {
            if (!r.stable) last_unstable = std::max(last_unstable, r.varied_value);
            else first_stable = std::min(first_stable, r.varied_value);
        }
        CHECK(last_unstable < 74.6 + 2.6);  // one grid cell is ~2.5 wide
        CHECK(first_stable > 74.6 - 2.6);
        CHECK(last_unstable < first_stable);
    }

    SUBCASE("beta sweep at the lightest wall is fully stable") {
        ProblemParams light = bench();
        light.wall.rho_s = 0.55;
        std::vector<double> betas;
        for (int i = 0; i <= 20; ++i) betas.push_back(i / 20.0);
        for (const auto& r : sweep(light, d, "beta", betas, SchemeKind::beta)) {
            CHECK(r.stable);
            CHECK(r.worst_radius <= 1.0 + kRadiusTol);
        }
    }

    SUBCASE("empty range and unknown names") {
        CHECK(sweep(p, d, "rho_s", {}, SchemeKind::dn).empty());
        CHECK_THROWS_AS(sweep(p, d, "viscosity", {1.0}, SchemeKind::dn), std::invalid_argument);
    }

    SUBCASE("thread cap from the environment is honored") {
        setenv("FSI_LAB_THREADS", "1", 1);
        CHECK(sweep_thread_count(100) == 1);
        unsetenv("FSI_LAB_THREADS");
    }
}

TEST_CASE("convergence study") {
    ProblemParams p = bench();
    Discretization d;
    d.J = 8;
    d.beta = 1.0;
    d.theta = 0.5;

    SUBCASE("beta scheme is first order against its exact limit (asymptotic range)") {
        auto table = convergence_study(p, d, {4e-6, 2e-6, 1e-6, 5e-7}, 0.01, SchemeKind::beta);
        REQUIRE(table.rows.size() == 4);
        for (std::size_t i = 1; i < table.rows.size(); ++i) {
            const auto& prev = table.rows[i - 1];
            const auto& cur = table.rows[i];
            const double f = std::log(prev.dt / cur.dt);
            CHECK(std::log(prev.err_eta_l2t / cur.err_eta_l2t) / f == doctest::Approx(1.0).epsilon(0.2));
            CHECK(std::log(prev.err_u_l2t / cur.err_u_l2t) / f == doctest::Approx(1.0).epsilon(0.2));
            CHECK(std::log(prev.err_p_l2t / cur.err_p_l2t) / f == doctest::Approx(1.0).epsilon(0.2));
        }
    }

    SUBCASE("diverged dn rows carry n/a orders") {
        auto table = convergence_study(p, d, {1e-4, 5e-5}, 0.01, SchemeKind::dn);
        for (const auto& row : table.rows) {
            CHECK(row.diverged);
            CHECK(std::isnan(row.ord_eta));
        }
    }

    SUBCASE("stable dn converges to the added-mass reference") {
        ProblemParams heavy = bench();
        heavy.wall.rho_s = 200.0;
        auto table = convergence_study(heavy, d, {2e-5, 1e-5, 5e-6}, 0.01, SchemeKind::dn);
        for (const auto& row : table.rows) REQUIRE(!row.diverged);
        for (std::size_t i = 1; i < table.rows.size(); ++i)
            CHECK(table.rows[i].ord_eta == doctest::Approx(1.0).epsilon(0.4));
    }

    SUBCASE("monolithic self-comparison sits at quadrature precision") {
        auto table = convergence_study(p, d, {1e-4, 5e-5}, 0.01, SchemeKind::monolithic);
        for (const auto& row : table.rows) {
            CHECK(row.err_eta < 1e-5);
            CHECK(row.err_u < 1e-5);
        }
    }

    SUBCASE("input validation") {
        CHECK_THROWS_AS(convergence_study(p, d, {}, 0.01, SchemeKind::beta), std::invalid_argument);
        CHECK_THROWS_AS(convergence_study(p, d, {1e-4, 2e-4}, 0.01, SchemeKind::beta),
                        std::invalid_argument);
        CHECK_THROWS_AS(convergence_study(p, d, {3.3e-5}, 0.01, SchemeKind::beta),
                        std::invalid_argument);
    }
}
