#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fsilab/pressure.hpp"
#include "fsilab/spectral.hpp"

using namespace fsilab;

namespace {
ProblemParams benchmark_params() {
    return ProblemParams{}; // defaults encode the benchmark tables
}
} // namespace

TEST_CASE("added-mass eigenvalues") {
    Geometry geom{0.5, 6.0};
    auto mu = added_mass_eigenvalues(geom, 8);

    CHECK(mu[0] == doctest::Approx(7.46).epsilon(0.01 / 7.46));

    SUBCASE("closed form at j = 2") {
        const double expect = geom.L / (2.0 * kPi * std::tanh(2.0 * kPi * geom.R / geom.L));
        CHECK(mu[1] == doctest::Approx(expect).epsilon(1e-14));
    }

    SUBCASE("wide-channel asymptote mu_1 -> L/pi") {
        Geometry wide{600.0, 6.0}; // R = 100 L
        auto mw = added_mass_eigenvalues(wide, 1);
        CHECK(mw[0] == doctest::Approx(geom.L / kPi).epsilon(1e-3));
    }

    SUBCASE("strictly decreasing") {
        auto many = added_mass_eigenvalues(geom, 64);
        for (std::size_t j = 1; j < many.size(); ++j) CHECK(many[j] < many[j - 1]);
    }

    SUBCASE("slender channels carry more added mass") {
        Geometry slender{6.0 / 24.0, 6.0}, stubby{6.0 / 12.0, 6.0};
        CHECK(added_mass_eigenvalues(slender, 1)[0] > added_mass_eigenvalues(stubby, 1)[0]);
    }

    SUBCASE("discrete Neumann-to-Dirichlet cross-check") {
        ProblemParams p = benchmark_params();
        const int J = 4;
        auto data = RobinProblemData::modal(ModalVector::basis(J, 2));
        auto fd = solve_robin_fd(data, p, 129, 65, 1e-10, TopBoundary::neumann);
        auto col = trace_to_modal(fd.trace, p.geom, J);
        CHECK(col[1] == doctest::Approx(mu[1]).epsilon(0.01));
    }
}

TEST_CASE("Robin-trace eigenvalues") {
    Geometry geom{0.5, 6.0};
    FluidParams fluid{1.0};

    SUBCASE("massless wall gives lambda_j = 1") {
        WallParams wall;
        wall.rho_s = 0.0; // alpha = 0 (allowed here; configured walls require > 0)
        auto lam = robin_trace_eigenvalues(geom, fluid, wall, 5);
        for (double l : lam) CHECK(l == doctest::Approx(1.0).epsilon(1e-15));
    }

    SUBCASE("benchmark value and the eigenvalue identity") {
        WallParams wall; // rho_s = 1.1, h = 0.1
        auto mu = added_mass_eigenvalues(geom, 16);
        auto lam = robin_trace_eigenvalues(geom, fluid, wall, 16);
        CHECK(lam[0] == doctest::Approx(0.9855).epsilon(5e-5));
        const double alpha = wall.rho_s * wall.h / fluid.rho_f;
        for (std::size_t j = 0; j < 16; ++j) {
            CHECK(lam[j] * (mu[j] + alpha) == doctest::Approx(mu[j]).epsilon(1e-15));
            CHECK(lam[j] > 0.0);
            CHECK(lam[j] < 1.0);
            if (j > 0) CHECK(lam[j] < lam[j - 1]);
        }
    }

    SUBCASE("heavy wall limit lambda -> 0") {
        WallParams wall;
        wall.rho_s = 1e9;
        auto lam = robin_trace_eigenvalues(geom, fluid, wall, 3);
        for (double l : lam) CHECK(l < 1e-6);
    }

    SUBCASE("beta*lambda stays inside the unit disc for beta in [0,1]") {
        std::mt19937 rng(42);
        std::uniform_real_distribution<double> rdist(0.05, 2.0), ldist(1.0, 20.0), wdist(0.01, 50.0);
        for (int trial = 0; trial < 50; ++trial) {
            Geometry g{rdist(rng), ldist(rng)};
            WallParams w;
            w.rho_s = wdist(rng);
            auto lam = robin_trace_eigenvalues(g, fluid, w, 8);
            for (double beta : {0.0, 0.25, 0.5, 0.75, 1.0})
                for (double l : lam) CHECK(beta * l < 1.0);
        }
    }
}

TEST_CASE("structure stiffness eigenvalues") {
    Geometry geom{0.5, 6.0};
    WallParams wall; // C0 = 4e5, C1 = 2.5e4

    auto ell = structure_stiffness_eigenvalues(wall, geom, 8);
    CHECK(ell[0] == doctest::Approx(4e5 + 2.5e4 * std::pow(kPi / 6.0, 2)).epsilon(1e-14));
    CHECK(ell[1] - ell[0] == doctest::Approx(3.0 * wall.C1 * std::pow(kPi / geom.L, 2)).epsilon(1e-12));
    for (std::size_t j = 1; j < ell.size(); ++j) CHECK(ell[j] > ell[j - 1]);

    WallParams spring = wall;
    spring.C1 = 0.0;
    auto flat = structure_stiffness_eigenvalues(spring, geom, 4);
    for (double e : flat) CHECK(e == doctest::Approx(wall.C0).epsilon(1e-15));
}

TEST_CASE("Dirichlet-Neumann instability criterion") {
    Geometry geom{0.5, 6.0};
    FluidParams fluid{1.0};
    WallParams wall;

    auto crit = dn_instability_criterion(geom, fluid, wall);
    CHECK(crit.critical_rho_s == doctest::Approx(74.6).epsilon(0.1 / 74.6));
    CHECK(crit.ratio == doctest::Approx(0.0147).epsilon(5e-3));
    CHECK(crit.verdict == DnVerdict::unstable);

    SUBCASE("boundary case is reported as such") {
        WallParams boundary;
        boundary.h = 0.25; // exactly representable so rho_s*h == mu_1 holds exactly
        boundary.rho_s = 4.0 * crit.mu_max;
        auto c2 = dn_instability_criterion(geom, fluid, boundary);
        CHECK(c2.ratio == 1.0);
        CHECK(c2.verdict == DnVerdict::stable_boundary);
    }

    SUBCASE("heavy wall is stable") {
        WallParams heavy;
        heavy.rho_s = 200.0;
        CHECK(dn_instability_criterion(geom, fluid, heavy).verdict == DnVerdict::stable);
    }
}

TEST_CASE("modal operator application") {
    ProblemParams p = benchmark_params();
    OperatorSpectrum spec(p, 12);

    auto e1 = ModalVector::basis(12, 1);
    auto Se1 = apply_S_modal(e1, spec);
    auto Me1 = apply_MA_modal(e1, spec);
    CHECK(Se1[0] == doctest::Approx(spec.lambda[0]).epsilon(1e-15));
    CHECK(Me1[0] == doctest::Approx(spec.mu[0]).epsilon(1e-15));
    for (std::size_t j = 1; j < 12; ++j) {
        CHECK(Se1[j] == 0.0);
        CHECK(Me1[j] == 0.0);
    }

    ModalVector zero(12);
    CHECK(apply_S_modal(zero, spec).max_abs() == 0.0);
    CHECK(apply_MA_modal(zero, spec).max_abs() == 0.0);

    SUBCASE("operator norm bound and the S/M_A scaling identity") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        ModalVector m(12);
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = dist(rng);
        auto Sm = apply_S_modal(m, spec);
        CHECK(modal_l2_norm(Sm, p.geom) <= spec.lambda[0] * modal_l2_norm(m, p.geom) + 1e-14);

        auto Mm = apply_MA_modal(m, spec);
        for (std::size_t j = 0; j < m.size(); ++j)
            CHECK(Sm[j] == doctest::Approx(Mm[j] / (spec.mu[j] + spec.alpha)).epsilon(1e-14));
    }
}
