#include <doctest.h>

#include "mlab/errors.hpp"
#include "mlab/torus.hpp"
#include "mlab/weierstrass.hpp"

using namespace mlab;

TEST_CASE("sigma function of the square lattice") {
    SquareSigma<double> s;
    cplx z(0.31, -0.17);
    CHECK(std::abs(s(-z) + s(z)) < 1e-14);
    cplx h(1e-6, 0.0);
    CHECK(std::abs(s(h) / h - 1.0) < 1e-10);
    // sigma(z + l) = -exp(eta(l) (z + l/2)) sigma(z)
    CHECK(std::abs(s(z + 1.0) + std::exp(s.eta_one() * (z + 0.5)) * s(z)) < 1e-12);
    CHECK(std::abs(s(z + kI) + std::exp(s.eta_i() * (z + 0.5 * kI)) * s(z)) < 1e-12);
}

TEST_CASE("t = 0 family point") {
    auto m = torus_monodromy(family_t(0.0, 1.0 / 6.0));
    CHECK(std::abs(m.comm_trace - 2.0 * std::cos(2.0 * kPi / 6.0)) < 1e-6);
    CHECK(std::abs(m.x) < 1e-5);
    CHECK(std::abs(m.z1 * m.z1 - 3.0) < 1e-5);
    CHECK(std::abs(m.X.det() - 1.0) < 1e-8);
}

TEST_CASE("commutator trace across the family") {
    for (double t : {0.5, 1.0, 2.0}) {
        auto m = torus_monodromy(family_t(t, 1.0 / 6.0));
        CHECK(std::abs(m.comm_trace - 1.0) < 1e-6);
    }
}

TEST_CASE("family parametrisation") {
    auto p0 = family_t(0.0, 1.0 / 6.0).params();
    CHECK(std::abs(p0.a - torus_a0()) < 1e-15);
    CHECK(std::abs(p0.chi - torus_chi0()) < 1e-15);
    CHECK(std::abs(torus_chi0() - kPi / 4.0 * cplx(1.0, -1.0)) < 1e-15);
    auto p1 = family_t(1.0, 1.0 / 6.0).params();
    CHECK(std::abs(p1.a) < 1e-15);
    for (double t : {0.3, 2.0, 7.5}) CHECK(std::abs(family_t(t, 1.0 / 6.0).params().chi - torus_chi0()) < 1e-15);
}

TEST_CASE("eta symmetry") {
    CHECK(eta_symmetric(torus_a0(), torus_chi0()));
    for (double t : {-1.0, 0.4, 3.0}) CHECK(eta_symmetric((1.0 - t) * torus_a0(), torus_chi0()));
    CHECK_FALSE(eta_symmetric(1.0, torus_chi0()));
}

TEST_CASE("generator loops") {
    auto l = torus_loops();
    CHECK(std::abs(l.x.first() - cplx(0.25, 0.25)) < 1e-15);
    CHECK(std::abs(l.x.last() - l.x.first() - 1.0) < 1e-15);
    CHECK(l.comm.closed());
    // the unrolled commutator encloses exactly one lattice point
    int total = 0;
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) total += std::abs(winding_number(l.comm, cplx(a, b)));
    CHECK(total == 1);
    CHECK(std::abs(winding_number(l.comm, cplx(1.0, 1.0))) == 1);
}

TEST_CASE("off-diagonal sections") {
    for (double t : {0.0, 1.0, 3.0}) {
        auto c = family_t(t, 1.0 / 6.0);
        CHECK(holomorphy_residual(c) < 1e-5);
        CHECK(periodicity_residual(c) < 1e-8);
        CHECK(quadratic_residue_defect(c) < 1e-8);
    }
}

TEST_CASE("gauge rescaling keeps traces") {
    auto c = family_t(0.5, 1.0 / 6.0);
    auto a = torus_monodromy(c), b = torus_monodromy(c.rescaled(cplx(0.7, 0.4)));
    CHECK(std::abs(a.x - b.x) < 1e-7);
    CHECK(std::abs(a.y - b.y) < 1e-7);
    CHECK(std::abs(a.z1 - b.z1) < 1e-7);
}

TEST_CASE("multiplier solution with zero branch integers") {
    cplx chi = torus_chi0();
    auto s = solve_multiplier(2.0 * chi);
    CHECK(std::abs(s.mu) < 1e-14);
    CHECK(std::abs(s.d - 2.0 * chi / kPi) < 1e-14);
}

TEST_CASE("degenerate and out-of-range inputs") {
    CHECK(is_degenerate_chi(0.0));
    CHECK(is_degenerate_chi(kPi / 2.0));
    CHECK_THROWS_AS(build_torus_conn(0.0, 0.0, 1.0 / 6.0), DomainError);
    CHECK_THROWS_AS(build_torus_conn(torus_a0(), torus_chi0(), 0.7), DomainError);
}
