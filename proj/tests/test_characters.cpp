#include <doctest.h>

#include <algorithm>
#include <random>

#include "mlab/characters.hpp"
#include "mlab/errors.hpp"

using namespace mlab;

namespace {
const double s6 = std::sqrt(6.0);
TorusTraces tt(cplx x, cplx y, cplx z, double rho) { return {x, y, z, rho, {}, {}}; }
}  // namespace

TEST_CASE("torus residual") {
    CHECK(torus_residual(tt(2, 2, 2, 0.0)) < 1e-15);
    CHECK(torus_residual(tt(s6, s6, 3, 1.0 / 6.0)) < 1e-12);
    CHECK(torus_residual(tt(0, 0, std::sqrt(3.0), 1.0 / 6.0)) < 1e-12);
    CHECK(torus_kappa(1.0 / 6.0) == doctest::Approx(1.0));
}

TEST_CASE("sphere residual") {
    CHECK(sphere_residual({-4, -4, -7, -1.0}) < 1e-12);
    for (double r : {0.2, 1.0 / 3.0, 0.45}) {
        double mu = 2.0 * std::cos(2.0 * kPi * r);
        CHECK(sphere_residual({2, 2, 2.0 * std::cos(4.0 * kPi * r), mu}) < 1e-12);
    }
    CHECK(sphere_residual({2, 2, 2, 2.0}) < 1e-15);  // trivial representation
    CHECK(sphere_residual({2, 2, 2, 0.0}) == doctest::Approx(16.0));
}

TEST_CASE("degree four map") {
    auto a = cv_map(tt(0, 0, 0, 0.25));
    CHECK(std::abs(a.x - 2.0) + std::abs(a.y - 2.0) + std::abs(a.z - 2.0) < 1e-15);
    auto b = cv_map(tt(s6, s6, 3, 1.0 / 6.0));
    CHECK(std::abs(b.x + 4.0) < 1e-12);
    CHECK(std::abs(b.y + 4.0) < 1e-12);
    CHECK(std::abs(b.z + 7.0) < 1e-12);
    CHECK(b.mu == doctest::Approx(-1.0));
    CHECK(sphere_mu_from_rho(1.0 / 6.0) == doctest::Approx(-1.0));
}

TEST_CASE("on-variety points map on-variety") {
    std::mt19937 rng(17);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.05, 0.45);
    for (int i = 0; i < 100; ++i) {
        cplx x(g(rng), g(rng)), y(g(rng), g(rng));
        double rho = u(rng);
        // solve the torus equation for z
        cplx b = -x * y, c = x * x + y * y - 2.0 - torus_kappa(rho);
        cplx z = (-b + std::sqrt(b * b - 4.0 * c)) / 2.0;
        auto t = tt(x, y, z, rho);
        REQUIRE(torus_residual_relative(t) < 1e-12);
        auto s = cv_map(t);
        double scale = std::max({1.0, std::norm(s.x) + std::norm(s.y) + std::norm(s.z), std::abs(s.x * s.y * s.z)});
        CHECK(sphere_residual(s) / scale < 1e-10);
    }
}

TEST_CASE("factorization identity") {
    std::mt19937 rng(11);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 100; ++i)
        CHECK(factorization_residual(cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), u(rng)) < 1e-9);
    CHECK(factorization_residual(0, 0, 0, 0.0) == 0.0);
    CHECK(factorization_residual(s6, s6, 3, -1.0) < 1e-12);
}

TEST_CASE("second product trace") {
    CHECK(std::abs(z2_from(2, 3, 4) - 2.0) < 1e-15);
    CHECK(std::abs(z2_from(0, cplx(1.3, 0.2), 0.7) + 0.7) < 1e-15);
}

TEST_CASE("reality conclusions") {
    CHECK(reality_conclusion(3, 1, 2, 1e-9) == Reality::YRealForced);
    CHECK(reality_conclusion(0, 1.5, -0.3, 1e-9) == Reality::XZeroBranch);
    CHECK(reality_conclusion(cplx(1, 0.5), 1, 2, 1e-9) == Reality::Inconclusive);
    CHECK(to_string(Reality::YRealForced) == "y-real-forced");
}

TEST_CASE("Goldman components") {
    auto c = goldman_classify(tt(1, 1, 1, 0.25), 1e-9);
    CHECK(c.kind == ComponentLabel::Kind::SU2Compact);
    auto f = goldman_classify(tt(s6, s6, 3, 1.0 / 6.0), 1e-9);
    CHECK(f.kind == ComponentLabel::Kind::SL2RNoncompact);
    auto g = goldman_classify(tt(cplx(s6, 1e-9), s6, 3, 1.0 / 6.0), 1e-6);
    CHECK(g.kind == ComponentLabel::Kind::SL2RNoncompact);
    CHECK(g == f);
    cplx x(1.0, 1.0), y(1.0);
    cplx b = -x * y, c2 = x * x + y * y - 3.0;
    auto n = goldman_classify(tt(x, y, (-b + std::sqrt(b * b - 4.0 * c2)) / 2.0, 1.0 / 6.0), 1e-9);
    CHECK(n.kind == ComponentLabel::Kind::NonReal);
    CHECK_THROWS_AS(goldman_classify(tt(5, 5, 5, 1.0 / 6.0), 1e-6), DomainError);
}

TEST_CASE("sign changes") {
    auto o = sign_change_orbit(tt(1, 2, 3, 0.2));
    std::vector<std::array<double, 3>> got;
    for (const auto& t : o) got.push_back({t.x.real(), t.y.real(), t.z.real()});
    std::sort(got.begin(), got.end());
    std::vector<std::array<double, 3>> want{{-1, -2, 3}, {-1, 2, -3}, {1, -2, -3}, {1, 2, 3}};
    CHECK(got == want);
    auto base = tt(cplx(0.3, 0.1), cplx(-1.2, 0.4), 0.8, 0.2);
    for (const auto& t : sign_change_orbit(base)) CHECK(std::abs(torus_residual(t) - torus_residual(base)) < 1e-12);
    auto zero = sign_change_orbit(tt(0, 0, 0, 0.25));
    for (const auto& t : zero) CHECK(std::abs(t.x) + std::abs(t.y) + std::abs(t.z) == 0.0);
    CHECK(normalize_signature({1, 1, 0}) == normalize_signature({0, 0, 0}));
    CHECK(normalize_signature({1, 0, 0}) != normalize_signature({0, 0, 0}));
}

TEST_CASE("uniformizing targets") {
    auto [t, s] = ffuchs_target(3);
    CHECK(std::abs(t.x - s6) < 1e-14);
    CHECK(std::abs(t.z - 3.0) < 1e-14);
    CHECK(t.rho == doctest::Approx(1.0 / 6.0));
    CHECK(std::abs(s.x + 4.0) < 1e-14);
    CHECK(std::abs(s.z + 7.0) < 1e-14);
    CHECK(s.mu == doctest::Approx(-1.0));
    for (int k = 3; k <= 10; ++k) {
        auto [tk, sk] = ffuchs_target(k);
        auto m = cv_map(tk);
        CHECK(std::abs(m.x - sk.x) + std::abs(m.y - sk.y) + std::abs(m.z - sk.z) < 1e-12);
        CHECK(torus_residual(tk) < 1e-12);
        CHECK(sphere_residual(sk) < 1e-10);
    }
    CHECK_THROWS_AS(ffuchs_target(2), DomainError);
}

TEST_CASE("real sphere classes") {
    CHECK(sphere_real_class({-4, -4, -7, -1.0}, 1e-9) == SphereRealClass::Noncompact);
    CHECK(sphere_real_class({1, 0.5, -1, 0.0}, 1e-9) == SphereRealClass::Compact);
    CHECK(sphere_real_class({cplx(1, 1), 0.5, -1, 0.0}, 1e-9) == SphereRealClass::NonReal);
}
