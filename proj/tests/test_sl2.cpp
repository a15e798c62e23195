#include <doctest.h>

#include <random>

#include "mlab/sl2.hpp"
#include "mlab/triangle.hpp"

using namespace mlab;

namespace {
Mat2C random_sl(std::mt19937& rng) {
    std::normal_distribution<double> g;
    Mat2C m{cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng))};
    return m * (1.0 / std::sqrt(m.det()));
}
}  // namespace

TEST_CASE("det of unimodular examples") {
    CHECK(std::abs(det(Mat2C::identity()) - 1.0) < 1e-15);
    CHECK(std::abs(det(Mat2C::diag(2.0, 0.5)) - 1.0) < 1e-15);
    CHECK(std::abs(det(Mat2C{0.0, 1.0, -1.0, 0.0}) - 1.0) < 1e-15);
}

TEST_CASE("trace examples") {
    CHECK(std::abs(trace(Mat2C::identity()) - 2.0) < 1e-15);
    Mat2C x0 = expm(Mat2C::diag(1.0 / 8.0, -1.0 / 8.0) * cplx(0.0, -2.0 * kPi));
    CHECK(std::abs(trace(x0) - std::sqrt(2.0)) < 1e-14);
    for (double rho : {0.1, 1.0 / 6.0, 1.0 / 3.0}) {
        Mat2C m = Mat2C::diag(std::exp(cplx(0, -2 * kPi * rho)), std::exp(cplx(0, 2 * kPi * rho)));
        CHECK(std::abs(trace(m) - 2.0 * std::cos(2 * kPi * rho)) < 1e-14);
    }
}

TEST_CASE("mobius action fixes i under rotations") {
    CHECK(std::abs(mobius_apply(Mat2C::identity(), kI) - kI) < 1e-15);
    CHECK(std::abs(mobius_apply(Mat2C{0.0, -1.0, 1.0, 0.0}, kI) - kI) < 1e-15);
    auto tm = triangle_matrices(1.0 / 3.0);
    CHECK(std::abs(mobius_apply(tm.X0, kI) - kI) < 1e-12);
}

TEST_CASE("mobius action at infinity") {
    Mat2C m{2.0, 1.0, 1.0, 1.0};
    auto r = mobius_apply(m, ExtPoint::inf());
    CHECK_FALSE(r.infinite);
    CHECK(std::abs(r.value - 2.0) < 1e-15);
    auto p = mobius_apply(Mat2C{1.0, 0.0, 1.0, 1.0}, ExtPoint::at(-1.0));
    CHECK(p.infinite);
}

TEST_CASE("conjugacy residue") {
    CHECK(conjugacy_residue(Mat2C::identity(), Mat2C::identity()) == doctest::Approx(0.0));
    CHECK(conjugacy_residue(Mat2C::identity(), -Mat2C::identity()) == doctest::Approx(4.0));
    std::mt19937 rng(5);
    Mat2C g = random_sl(rng);
    Mat2C b{2.0, 1.0, 0.0, 0.5};
    CHECK(conjugacy_residue(Mat2C::diag(2.0, 0.5), g.inverse() * b * g) < 1e-12);
}

TEST_CASE("expm and powers") {
    Mat2C n{0.0, 1.0, 0.0, 0.0};
    CHECK(dist(expm(n), Mat2C{1.0, 1.0, 0.0, 1.0}) < 1e-15);
    Mat2C r{0.0, -1.0, 1.0, 0.0};
    CHECK(dist(mat_pow(r, 4), Mat2C::identity()) < 1e-15);
    CHECK(dist(mat_pow(r, -1), r.inverse()) < 1e-15);
    CHECK(distance_to_pm_identity(mat_pow(r, 2)).sign == -1);
}

TEST_CASE("eigen helpers") {
    Mat2C m{0.0, 1.0, 4.0, 0.0};
    CHECK(std::abs(tracefree_eigenvalue(m) - 2.0) < 1e-14);
    auto v = eigenvector(m, 2.0);
    CHECK(line_distance(v, {1.0, 2.0}) < 1e-14);
    CHECK(is_sl(Mat2C::diag(3.0, 1.0 / 3.0)));
    CHECK_FALSE(is_sl(Mat2C::diag(3.0, 1.0)));
}
