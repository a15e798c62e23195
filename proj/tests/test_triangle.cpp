#include <doctest.h>

#include "mlab/errors.hpp"
#include "mlab/triangle.hpp"

using namespace mlab;

namespace {
bool real_matrix(const Mat2C& m, double eps) {
    return std::abs(m.a11.imag()) + std::abs(m.a12.imag()) + std::abs(m.a21.imag()) + std::abs(m.a22.imag()) < eps;
}
}  // namespace

TEST_CASE("generators at rho 1/3") {
    auto m = triangle_matrices(1.0 / 3.0);
    CHECK(real_matrix(m.X0, 1e-14));
    CHECK(real_matrix(m.X1, 1e-14));
    CHECK(real_matrix(m.Xinf, 1e-14));
    CHECK(std::abs(m.X1.trace() + 1.0) < 1e-14);
    CHECK(std::abs(m.X0.trace() - std::sqrt(2.0)) < 1e-14);
    CHECK(distance_to_pm_identity(m.Xinf * m.X1 * m.X0).residual < 1e-9);
}

TEST_CASE("unitary range") {
    auto m = triangle_matrices(1.0 / 8.0);
    bool all_real = real_matrix(m.X0, 1e-6) && real_matrix(m.X1, 1e-6) && real_matrix(m.Xinf, 1e-6);
    CHECK_FALSE(all_real);
    for (const Mat2C& x : {m.X0, m.X1, m.Xinf}) CHECK(dist(x * conj_transpose(x), Mat2C::identity()) < 1e-9);
    CHECK(distance_to_pm_identity(m.Xinf * m.X1 * m.X0).residual < 1e-9);
}

TEST_CASE("fixed points") {
    auto m = triangle_matrices(1.0 / 3.0);
    CHECK(std::abs(fixed_point(m.X0).value - kI) < 1e-12);
    CHECK(std::abs(fixed_point(m.Xinf).value - kI * (2.0 + std::sqrt(3.0))) < 1e-12);
    const double th = 0.7;
    Mat2C rot{std::cos(th), -std::sin(th), std::sin(th), std::cos(th)};
    CHECK(std::abs(fixed_point(rot).value - kI) < 1e-14);
    CHECK_THROWS_AS(fixed_point(Mat2C::diag(2.0, 0.5)), DomainError);
}

TEST_CASE("rotation derivatives") {
    auto d = triangle_data(3);
    CHECK(std::abs(rotation_derivative(d.X0, HalfPlanePoint(kI)) + kI) < 1e-12);
    CHECK(std::abs(rotation_derivative(d.X1, d.p1) - std::exp(-2.0 * kPi * kI / 3.0)) < 1e-12);
    CHECK(std::abs(rotation_derivative(Mat2C::identity(), HalfPlanePoint(kI)) - 1.0) < 1e-15);
}

TEST_CASE("orders in PSL2") {
    auto d = triangle_data(3);
    CHECK(order_in_psl2(d.X0) == 4);
    CHECK(order_in_psl2(d.X1) == 3);
    CHECK(order_in_psl2(Mat2C::identity()) == 1);
    CHECK_FALSE(order_in_psl2(Mat2C::diag(2.0, 0.5)).has_value());
}

TEST_CASE("triangle data for k = 3..8") {
    for (int k = 3; k <= 8; ++k) {
        auto d = triangle_data(k);
        CHECK(std::abs(d.p0.value - kI) < 1e-9);
        CHECK(std::abs(d.pinf.value - expected_pinf(k)) < 1e-9);
        CHECK(std::abs(d.d0 + kI) < 1e-9);
        CHECK(std::abs(d.d1 - expected_rotation_x1(k)) < 1e-9);
        CHECK(std::abs(d.dinf + kI) < 1e-9);
        CHECK(order_in_psl2(d.X1) == k);
        CHECK(order_in_psl2(d.Xinf) == 4);
    }
}

TEST_CASE("degenerate parameters") {
    CHECK_THROWS_AS(triangle_matrices(0.25), DomainError);
    CHECK_THROWS_AS(triangle_matrices(0.6), DomainError);
    CHECK_THROWS_AS(triangle_data(2), DomainError);
    CHECK_THROWS_AS(HalfPlanePoint(cplx(0.0, -1.0)), DomainError);
}
