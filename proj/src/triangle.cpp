#include "mlab/triangle.hpp"

#include <cmath>

#include "mlab/errors.hpp"

namespace mlab {

TriangleMatrices triangle_matrices(double rho_t) {
    if (!(rho_t > 0.0 && rho_t < 0.5)) throw DomainError("triangle_matrices: rho must lie in (0, 1/2)");
    if (std::abs(rho_t - 0.25) < 1e-12) throw DomainError("triangle_matrices: branch degeneracy at rho = 1/4");
    const double c = std::cos(2.0 * kPi * rho_t);
    const cplx s = std::sqrt(cplx((-1.0 + c) * c));
    const double r = 1.0 / std::sqrt(2.0);
    TriangleMatrices m;
    m.X0 = {r, -r, r, r};
    m.X1 = {c - s, 1.0 - c + s, -1.0 + c + s, c + s};
    m.Xinf = {r, (-1.0 + 2.0 * c - 2.0 * s) * r, (1.0 - 2.0 * c - 2.0 * s) * r, r};
    return m;
}

HalfPlanePoint fixed_point(const Mat2C& m) {
    const double eps = 1e-9;
    for (cplx e : {m.a11, m.a12, m.a21, m.a22})
        if (std::abs(e.imag()) > eps) throw DomainError("fixed_point: matrix is not real");
    const double a = m.a11.real(), b = m.a12.real(), c = m.a21.real(), d = m.a22.real();
    if (std::abs(a + d) >= 2.0) throw DomainError("fixed_point: element is not elliptic");
    // c z^2 + (d - a) z - b = 0, with c != 0 for elliptic elements
    cplx disc = std::sqrt(cplx((d - a) * (d - a) + 4.0 * b * c));
    cplx z = (-(d - a) + disc) / (2.0 * c);
    if (z.imag() <= 0.0) z = (-(d - a) - disc) / (2.0 * c);
    return HalfPlanePoint(z);
}

cplx rotation_derivative(const Mat2C& m, const HalfPlanePoint& p) {
    cplx image = mobius_apply(m, p.value);
    if (std::abs(image - p.value) > 1e-8 * std::max(1.0, std::abs(p.value)))
        throw DomainError("rotation_derivative: point is not fixed");
    cplx den = m.a21 * p.value + m.a22;
    cplx der = det(m) / (den * den);
    return der / std::abs(der);
}

std::optional<int> order_in_psl2(const Mat2C& m, int nmax) {
    Mat2C p = m;
    for (int n = 1; n <= nmax; ++n) {
        if (distance_to_pm_identity(p).residual < 1e-7) return n;
        p = p * m;
    }
    return std::nullopt;
}

TriangleData triangle_data(int k) {
    if (k < 3) throw DomainError("triangle_data: k must be at least 3");
    auto m = triangle_matrices((k - 1.0) / (2.0 * k));
    HalfPlanePoint p0 = fixed_point(m.X0), p1 = fixed_point(m.X1), pinf = fixed_point(m.Xinf);
    return {k,
            m.X0,
            m.X1,
            m.Xinf,
            p0,
            p1,
            pinf,
            rotation_derivative(m.X0, p0),
            rotation_derivative(m.X1, p1),
            rotation_derivative(m.Xinf, pinf)};
}

cplx expected_pinf(int k) {
    const double c = std::cos(kPi / k);
    return kI * (1.0 + 2.0 * c + 2.0 * std::sqrt(c * (1.0 + c)));
}

cplx expected_rotation_x1(int k) { return std::exp(-2.0 * kPi * kI / double(k)); }

}  // namespace mlab
