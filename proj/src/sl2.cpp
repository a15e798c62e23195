#include "mlab/sl2.hpp"

#include <cmath>

#include "mlab/errors.hpp"

namespace mlab {

cplx det(const Mat2C& m) { return m.det(); }
cplx trace(const Mat2C& m) { return m.trace(); }

Mat2C conj_transpose(const Mat2C& m) {
    return {std::conj(m.a11), std::conj(m.a21), std::conj(m.a12), std::conj(m.a22)};
}

Mat2C mat_pow(const Mat2C& m, int n) {
    Mat2C base = n < 0 ? m.inverse() : m;
    unsigned e = static_cast<unsigned>(n < 0 ? -n : n);
    Mat2C out = Mat2C::identity();
    while (e) {
        if (e & 1u) out = out * base;
        base = base * base;
        e >>= 1u;
    }
    return out;
}

// exp(m) = e^{tr/2} (cosh(l) I + sinh(l)/l (m - tr/2 I)),  l^2 = -det(m - tr/2 I)
Mat2C expm(const Mat2C& m) {
    cplx half = m.trace() * 0.5;
    Mat2C n = m - Mat2C::identity() * half;
    cplx l = std::sqrt(-n.det());
    cplx c = std::cosh(l);
    cplx s = std::abs(l) < 1e-8 ? cplx(1.0) + l * l / 6.0 : std::sinh(l) / l;
    return (Mat2C::identity() * c + n * s) * std::exp(half);
}

double max_abs(const Mat2C& m) {
    return std::max({std::abs(m.a11), std::abs(m.a12), std::abs(m.a21), std::abs(m.a22)});
}

double dist(const Mat2C& a, const Mat2C& b) { return max_abs(a - b); }

bool all_finite(const Mat2C& m) {
    for (cplx z : {m.a11, m.a12, m.a21, m.a22})
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

bool is_sl(const Mat2C& m, double eps) { return all_finite(m) && std::abs(m.det() - 1.0) <= eps; }

PlusMinusIdentity distance_to_pm_identity(const Mat2C& m) {
    double p = dist(m, Mat2C::identity());
    double q = dist(m, -Mat2C::identity());
    return p <= q ? PlusMinusIdentity{p, 1} : PlusMinusIdentity{q, -1};
}

ExtPoint mobius_apply(const Mat2C& m, const ExtPoint& z) {
    if (m.det() == cplx(0.0)) throw DomainError("mobius_apply: singular matrix");
    if (z.infinite) {
        if (m.a21 == cplx(0.0)) return ExtPoint::inf();
        return ExtPoint::at(m.a11 / m.a21);
    }
    cplx num = m.a11 * z.value + m.a12;
    cplx den = m.a21 * z.value + m.a22;
    if (den == cplx(0.0)) {
        if (num == cplx(0.0)) throw DomainError("mobius_apply: 0/0");
        return ExtPoint::inf();
    }
    return ExtPoint::at(num / den);
}

cplx mobius_apply(const Mat2C& m, cplx z) {
    ExtPoint r = mobius_apply(m, ExtPoint::at(z));
    if (r.infinite) throw DomainError("mobius_apply: image is infinity");
    return r.value;
}

HalfPlanePoint::HalfPlanePoint(cplx z) : value(z) {
    if (!(z.imag() > 0.0)) throw DomainError("HalfPlanePoint: imaginary part must be positive");
}

double conjugacy_residue(const Mat2C& m1, const Mat2C& m2) { return std::abs(m1.trace() - m2.trace()); }

cplx tracefree_eigenvalue(const Mat2C& m) {
    cplx l = std::sqrt(-m.det());
    if (l.real() < 0.0 || (l.real() == 0.0 && l.imag() < 0.0)) l = -l;
    return l;
}

std::array<cplx, 2> eigenvector(const Mat2C& m, cplx lambda) {
    // rows of (m - lambda I) annihilate the eigenvector; take the better conditioned one
    std::array<cplx, 2> v1{m.a12, lambda - m.a11};
    std::array<cplx, 2> v2{lambda - m.a22, m.a21};
    double n1 = std::abs(v1[0]) + std::abs(v1[1]);
    double n2 = std::abs(v2[0]) + std::abs(v2[1]);
    if (n1 == 0.0 && n2 == 0.0) return {1.0, 0.0};
    return n1 >= n2 ? v1 : v2;
}

double line_distance(const std::array<cplx, 2>& v, const std::array<cplx, 2>& w) {
    double nv = std::hypot(std::abs(v[0]), std::abs(v[1]));
    double nw = std::hypot(std::abs(w[0]), std::abs(w[1]));
    return std::abs(v[0] * w[1] - v[1] * w[0]) / (nv * nw);
}

}  // namespace mlab
