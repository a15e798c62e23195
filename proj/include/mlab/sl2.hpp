#pragma once

#include <array>
#include <complex>
#include <optional>

namespace mlab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline const cplx kI{0.0, 1.0};

// 2x2 matrix over an arbitrary complex scalar type. Mat2C is the double
// instance used everywhere outside the high-precision torus engine.
template <class S>
struct Mat2 {
    S a11{}, a12{}, a21{}, a22{};

    static Mat2 identity() { return {S(1), S(0), S(0), S(1)}; }
    static Mat2 diag(const S& p, const S& q) { return {p, S(0), S(0), q}; }

    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 operator+(const Mat2& o) const { return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22}; }
    Mat2 operator-(const Mat2& o) const { return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22}; }
    Mat2 operator-() const { return {-a11, -a12, -a21, -a22}; }
    Mat2 operator*(const S& s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
    Mat2& operator+=(const Mat2& o) { return *this = *this + o; }
    Mat2& operator*=(const Mat2& o) { return *this = *this * o; }

    S det() const { return a11 * a22 - a12 * a21; }
    S trace() const { return a11 + a22; }

    Mat2 adjugate() const { return {a22, -a12, -a21, a11}; }
    Mat2 inverse() const {
        S d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }
};

template <class S>
Mat2<S> operator*(const S& s, const Mat2<S>& m) {
    return m * s;
}

using Mat2C = Mat2<cplx>;

cplx det(const Mat2C& m);
cplx trace(const Mat2C& m);

Mat2C conj_transpose(const Mat2C& m);
Mat2C mat_pow(const Mat2C& m, int n);
Mat2C expm(const Mat2C& m);

// Largest absolute entry.
double max_abs(const Mat2C& m);
double dist(const Mat2C& a, const Mat2C& b);
bool all_finite(const Mat2C& m);
bool is_sl(const Mat2C& m, double eps = 1e-9);

// Distance of m from the nearer of +I and -I; sign is +1 or -1 accordingly.
struct PlusMinusIdentity {
    double residual;
    int sign;
};
PlusMinusIdentity distance_to_pm_identity(const Mat2C& m);

// Point of the Riemann sphere with an explicit point at infinity.
struct ExtPoint {
    bool infinite = false;
    cplx value{};

    static ExtPoint inf() { return {true, {}}; }
    static ExtPoint at(cplx z) { return {false, z}; }
};

ExtPoint mobius_apply(const Mat2C& m, const ExtPoint& z);
cplx mobius_apply(const Mat2C& m, cplx z);

struct HalfPlanePoint {
    cplx value;
    explicit HalfPlanePoint(cplx z);
};

double conjugacy_residue(const Mat2C& m1, const Mat2C& m2);

// Eigenvalues (l, -l) of a trace-free matrix, with Re l >= 0 (ties broken by Im l >= 0).
cplx tracefree_eigenvalue(const Mat2C& m);

// Eigenvector of m for eigenvalue lambda, not normalised.
std::array<cplx, 2> eigenvector(const Mat2C& m, cplx lambda);

// |v1 w2 - v2 w1| / (|v||w|): zero iff the two lines coincide.
double line_distance(const std::array<cplx, 2>& v, const std::array<cplx, 2>& w);

}  // namespace mlab
