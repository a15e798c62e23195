#pragma once

#include <optional>

#include "mlab/sl2.hpp"

namespace mlab {

struct TriangleMatrices {
    Mat2C X0, X1, Xinf;
};

// Explicit generators conjugate to the monodromy of the three-point
// connection with local traces (sqrt 2, 2 cos 2 pi rho_t, sqrt 2). Real for
// rho_t in (1/4, 1/2), unitary for rho_t in (0, 1/4).
TriangleMatrices triangle_matrices(double rho_t);

// Fixed point in the upper half plane of a real elliptic element.
HalfPlanePoint fixed_point(const Mat2C& m);

// Derivative of the Moebius map at a fixed point, as a unit complex number.
cplx rotation_derivative(const Mat2C& m, const HalfPlanePoint& p);

// Smallest n <= nmax with m^n = +-I to 1e-7.
std::optional<int> order_in_psl2(const Mat2C& m, int nmax = 64);

struct TriangleData {
    int k = 0;
    Mat2C X0, X1, Xinf;
    HalfPlanePoint p0, p1, pinf;
    cplx d0, d1, dinf;  // rotation derivatives at the fixed points
};

TriangleData triangle_data(int k);

// Closed forms at rho_t = (k-1)/(2k).
cplx expected_pinf(int k);
cplx expected_rotation_x1(int k);

}  // namespace mlab
