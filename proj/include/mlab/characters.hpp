#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "mlab/sl2.hpp"

namespace mlab {

// Trace coordinates on the one-punctured torus: x = Tr X, y = Tr Y,
// z = Tr XY, with boundary trace kappa = 2 cos(2 pi rho).
struct TorusTraces {
    cplx x, y, z;
    double rho = 0.0;
    std::optional<cplx> z1, z2;
};

// Four-punctured sphere coordinates with all four local traces equal to mu.
struct SphereTraces {
    cplx x, y, z;
    double mu = 0.0;
};

double torus_kappa(double rho);

// |x^2 + y^2 + z^2 - xyz - 2 - kappa|
double torus_residual(const TorusTraces& t);
// Same, divided by max(1, |x|^2 + |y|^2 + |z|^2 + |xyz|). Used where the
// traces are large and only known to double precision.
double torus_residual_relative(const TorusTraces& t);

// |x^2 + y^2 + z^2 + xyz - 2 mu^2 (x + y + z) + 4 (mu^2 - 1) + mu^4|
double sphere_residual(const SphereTraces& s);

// (x, y, z) -> (2 - x^2, 2 - y^2, 2 - z^2) with mu = 2 cos(2 pi (2 rho + 1) / 4).
SphereTraces cv_map(const TorusTraces& t);
double sphere_mu_from_rho(double rho);

// Relative defect of the factorization of the pulled-back sphere equation
// into the torus equation and its sign-flipped partner.
double factorization_residual(cplx x, cplx y, cplx z, double mu);

cplx z2_from(cplx x, cplx y, cplx z1);

enum class Reality { YRealForced, XZeroBranch, Inconclusive };
Reality reality_conclusion(cplx x, cplx z1, cplx z2, double tol);
std::string to_string(Reality r);

struct ComponentLabel {
    enum class Kind { SU2Compact, SL2RNoncompact, NonReal, NearBoundary };
    Kind kind = Kind::NonReal;
    // raw sign pattern (1 where the coordinate is negative) and its
    // representative modulo the sign-change group
    std::array<int, 3> raw{0, 0, 0};
    std::array<int, 3> signature{0, 0, 0};

    bool operator==(const ComponentLabel& o) const { return kind == o.kind && signature == o.signature; }
    std::string name() const;
};

// Sign patterns with an even number of flips preserve the torus equation.
// Canonical representative of a pattern in its class.
std::array<int, 3> normalize_signature(const std::array<int, 3>& eps);

// Throws DomainError when the point is off the variety (relative residual >= tol).
ComponentLabel goldman_classify(const TorusTraces& t, double tol);

std::array<TorusTraces, 4> sign_change_orbit(const TorusTraces& t);

// Real sphere points: inside [-2, 2]^3 or not.
enum class SphereRealClass { Compact, Noncompact, NonReal };
SphereRealClass sphere_real_class(const SphereTraces& s, double tol);

// Torus and sphere traces of the uniformizing point for the k-fold cover.
std::pair<TorusTraces, SphereTraces> ffuchs_target(int k);

}  // namespace mlab
