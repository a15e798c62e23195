#include "mlab/characters.hpp"

#include <algorithm>
#include <cmath>

#include "mlab/errors.hpp"

namespace mlab {

double torus_kappa(double rho) { return 2.0 * std::cos(2.0 * kPi * rho); }

namespace {

cplx torus_lhs(const TorusTraces& t) {
    return t.x * t.x + t.y * t.y + t.z * t.z - t.x * t.y * t.z - 2.0 - torus_kappa(t.rho);
}

double torus_scale(const TorusTraces& t) {
    return std::max(1.0, std::norm(t.x) + std::norm(t.y) + std::norm(t.z) + std::abs(t.x * t.y * t.z));
}

}  // namespace

double torus_residual(const TorusTraces& t) { return std::abs(torus_lhs(t)); }

double torus_residual_relative(const TorusTraces& t) { return std::abs(torus_lhs(t)) / torus_scale(t); }

double sphere_residual(const SphereTraces& s) {
    const double m2 = s.mu * s.mu;
    cplx v = s.x * s.x + s.y * s.y + s.z * s.z + s.x * s.y * s.z - 2.0 * m2 * (s.x + s.y + s.z) + m2 * m2 +
             4.0 * (m2 - 1.0);
    return std::abs(v);
}

double sphere_mu_from_rho(double rho) { return 2.0 * std::cos(2.0 * kPi * (2.0 * rho + 1.0) / 4.0); }

SphereTraces cv_map(const TorusTraces& t) {
    return {2.0 - t.x * t.x, 2.0 - t.y * t.y, 2.0 - t.z * t.z, sphere_mu_from_rho(t.rho)};
}

double factorization_residual(cplx x, cplx y, cplx z, double mu) {
    SphereTraces s{2.0 - x * x, 2.0 - y * y, 2.0 - z * z, mu};
    const double m2 = mu * mu;
    cplx lhs = s.x * s.x + s.y * s.y + s.z * s.z + s.x * s.y * s.z - 2.0 * m2 * (s.x + s.y + s.z) + m2 * m2 +
               4.0 * (m2 - 1.0);
    cplx q = x * x + y * y + z * z;
    cplx f1 = q - x * y * z - 4.0 + m2;
    cplx f2 = q + x * y * z - 4.0 + m2;
    cplx rhs = f1 * f2;
    double scale = std::max({1.0, std::abs(rhs), std::norm(q), std::norm(x * y * z)});
    return std::abs(lhs - rhs) / scale;
}

cplx z2_from(cplx x, cplx y, cplx z1) { return x * y - z1; }

Reality reality_conclusion(cplx x, cplx z1, cplx z2, double tol) {
    if (std::abs(x.imag()) >= tol || std::abs(z1.imag()) >= tol || std::abs(z2.imag()) >= tol)
        return Reality::Inconclusive;
    if (std::abs(x) < tol) return Reality::XZeroBranch;
    return Reality::YRealForced;
}

std::string to_string(Reality r) {
    switch (r) {
        case Reality::YRealForced: return "y-real-forced";
        case Reality::XZeroBranch: return "x-zero-branch";
        default: return "inconclusive";
    }
}

std::string ComponentLabel::name() const {
    switch (kind) {
        case Kind::SU2Compact: return "SU2Compact";
        case Kind::NonReal: return "NonReal";
        case Kind::NearBoundary: return "NearBoundary";
        default:
            return "SL2RNoncompact(" + std::to_string(signature[0]) + "," + std::to_string(signature[1]) + "," +
                   std::to_string(signature[2]) + ")";
    }
}

std::array<int, 3> normalize_signature(const std::array<int, 3>& eps) {
    // the sign-change group flips an even number of entries, so only the
    // parity of the pattern survives
    int parity = (eps[0] + eps[1] + eps[2]) % 2;
    return parity == 0 ? std::array<int, 3>{0, 0, 0} : std::array<int, 3>{0, 0, 1};
}

ComponentLabel goldman_classify(const TorusTraces& t, double tol) {
    if (!(torus_residual_relative(t) < tol)) throw DomainError("goldman_classify: point is off the character variety");
    ComponentLabel out;
    const std::array<cplx, 3> c{t.x, t.y, t.z};
    for (const auto& v : c) {
        if (std::abs(v.imag()) >= tol) {
            out.kind = ComponentLabel::Kind::NonReal;
            return out;
        }
    }
    double biggest = 0.0;
    for (int i = 0; i < 3; ++i) {
        biggest = std::max(biggest, std::abs(c[i].real()));
        out.raw[i] = c[i].real() < 0.0 ? 1 : 0;
    }
    out.signature = normalize_signature(out.raw);
    if (biggest >= 2.0 - tol && biggest <= 2.0 + tol)
        out.kind = ComponentLabel::Kind::NearBoundary;
    else if (biggest < 2.0 - tol)
        out.kind = ComponentLabel::Kind::SU2Compact;
    else
        out.kind = ComponentLabel::Kind::SL2RNoncompact;
    if (out.kind != ComponentLabel::Kind::SL2RNoncompact) out.signature = {0, 0, 0};
    return out;
}

std::array<TorusTraces, 4> sign_change_orbit(const TorusTraces& t) {
    std::array<TorusTraces, 4> out{t, t, t, t};
    out[1].y = -t.y;
    out[1].z = -t.z;
    out[2].x = -t.x;
    out[2].z = -t.z;
    out[3].x = -t.x;
    out[3].y = -t.y;
    return out;
}

SphereRealClass sphere_real_class(const SphereTraces& s, double tol) {
    const std::array<cplx, 3> c{s.x, s.y, s.z};
    bool inside = true;
    for (const auto& v : c) {
        if (std::abs(v.imag()) >= tol * std::max(1.0, std::abs(v))) return SphereRealClass::NonReal;
        if (std::abs(v.real()) > 2.0) inside = false;
    }
    return inside ? SphereRealClass::Compact : SphereRealClass::Noncompact;
}

std::pair<TorusTraces, SphereTraces> ffuchs_target(int k) {
    if (k < 3) throw DomainError("ffuchs_target: k must be at least 3");
    const double c = std::cos(kPi / k);
    TorusTraces t;
    t.x = t.y = 2.0 * std::sqrt(1.0 + c);
    double ch = std::cos(kPi / (2.0 * k));
    t.z = 4.0 * ch * ch;
    t.rho = (k - 2.0) / (2.0 * k);
    SphereTraces s;
    s.x = s.y = -2.0 - 4.0 * c;
    s.z = -2.0 * (2.0 + 4.0 * c + std::cos(2.0 * kPi / k));
    s.mu = 2.0 * std::cos(kPi * (k - 1.0) / k);
    return {t, s};
}

}  // namespace mlab
