#include "mlab/torus.hpp"

#include <cmath>
#include <random>

#include "mlab/errors.hpp"

namespace mlab {

MultiplierSolution solve_multiplier(cplx s, int n_one, int n_i) {
    // mu - pi d = -s + 2 pi i n_one,  mu + pi d = s + 2 pi n_i
    cplx lhs1 = -s + 2.0 * kPi * kI * double(n_one);
    cplx lhs2 = s + 2.0 * kPi * double(n_i);
    cplx mu = 0.5 * (lhs1 + lhs2);
    cplx d = (lhs2 - mu) / kPi;
    return {mu, d};
}

namespace {

bool near_lattice(cplx z, double eps) {
    return std::abs(z - cplx(std::round(z.real()), std::round(z.imag()))) < eps;
}

}  // namespace

bool is_degenerate_chi(cplx chi, double eps) { return near_lattice(2.0 * chi / kPi, eps); }

TorusConnection::TorusConnection(const TorusParams& p) : p_(p), sigma_(16) {
    if (!(p.rho > 0.0 && p.rho < 0.5)) throw DomainError("rho must lie in (0, 1/2)");
    if (near_lattice(p.d_plus, 1e-12) || near_lattice(p.d_minus, 1e-12))
        throw DomainError("degenerate bundle: chi lies in the half dual lattice");
    sigma_minus_d_plus_ = sigma_(-p.d_plus);
    sigma_minus_d_minus_ = sigma_(-p.d_minus);
}

cplx TorusConnection::gamma_plus(cplx w) const {
    cplx h = p_.r_plus * std::exp(p_.mu_plus * w) * sigma_(w - p_.d_plus) / (sigma_(w) * sigma_minus_d_plus_);
    return std::exp(2.0 * p_.chi * std::conj(w)) * h;
}

cplx TorusConnection::gamma_minus(cplx w) const {
    cplx h = p_.r_minus * std::exp(p_.mu_minus * w) * sigma_(w - p_.d_minus) / (sigma_(w) * sigma_minus_d_minus_);
    return std::exp(-2.0 * p_.chi * std::conj(w)) * h;
}

Mat2C TorusConnection::operator()(cplx w, cplx dw) const {
    cplx diag = p_.a * dw + p_.chi * std::conj(dw);
    return {diag, gamma_minus(w) * dw, gamma_plus(w) * dw, -diag};
}

Field TorusConnection::field() const {
    return [self = *this](cplx w, cplx dw) { return self(w, dw); };
}

TorusConnection TorusConnection::rescaled(cplx c) const {
    TorusParams q = p_;
    q.r_plus *= c;
    q.r_minus /= c;
    return TorusConnection(q);
}

TorusConnection build_torus_conn(cplx a, cplx chi, double rho, int n_one, int n_i) {
    if (!(rho > 0.0 && rho < 0.5)) throw DomainError("rho must lie in (0, 1/2)");
    if (is_degenerate_chi(chi)) throw DomainError("degenerate bundle: chi lies in the half dual lattice");
    auto plus = solve_multiplier(2.0 * chi, n_one, n_i);
    auto minus = solve_multiplier(-2.0 * chi, n_one, n_i);
    TorusParams p;
    p.a = a;
    p.chi = chi;
    p.rho = rho;
    p.mu_plus = plus.mu;
    p.d_plus = plus.d;
    p.mu_minus = minus.mu;
    p.d_minus = minus.d;
    p.r_plus = rho;
    p.r_minus = rho;
    TorusConnection conn(p);
    if (periodicity_residual(conn, 8) > 1e-8) throw NumericError("multiplier solution failed the periodicity check");
    return conn;
}

// Unitary point of the abelian part: a dw + chi dw-bar is imaginary iff a = -conj(chi).
cplx torus_a0() { return -kPi * cplx(1.0, 1.0) / 4.0; }
cplx torus_chi0() { return kPi * cplx(1.0, -1.0) / 4.0; }

TorusConnection family_t(double t, double rho) { return build_torus_conn((1.0 - t) * torus_a0(), torus_chi0(), rho); }

namespace {

bool on_ray(cplx z, cplx dir, double eps) {
    // z = s * dir for some real s
    return std::abs((z * std::conj(dir)).imag()) <= eps * std::max(1.0, std::abs(z) * std::abs(dir));
}

}  // namespace

bool eta_symmetric(cplx a, cplx chi) {
    const double eps = 1e-12;
    if (is_degenerate_chi(chi, eps)) return false;
    cplx p(1.0, 1.0), m(1.0, -1.0);
    return (on_ray(chi, m, eps) && on_ray(a, p, eps)) || (on_ray(chi, p, eps) && on_ray(a, m, eps));
}

cplx torus_basepoint() { return cplx(0.25, 0.25); }

TorusLoops torus_loops() {
    cplx p0 = torus_basepoint();
    TorusLoops l;
    l.x.segments.push_back(PathSegment::line(p0, p0 + 1.0));
    l.x.label = "gamma_x";
    l.y.segments.push_back(PathSegment::line(p0, p0 + kI));
    l.y.label = "gamma_y";
    // gamma_y^-1 gamma_x^-1 gamma_y gamma_x, unrolled in the chart
    l.comm = l.x.then(l.y.translated(1.0)).then(l.x.reversed().translated(kI)).then(l.y.reversed());
    l.comm.label = "gamma_comm";
    return l;
}

int winding_number(const Path& p, cplx point, int samples_per_segment) {
    double total = 0.0;
    cplx prev = p.first() - point;
    for (const auto& s : p.segments) {
        for (int i = 1; i <= samples_per_segment; ++i) {
            cplx cur = s.point(double(i) / samples_per_segment) - point;
            total += std::arg(cur / prev);
            prev = cur;
        }
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

TorusMonodromy torus_monodromy(const TorusConnection& conn, TransportOptions opt) {
    opt.singular.lattice = true;
    auto loops = torus_loops();
    Field f = conn.field();
    TorusMonodromy m;
    m.X = transport(f, loops.x, opt);
    m.Y = transport(f, loops.y, opt);
    m.x = m.X.trace();
    m.y = m.Y.trace();
    m.z1 = (m.Y * m.X).trace();
    m.z2 = (m.Y.inverse() * m.X).trace();
    m.comm_trace = transport(f, loops.comm, opt).trace();
    return m;
}

namespace {

std::vector<cplx> sample_points(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<cplx> out;
    while (static_cast<int>(out.size()) < n) {
        cplx w(u(rng), u(rng));
        if (std::abs(w - cplx(std::round(w.real()), std::round(w.imag()))) > 0.1) out.push_back(w);
    }
    return out;
}

}  // namespace

double holomorphy_residual(const TorusConnection& conn, int samples, unsigned seed) {
    const double h = 1e-5;
    const cplx chi = conn.params().chi;
    double worst = 0.0;
    for (cplx w : sample_points(samples, seed)) {
        auto dbar = [&](auto f) {
            cplx fx = (f(w + h) - f(w - h)) / (2.0 * h);
            cplx fy = (f(w + kI * h) - f(w - kI * h)) / (2.0 * h);
            return 0.5 * (fx + kI * fy);
        };
        auto gp = [&](cplx z) { return conn.gamma_plus(z); };
        auto gm = [&](cplx z) { return conn.gamma_minus(z); };
        cplx vp = gp(w), vm = gm(w);
        worst = std::max(worst, std::abs(dbar(gp) - 2.0 * chi * vp) / std::max(1.0, std::abs(vp)));
        worst = std::max(worst, std::abs(dbar(gm) + 2.0 * chi * vm) / std::max(1.0, std::abs(vm)));
    }
    return worst;
}

double periodicity_residual(const TorusConnection& conn, int samples, unsigned seed) {
    double worst = 0.0;
    for (cplx w : sample_points(samples, seed)) {
        for (cplx l : {cplx(1.0), kI}) {
            cplx p = conn.gamma_plus(w), m = conn.gamma_minus(w);
            worst = std::max(worst, std::abs(conn.gamma_plus(w + l) - p) / std::max(1.0, std::abs(p)));
            worst = std::max(worst, std::abs(conn.gamma_minus(w + l) - m) / std::max(1.0, std::abs(m)));
        }
    }
    return worst;
}

double quadratic_residue_defect(const TorusConnection& conn) {
    // averaging w^2 g_plus g_minus over four symmetric points kills the O(w) .. O(w^3) terms
    const double eps = 1e-3;
    cplx acc = 0.0;
    for (int k = 0; k < 4; ++k) {
        cplx w = eps * std::pow(kI, k);
        acc += w * w * conn.gamma_plus(w) * conn.gamma_minus(w);
    }
    double rho = conn.params().rho;
    return std::abs(acc / 4.0 - rho * rho);
}

nlohmann::json to_json(const TorusParams& p) {
    auto z = [](cplx v) { return nlohmann::json::array({v.real(), v.imag()}); };
    return {{"a", z(p.a)},           {"chi", z(p.chi)},         {"rho", p.rho},
            {"mu_plus", z(p.mu_plus)}, {"mu_minus", z(p.mu_minus)}, {"d_plus", z(p.d_plus)},
            {"d_minus", z(p.d_minus)}, {"r_plus", z(p.r_plus)},   {"r_minus", z(p.r_minus)}};
}

}  // namespace mlab
