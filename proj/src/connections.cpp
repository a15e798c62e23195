#include "mlab/connections.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "mlab/errors.hpp"

namespace mlab {

namespace {

constexpr double kPoleMatch = 1e-12;

void check_weight(double rho_t) {
    if (!(rho_t > 0.0 && rho_t < 0.5)) throw DomainError("weight must lie in (0, 1/2)");
}

bool is_zero(const Mat2C& m, double eps = 1e-14) { return max_abs(m) <= eps; }

}  // namespace

RationalMatrixForm::RationalMatrixForm(std::vector<cplx> poles, std::vector<Mat2C> residues,
                                       std::vector<Mat2C> polynomial)
    : poles_(std::move(poles)), residues_(std::move(residues)), poly_(std::move(polynomial)) {
    if (poles_.size() != residues_.size()) throw ConfigError("pole and residue counts differ");
    for (std::size_t i = 0; i < poles_.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(poles_[i] - poles_[j]) < kPoleMatch) throw ConfigError("repeated pole");
    while (!poly_.empty() && is_zero(poly_.back())) poly_.pop_back();
}

Mat2C RationalMatrixForm::operator()(cplx z) const {
    Mat2C out{};
    for (std::size_t i = 0; i < poles_.size(); ++i) out += residues_[i] * (1.0 / (z - poles_[i]));
    cplx zk = 1.0;
    for (const Mat2C& p : poly_) {
        out += p * zk;
        zk *= z;
    }
    return out;
}

int RationalMatrixForm::index_of(cplx p) const {
    for (std::size_t i = 0; i < poles_.size(); ++i)
        if (std::abs(poles_[i] - p) < kPoleMatch) return static_cast<int>(i);
    return -1;
}

std::vector<Pole> RationalMatrixForm::pole_set() const {
    std::vector<Pole> out;
    for (std::size_t i = 0; i < poles_.size(); ++i)
        if (!is_zero(residues_[i])) out.push_back(Pole::finite(poles_[i]));
    if (has_pole(Pole::infinity())) out.push_back(Pole::infinity());
    return out;
}

bool RationalMatrixForm::has_pole(const Pole& p) const {
    if (p.at_infinity) {
        if (!poly_.empty()) return true;
        Mat2C s{};
        for (const Mat2C& r : residues_) s += r;
        return !is_zero(s, 1e-12);
    }
    int i = index_of(p.z);
    return i >= 0 && !is_zero(residues_[i]);
}

Mat2C RationalMatrixForm::residue(const Pole& p) const {
    if (p.at_infinity) {
        if (!poly_.empty()) throw UnsupportedStructure("pole at infinity is not simple");
        Mat2C s{};
        for (const Mat2C& r : residues_) s += r;
        return -s;
    }
    int i = index_of(p.z);
    if (i < 0) throw DomainError("residue: point is not a pole");
    return residues_[i];
}

RationalMatrixForm RationalMatrixForm::operator+(const RationalMatrixForm& o) const {
    std::vector<cplx> poles = poles_;
    std::vector<Mat2C> res = residues_;
    for (std::size_t j = 0; j < o.poles_.size(); ++j) {
        int i = index_of(o.poles_[j]);
        if (i >= 0) {
            res[i] += o.residues_[j];
        } else {
            poles.push_back(o.poles_[j]);
            res.push_back(o.residues_[j]);
        }
    }
    std::vector<Mat2C> poly(std::max(poly_.size(), o.poly_.size()));
    for (std::size_t k = 0; k < poly.size(); ++k) {
        if (k < poly_.size()) poly[k] += poly_[k];
        if (k < o.poly_.size()) poly[k] += o.poly_[k];
    }
    return {poles, res, poly};
}

RationalMatrixForm RationalMatrixForm::operator*(cplx s) const {
    std::vector<Mat2C> res = residues_, poly = poly_;
    for (auto& r : res) r = r * s;
    for (auto& p : poly) p = p * s;
    return {poles_, res, poly};
}

double RationalMatrixForm::trace_residual(unsigned seed) const {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        cplx z(u(rng), u(rng));
        worst = std::max(worst, std::abs((*this)(z).trace()));
    }
    return worst;
}

MeromorphicConnection build_nabla_s3(double rho_t) {
    check_weight(rho_t);
    double r2 = rho_t * rho_t;
    Mat2C r0 = Mat2C::diag(0.125, -0.125);
    Mat2C r1{-4.0 * r2, 1.0, r2 - 16.0 * r2 * r2, 4.0 * r2};
    return {RationalMatrixForm({0.0, 1.0}, {r0, r1}), "nabla_s3", rho_t};
}

MeromorphicConnection build_D(double rho_t) {
    check_weight(rho_t);
    Mat2C plus = Mat2C::diag(rho_t, -rho_t);
    Mat2C minus = Mat2C::diag(-rho_t, rho_t);
    return {RationalMatrixForm({1.0, kI, -1.0, -kI}, {plus, minus, plus, minus}), "D", rho_t};
}

// 4 rho/(z^4-1) has residue rho*x at x, 4 rho z^2/(z^4-1) has residue rho/x.
MeromorphicConnection build_nabla_tilde(double rho_t) {
    check_weight(rho_t);
    std::vector<cplx> poles{1.0, kI, -1.0, -kI};
    std::vector<Mat2C> res;
    for (cplx x : poles) res.push_back({0.0, rho_t * x, rho_t / x, 0.0});
    return {RationalMatrixForm(poles, res), "nabla_tilde", rho_t};
}

RationalMatrixForm build_phi() {
    // 2/(z^2-1) = 1/(z-1) - 1/(z+1),  2i/(z^2+1) = 1/(z-i) - 1/(z+i)
    Mat2C up{0.0, 1.0, 0.0, 0.0};
    Mat2C lo{0.0, 0.0, 1.0, 0.0};
    return RationalMatrixForm({1.0, -1.0, kI, -kI}, {up, -up, lo, -lo});
}

MeromorphicConnection family_D_tau(double rho_t, cplx tau) {
    MeromorphicConnection d = build_D(rho_t);
    d.form = d.form + build_phi() * tau;
    d.label = "D_tau";
    return d;
}

MeromorphicConnection connection_by_label(const std::string& label, double rho_t) {
    if (label == "nabla_s3") return build_nabla_s3(rho_t);
    if (label == "D") return build_D(rho_t);
    if (label == "nabla_tilde") return build_nabla_tilde(rho_t);
    if (label == "phi") return {build_phi(), "phi", 0.0};
    throw ConfigError("unknown connection label: " + label);
}

Mat2C residue(const MeromorphicConnection& conn, const Pole& p) { return conn.form.residue(p); }
Mat2C residue(const MeromorphicConnection& conn, cplx p) { return conn.form.residue(p); }

bool is_nonresonant(const MeromorphicConnection& conn) {
    for (const Pole& p : conn.form.pole_set()) {
        cplx diff = 2.0 * tracefree_eigenvalue(conn.form.residue(p));
        double n = std::round(diff.real());
        if (n != 0.0 && std::abs(diff - n) < 1e-8) return false;
    }
    return true;
}

ParabolicData induced_parabolic(const MeromorphicConnection& conn) {
    if (!is_nonresonant(conn)) throw UnsupportedStructure("resonant residue");
    ParabolicData pd;
    for (const Pole& p : conn.form.pole_set()) {
        Mat2C r = conn.form.residue(p);
        cplx l = tracefree_eigenvalue(r);
        if (std::abs(l.imag()) > 1e-10 || !(l.real() < 0.5))
            throw UnsupportedStructure("residue eigenvalues are not real in (-1/2, 1/2)");
        pd.points.push_back(p);
        pd.weights.push_back(l.real());
        pd.lines.push_back(eigenvector(r, l));
    }
    return pd;
}

double parabolic_degree(const ParabolicData& pd, int sub_degree, const std::vector<bool>& incidence) {
    if (incidence.size() != pd.weights.size()) throw ConfigError("incidence length mismatch");
    double d = sub_degree;
    for (std::size_t j = 0; j < incidence.size(); ++j) d += incidence[j] ? pd.weights[j] : -pd.weights[j];
    return d;
}

double period_half_modulus(cplx centre, double radius, double tol) {
    // (z-1)(z-i) = u^2 - e^2 with u = z - m; the root u sqrt(1 - e^2/u^2) is
    // single valued on circles with |u| > |e|. The other factor uses principal
    // roots whose cuts lie on Re z <= -1 and Im z = -1.
    const cplx m(0.5, 0.5), e(0.5, -0.5);
    const int probes = 720;
    for (int i = 0; i < probes; ++i) {
        cplx z = centre + radius * std::polar(1.0, 2.0 * kPi * i / probes);
        if (std::abs(z - m) <= std::abs(e) * 1.02 || z.real() <= -0.98 || z.imag() <= -0.98)
            throw DomainError("period contour must enclose exactly the poles 1 and i");
    }
    const cplx s4i = std::sqrt(cplx(0.0, 4.0));
    auto integrand = [&](double th) {
        cplx w = std::polar(1.0, th);
        cplx z = centre + radius * w;
        cplx u = z - m;
        cplx left = u * std::sqrt(1.0 - e * e / (u * u));
        cplx right = std::sqrt(z + 1.0) * std::sqrt(z + kI);
        return s4i / (left * right) * (kI * radius * w);
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double err_re = 0.0, err_im = 0.0;
    double re = GK::integrate([&](double th) { return integrand(th).real(); }, 0.0, 2.0 * kPi, 20, tol, &err_re);
    double im = GK::integrate([&](double th) { return integrand(th).imag(); }, 0.0, 2.0 * kPi, 20, tol, &err_im);
    double mod = std::hypot(re, im);
    if (err_re + err_im > 1e-8 * std::max(1.0, mod)) throw NumericError("period quadrature did not converge");
    return 0.5 * mod;
}

double pullback_period_c() {
    static const double c = period_half_modulus({0.5, 0.5}, 0.9);
    return c;
}

cplx tau_from_t(double t, double c) { return kPi * cplx(1.0, 1.0) * t / (4.0 * c); }

namespace {

nlohmann::json mat_json(const Mat2C& m) {
    auto z = [](cplx v) { return nlohmann::json::array({v.real(), v.imag()}); };
    return nlohmann::json::array({nlohmann::json::array({z(m.a11), z(m.a12)}),
                                  nlohmann::json::array({z(m.a21), z(m.a22)})});
}

cplx json_cplx(const nlohmann::json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Mat2C json_mat(const nlohmann::json& j) {
    return {json_cplx(j.at(0).at(0)), json_cplx(j.at(0).at(1)), json_cplx(j.at(1).at(0)),
            json_cplx(j.at(1).at(1))};
}

}  // namespace

nlohmann::json to_json(const RationalMatrixForm& f) {
    nlohmann::json j;
    j["poles"] = nlohmann::json::array();
    j["residues"] = nlohmann::json::array();
    j["polynomial_part"] = nlohmann::json::array();
    for (std::size_t i = 0; i < f.finite_poles().size(); ++i) {
        j["poles"].push_back({f.finite_poles()[i].real(), f.finite_poles()[i].imag()});
        j["residues"].push_back(mat_json(f.finite_residues()[i]));
    }
    for (const Mat2C& p : f.polynomial_part()) j["polynomial_part"].push_back(mat_json(p));
    return j;
}

RationalMatrixForm form_from_json(const nlohmann::json& j) {
    std::vector<cplx> poles;
    std::vector<Mat2C> res, poly;
    for (const auto& p : j.at("poles")) poles.push_back(json_cplx(p));
    for (const auto& r : j.at("residues")) res.push_back(json_mat(r));
    if (j.contains("polynomial_part"))
        for (const auto& p : j.at("polynomial_part")) poly.push_back(json_mat(p));
    return {poles, res, poly};
}

}  // namespace mlab
