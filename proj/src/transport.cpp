#include "mlab/transport.hpp"

#include <array>
#include <boost/numeric/odeint.hpp>
#include <algorithm>
#include <cmath>
#include <limits>

#include "mlab/errors.hpp"

namespace mlab {

namespace odeint = boost::numeric::odeint;

Field holomorphic_field(const RationalMatrixForm& form) {
    return [form](cplx w, cplx dw) { return form(w) * dw; };
}

Field holomorphic_field(const MeromorphicConnection& conn) { return holomorphic_field(conn.form); }

PathSegment PathSegment::line(cplx a, cplx b) {
    PathSegment s;
    s.kind = Kind::line;
    s.start = a;
    s.end = b;
    return s;
}

PathSegment PathSegment::arc(cplx centre, double radius, double theta0, double theta1) {
    if (!(radius > 0.0)) throw ConfigError("arc radius must be positive");
    PathSegment s;
    s.kind = Kind::arc;
    s.centre = centre;
    s.radius = radius;
    s.theta0 = theta0;
    s.theta1 = theta1;
    return s;
}

cplx PathSegment::point(double s) const {
    if (kind == Kind::line) return start + s * (end - start);
    return centre + std::polar(radius, theta0 + s * (theta1 - theta0));
}

cplx PathSegment::tangent(double s) const {
    if (kind == Kind::line) return end - start;
    double th = theta0 + s * (theta1 - theta0);
    return kI * std::polar(radius, th) * (theta1 - theta0);
}

PathSegment PathSegment::reversed() const {
    PathSegment r = *this;
    if (kind == Kind::line) std::swap(r.start, r.end);
    else std::swap(r.theta0, r.theta1);
    return r;
}

PathSegment PathSegment::translated(cplx shift) const {
    PathSegment r = *this;
    r.start += shift;
    r.end += shift;
    r.centre += shift;
    return r;
}

double PathSegment::length() const {
    if (kind == Kind::line) return std::abs(end - start);
    return radius * std::abs(theta1 - theta0);
}

Path Path::reversed() const {
    Path r;
    r.label = label.empty() ? label : label + "^-1";
    for (auto it = segments.rbegin(); it != segments.rend(); ++it) r.segments.push_back(it->reversed());
    return r;
}

Path Path::then(const Path& next) const {
    if (std::abs(last() - next.first()) > 1e-12) throw ConfigError("paths are not chained");
    Path r = *this;
    r.segments.insert(r.segments.end(), next.segments.begin(), next.segments.end());
    return r;
}

Path Path::translated(cplx shift) const {
    Path r;
    r.label = label;
    for (const auto& s : segments) r.segments.push_back(s.translated(shift));
    return r;
}

namespace {

double point_segment_distance(cplx p, cplx a, cplx b) {
    cplx d = b - a;
    double L2 = std::norm(d);
    if (L2 == 0.0) return std::abs(p - a);
    double u = std::clamp(((p - a) * std::conj(d)).real() / L2, 0.0, 1.0);
    return std::abs(p - (a + u * d));
}

double point_arc_distance(cplx p, const PathSegment& s) {
    double lo = std::min(s.theta0, s.theta1), hi = std::max(s.theta0, s.theta1);
    double best = std::min(std::abs(p - s.point(0.0)), std::abs(p - s.point(1.0)));
    cplx v = p - s.centre;
    if (std::abs(v) == 0.0) return s.radius;
    double phi = std::arg(v);
    // closest circle point if its angle falls in the arc range (modulo 2 pi)
    double k0 = std::ceil((lo - phi) / (2.0 * kPi));
    if (phi + 2.0 * kPi * k0 <= hi) best = std::min(best, std::abs(std::abs(v) - s.radius));
    return best;
}

std::vector<cplx> lattice_candidates(cplx lo, cplx hi) {
    std::vector<cplx> out;
    for (double x = std::floor(lo.real()) - 1; x <= std::ceil(hi.real()) + 1; x += 1.0)
        for (double y = std::floor(lo.imag()) - 1; y <= std::ceil(hi.imag()) + 1; y += 1.0) out.emplace_back(x, y);
    return out;
}

}  // namespace

double SingularSet::distance(cplx z) const {
    double best = std::numeric_limits<double>::infinity();
    for (cplx p : points) best = std::min(best, std::abs(z - p));
    if (lattice) {
        cplx n(std::round(z.real()), std::round(z.imag()));
        best = std::min(best, std::abs(z - n));
    }
    return best;
}

double SingularSet::distance(const PathSegment& seg) const {
    std::vector<cplx> cand = points;
    if (lattice) {
        cplx a = seg.kind == PathSegment::Kind::line ? seg.start : seg.centre - cplx(seg.radius, seg.radius);
        cplx b = seg.kind == PathSegment::Kind::line ? seg.end : seg.centre + cplx(seg.radius, seg.radius);
        cplx lo(std::min(a.real(), b.real()), std::min(a.imag(), b.imag()));
        cplx hi(std::max(a.real(), b.real()), std::max(a.imag(), b.imag()));
        auto l = lattice_candidates(lo, hi);
        cand.insert(cand.end(), l.begin(), l.end());
    }
    double best = std::numeric_limits<double>::infinity();
    for (cplx p : cand) {
        double d = seg.kind == PathSegment::Kind::line ? point_segment_distance(p, seg.start, seg.end)
                                                       : point_arc_distance(p, seg);
        best = std::min(best, d);
    }
    return best;
}

double SingularSet::distance(const Path& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : p.segments) best = std::min(best, distance(s));
    return best;
}

SingularSet singular_set(const RationalMatrixForm& form) {
    SingularSet s;
    for (const Pole& p : form.pole_set())
        if (!p.at_infinity) s.points.push_back(p.z);
    return s;
}

namespace {

using State = std::array<double, 8>;

Mat2C unpack(const State& y) {
    return {{y[0], y[1]}, {y[2], y[3]}, {y[4], y[5]}, {y[6], y[7]}};
}

State pack(const Mat2C& m) {
    return {m.a11.real(), m.a11.imag(), m.a12.real(), m.a12.imag(),
            m.a21.real(), m.a21.imag(), m.a22.real(), m.a22.imag()};
}

}  // namespace

Mat2C transport(const Field& field, const PathSegment& seg, const TransportOptions& opt) {
    if (!(opt.tol > 0.0)) throw ConfigError("tol must be positive");
    auto rhs = [&](const State& y, State& dy, double s) {
        Mat2C a = field(seg.point(s), seg.tangent(s));
        dy = pack(-(a * unpack(y)));
    };
    auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(opt.tol, opt.tol);
    State y = pack(Mat2C::identity());
    double s = 0.0, ds = 1e-2;
    long steps = 0;
    const double speed = std::abs(seg.tangent(0.0));
    const bool clamp = !opt.singular.points.empty() || opt.singular.lattice;
    while (s < 1.0 - 1e-15) {
        double cap = 1.0 - s;
        if (clamp) cap = std::min(cap, 0.5 * opt.singular.distance(seg.point(s)) / speed);
        ds = std::min(ds, cap);
        if (ds < 1e-13) throw ProximityError("transport: step underflow near a singular point");
        if (stepper.try_step(rhs, y, s, ds) == odeint::success) {
            if (++steps > opt.max_steps) throw AccuracyError("transport: step budget exhausted");
        }
    }
    Mat2C out = unpack(y);
    if (!all_finite(out)) throw AccuracyError("transport: non-finite result");
    return out;
}

Mat2C transport(const Field& field, const Path& path, const TransportOptions& opt) {
    bool check = !opt.singular.points.empty() || opt.singular.lattice;
    if (check && opt.singular.distance(path) < opt.rmin * (1.0 - 1e-12))
        throw ProximityError("path " + path.label + " passes within rmin of a singular point");
    Mat2C m = Mat2C::identity();
    for (const auto& seg : path.segments) m = transport(field, seg, opt) * m;
    return m;
}

Path lollipop(cplx basepoint, cplx pole, double radius, const std::vector<cplx>& waypoints,
              const std::string& label) {
    if (std::abs(basepoint - pole) <= radius) throw ConfigError("basepoint lies inside the loop circle");
    Path approach;
    cplx cur = basepoint;
    for (cplx w : waypoints) {
        approach.segments.push_back(PathSegment::line(cur, w));
        cur = w;
    }
    cplx dir = (pole - cur) / std::abs(pole - cur);
    cplx q = pole - radius * dir;
    approach.segments.push_back(PathSegment::line(cur, q));
    double th = std::arg(q - pole);
    Path circle;
    circle.segments.push_back(PathSegment::arc(pole, radius, th, th + 2.0 * kPi));
    Path out = approach.then(circle).then(approach.reversed());
    out.label = label;
    return out;
}

std::vector<Path> sphere_loops(const std::vector<cplx>& poles, double radius) {
    if (poles.empty()) throw ConfigError("no poles");
    std::vector<Path> out;
    for (std::size_t l = 0; l < poles.size(); ++l) {
        if (std::abs(poles[l]) < 1e-12) throw ConfigError("basepoint coincides with a pole");
        out.push_back(lollipop(0.0, poles[l], radius, {}, "g" + std::to_string(l + 1)));
    }
    return out;
}

std::vector<Path> standard_sphere_loops(double radius) { return sphere_loops({1.0, kI, -1.0, -kI}, radius); }

std::vector<Path> s3_loops(double radius) {
    return {lollipop(-1.0, 0.0, radius, {}, "g0"), lollipop(-1.0, 1.0, radius, {cplx(0.0, -0.5)}, "g1")};
}

const Mat2C& Representation::at(const std::string& g) const {
    auto it = images.find(g);
    if (it == images.end()) throw ConfigError("representation has no generator " + g);
    return it->second;
}

Mat2C Representation::evaluate(const LabelWord& w) const {
    Mat2C m = Mat2C::identity();
    for (const Letter& l : w) m = m * mat_pow(at(l.gen), l.power);
    return m;
}

void Representation::check_relations() {
    checks.clear();
    for (const auto& [name, word] : relations) {
        auto r = distance_to_pm_identity(evaluate(word));
        checks.push_back({name, r.residual, r.sign});
    }
}

double Representation::max_det_defect() const {
    double worst = 0.0;
    for (const auto& [g, m] : images) worst = std::max(worst, std::abs(m.det() - 1.0));
    return worst;
}

bool Representation::relations_hold(double eps) const {
    for (const auto& c : checks)
        if (c.residual > eps) return false;
    return true;
}

Representation monodromy(const Field& field, const std::vector<Path>& loops,
                         const std::vector<std::pair<std::string, LabelWord>>& relations,
                         const TransportOptions& opt) {
    Representation rep;
    for (const Path& p : loops) {
        if (!p.closed()) throw ConfigError("loop " + p.label + " is not closed");
        if (std::abs(p.first() - loops.front().first()) > 1e-12) throw ConfigError("loops do not share a basepoint");
        rep.images[p.label] = transport(field, p, opt);
    }
    rep.relations = relations;
    rep.check_relations();
    return rep;
}

Representation monodromy(const MeromorphicConnection& conn, const std::vector<Path>& loops,
                         const std::vector<std::pair<std::string, LabelWord>>& relations, TransportOptions opt) {
    if (opt.singular.points.empty()) opt.singular = singular_set(conn.form);
    return monodromy(holomorphic_field(conn), loops, relations, opt);
}

std::pair<std::string, LabelWord> four_pole_relation() {
    return {"g4g3g2g1", {{"g4", 1}, {"g3", 1}, {"g2", 1}, {"g1", 1}}};
}

Representation four_pole_monodromy(const MeromorphicConnection& conn, TransportOptions opt) {
    return monodromy(conn, standard_sphere_loops(), {four_pole_relation()}, opt);
}

double local_monodromy_check(const MeromorphicConnection& conn, const Pole& pole, TransportOptions opt) {
    if (!is_nonresonant(conn)) throw UnsupportedStructure("resonant residue");
    Mat2C r = conn.form.residue(pole);
    cplx l = tracefree_eigenvalue(r);
    cplx predicted = std::exp(-2.0 * kPi * kI * l) + std::exp(2.0 * kPi * kI * l);
    opt.singular = singular_set(conn.form);
    Path loop;
    if (pole.at_infinity) {
        double R = 1.0;
        for (cplx p : opt.singular.points) R = std::max(R, std::abs(p) + 1.0);
        loop.segments.push_back(PathSegment::arc(0.0, R, 0.0, -2.0 * kPi));  // clockwise in z
    } else {
        double gap = std::numeric_limits<double>::infinity();
        for (cplx p : opt.singular.points)
            if (std::abs(p - pole.z) > 1e-12) gap = std::min(gap, std::abs(p - pole.z));
        double rad = std::min(0.3, 0.45 * gap);
        opt.singular.points.erase(
            std::remove_if(opt.singular.points.begin(), opt.singular.points.end(),
                           [&](cplx p) { return std::abs(p - pole.z) < 1e-12; }),
            opt.singular.points.end());
        opt.rmin = std::min(opt.rmin, 0.5 * rad);
        loop.segments.push_back(PathSegment::arc(pole.z, rad, 0.0, 2.0 * kPi));
    }
    Mat2C m = transport(holomorphic_field(conn), loop, opt);
    return std::abs(m.trace() - predicted);
}

nlohmann::json to_json(const Path& p) {
    nlohmann::json j;
    j["label"] = p.label;
    j["segments"] = nlohmann::json::array();
    for (const auto& s : p.segments) {
        if (s.kind == PathSegment::Kind::line)
            j["segments"].push_back({{"kind", "line"},
                                     {"start", {s.start.real(), s.start.imag()}},
                                     {"end", {s.end.real(), s.end.imag()}}});
        else
            j["segments"].push_back({{"kind", "arc"},
                                     {"centre", {s.centre.real(), s.centre.imag()}},
                                     {"radius", s.radius},
                                     {"theta0", s.theta0},
                                     {"theta1", s.theta1}});
    }
    return j;
}

Path path_from_json(const nlohmann::json& j) {
    auto z = [](const nlohmann::json& v) { return cplx(v.at(0).get<double>(), v.at(1).get<double>()); };
    Path p;
    p.label = j.value("label", "");
    for (const auto& s : j.at("segments")) {
        if (s.at("kind") == "line")
            p.segments.push_back(PathSegment::line(z(s.at("start")), z(s.at("end"))));
        else
            p.segments.push_back(PathSegment::arc(z(s.at("centre")), s.at("radius").get<double>(),
                                                  s.at("theta0").get<double>(), s.at("theta1").get<double>()));
    }
    return p;
}

}  // namespace mlab
