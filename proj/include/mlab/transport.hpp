#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mlab/connections.hpp"
#include "mlab/sl2.hpp"

namespace mlab {

// Connection 1-form evaluated on a tangent vector: returns A(w)(dw).
// Non-holomorphic systems (dw-bar terms) fit the same signature.
using Field = std::function<Mat2C(cplx w, cplx dw)>;

Field holomorphic_field(const RationalMatrixForm& form);
Field holomorphic_field(const MeromorphicConnection& conn);

struct PathSegment {
    enum class Kind { line, arc } kind = Kind::line;
    cplx start{}, end{};               // line
    cplx centre{};                     // arc
    double radius = 0.0, theta0 = 0.0, theta1 = 0.0;

    static PathSegment line(cplx a, cplx b);
    static PathSegment arc(cplx centre, double radius, double theta0, double theta1);

    cplx point(double s) const;
    cplx tangent(double s) const;
    cplx first() const { return point(0.0); }
    cplx last() const { return point(1.0); }
    PathSegment reversed() const;
    PathSegment translated(cplx shift) const;
    double length() const;
};

struct Path {
    std::vector<PathSegment> segments;
    std::string label;

    cplx first() const { return segments.front().first(); }
    cplx last() const { return segments.back().last(); }
    bool closed(double eps = 1e-12) const { return std::abs(first() - last()) <= eps; }
    Path reversed() const;
    Path then(const Path& next) const;  // traverse *this, then next
    Path translated(cplx shift) const;
};

// Points the integrator must keep away from: an explicit list, or the
// lattice Z + iZ (used on the torus chart).
struct SingularSet {
    std::vector<cplx> points;
    bool lattice = false;

    double distance(cplx z) const;
    double distance(const PathSegment& seg) const;
    double distance(const Path& p) const;
};

SingularSet singular_set(const RationalMatrixForm& form);

struct TransportOptions {
    double tol = 1e-10;
    double rmin = 0.2;
    long max_steps = 1000000;
    SingularSet singular;
};

Mat2C transport(const Field& field, const Path& path, const TransportOptions& opt = {});
Mat2C transport(const Field& field, const PathSegment& seg, const TransportOptions& opt = {});

// Loop from basepoint to the circle of the given radius around pole, once
// counterclockwise around it, and back. Waypoints bend the approach.
Path lollipop(cplx basepoint, cplx pole, double radius, const std::vector<cplx>& waypoints = {},
              const std::string& label = "");

// Standard loops g1..g4 around i^(l-1), basepoint 0, radius 0.3; with these
// g4 g3 g2 g1 is trivial.
std::vector<Path> sphere_loops(const std::vector<cplx>& poles, double radius = 0.3);
std::vector<Path> standard_sphere_loops(double radius = 0.3);
// Loops g0 (around 0) and g1 (around 1) based at -1.
std::vector<Path> s3_loops(double radius = 0.3);

struct Letter {
    std::string gen;
    int power = 1;
};
using LabelWord = std::vector<Letter>;

struct RelationCheck {
    std::string name;
    double residual = 0.0;
    int sign = 1;
};

struct Representation {
    std::map<std::string, Mat2C> images;
    std::vector<std::pair<std::string, LabelWord>> relations;
    std::vector<RelationCheck> checks;

    const Mat2C& at(const std::string& g) const;
    Mat2C evaluate(const LabelWord& w) const;  // written order, rightmost letter acts first
    void check_relations();
    double max_det_defect() const;
    bool relations_hold(double eps = 1e-6) const;
};

Representation monodromy(const Field& field, const std::vector<Path>& loops,
                         const std::vector<std::pair<std::string, LabelWord>>& relations,
                         const TransportOptions& opt);
Representation monodromy(const MeromorphicConnection& conn, const std::vector<Path>& loops,
                         const std::vector<std::pair<std::string, LabelWord>>& relations,
                         TransportOptions opt = {});

// Relation g4 g3 g2 g1 for the standard four-pole loops.
std::pair<std::string, LabelWord> four_pole_relation();
Representation four_pole_monodromy(const MeromorphicConnection& conn, TransportOptions opt = {});

double local_monodromy_check(const MeromorphicConnection& conn, const Pole& pole, TransportOptions opt = {});

nlohmann::json to_json(const Path& p);
Path path_from_json(const nlohmann::json& j);

}  // namespace mlab
