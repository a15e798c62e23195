#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlab/characters.hpp"
#include "mlab/sl2.hpp"
#include "mlab/torus_family.hpp"
#include "mlab/transport.hpp"

namespace mlab {

// One-parameter system on [0, 1]: d + t diag(alpha, -alpha) ds + B ds.
struct PathFamilyData {
    std::function<cplx(double)> alpha;
    std::function<Mat2C(double)> B;
    std::vector<double> t_grid;
    int samples = 201;  // for the WKB condition check
};

struct ScaledLimitRow {
    double t = 0.0;
    Mat2C scaled;              // e^{t int alpha} times the transport
    double deviation = 0.0;    // from diag(P_plus, 0)
    double trace_deviation = 0.0;
};

struct ScaledLimitReport {
    cplx alpha_integral;
    cplx plus_transport;  // scalar transport of B11
    std::vector<ScaledLimitRow> rows;
    double slope = 0.0;   // log-log fit of deviation against t on [fit_lo, fit_hi]
    double fit_lo = 20.0, fit_hi = 200.0;
    bool tail_monotone = false;  // decreasing on the fitted range, 10% slack
    nlohmann::json to_json() const;
};

// Throws DomainError when Re alpha >= 0 somewhere on the samples.
ScaledLimitReport scaled_limit_check(const PathFamilyData& data, TransportOptions opt = {});

// Constant coefficients: exact scaled transport from the matrix exponential.
Mat2C scaled_transport_closed_form(cplx alpha, const Mat2C& B, double t);

// Scalar problem f' + (t alpha + beta) f = g on [0, 1] (forward) or the
// mirrored f' - (t alpha + beta) f = g integrated back from s = 1.
struct DecayProblem {
    std::function<cplx(double)> alpha, beta, g;
    cplx f_start;
    double delta = 0.1;
    bool mirrored = false;
};

struct DecayRow {
    double t = 0.0;
    double sup = 0.0;       // sup of |f| over [delta, 1] (or [0, 1 - delta] when mirrored)
    double constant = 0.0;  // sup (1 + t) / eps with eps = sup|f_start| + sup|g|
};

struct DecayReport {
    std::vector<DecayRow> rows;
    double max_ratio_change = 0.0;  // max |C(2t)/C(t) - 1| over grid points whose double is on the grid
    nlohmann::json to_json() const;
};

DecayReport decay_check(const DecayProblem& p, const std::vector<double>& t_grid, double tol = 1e-11);
// Sampled solution, for comparison with closed forms.
std::vector<cplx> decay_solution(const DecayProblem& p, double t, const std::vector<double>& s_points,
                                 double tol = 1e-11);

enum class ScanSide { Torus, Sphere, Both };
ScanSide parse_side(const std::string& s);

struct SphereColumns {
    cplx x, y, z;  // Tr M2M1, Tr M3M2, Tr M3M1 of D + tau Phi
    cplx tau;
    double residual = 0.0;
    double consistency = 0.0;  // relative distance to the image of the torus traces
    cplx scaled_y;             // y e^{-t pi (1 + i) / 2}
};

struct ScanRow {
    double t = 0.0;
    std::optional<FamilyRow> torus;
    cplx scaled_x;
    std::optional<SphereColumns> sphere;
    std::string label;
    std::string error;
};

struct FamilyScan {
    double rho = 0.0;
    ScanSide side = ScanSide::Torus;
    std::vector<ScanRow> rows;  // sorted by t

    static std::vector<std::string> csv_columns();
    void write_csv(std::ostream& os) const;
};

std::vector<double> make_grid(double t_min, double t_max, double step);

// Threads are capped by MONODROMY_LAB_THREADS (default: hardware concurrency).
int worker_threads();

FamilyScan family_scan(const FamilyEngine& engine, const std::vector<double>& t_grid, ScanSide side,
                       TransportOptions sphere_opt = {});
FamilyScan family_scan(double rho, const std::vector<double>& t_grid, ScanSide side);

// Sphere traces of D + tau Phi, tau = pi (1 + i) t / (4 c).
SphereColumns sphere_family_traces(double rho, double t, TransportOptions opt = {});

struct CEstimate {
    cplx value;
    double error_bar = 0.0;  // max distance of a scaled value from the mean
    double variation = 0.0;  // (max - min) spread of |scaled| relative to |mean|
    int samples = 0;
};

// Mean of the scaled torus column over the window. Throws NumericError when
// the relative spread exceeds max_variation.
CEstimate estimate_C(const FamilyScan& scan, double t_lo, double t_hi, double max_variation = 0.05);
// Same for the scaled sphere column, which tends to -C^2.
CEstimate estimate_sphere_C2(const FamilyScan& scan, double t_lo, double t_hi, double max_variation = 0.05);

struct CrossingResult {
    double t = 0.0;
    FamilyRow row;
    Reality reality = Reality::Inconclusive;
    ComponentLabel label;
    SphereTraces sphere;  // image of the torus traces under the degree four map
    SphereRealClass sphere_class = SphereRealClass::NonReal;
};

// Zeros of Im x between consecutive scan rows with |x| > 2, refined with the
// engine to |Im x| < target. Throws ConfigError when consecutive rows differ
// in arg x by pi/4 or more.
std::vector<CrossingResult> find_tn(const FamilyScan& scan, const FamilyEngine& engine, double t_lo = 0.0,
                                    double t_hi = 1e300, double target = 1e-9, double classify_tol = 1e-6);

// Sphere-only detection: zeros of Im of the coordinate paired with x (Tr M3M2)
// where its real part is below -2, refined in double precision by bracketing
// on the sphere side alone.
struct SphereCrossing {
    double t = 0.0;
    SphereColumns sphere;
    SphereRealClass sphere_class = SphereRealClass::NonReal;
};
std::vector<SphereCrossing> find_tn_sphere(const FamilyScan& scan, double t_lo = 0.0, double t_hi = 1e300,
                                           double target = 1e-9, TransportOptions opt = {});

// Mean spacing of the last `tail` crossings.
double crossing_spacing(const std::vector<CrossingResult>& tn, int tail = 4);
double crossing_spacing(const std::vector<SphereCrossing>& tn, int tail = 4);

}  // namespace mlab
