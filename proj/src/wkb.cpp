#include "mlab/wkb.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <ostream>
#include <thread>

#include "mlab/connections.hpp"
#include "mlab/errors.hpp"

namespace mlab {

namespace {

namespace odeint = boost::numeric::odeint;

cplx integrate_unit(const std::function<cplx(double)>& f) {
    using boost::math::quadrature::gauss_kronrod;
    double re = gauss_kronrod<double, 61>::integrate([&](double s) { return f(s).real(); }, 0.0, 1.0, 10, 1e-13);
    double im = gauss_kronrod<double, 61>::integrate([&](double s) { return f(s).imag(); }, 0.0, 1.0, 10, 1e-13);
    return {re, im};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

nlohmann::json cjson(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace

Mat2C scaled_transport_closed_form(cplx alpha, const Mat2C& B, double t) {
    Mat2C A = Mat2C::diag(t * alpha, -t * alpha) + B;
    return expm(-A) * std::exp(t * alpha);
}

ScaledLimitReport scaled_limit_check(const PathFamilyData& data, TransportOptions opt) {
    for (int i = 0; i < data.samples; ++i) {
        double s = double(i) / (data.samples - 1);
        if (!(data.alpha(s).real() < 0.0)) throw DomainError("scaled_limit_check: Re alpha must be negative on [0, 1]");
    }
    ScaledLimitReport rep;
    rep.alpha_integral = integrate_unit(data.alpha);
    rep.plus_transport = std::exp(-integrate_unit([&](double s) { return data.B(s).a11; }));
    const PathSegment seg = PathSegment::line(0.0, 1.0);
    opt.singular = {};
    for (double t : data.t_grid) {
        Field f = [&, t](cplx w, cplx dw) {
            double s = w.real();
            cplx a = data.alpha(s);
            return (Mat2C::diag(t * a, -t * a) + data.B(s)) * dw;
        };
        ScaledLimitRow row;
        row.t = t;
        row.scaled = transport(f, seg, opt) * std::exp(t * rep.alpha_integral);
        row.deviation = max_abs(row.scaled - Mat2C::diag(rep.plus_transport, 0.0));
        row.trace_deviation = std::abs(row.scaled.trace() - rep.plus_transport);
        rep.rows.push_back(row);
    }
    std::vector<double> xs, ys;
    for (const auto& r : rep.rows)
        if (r.t >= rep.fit_lo && r.t <= rep.fit_hi && r.deviation > 0.0) {
            xs.push_back(r.t);
            ys.push_back(r.deviation);
        }
    rep.slope = loglog_slope(xs, ys);
    rep.tail_monotone = true;
    for (std::size_t i = 1; i < ys.size(); ++i)
        if (ys[i] > 1.1 * ys[i - 1]) rep.tail_monotone = false;
    return rep;
}

nlohmann::json ScaledLimitReport::to_json() const {
    nlohmann::json rows_j = nlohmann::json::array();
    for (const auto& r : rows)
        rows_j.push_back({{"t", r.t}, {"deviation", r.deviation}, {"trace_deviation", r.trace_deviation}});
    return {{"alpha_integral", cjson(alpha_integral)},
            {"plus_transport", cjson(plus_transport)},
            {"slope", slope},
            {"fit_window", {fit_lo, fit_hi}},
            {"tail_monotone", tail_monotone},
            {"rows", rows_j}};
}

std::vector<cplx> decay_solution(const DecayProblem& p, double t, const std::vector<double>& s_points, double tol) {
    // mirrored problems become forward ones under s -> 1 - s
    auto alpha = [&](double s) { return p.mirrored ? p.alpha(1.0 - s) : p.alpha(s); };
    auto beta = [&](double s) { return p.mirrored ? p.beta(1.0 - s) : p.beta(s); };
    auto g = [&](double s) { return p.mirrored ? -p.g(1.0 - s) : p.g(s); };
    using State = std::array<double, 2>;
    auto rhs = [&](const State& y, State& dy, double s) {
        cplx f(y[0], y[1]);
        cplx d = g(s) - (t * alpha(s) + beta(s)) * f;
        dy = {d.real(), d.imag()};
    };
    std::vector<double> times;
    for (double s : s_points) times.push_back(p.mirrored ? 1.0 - s : s);
    std::vector<std::size_t> order(times.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return times[a] < times[b]; });
    std::vector<double> sorted;
    for (auto i : order) sorted.push_back(times[i]);
    if (sorted.empty() || sorted.front() < 0.0 || sorted.back() > 1.0)
        throw ConfigError("decay_solution: sample points must lie in [0, 1]");
    std::vector<double> grid{0.0};
    for (double s : sorted)
        if (s > grid.back()) grid.push_back(s);
    std::vector<cplx> values;
    State y{p.f_start.real(), p.f_start.imag()};
    auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(tol, tol);
    odeint::integrate_times(stepper, rhs, y, grid.begin(), grid.end(), 1e-3,
                            [&](const State& st, double) { values.emplace_back(st[0], st[1]); });
    std::vector<cplx> out(s_points.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        double s = sorted[k];
        auto it = std::lower_bound(grid.begin(), grid.end(), s);
        out[order[k]] = values[static_cast<std::size_t>(it - grid.begin())];
    }
    return out;
}

DecayReport decay_check(const DecayProblem& p, const std::vector<double>& t_grid, double tol) {
    const int n = 2001;
    std::vector<double> s_points;
    double lo = p.mirrored ? 0.0 : p.delta, hi = p.mirrored ? 1.0 - p.delta : 1.0;
    for (int i = 0; i < n; ++i) s_points.push_back(lo + (hi - lo) * i / (n - 1));
    double g_sup = 0.0;
    for (int i = 0; i < n; ++i) g_sup = std::max(g_sup, std::abs(p.g(double(i) / (n - 1))));
    const double eps = std::abs(p.f_start) + g_sup;
    DecayReport rep;
    for (double t : t_grid) {
        auto f = decay_solution(p, t, s_points, tol);
        double sup = 0.0;
        for (cplx v : f) sup = std::max(sup, std::abs(v));
        rep.rows.push_back({t, sup, sup * (1.0 + t) / eps});
    }
    for (const auto& a : rep.rows)
        for (const auto& b : rep.rows)
            if (std::abs(b.t - 2.0 * a.t) < 1e-9 && a.constant > 0.0)
                rep.max_ratio_change = std::max(rep.max_ratio_change, std::abs(b.constant / a.constant - 1.0));
    return rep;
}

nlohmann::json DecayReport::to_json() const {
    nlohmann::json rows_j = nlohmann::json::array();
    for (const auto& r : rows) rows_j.push_back({{"t", r.t}, {"sup", r.sup}, {"constant", r.constant}});
    return {{"rows", rows_j}, {"max_ratio_change", max_ratio_change}};
}

ScanSide parse_side(const std::string& s) {
    if (s == "torus") return ScanSide::Torus;
    if (s == "sphere") return ScanSide::Sphere;
    if (s == "both") return ScanSide::Both;
    throw ConfigError("side must be torus, sphere or both");
}

std::vector<double> make_grid(double t_min, double t_max, double step) {
    if (!(step > 0.0) || !(t_max >= t_min)) throw ConfigError("invalid t range");
    std::vector<double> out;
    long n = std::lround(std::floor((t_max - t_min) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(t_min + step * double(i));
    return out;
}

int worker_threads() {
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("MONODROMY_LAB_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

SphereColumns sphere_family_traces(double rho, double t, TransportOptions opt) {
    const double rho_t = (2.0 * rho + 1.0) / 4.0;
    SphereColumns c;
    c.tau = tau_from_t(t, pullback_period_c());
    auto rep = four_pole_monodromy(family_D_tau(rho_t, c.tau), opt);
    const Mat2C &m1 = rep.at("g1"), &m2 = rep.at("g2"), &m3 = rep.at("g3");
    c.x = (m2 * m1).trace();
    c.y = (m3 * m2).trace();
    c.z = (m3 * m1).trace();
    c.residual = sphere_residual({c.x, c.y, c.z, sphere_mu_from_rho(rho)});
    c.scaled_y = c.y * std::exp(-t * kPi * cplx(1.0, 1.0) / 2.0);
    return c;
}

namespace {

double rel_gap(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

ScanRow scan_row(const FamilyEngine* engine, double rho, double t, ScanSide side, const TransportOptions& opt) {
    ScanRow row;
    row.t = t;
    try {
        if (side != ScanSide::Sphere) {
            row.torus = engine->evaluate(t);
            row.scaled_x = row.torus->x * std::exp(-t * kPi * cplx(1.0, 1.0) / 4.0);
        }
        if (side != ScanSide::Torus) {
            row.sphere = sphere_family_traces(rho, t, opt);
            if (row.torus) {
                // along the (1 + i) ray the sphere coordinates pair with (y, x, z2)
                const FamilyRow& r = *row.torus;
                row.sphere->consistency = std::max({rel_gap(2.0 - r.y * r.y, row.sphere->x),
                                                    rel_gap(2.0 - r.x * r.x, row.sphere->y),
                                                    rel_gap(2.0 - r.z2 * r.z2, row.sphere->z)});
            }
        }
        if (row.torus) {
            TorusTraces tt{row.torus->x, row.torus->y, row.torus->z1, rho, row.torus->z1, row.torus->z2};
            try {
                row.label = goldman_classify(tt, 1e-6).name();
            } catch (const DomainError&) {
                row.label = "OffVariety";
            }
        } else {
            SphereTraces st{row.sphere->x, row.sphere->y, row.sphere->z, sphere_mu_from_rho(rho)};
            switch (sphere_real_class(st, 1e-6)) {
                case SphereRealClass::Compact: row.label = "SphereCompact"; break;
                case SphereRealClass::Noncompact: row.label = "SphereNoncompact"; break;
                default: row.label = "NonReal"; break;
            }
        }
    } catch (const std::exception& e) {
        row.error = e.what();
        row.label = "Error";
    }
    return row;
}

}  // namespace

FamilyScan family_scan(const FamilyEngine& engine, const std::vector<double>& t_grid, ScanSide side,
                       TransportOptions sphere_opt) {
    FamilyScan scan;
    scan.rho = engine.rho();
    scan.side = side;
    std::vector<double> ts = t_grid;
    std::sort(ts.begin(), ts.end());
    scan.rows.resize(ts.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < ts.size(); i = next++)
            scan.rows[i] = scan_row(&engine, engine.rho(), ts[i], side, sphere_opt);
    };
    const int n = std::min<int>(worker_threads(), static_cast<int>(std::max<std::size_t>(ts.size(), 1)));
    if (n <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return scan;
}

FamilyScan family_scan(double rho, const std::vector<double>& t_grid, ScanSide side) {
    FamilyEngine engine(rho);
    return family_scan(engine, t_grid, side);
}

std::vector<std::string> FamilyScan::csv_columns() {
    return {"t",         "x_re",         "x_im",         "y_re",        "y_im",         "z_re",
            "z_im",      "z1_re",        "z1_im",        "z2_re",       "z2_im",        "scaled_x_re",
            "scaled_x_im", "residual",   "identity_residual", "comm_defect", "det_defect", "digits",
            "sx_re",     "sx_im",        "sy_re",        "sy_im",       "sz_re",        "sz_im",
            "sphere_residual", "consistency", "label",   "error"};
}

namespace {

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void FamilyScan::write_csv(std::ostream& os) const {
    auto cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << "\n";
    for (const auto& r : rows) {
        std::vector<std::string> f{num(r.t)};
        auto pushc = [&](cplx z) {
            f.push_back(num(z.real()));
            f.push_back(num(z.imag()));
        };
        if (r.torus) {
            const auto& q = *r.torus;
            pushc(q.x);
            pushc(q.y);
            pushc(q.z1);
            pushc(q.z1);
            pushc(q.z2);
            pushc(r.scaled_x);
            f.push_back(num(q.residual));
            f.push_back(num(q.identity_residual));
            f.push_back(num(q.comm_defect));
            f.push_back(num(q.det_defect));
            f.push_back(std::to_string(q.digits));
        } else {
            f.insert(f.end(), 17, "");
        }
        if (r.sphere) {
            pushc(r.sphere->x);
            pushc(r.sphere->y);
            pushc(r.sphere->z);
            f.push_back(num(r.sphere->residual));
            f.push_back(r.torus ? num(r.sphere->consistency) : "");
        } else {
            f.insert(f.end(), 8, "");
        }
        f.push_back(csv_quote(r.label));
        f.push_back(csv_quote(r.error));
        for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
        os << "\n";
    }
}

namespace {

CEstimate mean_estimate(const std::vector<cplx>& v, double max_variation) {
    if (v.size() < 2) throw NumericError("estimate: fewer than two rows in the window");
    CEstimate e;
    e.samples = static_cast<int>(v.size());
    for (cplx z : v) e.value += z;
    e.value /= double(v.size());
    double spread = 0.0;
    for (cplx a : v) {
        e.error_bar = std::max(e.error_bar, std::abs(a - e.value));
        for (cplx b : v) spread = std::max(spread, std::abs(a - b));
    }
    e.variation = spread / std::abs(e.value);
    if (!(e.variation < max_variation)) throw NumericError("estimate unstable: scaled values vary too much over the window");
    return e;
}

}  // namespace

CEstimate estimate_C(const FamilyScan& scan, double t_lo, double t_hi, double max_variation) {
    std::vector<cplx> v;
    for (const auto& r : scan.rows)
        if (r.torus && r.t >= t_lo && r.t <= t_hi) v.push_back(r.scaled_x);
    return mean_estimate(v, max_variation);
}

CEstimate estimate_sphere_C2(const FamilyScan& scan, double t_lo, double t_hi, double max_variation) {
    std::vector<cplx> v;
    for (const auto& r : scan.rows)
        if (r.sphere && r.t >= t_lo && r.t <= t_hi) v.push_back(r.sphere->scaled_y);
    return mean_estimate(v, max_variation);
}

std::vector<CrossingResult> find_tn(const FamilyScan& scan, const FamilyEngine& engine, double t_lo, double t_hi,
                                    double target, double classify_tol) {
    std::vector<const ScanRow*> rows;
    for (const auto& r : scan.rows)
        if (r.torus && r.t >= t_lo && r.t <= t_hi) rows.push_back(&r);
    std::vector<CrossingResult> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const FamilyRow &a = *rows[i - 1]->torus, &b = *rows[i]->torus;
        if (std::abs(std::arg(b.x / a.x)) >= kPi / 4.0) throw ConfigError("find_tn: scan too coarse for phase tracking");
        if (std::abs(a.x) <= 2.0 || std::abs(b.x) <= 2.0) continue;
        double fa = a.x.imag(), fb = b.x.imag();
        if (fa == 0.0 || fb == 0.0 || (fa < 0.0) == (fb < 0.0)) continue;
        CrossingResult c;
        c.row = engine.refine_real_crossing(a.t, b.t, target);
        c.t = c.row.t;
        c.reality = reality_conclusion(c.row.x, c.row.z1, c.row.z2, classify_tol);
        TorusTraces tt{c.row.x, c.row.y, c.row.z1, engine.rho(), c.row.z1, c.row.z2};
        c.label = goldman_classify(tt, classify_tol);
        c.sphere = cv_map(tt);
        c.sphere_class = sphere_real_class(c.sphere, classify_tol);
        out.push_back(c);
    }
    return out;
}

std::vector<SphereCrossing> find_tn_sphere(const FamilyScan& scan, double t_lo, double t_hi, double target,
                                           TransportOptions opt) {
    std::vector<const ScanRow*> rows;
    for (const auto& r : scan.rows)
        if (r.sphere && r.t >= t_lo && r.t <= t_hi) rows.push_back(&r);
    std::vector<SphereCrossing> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const SphereColumns &a = *rows[i - 1]->sphere, &b = *rows[i]->sphere;
        // the paired coordinate turns twice as fast as x, about pi/2 per unit t,
        // so a full turn between samples would pass the ratio test unseen
        if (rows[i]->t - rows[i - 1]->t >= 1.0 || std::abs(std::arg(b.y / a.y)) >= kPi / 2.0)
            throw ConfigError("find_tn_sphere: scan too coarse for phase tracking");
        double fa = a.y.imag(), fb = b.y.imag();
        if (fa == 0.0 || fb == 0.0 || (fa < 0.0) == (fb < 0.0)) continue;
        if (a.y.real() >= -2.0 || b.y.real() >= -2.0) continue;
        // Illinois iteration on the relative imaginary part
        double lo = rows[i - 1]->t, hi = rows[i]->t;
        double flo = fa / std::abs(a.y), fhi = fb / std::abs(b.y);
        SphereColumns best = std::abs(flo) < std::abs(fhi) ? a : b;
        double best_t = std::abs(flo) < std::abs(fhi) ? lo : hi;
        int side = 0;
        for (int it = 0; it < 100 && std::abs(best.y.imag()) / std::abs(best.y) >= target && hi - lo > 1e-15; ++it) {
            double m = (lo * fhi - hi * flo) / (fhi - flo);
            SphereColumns c = sphere_family_traces(scan.rho, m, opt);
            double fm = c.y.imag() / std::abs(c.y);
            best = c;
            best_t = m;
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = m;
                flo = fm;
                if (side == -1) fhi /= 2.0;
                side = -1;
            } else {
                hi = m;
                fhi = fm;
                if (side == 1) flo /= 2.0;
                side = 1;
            }
        }
        SphereCrossing c;
        c.t = best_t;
        c.sphere = best;
        c.sphere_class = sphere_real_class({best.x, best.y, best.z, sphere_mu_from_rho(scan.rho)}, 1e-6);
        out.push_back(c);
    }
    return out;
}

namespace {

template <class C>
double spacing_of(const std::vector<C>& tn, int tail) {
    if (tn.size() < 2) return 0.0;
    std::size_t n = std::min<std::size_t>(tn.size() - 1, static_cast<std::size_t>(std::max(tail, 1)));
    return (tn.back().t - tn[tn.size() - 1 - n].t) / double(n);
}

}  // namespace

double crossing_spacing(const std::vector<CrossingResult>& tn, int tail) { return spacing_of(tn, tail); }
double crossing_spacing(const std::vector<SphereCrossing>& tn, int tail) { return spacing_of(tn, tail); }

}  // namespace mlab
