#include <doctest.h>

#include <sstream>

#include "mlab/errors.hpp"
#include "mlab/wkb.hpp"

using namespace mlab;

namespace {
PathFamilyData constant_family(cplx alpha, Mat2C B, std::vector<double> ts) {
    PathFamilyData d;
    d.alpha = [=](double) { return alpha; };
    d.B = [=](double) { return B; };
    d.t_grid = std::move(ts);
    return d;
}
}  // namespace

TEST_CASE("scaled limit without off-diagonal coupling") {
    const cplx alpha(-1.0, 0.5);
    auto rep = scaled_limit_check(constant_family(alpha, Mat2C{}, {1, 5, 20}));
    for (const auto& r : rep.rows) {
        CHECK(max_abs(r.scaled - Mat2C::diag(1.0, std::exp(2.0 * r.t * alpha))) < 1e-8);
        CHECK(r.deviation == doctest::Approx(std::abs(std::exp(2.0 * r.t * alpha))).epsilon(1e-6));
    }
}

TEST_CASE("constant coefficients against the matrix exponential") {
    const cplx alpha(-0.8, 0.3);
    const Mat2C B{0.1, cplx(0.2, 0.1), -0.3, -0.1};
    auto rep = scaled_limit_check(constant_family(alpha, B, {2, 10, 40}));
    for (const auto& r : rep.rows) CHECK(max_abs(r.scaled - scaled_transport_closed_form(alpha, B, r.t)) < 1e-8);
}

TEST_CASE("deviation decays like 1/t") {
    auto rep = scaled_limit_check(constant_family(cplx(-1.0, 0.5), Mat2C{0.2, 0.3, 0.25, -0.2},
                                                  {20, 30, 40, 60, 80, 100, 140, 200}));
    CHECK(rep.slope == doctest::Approx(-1.0).epsilon(0.2));
    CHECK(rep.tail_monotone);
    CHECK(rep.rows.back().trace_deviation < 1e-3);
    auto j = rep.to_json();
    CHECK(j["rows"].size() == 8);
}

TEST_CASE("scaled limit rejects growing exponents") {
    CHECK_THROWS_AS(scaled_limit_check(constant_family(cplx(0.5, 0.0), Mat2C{}, {1})), DomainError);
}

TEST_CASE("homogeneous decay") {
    DecayProblem p;
    p.alpha = [](double) { return cplx(1.0); };
    p.beta = [](double) { return cplx(0.2); };
    p.g = [](double) { return cplx(0.0); };
    p.f_start = 1e-3;
    p.delta = 0.1;
    for (double t : {5.0, 20.0}) {
        auto f = decay_solution(p, t, {0.1, 0.5, 1.0});
        for (auto [i, s] : {std::pair{0, 0.1}, {1, 0.5}, {2, 1.0}}) {
            cplx exact = 1e-3 * std::exp(-(t + 0.2) * s);
            CHECK(std::abs(f[i] - exact) < 5e-11 + 1e-8 * std::abs(exact));
        }
        auto rep = decay_check(p, {t});
        CHECK(rep.rows[0].sup <= 1e-3 * std::exp(-t * 0.1) + 1e-12);
    }
}

TEST_CASE("forced decay against the exact integral") {
    DecayProblem p;
    const cplx c(3.0, 1.0), g(0.5, -0.2);
    p.alpha = [](double) { return cplx(1.0); };
    p.beta = [](double) { return cplx(0.0, 1.0); };
    p.g = [=](double) { return g; };
    p.f_start = 0.1;
    const double t = 3.0;
    auto f = decay_solution(p, t, {0.25, 0.75});
    for (auto [i, s] : {std::pair{0, 0.25}, {1, 0.75}}) {
        cplx exact = g / c + (p.f_start - g / c) * std::exp(-c * s);
        CHECK(std::abs(f[i] - exact) < 1e-9);
    }
    p.mirrored = true;
    auto m = decay_solution(p, t, {0.25});
    cplx exact = -g / c + (p.f_start + g / c) * std::exp(-c * 0.75);
    CHECK(std::abs(m[0] - exact) < 1e-9);
}

TEST_CASE("decay constant is stable under doubling") {
    DecayProblem p;
    p.alpha = [](double) { return cplx(1.0); };
    p.beta = [](double) { return cplx(0.0); };
    p.g = [](double) { return cplx(1.0); };
    p.f_start = 1.0;
    auto rep = decay_check(p, {100, 200, 400});
    CHECK(rep.max_ratio_change < 0.25);
    CHECK(rep.to_json()["rows"].size() == 3);
}

TEST_CASE("grid and side parsing") {
    CHECK(make_grid(0, 60, 0.05).size() == 1201);
    CHECK(make_grid(0, 1, 0.5) == std::vector<double>{0, 0.5, 1});
    CHECK_THROWS_AS(make_grid(1, 0, 0.1), ConfigError);
    CHECK(parse_side("both") == ScanSide::Both);
    CHECK_THROWS_AS(parse_side("left"), ConfigError);
    CHECK(FamilyScan::csv_columns().size() == 28);
}

TEST_CASE("torus and sphere scans agree") {
    FamilyEngine e(1.0 / 6.0);
    auto scan = family_scan(e, {0.0, 0.5, 1.0, 2.0}, ScanSide::Both);
    REQUIRE(scan.rows.size() == 4);
    const auto& r0 = scan.rows[0];
    REQUIRE(r0.torus);
    CHECK(std::abs(r0.torus->x) < 1e-5);
    CHECK(std::abs(std::abs(r0.torus->z1) - std::sqrt(3.0)) < 1e-5);
    for (const auto& r : scan.rows) {
        REQUIRE(r.sphere);
        CHECK(r.error.empty());
        CHECK(std::abs(r.torus->z1.imag()) < 1e-5);
        CHECK(std::abs(r.torus->z2.imag()) < 1e-5);
        CHECK(std::abs(2.0 - r.torus->x * r.torus->x - r.sphere->y) < 1e-4);
        CHECK(r.sphere->consistency < 1e-4);
        CHECK(std::abs(r.torus->z2 - (r.torus->x * r.torus->y - r.torus->z1)) < 1e-6);
    }
}

TEST_CASE("csv output is deterministic") {
    FamilyEngine e(1.0 / 6.0);
    auto a = family_scan(e, {0.0, 1.0}, ScanSide::Torus), b = family_scan(e, {1.0, 0.0}, ScanSide::Torus);
    std::ostringstream sa, sb;
    a.write_csv(sa);
    b.write_csv(sb);
    CHECK(sa.str() == sb.str());
    std::istringstream in(sa.str());
    std::string header;
    std::getline(in, header);
    CHECK(std::count(header.begin(), header.end(), ',') == 27);
}

TEST_CASE("window estimator") {
    FamilyScan scan;
    const cplx C(0.3, -0.9);
    for (double t = 10; t <= 60; t += 1) {
        ScanRow r;
        r.t = t;
        r.torus = FamilyRow{};
        r.scaled_x = C * (1.0 + 0.5 / (t * t));
        scan.rows.push_back(r);
    }
    auto a = estimate_C(scan, 30, 45), b = estimate_C(scan, 30, 60);
    CHECK(std::abs(a.value - C) < 1e-3);
    CHECK(std::abs(a.value - b.value) < a.error_bar);
    CHECK_THROWS_AS(estimate_C(scan, 10, 60, 1e-4), NumericError);
    CHECK_THROWS_AS(estimate_C(scan, 100, 200), NumericError);
}

TEST_CASE("real crossings on a short window") {
    FamilyEngine e(1.0 / 6.0);
    auto scan = family_scan(e, make_grid(10, 19, 0.5), ScanSide::Torus);
    auto tn = find_tn(scan, e, 10, 19);
    REQUIRE(tn.size() == 2);
    for (const auto& c : tn) {
        CHECK(std::abs(c.row.x.imag()) < 1e-9);
        CHECK(std::abs(c.row.y.imag()) < 1e-6 * std::abs(c.row.y));
        CHECK(c.label.kind == ComponentLabel::Kind::SL2RNoncompact);
        CHECK(c.reality == Reality::YRealForced);
    }
    CHECK(crossing_spacing(tn) == doctest::Approx(4.0).epsilon(0.05));
    auto coarse = family_scan(e, {10.0, 14.0}, ScanSide::Torus);
    CHECK_THROWS_AS(find_tn(coarse, e), ConfigError);
}

TEST_CASE("sphere-side crossings match the torus ones") {
    FamilyEngine e(1.0 / 6.0);
    auto torus = find_tn(family_scan(e, make_grid(10, 19, 0.5), ScanSide::Torus), e, 10, 19);
    auto sphere = find_tn_sphere(family_scan(1.0 / 6.0, make_grid(10, 19, 0.5), ScanSide::Sphere), 10, 19);
    REQUIRE(sphere.size() == torus.size());
    for (std::size_t i = 0; i < sphere.size(); ++i) {
        CHECK(sphere[i].t == doctest::Approx(torus[i].t).epsilon(1e-6));
        CHECK(sphere[i].sphere_class == SphereRealClass::Noncompact);
        CHECK(sphere[i].sphere.y.real() < -2.0);
    }
    CHECK_THROWS_AS(find_tn_sphere(family_scan(1.0 / 6.0, {10.0, 14.0}, ScanSide::Sphere)), ConfigError);
}
