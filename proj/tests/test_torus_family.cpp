#include <doctest.h>

#include "mlab/characters.hpp"
#include "mlab/torus.hpp"
#include "mlab/torus_family.hpp"

using namespace mlab;

TEST_CASE("engine agrees with adaptive transport at small t") {
    FamilyEngine e(1.0 / 6.0);
    for (double t : {0.0, 0.5, 2.0}) {
        auto row = e.evaluate(t);
        auto m = torus_monodromy(family_t(t, 1.0 / 6.0));
        CHECK(std::abs(row.x - m.x) < 1e-7 * std::max(1.0, std::abs(m.x)));
        CHECK(std::abs(row.y - m.y) < 1e-7 * std::max(1.0, std::abs(m.y)));
        CHECK(std::abs(row.z1 - m.z1) < 1e-7 * std::max(1.0, std::abs(m.z1)));
    }
}

TEST_CASE("t = 0 row") {
    FamilyEngine e(1.0 / 6.0);
    auto row = e.evaluate(0.0);
    CHECK(std::abs(row.x) < 1e-10);
    CHECK(std::abs(row.z1 * row.z1 - 3.0) < 1e-10);
    CHECK(row.residual < 1e-10);
    CHECK(row.comm_defect < 1e-10);
    CHECK(row.det_defect < 1e-12);
}

TEST_CASE("precision tiers grow with t") {
    CHECK(FamilyEngine::digits_needed(0.0) <= FamilyEngine::digits_needed(20.0));
    CHECK(FamilyEngine::digits_needed(20.0) <= FamilyEngine::digits_needed(60.0));
    CHECK(FamilyEngine::digits_needed(60.0) >= 90);
    CHECK(FamilyEngine::max_t() >= 60.0);
}

TEST_CASE("multiprecision rows stay on the variety") {
    FamilyEngine e(1.0 / 6.0);
    for (double t : {8.0, 20.0}) {
        auto row = e.evaluate(t);
        CHECK(row.residual < 1e-5);
        CHECK(std::abs(row.z1.imag()) < 1e-4);
        CHECK(std::abs(row.z2.imag()) < 1e-4 * std::max(1.0, std::abs(row.z2)));
        CHECK(row.identity_residual < 1e-6 * std::max(1.0, std::abs(row.z2)));
        CHECK(row.digits >= FamilyEngine::digits_needed(t));
    }
}

TEST_CASE("tier choice does not change the answer") {
    FamilyEngine e(1.0 / 6.0);
    auto lo = e.evaluate_with_digits(5.0, 32), hi = e.evaluate_with_digits(5.0, 52);
    CHECK(std::abs(lo.x - hi.x) < 1e-12 * std::abs(hi.x));
    CHECK(std::abs(lo.z1 - hi.z1) < 1e-10);
}

TEST_CASE("real crossing refinement") {
    FamilyEngine e(1.0 / 6.0);
    auto row = e.refine_real_crossing(13.5, 14.5);
    CHECK(std::abs(row.x.imag()) < 1e-9);
    CHECK(std::abs(row.x) > 2.0);
    CHECK(row.t == doctest::Approx(13.9975).epsilon(1e-4));
    CHECK(reality_conclusion(row.x, row.z1, row.z2, 1e-6) == Reality::YRealForced);
    CHECK(std::abs(row.y.imag()) < 1e-6 * std::abs(row.y));
}
