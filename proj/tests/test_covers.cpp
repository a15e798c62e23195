#include <doctest.h>

#include "mlab/connections.hpp"
#include "mlab/covers.hpp"
#include "mlab/errors.hpp"
#include "mlab/transport.hpp"

using namespace mlab;

TEST_CASE("free words") {
    Word w{1, 2, -2, 3};
    CHECK(w == Word{1, 3});
    CHECK((w * w.inverse()).empty());
    CHECK(Word{-1, 2, 3, 1}.cyclically_reduced() == Word{2, 3});
    CHECK(Word{1, 2}.pow(-2) == Word{-2, -1, -2, -1});
    CHECK(Word{1, 2, -1}.substitute(1, Word{3, 4}) == Word{3, 4, 2, -4, -3});
    CHECK(Word{1, -2, 1}.exponent_sum(1) == 2);
    CHECK(Word{1, -2, 1}.occurrences(2) == 1);
    CHECK(Word{1, -2}.to_string() == "g1 g2^-1");
    CHECK(word_from_json(to_json(Word{3, -1, 2})) == Word{3, -1, 2});
    CHECK_THROWS_AS(Word({1, 0}), ConfigError);
}

TEST_CASE("covering monodromy") {
    auto s3 = covering_monodromy(3);
    CHECK(s3.deck == std::array<int, 4>{1, 2, 1, 2});
    auto s2 = covering_monodromy(2);
    CHECK(s2.deck == std::array<int, 4>{1, 1, 1, 1});
    for (int k = 2; k <= 9; ++k) CHECK(deck_value(covering_monodromy(k), Word{4, 3, 2, 1}) == 0);
    CHECK(eliminate_gamma4(Word{4}) == Word{-1, -2, -3});
    CHECK_THROWS_AS(covering_monodromy(1), DomainError);
}

TEST_CASE("kernel generators") {
    for (int k : {2, 3, 4, 5}) {
        auto cov = covering_monodromy(k);
        auto gens = kernel_generators(cov);
        CHECK(gens.size() == static_cast<std::size_t>(2 * k + 1));
        for (const Word& w : gens) CHECK(deck_value(cov, w) == 0);
        CosetGraph graph(gens);
        if (k <= 4) {
            CHECK(graph.complete());
            CHECK(graph.index() == k);
        }
        CHECK(graph.contains(Word{1}.pow(k)));
        CHECK_FALSE(graph.contains(Word{1}));
        CHECK(graph.contains(Word{4}.pow(k)));
    }
}

TEST_CASE("rewriting into kernel generators") {
    auto cov = covering_monodromy(3);
    auto gens = kernel_generators(cov);
    CHECK_FALSE(rewrite_in_kernel(cov, Word{1}).has_value());
    Word w{2, 1, 3, -1, 4, 4, 2};
    REQUIRE(deck_value(cov, w) == 0);
    auto r = rewrite_in_kernel(cov, w);
    REQUIRE(r.has_value());
    // substituting the generators back returns the original element
    std::vector<int> letters;
    for (int l : r->letters()) {
        Word g = l > 0 ? gens[l - 1] : gens[-l - 1].inverse();
        letters.insert(letters.end(), g.letters().begin(), g.letters().end());
    }
    CHECK(Word(letters) == eliminate_gamma4(w));
}

TEST_CASE("word evaluation") {
    std::vector<Mat2C> imgs{Mat2C{1.0, 1.0, 0.0, 1.0}, Mat2C{2.0, 0.0, 1.0, 0.5}};
    CHECK(dist(evaluate_word(imgs, Word{}), Mat2C::identity()) == 0.0);
    Word w{1, -2, 1};
    CHECK(dist(evaluate_word(imgs, w * w.inverse()), Mat2C::identity()) < 1e-12);
    auto rep = four_pole_monodromy(build_D(1.0 / 3.0));
    for (const Word& g : kernel_generators(covering_monodromy(3)))
        CHECK(dist(evaluate_word(rep, g), Mat2C::identity()) < 1e-7);
}

TEST_CASE("pullback of D and nabla tilde at k = 3") {
    auto cov = covering_monodromy(3);
    auto pd = pullback_rep(four_pole_monodromy(build_D(1.0 / 3.0)), cov);
    for (const auto& [name, m] : pd.images) CHECK(dist(m, Mat2C::identity()) < 1e-7);
    auto pn = pullback_rep(four_pole_monodromy(build_nabla_tilde(1.0 / 3.0)), cov);
    CHECK(pn.checks.size() == 4);
    for (const auto& c : pn.checks) CHECK(c.residual < 1e-6);
    CHECK(pn.max_det_defect() < 1e-7);
}

TEST_CASE("genus-2 presentation") {
    auto cov = covering_monodromy(3);
    auto fresh = tietze_reduce(cov);
    auto stored = stored_genus2_presentation();
    CHECK(fresh.kept == stored.kept);
    CHECK(fresh.relator == stored.relator);
    CHECK(fresh.kept.size() == 4);
    for (int g = 1; g <= 4; ++g) {
        CHECK(fresh.relator.occurrences(g) == 2);
        CHECK(fresh.relator.exponent_sum(g) == 0);
    }
}

TEST_CASE("genus grows with k") {
    for (int k : {5, 7}) {
        auto p = tietze_reduce(covering_monodromy(k));
        CHECK(p.kept.size() == static_cast<std::size_t>(2 * (k - 1)));
    }
}

TEST_CASE("translation numbers") {
    for (double th : {0.3, -1.2, 2.5}) {
        Mat2C rot{std::cos(th), -std::sin(th), std::sin(th), std::cos(th)};
        auto g = LiftedElement::canonical(rot);
        CHECK(translation_number(g) == doctest::Approx(th / (2.0 * kPi)).epsilon(1e-9));
        LiftedElement shifted{rot, g.lift_angle + 2.0 * kPi};
        CHECK(translation_number(shifted) == doctest::Approx(th / (2.0 * kPi) + 1.0).epsilon(1e-9));
    }
    CHECK(std::abs(translation_number(LiftedElement::canonical(Mat2C::diag(3.0, 1.0 / 3.0)))) < 1e-3);
    Mat2C m{1.3, 0.4, -0.2, 0.7};
    m = m * (1.0 / std::sqrt(m.det()));
    auto a = LiftedElement::canonical(m);
    auto e = a * a.inverse();
    CHECK(std::abs(e.lift_angle) < 1e-12);
}

TEST_CASE("Euler numbers") {
    Word rel{1, 2, -1, -2, 3, 4, -3, -4};
    std::vector<Mat2C> trivial(4, Mat2C::identity());
    CHECK(euler_number(trivial, rel).value == 0);

    auto cov = covering_monodromy(3);
    auto pb = pullback_rep(four_pole_monodromy(build_nabla_tilde(1.0 / 3.0)), cov);
    auto cs = closed_surface_rep(pb, stored_genus2_presentation());
    auto e = euler_number(cs.images, cs.relator);
    CHECK(std::abs(e.value) == 1);
    CHECK(e.residual < 0.1);
    auto flipped = euler_number(cs.images, cs.relator.inverse());
    CHECK(flipped.value == -e.value);

    std::vector<Mat2C> complex_imgs(4, Mat2C::diag(kI, -kI));
    CHECK_THROWS_AS(euler_number(complex_imgs, rel), DomainError);
}

TEST_CASE("real form of a Fuchsian pullback") {
    auto cov = covering_monodromy(3);
    auto pb = pullback_rep(four_pole_monodromy(build_nabla_tilde(1.0 / 3.0)), cov);
    auto cs = closed_surface_rep(pb, stored_genus2_presentation());
    for (const Mat2C& m : cs.images) {
        CHECK(std::abs(m.det() - 1.0) < 1e-7);
        CHECK(std::abs(m.trace().real()) > 2.0);  // closed geodesics of a hyperbolic surface
    }
    CHECK(distance_to_pm_identity(evaluate_word(cs.images, cs.relator)).residual < 1e-6);
    std::vector<Mat2C> loxodromic{Mat2C::diag(cplx(2.0, 1.0), 1.0 / cplx(2.0, 1.0)), Mat2C{1.0, 1.0, 0.0, 1.0}};
    CHECK_THROWS_AS(real_conjugator(loxodromic), DomainError);
}
