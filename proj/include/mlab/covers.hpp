#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlab/sl2.hpp"
#include "mlab/transport.hpp"

namespace mlab {

// Element of a free group as signed generator indices, e.g. {1, -2, 3}.
// Always freely reduced.
class Word {
public:
    Word() = default;
    Word(std::initializer_list<int> letters);
    explicit Word(std::vector<int> letters);

    const std::vector<int>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }

    Word inverse() const;
    Word operator*(const Word& o) const;
    Word pow(int n) const;
    // Conjugate so that no cancellation happens across the ends.
    Word cyclically_reduced() const;
    // Replace every occurrence of generator g (and g^-1) by w (and w^-1).
    Word substitute(int g, const Word& w) const;
    int occurrences(int g) const;
    int exponent_sum(int g) const;

    bool operator==(const Word& o) const { return letters_ == o.letters_; }
    std::string to_string(const std::string& prefix = "g") const;

private:
    std::vector<int> letters_;
};

nlohmann::json to_json(const Word& w);
Word word_from_json(const nlohmann::json& j);

// gamma4 in terms of gamma1..gamma3, from gamma4 gamma3 gamma2 gamma1 = 1.
Word eliminate_gamma4(const Word& w);

// Cyclic cover of the four-punctured sphere: gamma_l -> deck[l-1] in Z/k.
struct CoverSpec {
    int k = 0;
    std::array<int, 4> deck{};
};

CoverSpec covering_monodromy(int k);
int deck_value(const CoverSpec& cov, const Word& w);

// Schreier generators of the kernel of F<gamma1, gamma2, gamma3> -> Z/k with
// transversal {gamma1^j}: first gamma1^k, then gamma1^j gamma2 gamma1^-(j-1),
// then gamma1^j gamma3 gamma1^-(j+1), j = 0..k-1 (exponents mod k).
std::vector<Word> kernel_generators(const CoverSpec& cov);

// Rewrites a kernel element (letters 1..4) as a word in the kernel generators
// (indices 1..2k+1 in the order above). Empty if w is not in the kernel.
std::optional<Word> rewrite_in_kernel(const CoverSpec& cov, const Word& w);

// Loops around the preimages of the punctures: gamma_l^k.
std::vector<Word> puncture_words(const CoverSpec& cov);

// Coset graph of a finitely generated subgroup of F<gamma1, gamma2, gamma3>,
// built by folding the generator loops.
class CosetGraph {
public:
    explicit CosetGraph(const std::vector<Word>& subgroup_generators);

    int vertex_count() const { return static_cast<int>(next_.size()); }
    // Every vertex has an outgoing edge for each letter.
    bool complete() const;
    std::optional<int> index() const;
    bool contains(const Word& w) const;

private:
    std::vector<std::array<int, 6>> next_;  // letter +-1..+-3 -> vertex or -1
};

// gens "g1".."g4" of rep; letters act in written order.
Mat2C evaluate_word(const Representation& rep, const Word& w);
Mat2C evaluate_word(const std::vector<Mat2C>& images, const Word& w);

// Pulled back representation on generators "h1".."h{2k+1}", with the
// puncture words "p1".."p4" as relations (checked against +-I).
Representation pullback_rep(const Representation& rep, const CoverSpec& cov);

// One-relator presentation obtained from the kernel generators and the
// rewritten puncture words by Tietze eliminations.
struct SurfacePresentation {
    std::vector<int> kept;  // kernel generator indices, in order; new index i+1 refers to kept[i]
    Word relator;           // over the new indices
    std::map<int, Word> eliminated;  // kernel index -> word over the new indices
};

SurfacePresentation tietze_reduce(const CoverSpec& cov);
// Fixed presentation for k = 3, produced by tietze_reduce and stored as data.
SurfacePresentation stored_genus2_presentation();

// Element of the universal cover of SL(2,R) acting on the ray circle: the
// lift of the ray map of base with F(0) = lift_angle.
struct LiftedElement {
    Mat2C base;
    double lift_angle = 0.0;

    double apply(double theta) const;
    LiftedElement operator*(const LiftedElement& o) const;
    LiftedElement inverse() const;

    // Lift with F(0) in (-pi, pi].
    static LiftedElement canonical(const Mat2C& m);
};

// lim F^n(0) / (2 pi n), in full turns of the ray circle. Error below 1/(2n).
double translation_number(const LiftedElement& g, int iterations = 4096);

// Conjugator P with P^-1 M P real for every M, from an invariant indefinite
// Hermitian form. Throws DomainError when no such form exists.
Mat2C real_conjugator(const std::vector<Mat2C>& mats, double tol = 1e-6);

struct EulerResult {
    double raw = 0.0;  // translation of the lifted relator in full turns
    int value = 0;
    double residual = 0.0;  // |raw - value|
};

// Translation number of the product of canonical lifts along the relator.
// Images must be real to 1e-6 and the relator must evaluate to +-I.
EulerResult euler_number(const std::vector<Mat2C>& images, const Word& relator);

struct ClosedSurfaceRep {
    std::vector<Mat2C> images;  // real images of the kept generators
    Word relator;
    Mat2C conjugator;
};

ClosedSurfaceRep closed_surface_rep(const Representation& pulled_back, const SurfacePresentation& pres);

}  // namespace mlab
