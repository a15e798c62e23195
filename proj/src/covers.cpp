#include "mlab/covers.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlab/errors.hpp"

namespace mlab {

namespace {

std::vector<int> free_reduce(const std::vector<int>& in) {
    std::vector<int> out;
    for (int l : in) {
        if (l == 0) throw ConfigError("word letters must be nonzero");
        if (!out.empty() && out.back() == -l)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

int mod(int a, int k) { return ((a % k) + k) % k; }

}  // namespace

Word::Word(std::initializer_list<int> letters) : letters_(free_reduce(std::vector<int>(letters))) {}
Word::Word(std::vector<int> letters) : letters_(free_reduce(letters)) {}

Word Word::inverse() const {
    std::vector<int> out(letters_.rbegin(), letters_.rend());
    for (int& l : out) l = -l;
    return Word(out);
}

Word Word::operator*(const Word& o) const {
    std::vector<int> out = letters_;
    out.insert(out.end(), o.letters_.begin(), o.letters_.end());
    return Word(out);
}

Word Word::pow(int n) const {
    Word base = n < 0 ? inverse() : *this;
    Word out;
    for (int i = 0; i < std::abs(n); ++i) out = out * base;
    return out;
}

Word Word::cyclically_reduced() const {
    std::vector<int> l = letters_;
    std::size_t a = 0, b = l.size();
    while (b - a >= 2 && l[a] == -l[b - 1]) {
        ++a;
        --b;
    }
    return Word(std::vector<int>(l.begin() + a, l.begin() + b));
}

Word Word::substitute(int g, const Word& w) const {
    Word wi = w.inverse();
    std::vector<int> out;
    for (int l : letters_) {
        if (l == g)
            out.insert(out.end(), w.letters_.begin(), w.letters_.end());
        else if (l == -g)
            out.insert(out.end(), wi.letters_.begin(), wi.letters_.end());
        else
            out.push_back(l);
    }
    return Word(out);
}

int Word::occurrences(int g) const {
    return static_cast<int>(std::count_if(letters_.begin(), letters_.end(), [g](int l) { return std::abs(l) == g; }));
}

int Word::exponent_sum(int g) const {
    int s = 0;
    for (int l : letters_)
        if (std::abs(l) == g) s += l > 0 ? 1 : -1;
    return s;
}

std::string Word::to_string(const std::string& prefix) const {
    if (letters_.empty()) return "1";
    std::string s;
    for (int l : letters_) {
        if (!s.empty()) s += " ";
        s += prefix + std::to_string(std::abs(l));
        if (l < 0) s += "^-1";
    }
    return s;
}

nlohmann::json to_json(const Word& w) { return w.letters(); }
Word word_from_json(const nlohmann::json& j) { return Word(j.get<std::vector<int>>()); }

Word eliminate_gamma4(const Word& w) { return w.substitute(4, Word{-1, -2, -3}); }

CoverSpec covering_monodromy(int k) {
    if (k < 2) throw DomainError("covering_monodromy: k must be at least 2");
    // (Z^2 - 1)/(Z^2 + 1) has simple zeros at 1, -1 and simple poles at i, -i
    return {k, {mod(1, k), mod(-1, k), mod(1, k), mod(-1, k)}};
}

int deck_value(const CoverSpec& cov, const Word& w) {
    int s = 0;
    for (int l : w.letters()) {
        int g = std::abs(l);
        if (g < 1 || g > 4) throw ConfigError("deck_value: generator index out of range");
        s += l > 0 ? cov.deck[g - 1] : -cov.deck[g - 1];
    }
    return mod(s, cov.k);
}

namespace {

Word gamma1_pow(int n) { return Word{1}.pow(n); }

// Kernel generator index for (coset j, base letter s), 0 if the Schreier
// generator is trivial.
int schreier_index(int k, int j, int s) {
    switch (s) {
        case 1: return j == k - 1 ? 1 : 0;
        case 2: return 2 + j;
        case 3: return 2 + k + j;
        default: throw ConfigError("schreier_index: letter out of range");
    }
}

}  // namespace

std::vector<Word> kernel_generators(const CoverSpec& cov) {
    const int k = cov.k;
    std::vector<Word> out;
    out.push_back(gamma1_pow(k));
    for (int j = 0; j < k; ++j) out.push_back(gamma1_pow(j) * Word{2} * gamma1_pow(-mod(j + cov.deck[1], k)));
    for (int j = 0; j < k; ++j) out.push_back(gamma1_pow(j) * Word{3} * gamma1_pow(-mod(j + cov.deck[2], k)));
    return out;
}

std::optional<Word> rewrite_in_kernel(const CoverSpec& cov, const Word& w) {
    const int k = cov.k;
    Word v = eliminate_gamma4(w);
    std::vector<int> out;
    int j = 0;
    for (int l : v.letters()) {
        int s = std::abs(l);
        if (l > 0) {
            int g = schreier_index(k, j, s);
            if (g) out.push_back(g);
            j = mod(j + cov.deck[s - 1], k);
        } else {
            j = mod(j - cov.deck[s - 1], k);
            int g = schreier_index(k, j, s);
            if (g) out.push_back(-g);
        }
    }
    if (j != 0) return std::nullopt;
    return Word(out);
}

std::vector<Word> puncture_words(const CoverSpec& cov) {
    std::vector<Word> out;
    for (int l = 1; l <= 4; ++l) out.push_back(Word{l}.pow(cov.k));
    return out;
}

namespace {

int slot(int letter) { return letter > 0 ? letter - 1 : 2 - letter; }

}  // namespace

CosetGraph::CosetGraph(const std::vector<Word>& subgroup_generators) {
    // edges as (from, letter > 0, to); folded with union-find until deterministic
    struct Edge {
        int from, letter, to;
    };
    std::vector<Edge> edges;
    int n = 1;
    for (const Word& raw : subgroup_generators) {
        Word w = eliminate_gamma4(raw);
        int cur = 0;
        const auto& l = w.letters();
        for (std::size_t i = 0; i < l.size(); ++i) {
            int to = i + 1 == l.size() ? 0 : n++;
            if (l[i] > 0)
                edges.push_back({cur, l[i], to});
            else
                edges.push_back({to, -l[i], cur});
            cur = to;
        }
    }
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (bool changed = true; changed;) {
        changed = false;
        std::map<std::pair<int, int>, int> out, in;
        for (const Edge& e : edges) {
            int a = find(e.from), b = find(e.to);
            auto [it, fresh] = out.emplace(std::make_pair(a, e.letter), b);
            if (!fresh && find(it->second) != b) {
                parent[find(it->second)] = b;
                changed = true;
                break;
            }
            auto [jt, fresh2] = in.emplace(std::make_pair(b, e.letter), a);
            if (!fresh2 && find(jt->second) != a) {
                parent[find(jt->second)] = a;
                changed = true;
                break;
            }
        }
    }
    // renumber with the base vertex first
    std::map<int, int> id;
    id[find(0)] = 0;
    for (int v = 0; v < n; ++v)
        if (!id.count(find(v))) {
            int next = static_cast<int>(id.size());
            id[find(v)] = next;
        }
    next_.assign(id.size(), {-1, -1, -1, -1, -1, -1});
    for (const Edge& e : edges) {
        int a = id[find(e.from)], b = id[find(e.to)];
        next_[a][slot(e.letter)] = b;
        next_[b][slot(-e.letter)] = a;
    }
}

bool CosetGraph::complete() const {
    for (const auto& row : next_)
        for (int v : row)
            if (v < 0) return false;
    return true;
}

std::optional<int> CosetGraph::index() const {
    if (!complete()) return std::nullopt;
    return vertex_count();
}

bool CosetGraph::contains(const Word& raw) const {
    int v = 0;
    const Word w = eliminate_gamma4(raw);
    for (int l : w.letters()) {
        v = next_[v][slot(l)];
        if (v < 0) return false;
    }
    return v == 0;
}

Mat2C evaluate_word(const std::vector<Mat2C>& images, const Word& w) {
    Mat2C m = Mat2C::identity();
    for (int l : w.letters()) {
        std::size_t g = static_cast<std::size_t>(std::abs(l));
        if (g < 1 || g > images.size()) throw ConfigError("evaluate_word: generator index out of range");
        m = m * (l > 0 ? images[g - 1] : images[g - 1].inverse());
    }
    return m;
}

Mat2C evaluate_word(const Representation& rep, const Word& w) {
    Mat2C m = Mat2C::identity();
    for (int l : w.letters()) {
        const Mat2C& g = rep.at("g" + std::to_string(std::abs(l)));
        m = m * (l > 0 ? g : g.inverse());
    }
    return m;
}

namespace {

LabelWord to_label_word(const Word& w, const std::string& prefix) {
    LabelWord out;
    for (int l : w.letters()) out.push_back({prefix + std::to_string(std::abs(l)), l > 0 ? 1 : -1});
    return out;
}

}  // namespace

Representation pullback_rep(const Representation& rep, const CoverSpec& cov) {
    Representation out;
    auto gens = kernel_generators(cov);
    for (std::size_t i = 0; i < gens.size(); ++i) out.images["h" + std::to_string(i + 1)] = evaluate_word(rep, gens[i]);
    auto punct = puncture_words(cov);
    for (std::size_t l = 0; l < punct.size(); ++l) {
        auto r = rewrite_in_kernel(cov, punct[l]);
        if (!r) throw ConsistencyError("puncture word is not in the kernel");
        out.relations.emplace_back("p" + std::to_string(l + 1), to_label_word(*r, "h"));
    }
    out.check_relations();
    return out;
}

SurfacePresentation tietze_reduce(const CoverSpec& cov) {
    const int n = 2 * cov.k + 1;
    std::vector<Word> rels;
    for (const Word& p : puncture_words(cov)) {
        auto r = rewrite_in_kernel(cov, p);
        if (!r) throw ConsistencyError("puncture word is not in the kernel");
        rels.push_back(r->cyclically_reduced());
    }
    std::map<int, Word> elim;  // over the original kernel indices
    while (rels.size() > 1) {
        std::vector<std::size_t> order(rels.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return rels[a].size() < rels[b].size(); });
        bool done = false;
        for (std::size_t ri : order) {
            const Word r = rels[ri];
            for (int g = 1; g <= n && !done; ++g) {
                if (r.occurrences(g) != 1) continue;
                // rotate r so that g^e comes first: g^e c = 1
                const auto& l = r.letters();
                std::size_t pos = std::find_if(l.begin(), l.end(), [g](int x) { return std::abs(x) == g; }) - l.begin();
                std::vector<int> rot(l.begin() + pos, l.end());
                rot.insert(rot.end(), l.begin(), l.begin() + pos);
                int e = rot.front() > 0 ? 1 : -1;
                Word c(std::vector<int>(rot.begin() + 1, rot.end()));
                Word value = e > 0 ? c.inverse() : c;
                for (auto& [h, w] : elim) w = w.substitute(g, value);
                elim[g] = value;
                rels.erase(rels.begin() + ri);
                for (Word& o : rels) o = o.substitute(g, value).cyclically_reduced();
                done = true;
            }
            if (done) break;
        }
        if (!done) throw ConsistencyError("tietze_reduce: no relator allows an elimination");
    }
    SurfacePresentation out;
    std::map<int, int> relabel;
    for (int g = 1; g <= n; ++g)
        if (!elim.count(g)) {
            out.kept.push_back(g);
            relabel[g] = static_cast<int>(out.kept.size());
        }
    auto renumber = [&](const Word& w) {
        std::vector<int> l;
        for (int x : w.letters()) l.push_back(x > 0 ? relabel.at(x) : -relabel.at(-x));
        return Word(l);
    };
    out.relator = renumber(rels.front().cyclically_reduced());
    for (const auto& [g, w] : elim) out.eliminated[g] = renumber(w);
    return out;
}

SurfacePresentation stored_genus2_presentation() {
    SurfacePresentation p;
    p.kept = {3, 4, 6, 7};
    p.relator = Word{2, 1, -4, -2, -3, -1, 3, 4};
    p.eliminated = {{1, Word{}}, {2, Word{-1, -2}}, {5, Word{-4, -3}}};
    return p;
}

namespace {

constexpr double kTwoPi = 2.0 * kPi;

double ray_angle(const Mat2C& m, double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    double x = m.a11.real() * c + m.a12.real() * s;
    double y = m.a21.real() * c + m.a22.real() * s;
    return std::atan2(y, x);
}

}  // namespace

double LiftedElement::apply(double theta) const {
    // F(theta) - theta is 2 pi periodic with oscillation below pi, so the
    // branch nearest its value at 0 is the continuous one
    double g = ray_angle(base, theta) - theta;
    g += kTwoPi * std::round((lift_angle - g) / kTwoPi);
    return theta + g;
}

LiftedElement LiftedElement::operator*(const LiftedElement& o) const { return {base * o.base, apply(o.lift_angle)}; }

LiftedElement LiftedElement::inverse() const {
    Mat2C inv = base.inverse();
    double t0 = ray_angle(inv, 0.0);
    double m = std::round(-apply(t0) / kTwoPi);
    return {inv, t0 + kTwoPi * m};
}

LiftedElement LiftedElement::canonical(const Mat2C& m) { return {m, ray_angle(m, 0.0)}; }

double translation_number(const LiftedElement& g, int iterations) {
    if (iterations < 1) throw ConfigError("translation_number: iterations must be positive");
    double theta = 0.0;
    for (int i = 0; i < iterations; ++i) theta = g.apply(theta);
    if (!std::isfinite(theta)) throw NumericError("translation_number: iteration diverged");
    return theta / (kTwoPi * iterations);
}

Mat2C real_conjugator(const std::vector<Mat2C>& mats, double tol) {
    using Eigen::Matrix2cd;
    const std::array<Matrix2cd, 4> basis = [] {
        std::array<Matrix2cd, 4> b;
        b[0] << 1, 0, 0, 0;
        b[1] << 0, 1, 1, 0;
        b[2] << 0, cplx(0, 1), cplx(0, -1), 0;
        b[3] << 0, 0, 0, 1;
        return b;
    }();
    auto to_eigen = [](const Mat2C& m) {
        Matrix2cd e;
        e << m.a11, m.a12, m.a21, m.a22;
        return e;
    };
    Eigen::MatrixXd sys(8 * mats.size(), 4);
    for (std::size_t i = 0; i < mats.size(); ++i) {
        Matrix2cd m = to_eigen(mats[i]);
        for (int b = 0; b < 4; ++b) {
            Matrix2cd d = m.adjoint() * basis[b] * m - basis[b];
            for (int e = 0; e < 4; ++e) {
                sys(8 * i + 2 * e, b) = d(e / 2, e % 2).real();
                sys(8 * i + 2 * e + 1, b) = d(e / 2, e % 2).imag();
            }
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys, Eigen::ComputeFullV);
    Eigen::Vector4d h = svd.matrixV().col(3);
    double scale = std::max(1.0, svd.singularValues()(0));
    if (svd.singularValues()(3) > tol * scale) throw DomainError("real_conjugator: no invariant Hermitian form");
    Matrix2cd H = h(0) * basis[0] + h(1) * basis[1] + h(2) * basis[2] + h(3) * basis[3];
    Eigen::SelfAdjointEigenSolver<Matrix2cd> es(H);
    Eigen::Vector2d ev = es.eigenvalues();  // ascending
    if (!(ev(0) < 0.0 && ev(1) > 0.0)) throw DomainError("real_conjugator: invariant form is definite");
    Matrix2cd P;
    P.col(0) = es.eigenvectors().col(1) / std::sqrt(ev(1));
    P.col(1) = es.eigenvectors().col(0) / std::sqrt(-ev(0));
    // P* H P = diag(1, -1); the Cayley matrix W carries SU(1,1) to SL(2,R)
    Matrix2cd W;
    W << 1, cplx(0, -1), 1, cplx(0, 1);
    Matrix2cd Q = P * W;
    Q /= std::sqrt(Q.determinant());
    Mat2C out{Q(0, 0), Q(0, 1), Q(1, 0), Q(1, 1)};
    for (const Mat2C& m : mats) {
        Mat2C r = out.inverse() * m * out;
        for (cplx e : {r.a11, r.a12, r.a21, r.a22})
            if (std::abs(e.imag()) > tol * std::max(1.0, max_abs(m)))
                throw DomainError("real_conjugator: conjugated matrix is not real");
    }
    return out;
}

EulerResult euler_number(const std::vector<Mat2C>& images, const Word& relator) {
    for (const Mat2C& m : images)
        for (cplx e : {m.a11, m.a12, m.a21, m.a22})
            if (std::abs(e.imag()) > 1e-6) throw DomainError("euler_number: representation is not real");
    Mat2C rel = evaluate_word(images, relator);
    if (distance_to_pm_identity(rel).residual > 1e-6) throw ConsistencyError("euler_number: relator is not +-I");
    std::vector<LiftedElement> lifts, inverses;
    for (const Mat2C& m : images) {
        lifts.push_back(LiftedElement::canonical(m));
        inverses.push_back(lifts.back().inverse());
    }
    LiftedElement acc{Mat2C::identity(), 0.0};
    for (int l : relator.letters()) {
        std::size_t g = static_cast<std::size_t>(std::abs(l)) - 1;
        if (g >= images.size()) throw ConfigError("euler_number: generator index out of range");
        acc = acc * (l > 0 ? lifts[g] : inverses[g]);
    }
    EulerResult r;
    r.raw = acc.lift_angle / kTwoPi;
    r.value = static_cast<int>(std::lround(r.raw));
    r.residual = std::abs(r.raw - r.value);
    if (r.residual > 0.1) throw ConsistencyError("euler_number: translation of the relator is not an integer");
    return r;
}

ClosedSurfaceRep closed_surface_rep(const Representation& pulled_back, const SurfacePresentation& pres) {
    std::vector<Mat2C> raw;
    for (int g : pres.kept) raw.push_back(pulled_back.at("h" + std::to_string(g)));
    ClosedSurfaceRep out;
    out.conjugator = real_conjugator(raw);
    Mat2C inv = out.conjugator.inverse();
    for (const Mat2C& m : raw) {
        Mat2C r = inv * m * out.conjugator;
        out.images.push_back({cplx(r.a11.real()), cplx(r.a12.real()), cplx(r.a21.real()), cplx(r.a22.real())});
    }
    out.relator = pres.relator;
    return out;
}

}  // namespace mlab
