#include "mlab/torus_family.hpp"

#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <mutex>
#include <optional>

#include "mlab/errors.hpp"
#include "mlab/series.hpp"
#include "mlab/torus.hpp"
#include "mlab/weierstrass.hpp"

namespace mlab {

namespace bmp = boost::multiprecision;

namespace {

template <unsigned D>
using Fixed = bmp::number<bmp::mpfr_float_backend<D, bmp::allocate_stack>, bmp::et_off>;

template <class R>
double to_double(const R& r) {
    return static_cast<double>(r);
}

template <class R>
cplx to_cplx(const std::complex<R>& z) {
    return {to_double(z.real()), to_double(z.imag())};
}

template <class R>
double magnitude(const std::complex<R>& z) {
    return std::abs(to_double(z.real())) + std::abs(to_double(z.imag()));
}

// Taylor integrator for the t-family along gamma_x and gamma_y at a fixed
// scalar type. The off-diagonal series on every step do not depend on t and
// are computed once; t only shifts the constant diagonal.
template <class R>
class TaylorFamily {
public:
    using C = std::complex<R>;
    using M = Mat2<C>;

    struct Step {
        C beta;  // step vector h v
        series::Series<C> m12, m21;
    };

    TaylorFamily(double rho) : rho_(rho), sigma_(std::numeric_limits<R>::digits10) {
        const R pi = sigma_.pi();
        chi_ = C(pi / R(4), -pi / R(4));
        a0_ = C(-pi / R(4), -pi / R(4));
        kappa_ = R(2) * cos(R(2) * pi * rho_);
        C d_plus = C(R(2)) * chi_ / pi;  // multiplier solution with zero branch integers
        C d_minus = -d_plus;
        sig_dp_ = sigma_(-d_plus);
        sig_dm_ = sigma_(-d_minus);
        d_plus_ = d_plus;
        d_minus_ = d_minus;
        const int digits = std::numeric_limits<R>::digits10;
        nmax_ = static_cast<std::size_t>((digits + 12) / std::log10(5.0)) + 40;
        eps_ = std::pow(10.0, -digits - 2);
        const C p0(R(0.25), R(0.25));
        x_ = build_segment(p0, C(R(1), R(0)));
        y_ = build_segment(p0, C(R(0), R(1)));
    }

    struct Result {
        M X, Y;
    };

    M propagate(const std::vector<Step>& steps, const C& a) const {
        M psi = M::identity();
        std::vector<C> p1(nmax_ + 1), p2(nmax_ + 1), q1(nmax_ + 1), q2(nmax_ + 1);
        for (const Step& st : steps) {
            const C delta = -(a * st.beta + chi_ * conj(st.beta));
            // columns (p1, p2) and (q1, q2) of psi advance together
            p1[0] = psi.a11;
            p2[0] = psi.a21;
            q1[0] = psi.a12;
            q2[0] = psi.a22;
            C s_p1 = p1[0], s_p2 = p2[0], s_q1 = q1[0], s_q2 = q2[0];
            const double dmag = magnitude(delta);
            double prev_mag = 1e300;
            std::size_t k = 0;
            for (;; ++k) {
                if (k + 1 >= nmax_) throw AccuracyError("taylor series did not converge within the precomputed order");
                C n_p1 = delta * p1[k], n_p2 = -delta * p2[k];
                C n_q1 = delta * q1[k], n_q2 = -delta * q2[k];
                for (std::size_t j = 0; j <= k; ++j) {
                    const C& m12 = st.m12[j];
                    const C& m21 = st.m21[j];
                    n_p1 += m12 * p2[k - j];
                    n_p2 += m21 * p1[k - j];
                    n_q1 += m12 * q2[k - j];
                    n_q2 += m21 * q1[k - j];
                }
                const R inv = R(1) / R(double(k + 1));
                p1[k + 1] = n_p1 * inv;
                p2[k + 1] = n_p2 * inv;
                q1[k + 1] = n_q1 * inv;
                q2[k + 1] = n_q2 * inv;
                s_p1 += p1[k + 1];
                s_p2 += p2[k + 1];
                s_q1 += q1[k + 1];
                s_q2 += q2[k + 1];
                double mag = std::max({magnitude(p1[k + 1]), magnitude(p2[k + 1]), magnitude(q1[k + 1]),
                                       magnitude(q2[k + 1])});
                double scale = std::max({magnitude(s_p1), magnitude(s_p2), magnitude(s_q1), magnitude(s_q2)});
                if (double(k) > dmag && mag < eps_ * scale && prev_mag < eps_ * scale) break;
                prev_mag = mag;
            }
            psi = {s_p1, s_q1, s_p2, s_q2};
        }
        return psi;
    }

    C a_of(const R& t) const { return (R(1) - t) * a0_; }

    M transport_x(const R& t) const { return propagate(x_, a_of(t)); }
    M transport_y(const R& t) const { return propagate(y_, a_of(t)); }

    FamilyRow row(const R& t, int digits) const {
        M X = transport_x(t), Y = transport_y(t);
        C x = X.trace(), y = Y.trace();
        C z1 = (Y * X).trace();
        M Yi = Y.adjugate() * (C(R(1)) / Y.det());
        M Xi = X.adjugate() * (C(R(1)) / X.det());
        C z2 = (Yi * X).trace();
        C res = x * x + y * y + z1 * z1 - x * y * z1 - C(R(2) + kappa_);
        C ident = z2 - (x * y - z1);
        C comm = (Yi * Xi * Y * X).trace() - C(kappa_);
        FamilyRow r;
        r.t = to_double(t);
        r.x = to_cplx(x);
        r.y = to_cplx(y);
        r.z1 = to_cplx(z1);
        r.z2 = to_cplx(z2);
        r.residual = std::abs(to_cplx(res));
        r.identity_residual = std::abs(to_cplx(ident));
        r.comm_defect = std::abs(to_cplx(comm));
        r.det_defect = std::max(std::abs(to_cplx(C(X.det() - C(R(1))))), std::abs(to_cplx(C(Y.det() - C(R(1))))));
        r.digits = digits;
        auto down = [](const M& m) { return Mat2C{to_cplx(m.a11), to_cplx(m.a12), to_cplx(m.a21), to_cplx(m.a22)}; };
        r.X = down(X);
        r.Y = down(Y);
        return r;
    }

    // Illinois iteration on Im x(t) at this precision.
    FamilyRow refine(double lo, double hi, double target, int digits) const {
        R a(lo), b(hi);
        R fa = transport_x(a).trace().imag();
        R fb = transport_x(b).trace().imag();
        if (fa * fb > 0) throw NumericError("refine_real_crossing: Im x does not change sign on the bracket");
        int side = 0;
        R c = b;
        for (int it = 0; it < 200; ++it) {
            c = (a * fb - b * fa) / (fb - fa);
            R fc = transport_x(c).trace().imag();
            if (std::abs(to_double(fc)) < target) break;
            if (fc * fb > 0) {
                b = c;
                fb = fc;
                if (side == -1) fa /= R(2);
                side = -1;
            } else {
                a = c;
                fa = fc;
                if (side == 1) fb /= R(2);
                side = 1;
            }
        }
        return row(c, digits);
    }

private:
    std::vector<Step> build_segment(const C& start, const C& v) const {
        std::vector<Step> steps;
        double s = 0.0;
        const cplx vd = to_cplx(v), sd = to_cplx(start);
        while (s < 1.0) {
            cplx w = sd + s * vd;
            double dist = std::abs(w - cplx(std::round(w.real()), std::round(w.imag())));
            // breakpoints are doubles, but each step length is formed in R so the
            // segment closes exactly at working precision
            double next = dist / 5.0 >= 1.0 - s ? 1.0 : s + dist / 5.0;
            steps.push_back(make_step(start + C(R(s)) * v, C(R(next) - R(s)) * v));
            s = next;
        }
        return steps;
    }

    Step make_step(const C& w0, const C& beta) const {
        const std::size_t n = nmax_;
        auto s0 = sigma_.taylor(w0, beta, n);
        auto sp = sigma_.taylor(w0 - d_plus_, beta, n);
        auto sm = sigma_.taylor(w0 - d_minus_, beta, n);
        auto hp = series::div(sp, s0, n);
        auto hm = series::div(sm, s0, n);
        const C cp = C(R(rho_)) / sig_dp_, cm = C(R(rho_)) / sig_dm_;
        for (auto& c : hp) c *= cp;
        for (auto& c : hm) c *= cm;
        const C two_chi = C(R(2)) * chi_;
        auto ep = series::exp_linear(two_chi * conj(w0), two_chi * conj(beta), n);
        auto em = series::exp_linear(-two_chi * conj(w0), -two_chi * conj(beta), n);
        auto gp = series::mul(ep, hp, n);
        auto gm = series::mul(em, hm, n);
        Step st;
        st.beta = beta;
        st.m12.resize(n);
        st.m21.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            st.m12[k] = -beta * gm[k];
            st.m21[k] = -beta * gp[k];
        }
        return st;
    }

    R rho_;
    SquareSigma<R> sigma_;
    C chi_, a0_;
    R kappa_;
    C d_plus_, d_minus_, sig_dp_, sig_dm_;
    std::size_t nmax_ = 0;
    double eps_ = 0.0;
    std::vector<Step> x_, y_;
};

struct TierSpec {
    int digits;
    double t_max;
};

// Rounding errors in the transport get amplified by roughly |x|^2 once the
// traces of products are formed, about 1.26 t digits; digits_needed adds headroom.
constexpr TierSpec kTiers[] = {{15, 2.0}, {32, 15.0}, {52, 30.0}, {72, 46.0}, {100, 67.0}, {128, 89.0}};

}  // namespace

struct FamilyEngine::Impl {
    double rho;
    std::once_flag f0, f1, f2, f3, f4, f5;
    std::unique_ptr<TaylorFamily<double>> e0;
    std::unique_ptr<TaylorFamily<Fixed<32>>> e1;
    std::unique_ptr<TaylorFamily<Fixed<52>>> e2;
    std::unique_ptr<TaylorFamily<Fixed<72>>> e3;
    std::unique_ptr<TaylorFamily<Fixed<100>>> e4;
    std::unique_ptr<TaylorFamily<Fixed<128>>> e5;

    template <class E>
    const E& get(std::once_flag& flag, std::unique_ptr<E>& slot) {
        std::call_once(flag, [&] { slot = std::make_unique<E>(rho); });
        return *slot;
    }

    template <class F>
    auto with_tier(int tier, F&& f) {
        switch (tier) {
            case 0: return f(get(f0, e0));
            case 1: return f(get(f1, e1));
            case 2: return f(get(f2, e2));
            case 3: return f(get(f3, e3));
            case 4: return f(get(f4, e4));
            default: return f(get(f5, e5));
        }
    }
};

FamilyEngine::FamilyEngine(double rho) : rho_(rho), impl_(std::make_unique<Impl>()) {
    if (!(rho > 0.0 && rho < 0.5)) throw DomainError("rho must lie in (0, 1/2)");
    impl_->rho = rho;
}

FamilyEngine::~FamilyEngine() = default;

int FamilyEngine::digits_needed(double t) { return static_cast<int>(std::ceil(1.3 * std::max(t, 0.0) + 12.0)); }

double FamilyEngine::max_t() { return kTiers[std::size(kTiers) - 1].t_max; }

namespace {

int tier_for_digits(int digits) {
    for (std::size_t i = 0; i < std::size(kTiers); ++i)
        if (kTiers[i].digits >= digits) return static_cast<int>(i);
    throw ConfigError("requested precision exceeds the largest supported tier");
}

int tier_for_t(double t) {
    if (t > FamilyEngine::max_t()) throw ConfigError("t beyond the supported family range");
    for (std::size_t i = 0; i < std::size(kTiers); ++i)
        if (t <= kTiers[i].t_max) return static_cast<int>(i);
    return static_cast<int>(std::size(kTiers)) - 1;
}

}  // namespace

FamilyRow FamilyEngine::evaluate(double t) const {
    int tier = tier_for_t(std::abs(t));
    return impl_->with_tier(tier, [&](const auto& e) {
        using R = typename std::decay_t<decltype(e)>::C::value_type;
        return e.row(R(t), kTiers[tier].digits);
    });
}

FamilyRow FamilyEngine::evaluate_with_digits(double t, int digits) const {
    int tier = tier_for_digits(digits);
    return impl_->with_tier(tier, [&](const auto& e) {
        using R = typename std::decay_t<decltype(e)>::C::value_type;
        return e.row(R(t), kTiers[tier].digits);
    });
}

FamilyRow FamilyEngine::refine_real_crossing(double lo, double hi, double target) const {
    int tier = std::max(tier_for_t(hi), 1);
    return impl_->with_tier(tier, [&](const auto& e) { return e.refine(lo, hi, target, kTiers[tier].digits); });
}

}  // namespace mlab
