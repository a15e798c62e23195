#pragma once

#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "mlab/series.hpp"

namespace mlab {

// Weierstrass sigma function of the square lattice Z + iZ through the odd
// Jacobi theta function at nome q = e^{-pi}:
//   sigma(z) = exp(pi z^2 / 2) theta1(pi z) / (pi theta1'(0)),
// with quasi-periods eta(1) = pi, eta(i) = -i pi.
template <class R>
class SquareSigma {
public:
    using C = std::complex<R>;

    explicit SquareSigma(int digits = std::numeric_limits<R>::digits10) {
        pi_ = boost::math::constants::pi<R>();
        int terms = static_cast<int>(std::sqrt((digits + 8) * 2.302585093 / 3.14159265) + 2.0);
        R theta_prime(0);
        for (int n = 0; n < terms; ++n) {
            R half = R(n) + R(0.5);
            R w = R(2) * exp(-pi_ * half * half);
            if (n % 2) w = -w;
            weights_.push_back(w);
            theta_prime += w * R(2 * n + 1);
        }
        norm_ = R(1) / (pi_ * theta_prime);
    }

    const R& pi() const { return pi_; }
    C eta_one() const { return C(pi_, R(0)); }
    C eta_i() const { return C(R(0), -pi_); }

    C theta1(const C& v) const {
        C s(0);
        for (std::size_t n = 0; n < weights_.size(); ++n) s += weights_[n] * sin(C(R(2 * n + 1)) * v);
        return s;
    }

    C operator()(const C& z) const { return exp(pi_ * z * z / R(2)) * theta1(pi_ * z) * norm_; }

    // Taylor coefficients of u -> sigma(zeta + beta u), u in [0, 1].
    series::Series<C> taylor(const C& zeta, const C& beta, std::size_t n) const {
        auto gauss = series::exp_quadratic(pi_ * zeta * zeta / R(2), pi_ * zeta * beta, pi_ * beta * beta / R(2), n);
        series::Series<C> th(n, C(0));
        for (std::size_t m = 0; m < weights_.size(); ++m) {
            R odd(2 * m + 1);
            C alpha = odd * pi_ * zeta;
            C gamma = odd * pi_ * beta;
            C sa = sin(alpha), ca = cos(alpha);
            C g(weights_[m]);
            for (std::size_t k = 0; k < n; ++k) {
                // k-th derivative of sin cycles through sin, cos, -sin, -cos
                switch (k % 4) {
                    case 0: th[k] += g * sa; break;
                    case 1: th[k] += g * ca; break;
                    case 2: th[k] -= g * sa; break;
                    default: th[k] -= g * ca; break;
                }
                g = g * gamma / R(double(k + 1));
            }
        }
        auto out = series::mul(gauss, th, n);
        for (auto& c : out) c *= norm_;
        return out;
    }

private:
    R pi_;
    R norm_;
    std::vector<R> weights_;
};

}  // namespace mlab
