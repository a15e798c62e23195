#pragma once

#include <cstddef>
#include <vector>

// Truncated power series over a complex scalar type C (std::complex<double> or
// a multiprecision complex). Index k holds the coefficient of u^k.
namespace mlab::series {

template <class C>
using Series = std::vector<C>;

template <class C>
Series<C> mul(const Series<C>& a, const Series<C>& b, std::size_t n) {
    Series<C> c(n, C(0));
    for (std::size_t k = 0; k < n; ++k) {
        C acc(0);
        std::size_t jmax = std::min(k, a.size() - 1);
        for (std::size_t j = 0; j <= jmax; ++j)
            if (k - j < b.size()) acc += a[j] * b[k - j];
        c[k] = acc;
    }
    return c;
}

template <class C>
Series<C> div(const Series<C>& a, const Series<C>& b, std::size_t n) {
    Series<C> c(n, C(0));
    C inv = C(1) / b[0];
    for (std::size_t k = 0; k < n; ++k) {
        C acc = k < a.size() ? a[k] : C(0);
        for (std::size_t j = 1; j <= k && j < b.size(); ++j) acc -= b[j] * c[k - j];
        c[k] = acc * inv;
    }
    return c;
}

// exp(c0 + c1 u)
template <class C>
Series<C> exp_linear(const C& c0, const C& c1, std::size_t n) {
    Series<C> s(n);
    C term = exp(c0);
    for (std::size_t k = 0; k < n; ++k) {
        s[k] = term;
        term = term * c1 / C(double(k + 1));
    }
    return s;
}

// exp(c0 + c1 u + c2 u^2), from (k+1) f_{k+1} = c1 f_k + 2 c2 f_{k-1}
template <class C>
Series<C> exp_quadratic(const C& c0, const C& c1, const C& c2, std::size_t n) {
    Series<C> s(n, C(0));
    if (n == 0) return s;
    s[0] = exp(c0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        C acc = c1 * s[k];
        if (k >= 1) acc += C(2) * c2 * s[k - 1];
        s[k + 1] = acc / C(double(k + 1));
    }
    return s;
}

template <class C>
C evaluate(const Series<C>& s, const C& u) {
    C acc(0);
    for (std::size_t k = s.size(); k-- > 0;) acc = acc * u + s[k];
    return acc;
}

}  // namespace mlab::series
