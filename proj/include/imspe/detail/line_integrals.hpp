#pragma once

// Scalar-generic one-dimensional integrals over [-1, 1] (and [0, 1] for the
// unit-domain exponential pair).  Instantiated for double and float128.

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "imspe/kernels.hpp"

namespace imspe::detail {

template <class T>
T pi_v() {
    return boost::math::constants::pi<T>();
}

inline constexpr std::array<double, 5> kMomentScale{0.5, 0.25, 0.25, 0.375, 0.75};  // k!/2^(k+1)

// Coefficients in s of P(s) P(s + D), where P is the Matern polynomial factor.
template <class T>
std::array<T, 5> matern_product_poly(Family f, const T& D) {
    if (f == Family::Matern32) return {1 + D, 2 + D, T(1), T(0), T(0)};
    const T q0 = 1 + D + D * D / 3;
    const T q1 = 1 + 2 * D / 3;
    const T q2 = T(1) / 3;
    return {q0, q1 + q0, q2 + q1 + q0 / 3, q2 + q1 / 3, q2 / 3};
}

// Integral over [0, D] of P(s) P(D - s), written symmetrically about D/2.
template <class T>
T matern_middle(Family f, const T& D) {
    const T h = D / 2;
    if (f == Family::Matern32) return D * (1 + h) * (1 + h) - D * D * D / 12;
    const T A = 1 + h + h * h / 3;
    const T B = 1 + 2 * h / 3;
    const T h3 = h * h * h;
    return 2 * (A * A * h + (2 * A / 3 - B * B) * h3 / 3 + h3 * h * h / 45);
}

template <class T>
T matern_rate(Family f, const T& theta) {
    using std::sqrt;
    return sqrt((f == Family::Matern32 ? 3 : 5) * theta);
}

// Integral over [0, U] of poly(s) e^{-2s}.
template <class T>
T poly_exp_lower(const std::array<T, 5>& p, const T& U) {
    T sum = 0;
    for (int k = 0; k < 5; ++k) {
        if (p[k] == 0) continue;
        sum += p[k] * T(kMomentScale[k]) * boost::math::gamma_p(T(k + 1), 2 * U);
    }
    return sum;
}

// Integral over [U, inf) of poly(s) e^{-2s}.
template <class T>
T poly_exp_upper(const std::array<T, 5>& p, const T& U) {
    T sum = 0;
    for (int k = 0; k < 5; ++k) {
        if (p[k] == 0) continue;
        sum += p[k] * T(kMomentScale[k]) * boost::math::gamma_q(T(k + 1), 2 * U);
    }
    return sum;
}

template <class T>
T poly_exp_full(const std::array<T, 5>& p) {
    T sum = 0;
    for (int k = 0; k < 5; ++k) sum += p[k] * T(kMomentScale[k]);
    return sum;
}

// Half the integral over [-1, 1] of corr1(a - x).
template <class T>
T border1(Family f, const T& a, const T& theta) {
    using std::erf;
    using std::exp;
    using std::expm1;
    using std::sqrt;
    switch (f) {
        case Family::ExpP1:
            return -(expm1(-theta * (1 + a)) + expm1(-theta * (1 - a))) / (2 * theta);
        case Family::GaussP2: {
            const T r = sqrt(theta);
            return sqrt(pi_v<T>() / (16 * theta)) * (erf(r * (1 + a)) + erf(r * (1 - a)));
        }
        case Family::Matern32: {
            const T c = matern_rate(f, theta);
            const T u1 = c * (1 + a), u2 = c * (1 - a);
            return (-2 * expm1(-u1) - u1 * exp(-u1) - 2 * expm1(-u2) - u2 * exp(-u2)) / (2 * c);
        }
        case Family::Matern52: {
            const T c = matern_rate(f, theta);
            const T u1 = c * (1 + a), u2 = c * (1 - a);
            return (-8 * expm1(-u1) - (5 * u1 + u1 * u1) * exp(-u1) - 8 * expm1(-u2) -
                    (5 * u2 + u2 * u2) * exp(-u2)) /
                   (6 * c);
        }
    }
    return T(0);
}

// Half the integral over [-1, 1] of corr1(a - x) corr1(b - x).
template <class T>
T pair1(Family f, T a, T b, const T& theta) {
    using std::erf;
    using std::exp;
    using std::expm1;
    using std::sqrt;
    if (b < a) std::swap(a, b);
    const T delta = b - a;
    switch (f) {
        case Family::ExpP1: {
            const T e = exp(-theta * delta);
            return e * (-expm1(-2 * theta * (1 + a)) - expm1(-2 * theta * (1 - b))) / (4 * theta) + delta * e / 2;
        }
        case Family::GaussP2: {
            const T m = (a + b) / 2;
            const T r = sqrt(2 * theta);
            return sqrt(pi_v<T>() / (32 * theta)) * (erf(r * (1 + m)) + erf(r * (1 - m))) *
                   exp(-theta * delta * delta / 2);
        }
        case Family::Matern32:
        case Family::Matern52: {
            const T c = matern_rate(f, theta);
            const T D = c * delta;
            const auto p = matern_product_poly(f, D);
            const T pieces = poly_exp_lower(p, c * (1 + a)) + poly_exp_lower(p, c * (1 - b)) + matern_middle(f, D);
            return exp(-D) * pieces / (2 * c);
        }
    }
    return T(0);
}

// Integral over [0, 1] of e^{-theta|a - x|} e^{-theta|b - x|}.
template <class T>
T unit_exp_pair(T a, T b, const T& theta) {
    using std::exp;
    using std::expm1;
    if (b < a) std::swap(a, b);
    const T delta = b - a;
    const T e = exp(-theta * delta);
    return e * (-expm1(-2 * theta * a) - expm1(-2 * theta * (1 - b))) / (2 * theta) + delta * e;
}

// Whole-line counterparts: border1 -> line_border1 - border_tail1, pair1 -> line_pair1 - pair_tail1.
template <class T>
T line_border1(Family f, const T& theta) {
    using std::sqrt;
    switch (f) {
        case Family::ExpP1: return 1 / theta;
        case Family::GaussP2: return sqrt(pi_v<T>() / (4 * theta));
        case Family::Matern32: return 2 / matern_rate(f, theta);
        case Family::Matern52: return 8 / (3 * matern_rate(f, theta));
    }
    return T(0);
}

template <class T>
T border_tail1(Family f, const T& a, const T& theta) {
    using std::erfc;
    using std::exp;
    using std::sqrt;
    switch (f) {
        case Family::ExpP1:
            return (exp(-theta * (1 + a)) + exp(-theta * (1 - a))) / (2 * theta);
        case Family::GaussP2: {
            const T r = sqrt(theta);
            return sqrt(pi_v<T>() / (16 * theta)) * (erfc(r * (1 + a)) + erfc(r * (1 - a)));
        }
        case Family::Matern32: {
            const T c = matern_rate(f, theta);
            const T u1 = c * (1 + a), u2 = c * (1 - a);
            return ((2 + u1) * exp(-u1) + (2 + u2) * exp(-u2)) / (2 * c);
        }
        case Family::Matern52: {
            const T c = matern_rate(f, theta);
            const T u1 = c * (1 + a), u2 = c * (1 - a);
            return ((8 + 5 * u1 + u1 * u1) * exp(-u1) + (8 + 5 * u2 + u2 * u2) * exp(-u2)) / (6 * c);
        }
    }
    return T(0);
}

template <class T>
T line_pair1(Family f, const T& delta_signed, const T& theta) {
    using std::abs;
    using std::exp;
    using std::sqrt;
    const T delta = abs(delta_signed);
    switch (f) {
        case Family::ExpP1: return (1 + theta * delta) * exp(-theta * delta) / (2 * theta);
        case Family::GaussP2: return sqrt(pi_v<T>() / (8 * theta)) * exp(-theta * delta * delta / 2);
        case Family::Matern32:
        case Family::Matern52: {
            const T c = matern_rate(f, theta);
            const T D = c * delta;
            const auto p = matern_product_poly(f, D);
            return exp(-D) * (2 * poly_exp_full(p) + matern_middle(f, D)) / (2 * c);
        }
    }
    return T(0);
}

template <class T>
T pair_tail1(Family f, T a, T b, const T& theta) {
    using std::erfc;
    using std::exp;
    using std::sqrt;
    if (b < a) std::swap(a, b);
    const T delta = b - a;
    switch (f) {
        case Family::ExpP1:
            return (exp(-theta * (2 + a + b)) + exp(-theta * (2 - a - b))) / (4 * theta);
        case Family::GaussP2: {
            const T m = (a + b) / 2;
            const T r = sqrt(2 * theta);
            return sqrt(pi_v<T>() / (32 * theta)) * (erfc(r * (1 + m)) + erfc(r * (1 - m))) *
                   exp(-theta * delta * delta / 2);
        }
        case Family::Matern32:
        case Family::Matern52: {
            const T c = matern_rate(f, theta);
            const T D = c * delta;
            const auto p = matern_product_poly(f, D);
            return exp(-D) * (poly_exp_upper(p, c * (1 + a)) + poly_exp_upper(p, c * (1 - b))) / (2 * c);
        }
    }
    return T(0);
}

}  // namespace imspe::detail
