#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string_view>
#include <vector>

namespace imspe {

enum class Family { ExpP1, Matern32, Matern52, GaussP2 };

inline constexpr std::array<Family, 4> kFamilies{Family::ExpP1, Family::Matern32, Family::Matern52,
                                                 Family::GaussP2};

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

using Point = std::vector<double>;

struct KernelSpec {
    Family family = Family::GaussP2;
    std::vector<double> theta;

    std::size_t dim() const { return theta.size(); }
};

// Rejects empty, non-finite or non-positive theta.
KernelSpec make_kernel(Family family, std::vector<double> theta);

// Throws unless p has d finite coordinates in [-1, 1].
void check_point(const Point& p, std::size_t d);

// One-dimensional correlation at coordinate difference delta.
template <class T>
T corr1(Family f, const T& theta, const T& delta) {
    using std::abs;
    using std::exp;
    using std::sqrt;
    if (delta == 0) return T(1);
    const T ad = abs(delta);
    switch (f) {
        case Family::ExpP1:
            return exp(-theta * ad);
        case Family::Matern32: {
            const T s = sqrt(3 * theta) * ad;
            return (1 + s) * exp(-s);
        }
        case Family::Matern52: {
            const T s = sqrt(5 * theta) * ad;
            return (1 + s + s * s / 3) * exp(-s);
        }
        case Family::GaussP2:
            return exp(-theta * ad * ad);
    }
    return T(0);
}

// 1 - corr1, without cancellation at small separations.
template <class T>
T one_minus_corr1(Family f, const T& theta, const T& delta) {
    using std::abs;
    using std::expm1;
    using std::sqrt;
    const T ad = abs(delta);
    if (f == Family::ExpP1) return -expm1(-theta * ad);
    if (f == Family::GaussP2) return -expm1(-theta * ad * ad);
    const T s = sqrt(T(f == Family::Matern32 ? 3 : 5) * theta) * ad;
    if (s >= T(0.5)) return 1 - corr1(f, theta, delta);
    // Taylor series of 1 - P(s) e^{-s}; coefficients (-1)^k c_k / k! with c_k from P.
    T sum = 0, term = 1;
    for (int k = 1; k <= 30; ++k) {
        term *= -s / k;
        const T c = (f == Family::Matern32) ? T(1 - k) : T(1 - k) + T(k) * (k - 1) / 3;
        sum -= c * term;
    }
    return sum;
}

// V entry: product of per-dimension correlations between two design points.
double corr_pair(const KernelSpec& k, const Point& xi, const Point& xj);

// v entry: correlation between a design point and a free coordinate (may lie outside the domain).
double corr_point(const KernelSpec& k, const Point& xi, const std::vector<double>& x);

}  // namespace imspe
