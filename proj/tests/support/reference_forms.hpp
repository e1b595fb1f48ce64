#pragma once

// Fully expanded closed forms, written out independently of the library and used only as
// cross-checks.  Valid for -1 <= a <= b <= 1.

#include <cmath>

#include <Eigen/Dense>

namespace imspe_test {

// Matern 3/2 pair integral.
inline double i6_expanded(double a_, double b_, double theta_) {
    using std::exp;
    using std::sqrt;
    using T = long double;
    const T a = a_, b = b_, th = theta_;
    const T s = sqrt(th), r3 = sqrt(T(3));
    const T A = exp(r3 * s * a), B = exp(r3 * s * b), E = exp(r3 * s);
    const T A2 = A * A, B2 = B * B, E2 = E * E, t32 = th * s;
    const T sum = 5 * r3 + 18 * s + 6 * r3 * b * th + 24 * r3 * A2 * th * a * b * E2 + 6 * r3 * A2 * B2 * a * b * th +
                  6 * r3 * a * th - 9 * A2 * B2 * a * s + 6 * A2 * E2 * a * a * a * t32 -
                  6 * A2 * E2 * b * b * b * t32 + 30 * a * A2 * E2 * s - 30 * A2 * E2 * b * s + 6 * r3 * A2 * B2 * th -
                  9 * A2 * B2 * b * s + 6 * r3 * a * b * th + 6 * r3 * th - 18 * A2 * E2 * a * a * b * t32 +
                  18 * A2 * E2 * a * b * b * t32 - 12 * r3 * A2 * th * a * a * E2 - 12 * r3 * A2 * th * b * b * E2 -
                  6 * r3 * A2 * B2 * a * th - 6 * r3 * A2 * B2 * b * th + 18 * A2 * B2 * s + 5 * r3 * A2 * B2 -
                  10 * r3 * A2 * E2 + 9 * a * s + 9 * b * s;
    return static_cast<double>(-sum / (24 * A * B * E2 * s));
}

// Matern 5/2 pair integral.
inline double i8_expanded(double a_, double b_, double theta_) {
    using std::exp;
    using std::sqrt;
    using T = long double;
    const T a = a_, b = b_, th = theta_;
    const T s = sqrt(th), r5 = sqrt(T(5));
    const T A = exp(s * r5 * a), B = exp(s * r5 * b), E = exp(s * r5);
    const T A2 = A * A, B2 = B * B, E2 = E * E;
    const T AB = A2 * B2, AE = A2 * E2;
    const T t2 = th * th, t32 = th * s, t52 = t2 * s;
    const T a2 = a * a, b2 = b * b, a3 = a2 * a, b3 = b2 * b, a4 = a2 * a2, b4 = b2 * b2, a5 = a4 * a, b5 = b4 * b;
    T sum = 189 * r5 + 600 * b2 * t32 + 1800 * b * t32 + 150 * AB * r5 * t2 - 675 * AB * a * s + 150 * r5 * a2 * th +
            810 * r5 * th + 150 * r5 * b2 * th + 600 * a2 * b * t32 + 600 * a * b2 * t32 + 2400 * a * b * t32 +
            150 * r5 * b2 * t2 + 1200 * t32 + 1350 * s + 810 * r5 * b * th + 675 * b * s + 150 * r5 * a2 * t2 +
            810 * r5 * a * th + 300 * b * r5 * t2 + 300 * a * r5 * t2 + 510 * r5 * a * b * th + 150 * r5 * t2 +
            1890 * AE * a * s - 1890 * AE * b * s + 810 * r5 * AB * th - 675 * AB * b * s + 1050 * AE * a3 * t32 +
            600 * r5 * a * b * t2 + 150 * r5 * a2 * b2 * t2 + 300 * r5 * a2 * b * t2 + 300 * r5 * a * b2 * t2 +
            675 * a * s - 1050 * AE * b3 * t32 - 50 * AE * b5 * t52 + 50 * a5 * AE * t52 + 600 * a2 * t32 +
            1200 * AB * t32 - 250 * a4 * AE * b * t52 + 500 * a3 * AE * b2 * t52 + 150 * r5 * AB * b2 * t2 +
            150 * r5 * AB * a2 * t2 + 250 * AE * a * b4 * t52 - 500 * AE * a2 * b3 * t52 + 600 * t32 * AB * a2;
    sum += -150 * r5 * t2 * AE * a4 - 150 * r5 * t2 * AE * b4 + 600 * t32 * AB * b2 - 1800 * t32 * AB * a -
           1800 * t32 * AB * b + 150 * r5 * AB * a2 * th - 300 * AB * a * r5 * t2 - 300 * AB * b * r5 * t2 +
           1350 * AB * s - 378 * AE * r5 + 189 * AB * r5 - 810 * r5 * AB * a * th - 3150 * AE * a2 * b * t32 +
           3150 * AE * a * b2 * t32 + 150 * r5 * AB * b2 * th - 810 * r5 * AB * b * th - 840 * r5 * AE * th * a2 -
           840 * r5 * AE * th * b2 + 1800 * a * t32 + 150 * r5 * AB * a2 * b2 * t2 + 600 * r5 * AB * a * b * t2 -
           300 * r5 * AB * a * b2 * t2 - 300 * r5 * AB * a2 * b * t2 - 600 * t32 * AB * a2 * b;
    sum += 600 * r5 * t2 * AE * a3 * b - 900 * r5 * t2 * AE * a2 * b2 + 600 * r5 * t2 * AE * a * b3 -
           600 * t32 * AB * a * b2 + 2400 * t32 * AB * a * b + 510 * r5 * AB * a * b * th +
           1680 * r5 * AE * th * a * b;
    return static_cast<double>(-sum / (1080 * B * A * s * E2));
}

// Exponential kernel, two points on [-1, 1], six-term form.
inline double imspe_exp_n2_expanded(double th, double x1, double x2) {
    using std::cosh;
    using std::exp;
    const double d = std::abs(x1 - x2), E = exp(-th * d);
    return (3 + E) / 2 + (E - exp(-2 * th) * cosh(th * (x1 + x2)) + th * d * E) / (2 * th * (1 - E)) -
           (1 - exp(-th) * cosh(th * x1)) / th - (1 - exp(-2 * th) * cosh(2 * th * x1)) / (4 * th * (1 - E)) -
           (1 - exp(-th) * cosh(th * x2)) / th - (1 - exp(-2 * th) * cosh(2 * th * x2)) / (4 * th * (1 - E));
}

// Gaussian two-point design: explicit L^{-1} and R blocks assembled as matrices and traced.
inline double imspe_gauss_n2_blocks(double th, double x1, double x2) {
    using std::erf;
    using std::exp;
    using std::sqrt;
    const double pi = 3.14159265358979323846;
    const double V = exp(-th * (x1 - x2) * (x1 - x2));
    Eigen::Matrix3d Li;
    Li << -1 - V, 1, 1, 1, 1 / (1 - V), -1 / (1 - V), 1, -1 / (1 - V), 1 / (1 - V);
    Li *= 0.5;
    auto r0 = [&](double x) { return sqrt(pi / (16 * th)) * (erf(sqrt(th) * (1 + x)) + erf(sqrt(th) * (1 - x))); };
    auto rr = [&](double x) {
        return sqrt(pi / (32 * th)) * (erf(sqrt(2 * th) * (1 + x)) + erf(sqrt(2 * th) * (1 - x)));
    };
    const double m = (x1 + x2) / 2;
    const double r12 = rr(m) * exp(-th * (x1 - x2) * (x1 - x2) / 2);
    Eigen::Matrix3d R;
    R << 1, r0(x1), r0(x2), r0(x1), rr(x1), r12, r0(x2), r12, rr(x2);
    return 1 - (Li * R).trace();
}

}  // namespace imspe_test
