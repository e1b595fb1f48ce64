#pragma once

#include <vector>

#include "imspe/kernels.hpp"

namespace imspe {

// Basic integrals on [-1, 1] (half the integral, i.e. the domain average).
// Pair integrals accept either argument order.
double i1(double a, double theta);                 // exponential, border
double i2(double a, double b, double theta);       // exponential, pair
double i3(double a, double theta);                 // Gaussian, border
double i4(double a, double b, double theta);       // Gaussian, pair
double i5(double a, double theta);                 // Matern 3/2, border
double i6(double a, double b, double theta);       // Matern 3/2, pair
double i7(double a, double theta);                 // Matern 5/2, border
double i8(double a, double b, double theta);       // Matern 5/2, pair

// Exponential kernel on the unit interval [0, 1] (plain integral, no 1/2).
double j1(double a, double theta);
double j2(double a, double b, double theta);

// Per-dimension dispatch by family.
double border_integral(Family f, double a, double theta);
double pair_integral(Family f, double a, double b, double theta);

// R_{0,i} and R_{i,j} for d-dimensional points: products of the per-dimension integrals.
double r_border(const KernelSpec& k, const Point& xi);
double r_inner(const KernelSpec& k, const Point& xi, const Point& xj);

// Unit-cube exponential-kernel counterparts, coordinates in [0, 1].
double j_border(const std::vector<double>& theta, const Point& xi);
double j_inner(const std::vector<double>& theta, const Point& xi, const Point& xj);

}  // namespace imspe
