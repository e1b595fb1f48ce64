#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "imspe/kernels.hpp"

namespace imspe {

struct Design {
    std::size_t d = 1;
    std::vector<Point> points;
    bool strict = true;

    std::size_t n() const { return points.size(); }
};

// Validates dimensions and domain; a strict design also rejects coincident points.
Design make_design(std::size_t d, std::vector<Point> points, bool strict = true);

// Convenience for one-dimensional designs.
Design line_design(const std::vector<double>& xs, bool strict = true);

struct ImspeMatrices {
    Eigen::MatrixXd L;  // [[0, 1^T], [1, V]]
    Eigen::MatrixXd R;  // [[1, R0^T], [R0, Rij]]
    double imspe = 0.0;
    double condition_estimate = 0.0;  // 1-norm condition estimate of the correlation block V
};

enum class Precision { Double, Extended };

// Assembles L and R and evaluates 1 - tr(L^{-1} R) by a bordered symmetric solve.
// Throws NearSingularError for coincident or numerically coincident points.
ImspeMatrices build_matrices(const KernelSpec& k, const Design& design);

// IMSPE only.  Extended precision (113-bit significand) is for strongly
// ill-conditioned designs such as small-theta clusters.
double imspe_value(const KernelSpec& k, const Design& design, Precision precision = Precision::Double);

// n = 1 closed forms, 2 (1 - R_{0,1}).
double imspe_closed_n1(Family f, double theta, double x1);

// Exponential kernel, n = 2, d = 1, closed form.  Throws DomainError when x1 == x2.
double imspe_closed_n2_exp(double theta, double x1, double x2);

// n = 2, d = 1 for any family, through the closed 3x3 inverse; the Gaussian case
// stays accurate as the two points merge.
double imspe_n2(Family f, double theta, double x1, double x2);

// IMSPE split as constant(k, n) + excess(k, design), where the constant is the limit
// for points infinitely far apart and from the boundary.  The excess is assembled
// from boundary tails and pair overlaps only, so it keeps full relative accuracy
// when those are far below the rounding level of the IMSPE itself.
double excess_constant(const KernelSpec& k, std::size_t n);
double imspe_excess(const KernelSpec& k, const Design& design);

struct Interval {
    double lo;
    double hi;
};

// Affine change of domain for the exponential kernel: returns (theta', x') with
// theta' |x1' - x2'| = theta |x1 - x2|.
std::pair<double, double> domain_transform(double theta, double x, Interval from, Interval to);

// Exponential-kernel IMSPE on the unit cube [0, 1]^d.
double imspe_unit_exp(const std::vector<double>& theta, const Design& unit_design);

}  // namespace imspe
