#pragma once

#include <array>
#include <utility>
#include <vector>

namespace imspe {

// Pair midpoint and signed half-separation of a one-dimensional two-point design.
struct ClusterCoords {
    double x_t = 0.0;
    double delta = 0.0;
};

ClusterCoords to_cluster(double x1, double x2);
std::pair<double, double> from_cluster(const ClusterCoords& c);

// IMSPE ~ c0 + c2 * theta * delta^2, remainder O(theta^2 delta^4).  Gaussian kernel only.
struct ExpansionSeries {
    double c0 = 0.0;
    double c2 = 0.0;
    static constexpr const char* remainder_order = "O(theta^2 delta^4)";
};

// Coefficients written out term by term.
ExpansionSeries expansion_gauss(double x_t, double theta);

// Same coefficients assembled from the delta-ladder of the border element R(x_t, delta, theta)
// and its theta-doubled copy.
ExpansionSeries expansion_gauss_from_ladder(double x_t, double theta);

// Coefficients of erf[sqrt(c theta)(1 + x_t + delta)] + erf[sqrt(c theta)(1 - x_t - delta)]
// in powers of sqrt(c theta) delta, orders 0..4.
struct ErfPairExpansion {
    std::array<double, 5> coeff{};
};
ErfPairExpansion erf_pair_expansion(double x_t, double theta, double c);

// Second-order coefficient at the domain centre.  Negative for every theta > 0.
double st_term(double theta);

double imspe_quadratic(double theta, double x_t, double delta);

// Border element R(x_t, delta, theta) = R_{0,1} of the Gaussian two-point design and
// the three operators acting on its arguments.
struct BorderArgs {
    double x_t;
    double delta;
    double theta;
};
double border_element(const BorderArgs& a);
BorderArgs op_sign_flip(BorderArgs a);   // delta -> -delta
BorderArgs op_double_theta(BorderArgs a);  // theta -> 2 theta
BorderArgs op_zero_delta(BorderArgs a);  // delta -> 0

// Gaussian two-point IMSPE written through the three operators.  Throws DomainError at delta = 0.
double imspe_operator_form(double theta, double x_t, double delta);

// Gaussian two-point IMSPE in cluster coordinates; switches to the quadratic model
// once sqrt(theta) |delta| drops below 1e-4.
double imspe_cluster_gauss(double theta, double x_t, double delta);

// Richardson extrapolation of (IMSPE(delta) - c0) / (theta delta^2) over deltas halving at each level.
double extract_c2(double theta, double x_t, double c0, const std::vector<double>& deltas);

// Richardson extrapolation of IMSPE(delta) to delta -> 0.
double extract_c0(double theta, double x_t, const std::vector<double>& deltas);

}  // namespace imspe
