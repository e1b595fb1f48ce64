#include "imspe/cluster.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/hermite.hpp>
#include <boost/multiprecision/float128.hpp>

#include "imspe/detail/line_integrals.hpp"
#include "imspe/errors.hpp"
#include "imspe/imspe.hpp"

namespace imspe {

namespace {

using boost::multiprecision::float128;

void check_theta(double theta) {
    if (!std::isfinite(theta) || theta <= 0.0) throw ValidationError("theta must be finite and > 0");
}

void check_xt(double x_t) {
    if (!std::isfinite(x_t) || x_t < -1.0 || x_t > 1.0) throw ValidationError("x_t outside [-1, 1]");
}

// Both members of the pair must stay in the domain.
void check_pair(double x_t, double delta) {
    check_xt(x_t);
    if (!std::isfinite(delta) || std::abs(x_t) + std::abs(delta) > 1.0)
        throw ValidationError("cluster pair leaves [-1, 1]");
}

// k-th derivative of erf.
double erf_derivative(unsigned k, double y) {
    if (k == 0) return std::erf(y);
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    return sign * 2.0 / std::sqrt(std::numbers::pi) * boost::math::hermite(k - 1, y) * std::exp(-y * y);
}

constexpr double kSwitch = 1e-4;

}  // namespace

ClusterCoords to_cluster(double x1, double x2) {
    for (double x : {x1, x2})
        if (!std::isfinite(x) || x < -1.0 || x > 1.0) throw ValidationError("design coordinate outside [-1, 1]");
    const double x_t = 0.5 * (x1 + x2);
    return {x_t, x1 - x_t};
}

std::pair<double, double> from_cluster(const ClusterCoords& c) {
    return {c.x_t + c.delta, c.x_t - c.delta};
}

ExpansionSeries expansion_gauss(double x_t, double theta) {
    check_theta(theta);
    check_xt(x_t);
    const double p = 1.0 + x_t, m = 1.0 - x_t;
    const double rt = std::sqrt(theta), rt2 = std::sqrt(2.0 * theta);
    const double pi = std::numbers::pi;
    const double e2p = std::exp(-2.0 * theta * p * p), e2m = std::exp(-2.0 * theta * m * m);
    const double e1p = std::exp(-theta * p * p), e1m = std::exp(-theta * m * m);
    const double erf1 = std::erf(rt * p) + std::erf(rt * m);
    const double erf2 = std::erf(rt2 * p) + std::erf(rt2 * m);
    const double k2 = std::sqrt(pi / (128.0 * theta));

    ExpansionSeries s;
    s.c0 = 2.0 + 0.25 * (p * e2p + m * e2m) - std::sqrt(pi / (4.0 * theta)) * erf1 - k2 * erf2;
    s.c2 = -2.0 + (0.25 + theta * p * p / 3.0) * p * e2p + (0.25 + theta * m * m / 3.0) * m * e2m +
           (p * e1p + m * e1m) - k2 * erf2;
    return s;
}

ErfPairExpansion erf_pair_expansion(double x_t, double theta, double c) {
    check_theta(theta);
    check_xt(x_t);
    if (!(c > 0.0)) throw ValidationError("scale factor must be > 0");
    const double r = std::sqrt(c * theta);
    const double yp = r * (1.0 + x_t), ym = r * (1.0 - x_t);
    ErfPairExpansion e;
    double fact = 1.0;
    for (unsigned k = 0; k < 5; ++k) {
        if (k > 0) fact *= k;
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        e.coeff[k] = (erf_derivative(k, yp) + sign * erf_derivative(k, ym)) / fact;
    }
    return e;
}

ExpansionSeries expansion_gauss_from_ladder(double x_t, double theta) {
    const double pi = std::numbers::pi;
    // R(x_t + delta, theta) = sqrt(pi / 16 theta) sum e_k (sqrt(theta) delta)^k
    const auto e1 = erf_pair_expansion(x_t, theta, 1.0);
    const auto e2 = erf_pair_expansion(x_t, theta, 2.0);
    const double k1 = std::sqrt(pi / (16.0 * theta));
    const double k2 = std::sqrt(pi / (32.0 * theta));
    const double r0 = k1 * e1.coeff[0], r2 = k1 * e1.coeff[2];
    const double d0 = k2 * e2.coeff[0], d2 = k2 * e2.coeff[2], d4 = k2 * e2.coeff[4];
    ExpansionSeries s;
    s.c0 = 2.0 - 2.0 * r0 - 0.5 * (d0 + d2);
    s.c2 = -2.0 - 2.0 * r2 - 0.5 * d0 - d2 - d4;
    return s;
}

double st_term(double theta) { return expansion_gauss(0.0, theta).c2; }

double imspe_quadratic(double theta, double x_t, double delta) {
    check_pair(x_t, delta);
    const ExpansionSeries s = expansion_gauss(x_t, theta);
    return s.c0 + s.c2 * theta * delta * delta;
}

double border_element(const BorderArgs& a) {
    return detail::border1(Family::GaussP2, a.x_t + a.delta, a.theta);
}

BorderArgs op_sign_flip(BorderArgs a) {
    a.delta = -a.delta;
    return a;
}

BorderArgs op_double_theta(BorderArgs a) {
    a.theta *= 2.0;
    return a;
}

BorderArgs op_zero_delta(BorderArgs a) {
    a.delta = 0.0;
    return a;
}

namespace {

float128 border_element_q(const BorderArgs& a) {
    return detail::border1(Family::GaussP2, float128(a.x_t) + float128(a.delta), float128(a.theta));
}

}  // namespace

double imspe_operator_form(double theta, double x_t, double delta) {
    check_theta(theta);
    check_pair(x_t, delta);
    if (delta == 0.0) throw DomainError("operator form is undefined at delta = 0; use the quadratic model");
    // The numerator is a second difference of size theta delta^2; 113 bits keep it clean down to delta ~ 1e-6.
    const BorderArgs a{x_t, delta, theta};
    const BorderArgs da = op_double_theta(a);
    const float128 u = float128(theta) * float128(delta) * float128(delta);
    const float128 one_minus_v = -boost::multiprecision::expm1(-4 * u);
    const float128 num = border_element_q(da) + border_element_q(op_sign_flip(da)) -
                         2 * exp(-2 * u) * border_element_q(op_zero_delta(da));
    const float128 r = 2 - one_minus_v / 2 - (border_element_q(a) + border_element_q(op_sign_flip(a))) -
                       num / (2 * one_minus_v);
    return static_cast<double>(r);
}

double imspe_cluster_gauss(double theta, double x_t, double delta) {
    check_theta(theta);
    check_pair(x_t, delta);
    if (std::sqrt(theta) * std::abs(delta) < kSwitch) return imspe_quadratic(theta, x_t, delta);
    return imspe_n2(Family::GaussP2, theta, x_t + delta, x_t - delta);
}

namespace {

// Neville table for a sequence in h^2 with h halving at each level.
double richardson_h2(std::vector<double> q) {
    for (std::size_t j = 1; j < q.size(); ++j) {
        const double f = std::pow(4.0, static_cast<double>(j)) - 1.0;
        for (std::size_t i = q.size() - 1; i >= j; --i) q[i] = q[i] + (q[i] - q[i - 1]) / f;
    }
    return q.back();
}

void check_deltas(const std::vector<double>& deltas) {
    if (deltas.empty()) throw ValidationError("at least one delta is required");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0)) throw ValidationError("deltas must be > 0");
        if (i > 0 && deltas[i] != 0.5 * deltas[i - 1]) throw ValidationError("deltas must halve at each level");
    }
}

}  // namespace

double extract_c2(double theta, double x_t, double c0, const std::vector<double>& deltas) {
    check_deltas(deltas);
    std::vector<double> q;
    for (double d : deltas) q.push_back((imspe_n2(Family::GaussP2, theta, x_t + d, x_t - d) - c0) / (theta * d * d));
    return richardson_h2(std::move(q));
}

double extract_c0(double theta, double x_t, const std::vector<double>& deltas) {
    check_deltas(deltas);
    std::vector<double> q;
    for (double d : deltas) q.push_back(imspe_n2(Family::GaussP2, theta, x_t + d, x_t - d));
    return richardson_h2(std::move(q));
}

}  // namespace imspe
