#include "imspe/integrals.hpp"

#include <cmath>

#include "imspe/detail/line_integrals.hpp"
#include "imspe/errors.hpp"

namespace imspe {

namespace {

void check_theta(double theta) {
    if (!std::isfinite(theta) || theta <= 0.0) throw ValidationError("theta must be finite and > 0");
}

void check_coord(double a, double lo, double hi) {
    if (!std::isfinite(a) || a < lo || a > hi) throw ValidationError("integral argument outside its interval");
}

double border_checked(Family f, double a, double theta) {
    check_theta(theta);
    check_coord(a, -1.0, 1.0);
    return detail::border1(f, a, theta);
}

double pair_checked(Family f, double a, double b, double theta) {
    check_theta(theta);
    check_coord(a, -1.0, 1.0);
    check_coord(b, -1.0, 1.0);
    return detail::pair1(f, a, b, theta);
}

}  // namespace

double i1(double a, double theta) { return border_checked(Family::ExpP1, a, theta); }
double i2(double a, double b, double theta) { return pair_checked(Family::ExpP1, a, b, theta); }
double i3(double a, double theta) { return border_checked(Family::GaussP2, a, theta); }
double i4(double a, double b, double theta) { return pair_checked(Family::GaussP2, a, b, theta); }
double i5(double a, double theta) { return border_checked(Family::Matern32, a, theta); }
double i6(double a, double b, double theta) { return pair_checked(Family::Matern32, a, b, theta); }
double i7(double a, double theta) { return border_checked(Family::Matern52, a, theta); }
double i8(double a, double b, double theta) { return pair_checked(Family::Matern52, a, b, theta); }

double j1(double a, double theta) {
    check_theta(theta);
    check_coord(a, 0.0, 1.0);
    return -(std::expm1(-theta * a) + std::expm1(-theta * (1.0 - a))) / theta;
}

double j2(double a, double b, double theta) {
    check_theta(theta);
    check_coord(a, 0.0, 1.0);
    check_coord(b, 0.0, 1.0);
    return detail::unit_exp_pair(a, b, theta);
}

double border_integral(Family f, double a, double theta) { return border_checked(f, a, theta); }

double pair_integral(Family f, double a, double b, double theta) { return pair_checked(f, a, b, theta); }

double r_border(const KernelSpec& k, const Point& xi) {
    check_point(xi, k.dim());
    double v = 1.0;
    for (std::size_t m = 0; m < k.dim(); ++m) v *= detail::border1(k.family, xi[m], k.theta[m]);
    return v;
}

double r_inner(const KernelSpec& k, const Point& xi, const Point& xj) {
    check_point(xi, k.dim());
    check_point(xj, k.dim());
    double v = 1.0;
    for (std::size_t m = 0; m < k.dim(); ++m) v *= detail::pair1(k.family, xi[m], xj[m], k.theta[m]);
    return v;
}

double j_border(const std::vector<double>& theta, const Point& xi) {
    if (xi.size() != theta.size()) throw ValidationError("dimension mismatch in j_border");
    double v = 1.0;
    for (std::size_t m = 0; m < theta.size(); ++m) v *= j1(xi[m], theta[m]);
    return v;
}

double j_inner(const std::vector<double>& theta, const Point& xi, const Point& xj) {
    if (xi.size() != theta.size() || xj.size() != theta.size())
        throw ValidationError("dimension mismatch in j_inner");
    double v = 1.0;
    for (std::size_t m = 0; m < theta.size(); ++m) v *= j2(xi[m], xj[m], theta[m]);
    return v;
}

}  // namespace imspe
