#include "imspe/imspe.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/multiprecision/float128.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "imspe/detail/line_integrals.hpp"
#include "imspe/errors.hpp"
#include "imspe/integrals.hpp"
#include "imspe/linalg.hpp"

namespace imspe {

namespace {

using boost::multiprecision::float128;

std::string pair_label(std::size_t i, std::size_t j) {
    return "design points " + std::to_string(i) + " and " + std::to_string(j);
}

void reject_coincident(const Design& design) {
    for (std::size_t i = 0; i < design.n(); ++i)
        for (std::size_t j = i + 1; j < design.n(); ++j)
            if (design.points[i] == design.points[j])
                throw NearSingularError(i, j, std::numeric_limits<double>::infinity(),
                                        pair_label(i, j) + " coincide");
}

std::pair<std::size_t, std::size_t> closest_pair(const Design& design) {
    std::pair<std::size_t, std::size_t> best{0, 0};
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < design.n(); ++i)
        for (std::size_t j = i + 1; j < design.n(); ++j) {
            double s = 0.0;
            for (std::size_t m = 0; m < design.d; ++m) {
                const double t = design.points[i][m] - design.points[j][m];
                s += t * t;
            }
            if (s < dmin) {
                dmin = s;
                best = {i, j};
            }
        }
    return best;
}

[[noreturn]] void throw_near_singular(const Design& design, double condition) {
    const auto [i, j] = closest_pair(design);
    throw NearSingularError(i, j, condition,
                            "correlation matrix is numerically singular; closest pair: " + pair_label(i, j));
}

template <class T>
struct Assembled {
    Mat<T> V;
    Mat<T> R;
};

template <class T>
Assembled<T> assemble(const KernelSpec& k, const Design& design) {
    const std::size_t n = design.n(), d = design.d;
    Assembled<T> out{Mat<T>(n, n), Mat<T>(n + 1, n + 1)};
    out.R(0, 0) = T(1);
    for (std::size_t i = 0; i < n; ++i) {
        const Point& xi = design.points[i];
        T border = 1;
        for (std::size_t m = 0; m < d; ++m) border *= detail::border1<T>(k.family, T(xi[m]), T(k.theta[m]));
        out.R(0, i + 1) = out.R(i + 1, 0) = border;
        for (std::size_t j = i; j < n; ++j) {
            const Point& xj = design.points[j];
            T v = 1, r = 1;
            for (std::size_t m = 0; m < d; ++m) {
                const T t(k.theta[m]);
                v *= corr1<T>(k.family, t, T(xi[m]) - T(xj[m]));
                r *= detail::pair1<T>(k.family, T(xi[m]), T(xj[m]), t);
            }
            out.V(i, j) = out.V(j, i) = v;
            out.R(i + 1, j + 1) = out.R(j + 1, i + 1) = r;
        }
    }
    return out;
}

void check_design(const KernelSpec& k, const Design& design) {
    if (design.d != k.dim()) throw ValidationError("design dimension does not match theta");
    if (design.n() == 0) throw ValidationError("design has no points");
}

// erf(y + s) + erf(y - s) - 2 erf(y) for y >= 0, accurate for small s.
double erf_second_difference(double y, double s) {
    s = std::abs(s);
    if (s == 0.0) return 0.0;
    if (s < 0.25) {
        const auto f = [y](double t) { return std::exp(-y * y - t * t) * std::sinh(2.0 * y * t); };
        return -4.0 / std::sqrt(M_PI) * boost::math::quadrature::gauss<double, 20>::integrate(f, 0.0, s);
    }
    return -(std::erfc(y + s) + std::erfc(y - s) - 2.0 * std::erfc(y));
}

// 1 - (1 + u) e^{-u}
double one_minus_1pu_emu(double u) {
    if (u >= 0.25) return -std::expm1(-u) - u * std::exp(-u);
    double sum = 0.0, term = 1.0;
    for (int k = 1; k <= 20; ++k) {
        term *= -u / k;
        if (k >= 2) sum += (k - 1) * term;
    }
    return sum;
}

double gauss_n2(double theta, double x1, double x2) {
    const double xt = 0.5 * (x1 + x2);
    const double delta = 0.5 * (x1 - x2);
    const double one_minus_v = -std::expm1(-4.0 * theta * delta * delta);
    const double r = std::sqrt(2.0 * theta);
    const double c = std::sqrt(M_PI / (32.0 * theta));
    const double h0 = c * (std::erf(r * (1.0 + xt)) + std::erf(r * (1.0 - xt)));
    const double d2 =
        c * (erf_second_difference(r * (1.0 + xt), r * delta) + erf_second_difference(r * (1.0 - xt), r * delta));
    const double w = d2 - 2.0 * std::expm1(-2.0 * theta * delta * delta) * h0;
    const double r0 = detail::border1(Family::GaussP2, x1, theta) + detail::border1(Family::GaussP2, x2, theta);
    return 2.0 - 0.5 * one_minus_v - r0 - w / (2.0 * one_minus_v);
}

double matern_n2(Family f, double theta, double x1, double x2) {
    const double one_minus_v = one_minus_corr1(f, theta, x1 - x2);
    const double w = detail::pair1(f, x1, x1, theta) + detail::pair1(f, x2, x2, theta) -
                     2.0 * detail::pair1(f, x1, x2, theta);
    const double r0 = detail::border1(f, x1, theta) + detail::border1(f, x2, theta);
    return 2.0 - 0.5 * one_minus_v - r0 - w / (2.0 * one_minus_v);
}

void check_line_args(double theta, double x1, double x2) {
    if (!std::isfinite(theta) || theta <= 0.0) throw ValidationError("theta must be finite and > 0");
    for (double x : {x1, x2})
        if (!std::isfinite(x) || x < -1.0 || x > 1.0) throw ValidationError("design coordinate outside [-1, 1]");
    if (x1 == x2) throw DomainError("twin points: IMSPE is defined only as a directional limit; use the cluster expansion");
}

}  // namespace

Design make_design(std::size_t d, std::vector<Point> points, bool strict) {
    if (d == 0) throw ValidationError("design dimension must be >= 1");
    if (points.empty()) throw ValidationError("design must have at least one point");
    for (const Point& p : points) check_point(p, d);
    Design design{d, std::move(points), strict};
    if (strict) reject_coincident(design);
    return design;
}

Design line_design(const std::vector<double>& xs, bool strict) {
    std::vector<Point> pts;
    pts.reserve(xs.size());
    for (double x : xs) pts.push_back({x});
    return make_design(1, std::move(pts), strict);
}

ImspeMatrices build_matrices(const KernelSpec& k, const Design& design) {
    check_design(k, design);
    reject_coincident(design);
    const std::size_t n = design.n();
    const Assembled<double> a = assemble<double>(k, design);
    const BorderedSolver<double> solver(a.V);
    const double rcond = solver.ldlt().rcond();
    const double condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!solver.ok() || rcond < 64.0 * std::numeric_limits<double>::epsilon()) throw_near_singular(design, condition);

    ImspeMatrices out;
    out.L = Eigen::MatrixXd::Zero(n + 1, n + 1);
    out.L.row(0).tail(n).setOnes();
    out.L.col(0).tail(n).setOnes();
    out.L.bottomRightCorner(n, n) = a.V;
    out.R = a.R;
    out.imspe = 1.0 - solver.solve(a.R).trace();
    out.condition_estimate = condition;
    if (!std::isfinite(out.imspe)) throw SolverError(condition, "bordered solve produced a non-finite trace");
    return out;
}

double imspe_value(const KernelSpec& k, const Design& design, Precision precision) {
    if (precision == Precision::Double) return build_matrices(k, design).imspe;
    check_design(k, design);
    reject_coincident(design);
    const Assembled<float128> a = assemble<float128>(k, design);
    const BorderedSolver<float128> solver(a.V);
    if (!solver.ok()) throw_near_singular(design, std::numeric_limits<double>::infinity());
    const float128 v = 1 - solver.solve(a.R).trace();
    const double out = static_cast<double>(v);
    if (!std::isfinite(out)) throw SolverError(std::numeric_limits<double>::infinity(), "non-finite trace");
    return out;
}

double imspe_closed_n1(Family f, double theta, double x1) { return 2.0 * (1.0 - border_integral(f, x1, theta)); }

double imspe_closed_n2_exp(double theta, double x1, double x2) {
    check_line_args(theta, x1, x2);
    const double d = std::abs(x1 - x2);
    const double u = theta * d;
    const double one_minus_e = -std::expm1(-u);
    const double p = theta * (x1 + x2);
    const double sh = std::sinh(0.5 * u);
    const double cosh_tail = 0.5 * (std::exp(p - 2.0 * theta) + std::exp(-p - 2.0 * theta));
    const double w = (one_minus_1pu_emu(u) - 2.0 * cosh_tail * sh * sh) / theta;
    const double r0 = detail::border1(Family::ExpP1, x1, theta) + detail::border1(Family::ExpP1, x2, theta);
    return 2.0 - 0.5 * one_minus_e - r0 - w / (2.0 * one_minus_e);
}

double imspe_n2(Family f, double theta, double x1, double x2) {
    check_line_args(theta, x1, x2);
    switch (f) {
        case Family::ExpP1: return imspe_closed_n2_exp(theta, x1, x2);
        case Family::GaussP2: return gauss_n2(theta, x1, x2);
        default: return matern_n2(f, theta, x1, x2);
    }
}

double excess_constant(const KernelSpec& k, std::size_t n) {
    double k0 = 1.0, k00 = 1.0;
    for (double t : k.theta) {
        k0 *= detail::line_border1(k.family, t);
        k00 *= detail::line_pair1(k.family, 0.0, t);
    }
    const double dn = static_cast<double>(n);
    return 1.0 + 1.0 / dn - 2.0 * k0 - (dn - 1.0) * k00;
}

double imspe_excess(const KernelSpec& k, const Design& design) {
    check_design(k, design);
    reject_coincident(design);
    const std::size_t n = design.n(), d = design.d;
    const Family f = k.family;
    const double dn = static_cast<double>(n);

    double k0 = 1.0, k00 = 1.0;
    std::vector<double> k0m(d);
    for (std::size_t m = 0; m < d; ++m) {
        k0m[m] = detail::line_border1(f, k.theta[m]);
        k0 *= k0m[m];
        k00 *= detail::line_pair1(f, 0.0, k.theta[m]);
    }

    Eigen::MatrixXd V(n, n), F(n, n), T(n, n);
    Eigen::VectorXd tails(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Point& xi = design.points[i];
        double log_keep = 0.0;
        for (std::size_t m = 0; m < d; ++m)
            log_keep += std::log1p(-detail::border_tail1(f, xi[m], k.theta[m]) / k0m[m]);
        tails(i) = -k0 * std::expm1(log_keep);
        for (std::size_t j = i; j < n; ++j) {
            const Point& xj = design.points[j];
            double v = 1.0, full = 1.0, keep = 0.0;
            for (std::size_t m = 0; m < d; ++m) {
                const double t = k.theta[m];
                const double line = detail::line_pair1(f, xi[m] - xj[m], t);
                v *= corr1(f, t, xi[m] - xj[m]);
                full *= line;
                keep += std::log1p(-detail::pair_tail1(f, xi[m], xj[m], t) / line);
            }
            V(i, j) = V(j, i) = v;
            F(i, j) = F(j, i) = full;
            T(i, j) = T(j, i) = -full * std::expm1(keep);
        }
    }

    const BorderedSolver<double> solver(V);
    const double rcond = solver.ldlt().rcond();
    if (!solver.ok() || rcond < 64.0 * std::numeric_limits<double>::epsilon())
        throw_near_singular(design, rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity());

    Eigen::MatrixXd r_inf(n + 1, n + 1), t_mat(n + 1, n + 1);
    r_inf(0, 0) = 1.0;
    t_mat(0, 0) = 0.0;
    r_inf.row(0).tail(n).setConstant(k0);
    r_inf.col(0).tail(n).setConstant(k0);
    r_inf.bottomRightCorner(n, n) = F;
    t_mat.row(0).tail(n) = tails.transpose();
    t_mat.col(0).tail(n) = tails;
    t_mat.bottomRightCorner(n, n) = T;

    // Inverse of L for points infinitely far apart (V = I).
    Eigen::MatrixXd l_inf_inv(n + 1, n + 1);
    l_inf_inv(0, 0) = -1.0 / dn;
    l_inf_inv.row(0).tail(n).setConstant(1.0 / dn);
    l_inf_inv.col(0).tail(n).setConstant(1.0 / dn);
    l_inf_inv.bottomRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / dn);

    Eigen::MatrixXd e_pad = Eigen::MatrixXd::Zero(n + 1, n + 1);
    e_pad.bottomRightCorner(n, n) = V - Eigen::MatrixXd::Identity(n, n);

    double overlap = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) overlap += 2.0 * F(i, j);
    overlap /= dn;
    const double coupling = trace_of_product(l_inf_inv * e_pad, solver.solve(r_inf));
    const double boundary = solver.solve(t_mat).trace();
    return overlap + coupling + boundary;
}

std::pair<double, double> domain_transform(double theta, double x, Interval from, Interval to) {
    const double wf = from.hi - from.lo, wt = to.hi - to.lo;
    if (!std::isfinite(wf) || !std::isfinite(wt) || wf == 0.0 || wt == 0.0)
        throw ValidationError("domain_transform needs finite intervals of nonzero length");
    if (from.lo == to.lo && from.hi == to.hi) return {theta, x};
    return {theta * wf / wt, to.lo + (x - from.lo) * (wt / wf)};
}

double imspe_unit_exp(const std::vector<double>& theta, const Design& unit_design) {
    const std::size_t n = unit_design.n(), d = unit_design.d;
    if (theta.size() != d) throw ValidationError("design dimension does not match theta");
    for (const Point& p : unit_design.points)
        for (double c : p)
            if (!std::isfinite(c) || c < 0.0 || c > 1.0) throw ValidationError("unit-domain coordinate outside [0, 1]");
    reject_coincident(unit_design);
    Eigen::MatrixXd V(n, n), R(n + 1, n + 1);
    R(0, 0) = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        R(0, i + 1) = R(i + 1, 0) = j_border(theta, unit_design.points[i]);
        for (std::size_t j = i; j < n; ++j) {
            double v = 1.0;
            for (std::size_t m = 0; m < d; ++m)
                v *= corr1(Family::ExpP1, theta[m], unit_design.points[i][m] - unit_design.points[j][m]);
            V(i, j) = V(j, i) = v;
            R(i + 1, j + 1) = R(j + 1, i + 1) = j_inner(theta, unit_design.points[i], unit_design.points[j]);
        }
    }
    const BorderedSolver<double> solver(V);
    if (!solver.ok()) throw_near_singular(unit_design, std::numeric_limits<double>::infinity());
    return 1.0 - solver.solve(R).trace();
}

}  // namespace imspe
