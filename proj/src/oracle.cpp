#include "imspe/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "imspe/errors.hpp"
#include "imspe/imspe.hpp"

namespace imspe {

namespace {

struct Simpson {
    const std::function<double(double)>& f;
    int max_depth;

    double panel(double a, double fa, double b, double fb, double m, double fm, double whole, double tol,
                 int depth) const {
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double diff = left + right - whole;
        if (std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
        if (depth >= max_depth || !(lm > a && rm < b))
            throw QuadratureError("quadrature failed to converge on [" + std::to_string(a) + ", " +
                                  std::to_string(b) + "]");
        return panel(a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1) +
               panel(m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1);
    }

    double run(double a, double b, double tol) const {
        const double m = 0.5 * (a + b);
        const double fa = f(a), fb = f(b), fm = f(m);
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return panel(a, fa, b, fb, m, fm, whole, tol, 0);
    }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi, const QuadratureSettings& s) {
    if (!(s.abs_tol > 0.0) || s.max_depth < 10) throw ValidationError("invalid quadrature settings");
    if (!(lo < hi)) throw ValidationError("integrate requires lo < hi");
    std::vector<double> knots{lo};
    for (double x : s.split_points)
        if (x > lo && x < hi) knots.push_back(x);
    knots.push_back(hi);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    const Simpson simpson{f, s.max_depth};
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double a = knots[i], b = knots[i + 1];
        const double tol = s.abs_tol * (b - a) / (hi - lo);
        const double v = simpson.run(a, b, tol);
        if (!std::isfinite(v)) throw QuadratureError("non-finite integrand value");
        total += v;
    }
    return total;
}

double oracle_r_element(const KernelSpec& k, const Point& xi, const std::optional<Point>& xj,
                        const QuadratureSettings& settings) {
    check_point(xi, k.dim());
    if (xj) check_point(*xj, k.dim());
    double v = 1.0;
    for (std::size_t m = 0; m < k.dim(); ++m) {
        const double a = xi[m], t = k.theta[m];
        QuadratureSettings s = settings;
        s.split_points = {a};
        double integral;
        if (xj) {
            const double b = (*xj)[m];
            s.split_points.push_back(b);
            integral = integrate([&](double x) { return corr1(k.family, t, a - x) * corr1(k.family, t, b - x); },
                                 -1.0, 1.0, s);
        } else {
            integral = integrate([&](double x) { return corr1(k.family, t, a - x); }, -1.0, 1.0, s);
        }
        v *= 0.5 * integral;
    }
    return v;
}

double oracle_unit_element(const std::vector<double>& theta, const Point& xi, const std::optional<Point>& xj,
                           const QuadratureSettings& settings) {
    double v = 1.0;
    for (std::size_t m = 0; m < theta.size(); ++m) {
        const double a = xi[m], t = theta[m];
        QuadratureSettings s = settings;
        s.split_points = {a};
        double integral;
        if (xj) {
            const double b = (*xj)[m];
            s.split_points.push_back(b);
            integral = integrate([&](double x) { return std::exp(-t * std::abs(a - x) - t * std::abs(b - x)); },
                                 0.0, 1.0, s);
        } else {
            integral = integrate([&](double x) { return std::exp(-t * std::abs(a - x)); }, 0.0, 1.0, s);
        }
        v *= integral;
    }
    return v;
}

double oracle_imspe(const KernelSpec& k, const Design& design, const QuadratureSettings& settings) {
    const std::size_t n = design.points.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (design.points[i] == design.points[j])
                throw NearSingularError(i, j, INFINITY,
                                        "design points " + std::to_string(i) + " and " + std::to_string(j) +
                                            " coincide");
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n + 1, n + 1);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n + 1, n + 1);
    R(0, 0) = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        L(0, i + 1) = L(i + 1, 0) = 1.0;
        R(0, i + 1) = R(i + 1, 0) = oracle_r_element(k, design.points[i], std::nullopt, settings);
        for (std::size_t j = i; j < n; ++j) {
            L(i + 1, j + 1) = L(j + 1, i + 1) = corr_pair(k, design.points[i], design.points[j]);
            R(i + 1, j + 1) = R(j + 1, i + 1) = oracle_r_element(k, design.points[i], design.points[j], settings);
        }
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(L);
    if (!lu.isInvertible()) throw NearSingularError(0, 0, INFINITY, "L is singular");
    return 1.0 - lu.solve(R).trace();
}

}  // namespace imspe
