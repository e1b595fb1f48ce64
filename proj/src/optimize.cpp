#include "imspe/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "imspe/detail/line_integrals.hpp"
#include "imspe/errors.hpp"
#include "imspe/parallel.hpp"

namespace imspe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGradStep = 1e-6;
constexpr double kCurvStep = 1e-3;
constexpr double kGradTol = 1e-5;
constexpr double kSymTol = 1e-5;
constexpr int kBrentBits = 40;

void check_theta(double theta) {
    if (!std::isfinite(theta) || theta <= 0.0) throw ValidationError("theta must be finite and > 0");
}

// Far from the boundary (small border integral over the whole line) the IMSPE is a constant plus
// exponentially small terms; the optimizer then works on those terms directly.
bool use_excess(Family f, double theta) { return detail::line_border1(f, theta) <= 0.5; }

struct Objective {
    Family family;
    double theta;
    KernelSpec kernel;
    bool excess;

    Objective(Family f, double t) : family(f), theta(t), kernel(make_kernel(f, {t})), excess(use_excess(f, t)) {}

    double n1(double x) const {
        if (!(x >= -1.0 && x <= 1.0)) return kInf;
        if (!excess) return imspe_closed_n1(family, theta, x);
        return imspe_excess(kernel, line_design({x}, false));
    }

    // Ordered pair only; anything else is infeasible.
    double n2(double x1, double x2) const {
        if (!(x1 > x2) || x1 > 1.0 || x2 < -1.0) return kInf;
        try {
            if (!excess) return imspe_value(kernel, line_design({x1, x2}, false), Precision::Extended);
            return imspe_excess(kernel, line_design({x1, x2}, false));
        } catch (const Error&) {
            return kInf;
        }
    }

    double to_imspe(double value, std::size_t n) const { return excess ? excess_constant(kernel, n) + value : value; }
    const char* name() const { return excess ? "excess" : "imspe"; }
};

struct NmResult {
    std::array<double, 2> x{};
    double f = kInf;
    bool converged = false;
};

NmResult nelder_mead(const Objective& obj, std::array<double, 2> start, const OptimizeSettings& s) {
    constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    using P = std::array<double, 2>;
    auto f = [&](const P& p) { return obj.n2(p[0], p[1]); };

    const double h1 = start[0] > 0.0 ? -0.1 : 0.1;
    const double h2 = start[1] >= 0.0 ? -0.1 : 0.1;
    std::array<P, 3> v{start, P{start[0] + h1, start[1]}, P{start[0], start[1] + h2}};
    std::array<double, 3> fv{f(v[0]), f(v[1]), f(v[2])};

    NmResult out;
    for (int it = 0; it < s.max_iter; ++it) {
        std::array<int, 3> idx{0, 1, 2};
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        std::array<P, 3> sv{v[idx[0]], v[idx[1]], v[idx[2]]};
        std::array<double, 3> sf{fv[idx[0]], fv[idx[1]], fv[idx[2]]};
        v = sv;
        fv = sf;

        double diam = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) diam = std::max(diam, std::hypot(v[i][0] - v[j][0], v[i][1] - v[j][1]));
        if (diam < s.tol_x) {
            out.converged = std::isfinite(fv[0]);
            break;
        }

        const P c{0.5 * (v[0][0] + v[1][0]), 0.5 * (v[0][1] + v[1][1])};
        const P xr{c[0] + alpha * (c[0] - v[2][0]), c[1] + alpha * (c[1] - v[2][1])};
        const double fr = f(xr);
        if (fr < fv[0]) {
            const P xe{c[0] + gamma * (xr[0] - c[0]), c[1] + gamma * (xr[1] - c[1])};
            const double fe = f(xe);
            if (fe < fr) {
                v[2] = xe;
                fv[2] = fe;
            } else {
                v[2] = xr;
                fv[2] = fr;
            }
            continue;
        }
        if (fr < fv[1]) {
            v[2] = xr;
            fv[2] = fr;
            continue;
        }
        bool accepted = false;
        if (fr < fv[2]) {
            const P xc{c[0] + rho * (xr[0] - c[0]), c[1] + rho * (xr[1] - c[1])};
            const double fc = f(xc);
            if (fc <= fr) {
                v[2] = xc;
                fv[2] = fc;
                accepted = true;
            }
        } else {
            const P xc{c[0] + rho * (v[2][0] - c[0]), c[1] + rho * (v[2][1] - c[1])};
            const double fc = f(xc);
            if (fc < fv[2]) {
                v[2] = xc;
                fv[2] = fc;
                accepted = true;
            }
        }
        if (!accepted) {
            for (int i = 1; i < 3; ++i) {
                v[i] = P{v[0][0] + sigma * (v[i][0] - v[0][0]), v[0][1] + sigma * (v[i][1] - v[0][1])};
                fv[i] = f(v[i]);
            }
        }
    }
    const auto best = std::min_element(fv.begin(), fv.end()) - fv.begin();
    out.x = v[best];
    out.f = fv[best];
    return out;
}

std::pair<double, double> brent(const std::function<double(double)>& f, double lo, double hi, int max_iter) {
    std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
    return boost::math::tools::brent_find_minima(f, lo, hi, kBrentBits, iters);
}

// Finite-difference checks at a two-point optimum.
void pair_checks(const Objective& obj, double x1, double x2, OptimumReport& r) {
    const double h = kGradStep, q = kCurvStep;
    const double g1 = (obj.n2(x1 + h, x2) - obj.n2(x1 - h, x2)) / (2 * h);
    const double g2 = (obj.n2(x1, x2 + h) - obj.n2(x1, x2 - h)) / (2 * h);
    r.gradient_norm = std::hypot(g1, g2);

    const double f0 = obj.n2(x1, x2);
    const double h11 = (obj.n2(x1 + q, x2) - 2 * f0 + obj.n2(x1 - q, x2)) / (q * q);
    const double h22 = (obj.n2(x1, x2 + q) - 2 * f0 + obj.n2(x1, x2 - q)) / (q * q);
    const double h12 = (obj.n2(x1 + q, x2 + q) - obj.n2(x1 + q, x2 - q) - obj.n2(x1 - q, x2 + q) +
                        obj.n2(x1 - q, x2 - q)) /
                       (4 * q * q);
    const double mean = 0.5 * (h11 + h22);
    const double rad = std::hypot(0.5 * (h11 - h22), h12);
    r.curvature = {mean - rad, mean + rad};
    r.second_order_positive = std::isfinite(mean) && std::isfinite(rad) && mean - rad > 0.0;
}

}  // namespace

std::vector<std::pair<double, double>> start_lattice() {
    static constexpr std::array<double, 7> values{0.8, 0.5, 0.2, 0.0, -0.2, -0.5, -0.8};
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j) out.emplace_back(values[i], values[j]);
    return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi) || count == 0)
        throw ValidationError("log grid needs 0 < lo <= hi and at least one point");
    if (count == 1) return {lo};
    std::vector<double> out(count);
    const double a = std::log(lo), b = std::log(hi);
    const double m = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        const double w = static_cast<double>(i);
        out[i] = std::exp(((m - w) * a + w * b) / m);
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo) || count < 2)
        throw ValidationError("grid needs lo < hi and at least two points");
    std::vector<double> out(count);
    const double m = static_cast<double>(count - 1);
    // weighted form keeps the grid exactly symmetric when lo = -hi
    for (std::size_t i = 0; i < count; ++i) {
        const double w = static_cast<double>(i);
        out[i] = ((m - w) * lo + w * hi) / m;
    }
    return out;
}

OptimumReport optimize_n1(Family f, double theta, const OptimizeSettings& s) {
    check_theta(theta);
    const Objective obj(f, theta);
    OptimumReport r;
    r.kernel = obj.kernel;
    r.objective = obj.name();
    r.starts = 1;

    const auto [x, fx] = brent([&](double t) { return obj.n1(t); }, -1.0, 1.0, s.max_iter);
    r.design = line_design({x});
    r.imspe_value = obj.to_imspe(fx, 1);

    const double h = kGradStep, q = kCurvStep;
    r.gradient_norm = std::abs(obj.n1(x + h) - obj.n1(x - h)) / (2 * h);
    const double c = (obj.n1(x + q) - 2 * fx + obj.n1(x - q)) / (q * q);
    r.curvature = {c};
    r.second_order_positive = std::isfinite(c) && c > 0.0;
    r.boundary_distance = 1.0 - std::abs(x);
    r.symmetric = std::abs(x) <= kSymTol;
    r.converged = std::isfinite(fx) && r.gradient_norm <= kGradTol;
    r.starts_converged = r.converged ? 1 : 0;
    return r;
}

OptimumReport optimize_n2(Family f, double theta, PairConstraint c, const OptimizeSettings& s) {
    check_theta(theta);
    if (!(s.tol_x > 0.0) || s.max_iter < 1) throw ValidationError("tol_x must be > 0 and max_iter >= 1");
    const Objective obj(f, theta);
    OptimumReport r;
    r.kernel = obj.kernel;
    r.objective = obj.name();

    double x1 = 0.0, x2 = 0.0, fx = kInf;
    bool engine_ok = false;
    if (c == PairConstraint::Symmetric) {
        r.starts = 1;
        const auto [x, fv] = brent([&](double t) { return obj.n2(t, -t); }, 1e-3, 1.0, s.max_iter);
        x1 = x;
        x2 = -x;
        fx = fv;
        engine_ok = std::isfinite(fv);
        r.starts_converged = engine_ok ? 1 : 0;
    } else {
        const auto starts = start_lattice();
        r.starts = static_cast<int>(starts.size());
        for (const auto& [a, b] : starts) {
            const NmResult nm = nelder_mead(obj, {a, b}, s);
            if (nm.converged) ++r.starts_converged;
            if (nm.converged && nm.f < fx) {
                fx = nm.f;
                x1 = nm.x[0];
                x2 = nm.x[1];
                engine_ok = true;
            }
        }
        // one restart from the winner; a collapsed simplex can stall on flat valleys
        if (engine_ok) {
            const NmResult nm = nelder_mead(obj, {x1, x2}, s);
            if (nm.converged && nm.f <= fx) {
                fx = nm.f;
                x1 = nm.x[0];
                x2 = nm.x[1];
            }
        }
    }
    if (!engine_ok) {
        r.converged = false;
        r.design = line_design({start_lattice().front().first, start_lattice().front().second});
        r.imspe_value = kInf;
        return r;
    }

    r.design = line_design({x1, x2});
    r.imspe_value = obj.to_imspe(fx, 2);
    r.boundary_distance = std::min(1.0 - std::abs(x1), 1.0 - std::abs(x2));
    r.symmetric = std::abs(x1 + x2) <= kSymTol;
    if (c == PairConstraint::Symmetric) {
        const double h = kGradStep, q = kCurvStep;
        auto g = [&](double t) { return obj.n2(t, -t); };
        r.gradient_norm = std::abs(g(x1 + h) - g(x1 - h)) / (2 * h);
        const double cv = (g(x1 + q) - 2 * fx + g(x1 - q)) / (q * q);
        r.curvature = {cv};
        r.second_order_positive = std::isfinite(cv) && cv > 0.0;
    } else {
        pair_checks(obj, x1, x2, r);
    }
    r.converged = r.gradient_norm <= kGradTol;
    return r;
}

SweepResult sweep_theta(Family f, std::size_t n, const std::vector<double>& thetas, unsigned threads,
                        const OptimizeSettings& s) {
    if (n != 1 && n != 2) throw ValidationError("sweeps support n = 1 or n = 2");
    if (thetas.empty()) throw ValidationError("empty theta grid");
    for (double t : thetas) check_theta(t);

    struct Item {
        OptimumReport report;
        std::string failure;
    };
    auto items = parallel_map(thetas.size(), threads, [&](std::size_t i) {
        Item it;
        try {
            it.report = n == 1 ? optimize_n1(f, thetas[i], s) : optimize_n2(f, thetas[i], PairConstraint::None, s);
            if (!it.report.converged) it.failure = "not converged";
            else if (!it.report.second_order_positive) it.failure = "curvature not positive";
        } catch (const Error& e) {
            it.failure = e.what();
        }
        return it;
    });

    SweepResult out;
    out.thetas = thetas;
    out.x1_min = kInf;
    out.x1_max = -kInf;
    bool any = false;
    for (auto& it : items) {
        if (it.failure.empty()) {
            const double x1 = it.report.design.points.front().front();
            out.x1_min = std::min(out.x1_min, x1);
            out.x1_max = std::max(out.x1_max, x1);
            any = true;
        }
        out.reports.push_back(std::move(it.report));
        out.failures.push_back(std::move(it.failure));
    }
    if (!any) out.x1_min = out.x1_max = 0.0;
    return out;
}

ScanTable scan_surface(Family f, double theta, std::size_t n, double lo, double hi, std::size_t count,
                       unsigned threads) {
    check_theta(theta);
    if (n != 1 && n != 2) throw ValidationError("d = 1 scans support n = 1 or n = 2");
    if (lo < -1.0 || hi > 1.0) throw ValidationError("scan range outside [-1, 1]");
    const auto g = linear_grid(lo, hi, count);
    ScanTable t;
    if (n == 1) {
        t.columns = {"x1"};
        t.rows = parallel_map(count, threads, [&](std::size_t i) {
            return ScanRow{{g[i]}, imspe_closed_n1(f, theta, g[i])};
        });
        return t;
    }
    t.columns = {"x1", "x2"};
    t.rows = parallel_map(count * count, threads, [&](std::size_t k) {
        const double x1 = g[k / count], x2 = g[k % count];
        ScanRow row{{x1, x2}, std::nullopt};
        if (x1 == x2) return row;
        try {
            row.value = imspe_n2(f, theta, x1, x2);
        } catch (const Error&) {
        }
        return row;
    });
    return t;
}

InversionScenario figure_one_scenario() {
    return {make_kernel(Family::GaussP2, {0.064, 0.00016}), {0.767117, 0.0}, {-0.767117, 0.0}};
}

double scenario_imspe(const InversionScenario& sc, double u, double v) {
    const Design d = make_design(2, {sc.fixed1, sc.fixed2, {u, v}, {-u, -v}});
    return imspe_value(sc.kernel, d, Precision::Extended);
}

namespace {

std::optional<double> scenario_cell(const InversionScenario& sc, double u, double v) {
    try {
        return scenario_imspe(sc, u, v);
    } catch (const NearSingularError&) {
        return std::nullopt;
    } catch (const SolverError&) {
        return std::nullopt;
    }
}

}  // namespace

ScanTable scan_scenario(const InversionScenario& sc, double lo_u, double hi_u, std::size_t count_u, double lo_v,
                        double hi_v, std::size_t count_v, unsigned threads) {
    const auto gu = linear_grid(lo_u, hi_u, count_u);
    const auto gv = linear_grid(lo_v, hi_v, count_v);
    ScanTable t;
    t.columns = {"x3_1", "x3_2"};
    t.rows = parallel_map(count_u * count_v, threads, [&](std::size_t k) {
        const double u = gu[k / count_v], v = gv[k % count_v];
        return ScanRow{{u, v}, scenario_cell(sc, u, v)};
    });
    return t;
}

ScanTable scan_scenario_slice(const InversionScenario& sc, double lo, double hi, std::size_t count,
                              unsigned threads) {
    const auto g = linear_grid(lo, hi, count);
    ScanTable t;
    t.columns = {"x3_1"};
    t.rows = parallel_map(count, threads, [&](std::size_t i) { return ScanRow{{g[i]}, scenario_cell(sc, g[i], 0.0)}; });
    return t;
}

std::vector<SliceMinimum> slice_minima(const InversionScenario& sc, const ScanTable& slice) {
    std::vector<SliceMinimum> out;
    const auto& rows = slice.rows;
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        const auto &a = rows[i - 1].value, &b = rows[i].value, &c = rows[i + 1].value;
        if (!a || !b || !c || !(*b < *a) || !(*b <= *c)) continue;
        const double lo = rows[i - 1].coords.front(), hi = rows[i + 1].coords.front();
        const auto [t, v] = brent(
            [&](double x) {
                const auto cell = scenario_cell(sc, x, 0.0);
                return cell ? *cell : kInf;
            },
            lo, hi, 500);
        out.push_back({t, v});
    }
    return out;
}

ProbeReport discontinuity_probe(const InversionScenario& sc, const Point& center,
                                const std::vector<std::vector<double>>& directions, const std::vector<double>& h) {
    check_point(center, 2);
    if (directions.empty()) throw ValidationError("probe needs at least one direction");
    if (h.size() < 2) throw ValidationError("probe needs at least two step sizes");
    for (std::size_t i = 0; i < h.size(); ++i)
        if (!(h[i] > 0.0) || (i > 0 && !(h[i] < h[i - 1]))) throw ValidationError("step sizes must decrease and be > 0");

    ProbeReport r;
    r.center = center;
    r.h = h;
    const std::size_t k = h.size() - 1;
    for (const auto& dir : directions) {
        if (dir.size() != 2) throw ValidationError("probe directions must have two components");
        const double norm = std::hypot(dir[0], dir[1]);
        if (!(std::abs(norm - 1.0) <= 1e-12)) throw ValidationError("probe directions must be unit vectors");
        ProbeDirection pd;
        pd.direction = dir;
        for (double hh : h) pd.values.push_back(scenario_cell(sc, center[0] + hh * dir[0], center[1] + hh * dir[1]));

        auto extrapolate = [&](std::size_t j) {
            const double f1 = *pd.values[j - 1], f2 = *pd.values[j];
            return f2 - h[j] * (f1 - f2) / (h[j - 1] - h[j]);
        };
        const bool have_last = pd.values[k] && pd.values[k - 1];
        if (!have_last) throw SolverError(kInf, "probe evaluation singular at the smallest steps");
        pd.limit = extrapolate(k);
        if (k >= 2 && pd.values[k - 2])
            pd.residual = std::abs(pd.limit - extrapolate(k - 1));
        else
            pd.residual = std::abs(*pd.values[k] - *pd.values[k - 1]);
        r.max_residual = std::max(r.max_residual, pd.residual);
        r.directions.push_back(std::move(pd));
    }
    for (std::size_t i = 0; i < r.directions.size(); ++i)
        for (std::size_t j = i + 1; j < r.directions.size(); ++j)
            r.max_gap = std::max(r.max_gap, std::abs(r.directions[i].limit - r.directions[j].limit));
    // below ~1e-12 the gap is at the level of rounding in the extended-precision evaluation
    r.direction_dependent = r.max_gap > 10.0 * r.max_residual && r.max_gap > 1e-12;
    return r;
}

}  // namespace imspe
