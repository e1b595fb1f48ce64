#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "imspe/imspe.hpp"
#include "imspe/kernels.hpp"

namespace imspe {

struct OptimizeSettings {
    double tol_x = 1e-8;
    int max_iter = 20000;
};

enum class PairConstraint { None, Symmetric };

struct OptimumReport {
    KernelSpec kernel;
    Design design;
    double imspe_value = 0.0;
    bool converged = false;
    bool second_order_positive = false;
    std::vector<double> curvature;  // n = 1: d2/dx2; n = 2: Hessian eigenvalues, ascending
    double gradient_norm = 0.0;
    double boundary_distance = 0.0;
    bool symmetric = false;  // |x1 + x2| <= 1e-5; |x1| <= 1e-5 for n = 1
    int starts = 0;
    int starts_converged = 0;
    std::string objective;  // "imspe" or "excess"
};

// Brent search on [-1, 1].
OptimumReport optimize_n1(Family f, double theta, const OptimizeSettings& s = {});

// Nelder-Mead from a fixed lattice of ordered starts (x1 > x2), or a scalar search on x2 = -x1.
OptimumReport optimize_n2(Family f, double theta, PairConstraint c = PairConstraint::None,
                          const OptimizeSettings& s = {});

// The fixed multistart lattice used by optimize_n2.
std::vector<std::pair<double, double>> start_lattice();

// Log-uniform grid with inclusive endpoints.
std::vector<double> log_grid(double lo, double hi, std::size_t count);
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

struct SweepResult {
    std::vector<double> thetas;
    std::vector<OptimumReport> reports;
    std::vector<std::string> failures;  // one entry per theta, empty when the point succeeded
    double x1_min = 0.0;
    double x1_max = 0.0;
};

// Per-theta optima (n = 1 or 2) and the envelope of x1* over the successful points.
SweepResult sweep_theta(Family f, std::size_t n, const std::vector<double>& thetas, unsigned threads = 1,
                        const OptimizeSettings& s = {});

struct ScanRow {
    std::vector<double> coords;
    std::optional<double> value;  // empty at singular nodes
};

struct ScanTable {
    std::vector<std::string> columns;  // coordinate names; the value column is "imspe"
    std::vector<ScanRow> rows;
};

// d = 1 raster: n = 1 over x1, or n = 2 over (x1, x2) row-major with x1 slowest.
ScanTable scan_surface(Family f, double theta, std::size_t n, double lo, double hi, std::size_t count,
                       unsigned threads = 1);

// Gaussian d = 2, n = 4 design with two fixed points and a free inversion pair x4 = -x3.
struct InversionScenario {
    KernelSpec kernel;
    Point fixed1;
    Point fixed2;
};

InversionScenario figure_one_scenario();

// IMSPE of {fixed1, fixed2, (u, v), (-u, -v)} in extended precision.  Throws on coincident points.
double scenario_imspe(const InversionScenario& sc, double u, double v);

ScanTable scan_scenario(const InversionScenario& sc, double lo_u, double hi_u, std::size_t count_u, double lo_v,
                        double hi_v, std::size_t count_v, unsigned threads = 1);

// Slice along the abscissa, x3 = (t, 0).
ScanTable scan_scenario_slice(const InversionScenario& sc, double lo, double hi, std::size_t count,
                              unsigned threads = 1);

struct SliceMinimum {
    double t = 0.0;
    double imspe = 0.0;
};

// Interior local minima of the abscissa slice, refined by Brent between neighbouring grid nodes.
std::vector<SliceMinimum> slice_minima(const InversionScenario& sc, const ScanTable& slice);

struct ProbeDirection {
    std::vector<double> direction;
    std::vector<std::optional<double>> values;  // one per h
    double limit = 0.0;     // linear extrapolation to h = 0 from the last two h
    double residual = 0.0;  // change of that extrapolation against the previous pair
};

struct ProbeReport {
    Point center;
    std::vector<double> h;
    std::vector<ProbeDirection> directions;
    double max_gap = 0.0;
    double max_residual = 0.0;
    bool direction_dependent = false;  // max_gap > 10 * max_residual
};

ProbeReport discontinuity_probe(const InversionScenario& sc, const Point& center,
                                const std::vector<std::vector<double>>& directions, const std::vector<double>& h);

}  // namespace imspe
