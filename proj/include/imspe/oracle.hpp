#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "imspe/kernels.hpp"

namespace imspe {

struct Design;

struct QuadratureSettings {
    double abs_tol = 1e-12;
    int max_depth = 60;
    std::vector<double> split_points;
};

// Adaptive Simpson with Richardson correction.  Interior split points are always
// honoured; throws QuadratureError if any panel fails to converge within max_depth.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSettings& settings = {});

// Domain average of one correlation (border, xj empty) or a product of two (inner),
// by per-dimension quadrature.
double oracle_r_element(const KernelSpec& k, const Point& xi, const std::optional<Point>& xj = std::nullopt,
                        const QuadratureSettings& settings = {});

// Same for the exponential kernel on the unit cube [0, 1]^d.
double oracle_unit_element(const std::vector<double>& theta, const Point& xi,
                           const std::optional<Point>& xj = std::nullopt, const QuadratureSettings& settings = {});

// 1 - tr(L^{-1} R) with every R entry from quadrature.
double oracle_imspe(const KernelSpec& k, const Design& design, const QuadratureSettings& settings = {});

}  // namespace imspe
