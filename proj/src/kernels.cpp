#include "imspe/kernels.hpp"

#include <string>

#include "imspe/errors.hpp"

namespace imspe {

std::string_view family_name(Family f) {
    switch (f) {
        case Family::ExpP1: return "exp-p1";
        case Family::Matern32: return "matern-3-2";
        case Family::Matern52: return "matern-5-2";
        case Family::GaussP2: return "gauss-p2";
    }
    return "?";
}

Family parse_family(std::string_view name) {
    for (Family f : kFamilies)
        if (family_name(f) == name) return f;
    throw ValidationError("unknown kernel '" + std::string(name) +
                          "' (expected exp-p1, matern-3-2, matern-5-2 or gauss-p2)");
}

KernelSpec make_kernel(Family family, std::vector<double> theta) {
    if (theta.empty()) throw ValidationError("theta must have at least one entry");
    for (double t : theta)
        if (!std::isfinite(t) || t <= 0.0) throw ValidationError("theta entries must be finite and > 0");
    return KernelSpec{family, std::move(theta)};
}

void check_point(const Point& p, std::size_t d) {
    if (p.size() != d)
        throw ValidationError("point has " + std::to_string(p.size()) + " coordinates, expected " +
                              std::to_string(d));
    for (double c : p)
        if (!std::isfinite(c) || c < -1.0 || c > 1.0)
            throw ValidationError("point coordinate outside [-1, 1]");
}

double corr_pair(const KernelSpec& k, const Point& xi, const Point& xj) {
    if (xi.size() != k.dim() || xj.size() != k.dim()) throw ValidationError("dimension mismatch in corr_pair");
    double v = 1.0;
    for (std::size_t m = 0; m < k.dim(); ++m) v *= corr1(k.family, k.theta[m], xi[m] - xj[m]);
    return v;
}

double corr_point(const KernelSpec& k, const Point& xi, const std::vector<double>& x) {
    if (xi.size() != k.dim() || x.size() != k.dim()) throw ValidationError("dimension mismatch in corr_point");
    double v = 1.0;
    for (std::size_t m = 0; m < k.dim(); ++m) {
        if (!std::isfinite(x[m])) throw ValidationError("non-finite coordinate in corr_point");
        v *= corr1(k.family, k.theta[m], xi[m] - x[m]);
    }
    return v;
}

}  // namespace imspe
