#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace imspe {

// splitmix64; doubles come from the top 53 bits so streams are identical on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    double uniform();  // [0, 1)
    double uniform(double lo, double hi);
    double log_uniform(double lo, double hi);

private:
    std::uint64_t state_;
};

struct ValidationRow {
    std::string name;
    std::size_t samples = 0;
    double max_abs_err = 0.0;
    double max_rel_err = 0.0;
    double worst_theta = 0.0;  // first theta of the worst sample
    bool pass = true;
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    bool pass = true;
};

inline constexpr double kValidationTol = 1e-9;

// Closed forms against the quadrature oracle: each basic integral and each R-element assembly
// (d = 2 products), on `samples` draws with theta log-uniform in [0.01, 100].
ValidationReport run_validation(std::size_t samples, unsigned threads = 1, std::uint64_t seed = 20240611);

// Fixed-width text table, one row per integral.
std::string format_validation(const ValidationReport& r);

}  // namespace imspe
