#include "imspe/validate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "imspe/format.hpp"
#include "imspe/integrals.hpp"
#include "imspe/oracle.hpp"
#include "imspe/parallel.hpp"

namespace imspe {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double SplitMix64::log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

namespace {

struct Sample {
    double closed;
    double oracle;
    double theta;
};

using Case = std::function<Sample(SplitMix64&)>;

struct Entry {
    std::string name;
    Case run;
};

constexpr double kThetaLo = 0.01, kThetaHi = 100.0;

Entry basic_border(const char* name, Family f) {
    return {name, [f](SplitMix64& g) {
                const double a = g.uniform(-1, 1), t = g.log_uniform(kThetaLo, kThetaHi);
                return Sample{border_integral(f, a, t), oracle_r_element(make_kernel(f, {t}), {a}), t};
            }};
}

Entry basic_pair(const char* name, Family f) {
    return {name, [f](SplitMix64& g) {
                const double a = g.uniform(-1, 1), b = g.uniform(-1, 1), t = g.log_uniform(kThetaLo, kThetaHi);
                return Sample{pair_integral(f, a, b, t), oracle_r_element(make_kernel(f, {t}), {a}, Point{b}), t};
            }};
}

Entry assembly_border(std::string name, Family f) {
    return {std::move(name), [f](SplitMix64& g) {
                const Point x{g.uniform(-1, 1), g.uniform(-1, 1)};
                const KernelSpec k = make_kernel(f, {g.log_uniform(kThetaLo, kThetaHi), g.log_uniform(kThetaLo, kThetaHi)});
                return Sample{r_border(k, x), oracle_r_element(k, x), k.theta[0]};
            }};
}

Entry assembly_inner(std::string name, Family f) {
    return {std::move(name), [f](SplitMix64& g) {
                const Point x{g.uniform(-1, 1), g.uniform(-1, 1)}, y{g.uniform(-1, 1), g.uniform(-1, 1)};
                const KernelSpec k = make_kernel(f, {g.log_uniform(kThetaLo, kThetaHi), g.log_uniform(kThetaLo, kThetaHi)});
                return Sample{r_inner(k, x, y), oracle_r_element(k, x, y), k.theta[0]};
            }};
}

std::vector<Entry> entries() {
    std::vector<Entry> e{
        basic_border("i1", Family::ExpP1),
        basic_pair("i2", Family::ExpP1),
        basic_border("i3", Family::GaussP2),
        basic_pair("i4", Family::GaussP2),
        basic_border("i5", Family::Matern32),
        basic_pair("i6", Family::Matern32),
        basic_border("i7", Family::Matern52),
        basic_pair("i8", Family::Matern52),
        {"j1",
         [](SplitMix64& g) {
             const double a = g.uniform(0, 1), t = g.log_uniform(kThetaLo, kThetaHi);
             return Sample{j1(a, t), oracle_unit_element({t}, {a}), t};
         }},
        {"j2",
         [](SplitMix64& g) {
             const double a = g.uniform(0, 1), b = g.uniform(0, 1), t = g.log_uniform(kThetaLo, kThetaHi);
             return Sample{j2(a, b, t), oracle_unit_element({t}, {a}, Point{b}), t};
         }},
    };
    for (Family f : kFamilies) {
        e.push_back(assembly_border("r_border " + std::string(family_name(f)), f));
        e.push_back(assembly_inner("r_inner " + std::string(family_name(f)), f));
    }
    e.push_back({"j_border", [](SplitMix64& g) {
                     const Point x{g.uniform(0, 1), g.uniform(0, 1)};
                     const std::vector<double> t{g.log_uniform(kThetaLo, kThetaHi), g.log_uniform(kThetaLo, kThetaHi)};
                     return Sample{j_border(t, x), oracle_unit_element(t, x), t[0]};
                 }});
    e.push_back({"j_inner", [](SplitMix64& g) {
                     const Point x{g.uniform(0, 1), g.uniform(0, 1)}, y{g.uniform(0, 1), g.uniform(0, 1)};
                     const std::vector<double> t{g.log_uniform(kThetaLo, kThetaHi), g.log_uniform(kThetaLo, kThetaHi)};
                     return Sample{j_inner(t, x, y), oracle_unit_element(t, x, y), t[0]};
                 }});
    return e;
}

}  // namespace

ValidationReport run_validation(std::size_t samples, unsigned threads, std::uint64_t seed) {
    const auto list = entries();
    const std::size_t total = list.size() * samples;
    // each (entry, sample) draws from its own stream, so results do not depend on scheduling
    const auto results = parallel_map(total, threads, [&](std::size_t k) {
        SplitMix64 g(seed ^ (0xD1B54A32D192ED03ULL * (k + 1)));
        return list[k / samples].run(g);
    });

    ValidationReport rep;
    for (std::size_t e = 0; e < list.size(); ++e) {
        ValidationRow row;
        row.name = list[e].name;
        row.samples = samples;
        double worst = -1.0;
        for (std::size_t s = 0; s < samples; ++s) {
            const Sample& x = results[e * samples + s];
            const double abs_err = std::abs(x.closed - x.oracle);
            const double rel_err = abs_err / std::max(std::abs(x.oracle), 1e-300);
            row.max_rel_err = std::max(row.max_rel_err, rel_err);
            if (!(abs_err <= std::max(kValidationTol, kValidationTol * std::abs(x.closed)))) row.pass = false;
            if (abs_err > worst) {
                worst = abs_err;
                row.max_abs_err = abs_err;
                row.worst_theta = x.theta;
            }
        }
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

std::string format_validation(const ValidationReport& r) {
    std::ostringstream os;
    auto pad = [](std::string s, std::size_t w) {
        if (s.size() < w) s.append(w - s.size(), ' ');
        return s;
    };
    os << pad("integral", 22) << pad("samples", 9) << pad("max_abs_err", 26) << pad("max_rel_err", 26)
       << pad("worst_theta", 26) << "status\n";
    for (const auto& row : r.rows) {
        os << pad(row.name, 22) << pad(std::to_string(row.samples), 9) << pad(fmt17(row.max_abs_err), 26)
           << pad(fmt17(row.max_rel_err), 26) << pad(fmt17(row.worst_theta), 26) << (row.pass ? "ok" : "FAIL")
           << '\n';
    }
    os << (r.pass ? "all within tolerance " : "tolerance breach; limit ") << fmt17(kValidationTol) << '\n';
    return os.str();
}

}  // namespace imspe
