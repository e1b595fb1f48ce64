#include "imspe/app.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "imspe/cluster.hpp"
#include "imspe/errors.hpp"
#include "imspe/format.hpp"
#include "imspe/imspe.hpp"
#include "imspe/optimize.hpp"
#include "imspe/validate.hpp"

namespace imspe {

namespace {

using Json = nlohmann::ordered_json;

// ---- argument parsing ----

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_number(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (s.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
        throw ValidationError("not a finite number: '" + s + "'");
    return v;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& tok : split(s, ',')) out.push_back(parse_number(tok));
    return out;
}

std::size_t parse_count(const std::string& s) {
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ValidationError("not a count: '" + s + "'");
    return v;
}

// "x,y;x,y"; for d = 1 also "x1,x2,..."
std::vector<Point> parse_points(const std::string& s, std::size_t d) {
    std::vector<Point> pts;
    if (s.find(';') == std::string::npos && d == 1) {
        for (double x : parse_list(s)) pts.push_back({x});
        return pts;
    }
    for (const auto& tok : split(s, ';')) pts.push_back(parse_list(tok));
    return pts;
}

struct Grid {
    double lo;
    double hi;
    std::size_t count;
    bool log;
};

Grid parse_grid(const std::string& s) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw ValidationError("grid spec must be lo:hi:N or lo:hi:Nlog");
    Grid g{parse_number(parts[0]), parse_number(parts[1]), 0, false};
    std::string n = parts[2];
    if (n.size() > 3 && n.compare(n.size() - 3, 3, "log") == 0) {
        g.log = true;
        n.resize(n.size() - 3);
    }
    g.count = parse_count(n);
    if (g.count < 2) throw ValidationError("grid needs at least two points");
    return g;
}

Family family_arg(const std::string& s) {
    try {
        return parse_family(s);
    } catch (const Error&) {
        throw ValidationError("unknown kernel '" + s + "' (expected exp-p1, matern-3-2, matern-5-2 or gauss-p2)");
    }
}

double single_theta(const std::string& s) {
    const auto t = parse_list(s);
    if (t.size() != 1) throw ValidationError("this command takes a single theta");
    return t.front();
}

// ---- JSON builders ----

Json points_json(const Design& d) {
    Json arr = Json::array();
    for (const auto& p : d.points) arr.push_back(p);
    return arr;
}

Json report_json(const OptimumReport& r) {
    Json j;
    j["kernel"] = family_name(r.kernel.family);
    j["theta"] = r.kernel.theta.front();
    j["n"] = r.design.n();
    j["design"] = points_json(r.design);
    j["imspe"] = r.imspe_value;
    j["converged"] = r.converged;
    j["second_order_positive"] = r.second_order_positive;
    j["curvature"] = r.curvature;
    j["gradient_norm"] = r.gradient_norm;
    j["boundary_distance"] = r.boundary_distance;
    j["symmetric"] = r.symmetric;
    j["starts"] = r.starts;
    j["starts_converged"] = r.starts_converged;
    j["objective"] = r.objective;
    return j;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

// ---- commands ----

struct Options {
    std::string kernel;
    std::string theta;
    std::string points;
    std::string format = "json";
    std::string output;
    bool extended = false;
    std::size_t n = 2;
    bool symmetric = false;
    std::string theta_grid;
    std::string grid = "-1:1:101";
    std::string grid_y;
    std::string scenario;
    bool slice = false;
    std::string xt;
    std::string center = "0,0";
    std::string directions = "1,0;0,1";
    std::string h = "0.1,0.01,0.001,0.0001,0.00001";
    bool quick = false;
    std::size_t samples = 0;
    unsigned threads = 1;
};

CommandResult cmd_eval(const Options& o) {
    const auto theta = parse_list(o.theta);
    const KernelSpec k = make_kernel(family_arg(o.kernel), theta);
    const Design d = make_design(k.dim(), parse_points(o.points, k.dim()));
    const double value = imspe_value(k, d, o.extended ? Precision::Extended : Precision::Double);
    double cond = std::numeric_limits<double>::infinity();
    try {
        cond = build_matrices(k, d).condition_estimate;
    } catch (const NearSingularError&) {
        if (!o.extended) throw;
    }
    CommandResult r;
    if (o.format == "csv") {
        r.out = "# imspe-kit eval v1\nimspe,n,d,condition_estimate\n" + fmt17(value) + "," + std::to_string(d.n()) +
                "," + std::to_string(d.d) + "," + fmt17(cond) + "\n";
        return r;
    }
    Json j;
    j["imspe"] = value;
    j["n"] = d.n();
    j["d"] = d.d;
    j["kernel"] = family_name(k.family);
    j["theta"] = k.theta;
    j["points"] = points_json(d);
    j["condition_estimate"] = cond;
    j["precision"] = o.extended ? "extended" : "double";
    r.out = dump_json(j);
    return r;
}

CommandResult cmd_optimize(const Options& o) {
    const Family f = family_arg(o.kernel);
    const double theta = single_theta(o.theta);
    OptimumReport rep;
    if (o.n == 1)
        rep = optimize_n1(f, theta);
    else if (o.n == 2)
        rep = optimize_n2(f, theta, o.symmetric ? PairConstraint::Symmetric : PairConstraint::None);
    else
        throw ValidationError("optimize supports n = 1 or n = 2");
    CommandResult r;
    if (o.format == "csv") {
        std::string out = "# imspe-kit optimize v1\n";
        out += rep.design.n() == 1 ? "theta,x1" : "theta,x1,x2";
        out += ",imspe,converged,second_order_positive,symmetric,boundary_distance,objective\n";
        out += fmt17(theta);
        for (const auto& p : rep.design.points) out += "," + fmt17(p.front());
        out += "," + fmt17(rep.imspe_value) + "," + bool_str(rep.converged) + "," +
               bool_str(rep.second_order_positive) + "," + bool_str(rep.symmetric) + "," +
               fmt17(rep.boundary_distance) + "," + rep.objective + "\n";
        r.out = out;
        return r;
    }
    Json j = report_json(rep);
    j["constraint"] = o.symmetric ? "symmetric" : "none";
    r.out = dump_json(j);
    return r;
}

CommandResult cmd_sweep(const Options& o) {
    const Family f = family_arg(o.kernel);
    const Grid g = parse_grid(o.theta_grid);
    if (!g.log) throw ValidationError("theta grids are log-uniform: use lo:hi:Nlog");
    const auto thetas = log_grid(g.lo, g.hi, g.count);
    const SweepResult s = sweep_theta(f, o.n, thetas, o.threads);
    std::size_t failures = 0;
    for (const auto& fl : s.failures) failures += fl.empty() ? 0 : 1;

    CommandResult r;
    if (o.format == "json") {
        Json j;
        j["kernel"] = family_name(f);
        j["n"] = o.n;
        Json rows = Json::array();
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            Json row = report_json(s.reports[i]);
            row["status"] = s.failures[i].empty() ? "ok" : s.failures[i];
            rows.push_back(row);
        }
        j["optima"] = rows;
        j["envelope"] = Json{{"x1_min", s.x1_min}, {"x1_max", s.x1_max}};
        j["failures"] = failures;
        r.out = dump_json(j);
        return r;
    }
    std::string out = "# imspe-kit sweep v1\n";
    out += o.n == 1 ? "theta,x1" : "theta,x1,x2";
    out += ",imspe,converged,second_order_positive,symmetric,boundary_distance,status\n";
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        const auto& rep = s.reports[i];
        out += fmt17(thetas[i]);
        for (const auto& p : rep.design.points) out += "," + fmt17(p.front());
        out += "," + fmt17(rep.imspe_value) + "," + bool_str(rep.converged) + "," +
               bool_str(rep.second_order_positive) + "," + bool_str(rep.symmetric) + "," +
               fmt17(rep.boundary_distance) + "," + (s.failures[i].empty() ? "ok" : s.failures[i]) + "\n";
    }
    out += "# envelope\nx1_min,x1_max\n" + fmt17(s.x1_min) + "," + fmt17(s.x1_max) + "\n";
    r.out = out;
    return r;
}

CommandResult cmd_scan(const Options& o) {
    if (o.format != "csv" && o.format != "json") throw ValidationError("unknown format");
    const Grid g = parse_grid(o.grid);
    if (g.log) throw ValidationError("coordinate grids are linear: use lo:hi:N");
    ScanTable t;
    if (!o.scenario.empty()) {
        if (o.scenario != "fig1") throw ValidationError("unknown scenario '" + o.scenario + "' (expected fig1)");
        const auto sc = figure_one_scenario();
        if (o.slice) {
            t = scan_scenario_slice(sc, g.lo, g.hi, g.count, o.threads);
        } else {
            const Grid gy = o.grid_y.empty() ? g : parse_grid(o.grid_y);
            t = scan_scenario(sc, g.lo, g.hi, g.count, gy.lo, gy.hi, gy.count, o.threads);
        }
    } else {
        t = scan_surface(family_arg(o.kernel), single_theta(o.theta), o.n, g.lo, g.hi, g.count, o.threads);
    }
    CommandResult r;
    if (o.format == "json") {
        Json j;
        j["columns"] = t.columns;
        Json rows = Json::array();
        for (const auto& row : t.rows) {
            Json cells = Json::array();
            for (double c : row.coords) cells.push_back(c);
            cells.push_back(row.value ? Json(*row.value) : Json("singular"));
            rows.push_back(cells);
        }
        j["rows"] = rows;
        r.out = dump_json(j);
        return r;
    }
    r.out = scan_csv(t);
    return r;
}

CommandResult cmd_expand(const Options& o) {
    const double theta = single_theta(o.theta);
    const double xt = parse_number(o.xt);
    const ExpansionSeries s = expansion_gauss(xt, theta);
    const double st = st_term(theta);
    CommandResult r;
    if (o.format == "csv") {
        r.out = "# imspe-kit expand v1\ntheta,x_t,c0,c2,st_term\n" + fmt17(theta) + "," + fmt17(xt) + "," +
                fmt17(s.c0) + "," + fmt17(s.c2) + "," + fmt17(st) + "\n";
        return r;
    }
    Json j;
    j["theta"] = theta;
    j["x_t"] = xt;
    j["c0"] = s.c0;
    j["c2"] = s.c2;
    j["st_term"] = st;
    j["remainder"] = ExpansionSeries::remainder_order;
    r.out = dump_json(j);
    return r;
}

CommandResult cmd_probe(const Options& o) {
    if (!o.scenario.empty() && o.scenario != "fig1")
        throw ValidationError("unknown scenario '" + o.scenario + "' (expected fig1)");
    const auto center = parse_list(o.center);
    std::vector<std::vector<double>> dirs;
    for (const auto& tok : split(o.directions, ';')) dirs.push_back(parse_list(tok));
    const auto h = parse_list(o.h);
    const ProbeReport p = discontinuity_probe(figure_one_scenario(), center, dirs, h);
    if (o.format == "csv") {
        // one row per direction; values at each step follow as h=... columns
        std::string out = "# imspe-kit probe v1\ndirection";
        for (double hk : p.h) out += ",h=" + fmt17(hk);
        out += ",limit,residual\n";
        for (const auto& d : p.directions) {
            std::string dir;
            for (double c : d.direction) dir += (dir.empty() ? "" : " ") + fmt17(c);
            out += dir;
            for (const auto& v : d.values) out += "," + (v ? fmt17(*v) : std::string("singular"));
            out += "," + fmt17(d.limit) + "," + fmt17(d.residual) + "\n";
        }
        out += "# summary\nmax_gap,max_residual,direction_dependent\n" + fmt17(p.max_gap) + "," +
               fmt17(p.max_residual) + "," + bool_str(p.direction_dependent) + "\n";
        return {kExitOk, out, {}};
    }
    Json j;
    j["scenario"] = "fig1";
    j["center"] = p.center;
    j["h"] = p.h;
    Json arr = Json::array();
    for (const auto& d : p.directions) {
        Json dj;
        dj["direction"] = d.direction;
        Json vals = Json::array();
        for (const auto& v : d.values) vals.push_back(v ? Json(*v) : Json("singular"));
        dj["values"] = vals;
        dj["limit"] = d.limit;
        dj["residual"] = d.residual;
        arr.push_back(dj);
    }
    j["directions"] = arr;
    j["max_gap"] = p.max_gap;
    j["max_residual"] = p.max_residual;
    j["direction_dependent"] = p.direction_dependent;
    CommandResult r;
    r.out = dump_json(j);
    return r;
}

CommandResult cmd_validate(const Options& o) {
    const std::size_t samples = o.samples ? o.samples : (o.quick ? 100 : 500);
    const ValidationReport rep = run_validation(samples, o.threads);
    CommandResult r;
    if (o.format == "json") {
        Json rows = Json::array();
        for (const auto& row : rep.rows)
            rows.push_back(Json{{"integral", row.name},
                                {"samples", row.samples},
                                {"max_abs_err", row.max_abs_err},
                                {"max_rel_err", row.max_rel_err},
                                {"worst_theta", row.worst_theta},
                                {"pass", row.pass}});
        Json j;
        j["tolerance"] = kValidationTol;
        j["rows"] = rows;
        j["pass"] = rep.pass;
        r.out = dump_json(j);
    } else if (o.format == "csv") {
        r.out = "# imspe-kit validate v1\nintegral,samples,max_abs_err,max_rel_err,worst_theta,status\n";
        for (const auto& row : rep.rows)
            r.out += row.name + "," + std::to_string(row.samples) + "," + fmt17(row.max_abs_err) + "," +
                     fmt17(row.max_rel_err) + "," + fmt17(row.worst_theta) + "," + (row.pass ? "ok" : "FAIL") + "\n";
    } else {
        r.out = format_validation(rep);
    }
    if (!rep.pass) {
        r.exit_code = kExitBreach;
        r.err = "closed form and quadrature disagree beyond tolerance\n";
    }
    return r;
}

}  // namespace

CommandResult run_cli(const std::vector<std::string>& args) {
    CLI::App app{"IMSPE evaluation, optimization and expansion toolkit", "imspe-kit"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
        c->add_option("--output,-o", o.output, "write the result to this file");
    };
    auto add_threads = [&](CLI::App* c) {
        c->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 256u));
    };

    auto* eval = app.add_subcommand("eval", "IMSPE of a design");
    eval->add_option("--kernel", o.kernel, "exp-p1 | matern-3-2 | matern-5-2 | gauss-p2")->required();
    eval->add_option("--theta", o.theta, "comma-separated, one per dimension")->required();
    eval->add_option("--points", o.points, "points separated by ';', coordinates by ','")->required();
    eval->add_flag("--extended", o.extended, "113-bit arithmetic for ill-conditioned designs");
    add_common(eval);

    auto* opt = app.add_subcommand("optimize", "optimal n = 1 or n = 2 design on [-1, 1]");
    opt->add_option("--kernel", o.kernel)->required();
    opt->add_option("--theta", o.theta)->required();
    opt->add_option("--n", o.n, "design size")->check(CLI::Range(1, 2));
    opt->add_flag("--symmetric", o.symmetric, "restrict to x2 = -x1");
    add_common(opt);

    auto* sweep = app.add_subcommand("sweep", "optima over a log theta grid");
    sweep->add_option("--kernel", o.kernel)->required();
    sweep->add_option("--n", o.n)->check(CLI::Range(1, 2));
    sweep->add_option("--theta-grid", o.theta_grid, "lo:hi:Nlog")->required();
    add_threads(sweep);
    add_common(sweep);

    auto* scan = app.add_subcommand("scan", "IMSPE raster");
    scan->add_option("--kernel", o.kernel);
    scan->add_option("--theta", o.theta);
    scan->add_option("--n", o.n)->check(CLI::Range(1, 2));
    scan->add_option("--grid", o.grid, "lo:hi:N per axis");
    scan->add_option("--grid-y", o.grid_y, "second axis for the scenario scan");
    scan->add_option("--scenario", o.scenario, "fig1: d = 2, n = 4 inversion-pair scenario");
    scan->add_flag("--slice", o.slice, "scenario abscissa slice only");
    add_threads(scan);
    add_common(scan);

    auto* expand = app.add_subcommand("expand", "Gaussian cluster expansion coefficients");
    expand->add_option("--theta", o.theta)->required();
    expand->add_option("--xt", o.xt, "pair centre")->required();
    add_common(expand);

    auto* probe = app.add_subcommand("probe", "directional limits in the fig1 scenario");
    probe->add_option("--scenario", o.scenario);
    probe->add_option("--center", o.center, "u,v");
    probe->add_option("--directions", o.directions, "unit vectors separated by ';'");
    probe->add_option("--steps", o.h, "decreasing step sizes");
    add_common(probe);

    auto* validate = app.add_subcommand("validate", "closed forms against quadrature");
    validate->add_flag("--quick", o.quick, "100 samples per integral");
    validate->add_option("--samples", o.samples, "samples per integral");
    add_threads(validate);
    validate->add_option("--format", o.format, "table (default), json or csv")
        ->check(CLI::IsMember({"table", "json", "csv"}));
    validate->add_option("--output,-o", o.output, "write the result to this file");

    CommandResult r;
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        // sweep and scan default to CSV, validate to a text table
        if (!args.empty() && (args.front() == "sweep" || args.front() == "scan")) o.format = "csv";
        if (!args.empty() && args.front() == "validate") o.format = "table";
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        r.out = app.help();
        return r;
    } catch (const CLI::ParseError& e) {
        r.exit_code = kExitUsage;
        r.err = std::string(e.what()) + "\n";
        return r;
    }

    try {
        if (eval->parsed()) r = cmd_eval(o);
        else if (opt->parsed()) r = cmd_optimize(o);
        else if (sweep->parsed()) r = cmd_sweep(o);
        else if (scan->parsed()) r = cmd_scan(o);
        else if (expand->parsed()) r = cmd_expand(o);
        else if (probe->parsed()) r = cmd_probe(o);
        else if (validate->parsed()) r = cmd_validate(o);
    } catch (const NearSingularError& e) {
        return {kExitSingular, {}, std::string("singular: ") + e.what() + "\n"};
    } catch (const SolverError& e) {
        return {kExitSolver, {}, std::string("solver failure: ") + e.what() + "\n"};
    } catch (const QuadratureError& e) {
        return {kExitSolver, {}, std::string("quadrature failure: ") + e.what() + "\n"};
    } catch (const Error& e) {
        return {kExitUsage, {}, std::string("error: ") + e.what() + "\n"};
    }

    if (!o.output.empty()) {
        std::ofstream f(o.output, std::ios::binary);
        if (!f) return {kExitUsage, {}, "cannot open output file " + o.output + "\n"};
        f << r.out;
        r.out.clear();
    }
    return r;
}

}  // namespace imspe
