#include "hammerfix/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <tuple>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace hammerfix::cli {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitContradiction = 2;

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void write_output(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file)
        throw std::runtime_error("cannot open output file: " + out_path);
    file << text;
}

json samples_to_json(const std::vector<std::pair<double, double>>& samples) {
    json t = json::array(), f = json::array();
    for (const auto& [ti, fi] : samples) {
        t.push_back(ti);
        f.push_back(fi);
    }
    return json{{"t", t}, {"f", f}};
}

std::string classification_block(const solver::ClassificationFacts& facts, json& j) {
    j = json{
        {"verdict", solver::to_string(facts.verdict)},
        {"sign_pattern", facts.sign_pattern},
        {"d_nondecreasing", facts.d_nondecreasing},
        {"d_nonincreasing", facts.d_nonincreasing},
        {"bracket_found", facts.bracket_found},
    };
    return solver::to_string(facts.verdict);
}

void print_solve_text(const solver::SolveReport& r, std::ostream& out) {
    out << "kernel: phi1=" << r.kernel_sources[0] << " phi2=" << r.kernel_sources[1]
        << " psi1=" << r.kernel_sources[2] << " psi2=" << r.kernel_sources[3]
        << " k=" << r.k << "\n";
    out << "coefficients a:";
    for (double v : r.coefficients.a) out << " " << v;
    out << "\ncoefficients b:";
    for (double v : r.coefficients.b) out << " " << v;
    out << "\nd:";
    for (double v : r.coefficients.d) out << " " << v;
    out << "\npolynomial (descending):";
    for (double v : r.polynomial.coeffs) out << " " << v;
    out << "\ndescartes bound: " << r.descartes_bound << "\n";
    out << "classification: " << solver::to_string(r.classification.verdict) << "\n";
    out << "n_fix: " << r.n_fix << "\n";
    for (std::size_t i = 0; i < r.fixed_points.size(); ++i) {
        const auto& f = r.fixed_points[i];
        out << "  fixed point " << i + 1 << ": xi=" << f.xi << " x0=" << f.x0
            << " y0=" << f.y0 << " operator residual=" << f.residual_sup << "\n";
    }
}

}  // namespace

KernelFile parse_kernel_text(const std::string& text, const std::string& origin) {
    std::string phi1, phi2, psi1, psi2;
    int k = -1;
    KernelFile result{
        quad::KernelSpec{expr::Expression::parse("1"), expr::Expression::parse("1"),
                         expr::Expression::parse("1"), expr::Expression::parse("1"), 2},
        {}};

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                                     ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "phi1") phi1 = value;
        else if (key == "phi2") phi2 = value;
        else if (key == "psi1") psi1 = value;
        else if (key == "psi2") psi2 = value;
        else if (key == "k") k = std::stoi(value);
        else if (key == "quad_tol") result.options.quad_tol = std::stod(value);
        else if (key == "root_tol") result.options.root_tol = std::stod(value);
        else if (key == "residual_tol") result.options.residual_tol = std::stod(value);
        else if (key == "grid") result.options.report_grid = std::stoi(value);
        else
            throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                                     ": unknown key '" + key + "'");
    }
    if (phi1.empty() || phi2.empty() || psi1.empty() || psi2.empty() || k < 0)
        throw std::runtime_error(origin + ": keys phi1, phi2, psi1, psi2, k are required");
    result.kernel = quad::KernelSpec{
        expr::Expression::parse(phi1), expr::Expression::parse(phi2),
        expr::Expression::parse(psi1), expr::Expression::parse(psi2), k};
    return result;
}

KernelFile parse_kernel_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file)
        throw std::runtime_error("cannot open kernel file: " + path);
    std::ostringstream buf;
    buf << file.rdbuf();
    return parse_kernel_text(buf.str(), path);
}

json solve_report_to_json(const solver::SolveReport& r, const solver::SolveOptions& opts) {
    json roots = json::array();
    for (const auto& root : r.roots) {
        roots.push_back(json{
            {"value", root.value},
            {"enclosure", json::array({root.lo, root.hi})},
            {"poly_residual", root.poly_residual},
            {"sign_confirmed", root.sign_confirmed},
            {"multiplicity", root.multiplicity},
        });
    }
    json fixed_points = json::array();
    for (const auto& f : r.fixed_points) {
        fixed_points.push_back(json{
            {"x0", f.x0},
            {"y0", f.y0},
            {"xi", f.xi},
            {"residual_sup", f.residual_sup},
            {"samples", samples_to_json(f.samples)},
        });
    }
    json classification;
    classification_block(r.classification, classification);

    json oracle = nullptr;
    if (r.oracle) {
        oracle = json{
            {"count", r.oracle->oracle_count},
            {"match", r.oracle->match},
            {"max_ratio_mismatch", r.oracle->max_ratio_mismatch},
        };
    }
    return json{
        {"inputs",
         json{
             {"phi1", r.kernel_sources[0]},
             {"phi2", r.kernel_sources[1]},
             {"psi1", r.kernel_sources[2]},
             {"psi2", r.kernel_sources[3]},
             {"k", r.k},
             {"quad_tol", opts.quad_tol},
             {"root_tol", opts.root_tol},
             {"residual_tol", opts.residual_tol},
             {"grid", opts.report_grid},
         }},
        {"coefficients",
         json{{"a", r.coefficients.a}, {"b", r.coefficients.b}, {"d", r.coefficients.d}}},
        {"polynomial",
         json{{"coeffs", r.polynomial.coeffs},
              {"degree", r.polynomial.degree()},
              {"descartes_bound", r.descartes_bound}}},
        {"roots", roots},
        {"fixed_points", fixed_points},
        {"classification", classification},
        {"n_fix", r.n_fix},
        {"oracle", oracle},
    };
}

json gibbs_report_to_json(const gibbs::GibbsReport& r) {
    json j{
        {"model",
         json{{"a", r.model.a}, {"b", r.model.b}, {"k", r.model.k}, {"beta", r.model.beta}}},
        {"coefficients", json{{"a", r.coefficients.a}, {"b", r.coefficients.b}}},
        {"d", r.d},
        {"d_monotone_nondecreasing", r.d_monotone_nondecreasing},
        {"h_derivative_min", r.h_derivative_min},
    };
    if (r.n_tigm) {
        j["n_tigm"] = *r.n_tigm;
        const auto& f = r.solve_report->fixed_points.front();
        j["fixed_point"] = json{{"x0", f.x0}, {"y0", f.y0}, {"xi", f.xi},
                                {"residual_sup", f.residual_sup}};
        json classification;
        classification_block(r.solve_report->classification, classification);
        j["classification"] = classification;
    } else {
        j["n_tigm"] = nullptr;
        j["note"] = "not computed - solver requires k >= 2";
    }
    return j;
}

json oracle_report_to_json(const oracle::OracleReport& r) {
    json points = json::array();
    for (const auto& p : r.q_fixed_points)
        points.push_back(json::array({p.x, p.y}));
    return json{
        {"q_fixed_points", points},
        {"newton_starts", r.newton_starts},
        {"newton_converged", r.newton_converged},
        {"picard_seeds", r.picard_seeds},
        {"picard_converged", r.picard_converged},
        {"match", r.match},
    };
}

namespace {

int cmd_solve(const std::string& kernel_path, bool as_json, bool cross_check,
              const std::optional<double>& quad_tol, const std::optional<double>& root_tol,
              const std::optional<int>& grid, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
    KernelFile kf = parse_kernel_file(kernel_path);
    if (quad_tol) kf.options.quad_tol = *quad_tol;
    if (root_tol) kf.options.root_tol = *root_tol;
    if (grid) kf.options.report_grid = *grid;

    solver::SolveReport report = solver::solve(kf.kernel, kf.options);
    if (cross_check) {
        oracle::OracleReport or_report = oracle::run(kf.kernel, report);
        solver::OracleSummary summary;
        summary.oracle_count = or_report.newton_converged;
        summary.match = or_report.match;
        double worst = 0.0;
        for (const auto& p : or_report.q_fixed_points) {
            double ratio = p.y / p.x;
            double best = std::numeric_limits<double>::infinity();
            for (const auto& root : report.roots)
                best = std::min(best, std::fabs(ratio - root.value));
            worst = std::max(worst, best);
        }
        summary.max_ratio_mismatch = worst;
        report.oracle = summary;
        if (!summary.match) {
            err << "oracle mismatch: newton scan found " << summary.oracle_count
                << " fixed points, solver found " << report.n_fix << "\n";
            return kExitContradiction;
        }
    }
    if (as_json) {
        write_output(solve_report_to_json(report, kf.options).dump(2) + "\n", out_path, out);
    } else {
        std::ostringstream text;
        print_solve_text(report, text);
        write_output(text.str(), out_path, out);
    }
    return kExitOk;
}

int cmd_gibbs(double a, double b, int k, double beta, const std::string& sweep, bool as_json,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
    auto run_one = [&](const gibbs::GibbsModel& m) { return gibbs::analyze(m); };

    if (sweep.empty()) {
        gibbs::GibbsReport report = run_one({a, b, k, beta});
        if (as_json) {
            write_output(gibbs_report_to_json(report).dump(2) + "\n", out_path, out);
        } else {
            std::ostringstream text;
            text << "model: a=" << a << " b=" << b << " k=" << k << " beta=" << beta << "\n";
            text << "d:";
            for (double v : report.d) text << " " << v;
            text << "\nd nondecreasing: " << (report.d_monotone_nondecreasing ? "yes" : "no")
                 << "\nmin h': " << report.h_derivative_min << "\n";
            if (report.n_tigm) {
                const auto& f = report.solve_report->fixed_points.front();
                text << "n_tigm: " << *report.n_tigm << "\nfixed point: f0(t) = " << f.x0
                     << " + " << f.y0 << "*t (residual " << f.residual_sup << ")\n";
            } else {
                text << "n_tigm: not computed - solver requires k >= 2\n";
            }
            write_output(text.str(), out_path, out);
        }
        return kExitOk;
    }

    // sweep format: a_lo:a_hi:steps,b_lo:b_hi:steps
    auto parse_axis = [&](const std::string& spec) {
        double lo, hi;
        int steps;
        char c1, c2;
        std::istringstream in(spec);
        if (!(in >> lo >> c1 >> hi >> c2 >> steps) || c1 != ':' || c2 != ':' || steps < 1)
            throw std::runtime_error("bad sweep axis: " + spec);
        return std::tuple<double, double, int>{lo, hi, steps};
    };
    std::size_t comma = sweep.find(',');
    if (comma == std::string::npos)
        throw std::runtime_error("sweep needs two axes separated by ','");
    auto [a_lo, a_hi, a_steps] = parse_axis(sweep.substr(0, comma));
    auto [b_lo, b_hi, b_steps] = parse_axis(sweep.substr(comma + 1));

    json cases = json::array();
    std::ostringstream text;
    for (int i = 0; i < a_steps; ++i) {
        for (int j = 0; j < b_steps; ++j) {
            double av = a_steps == 1 ? a_lo : a_lo + (a_hi - a_lo) * i / (a_steps - 1);
            double bv = b_steps == 1 ? b_lo : b_lo + (b_hi - b_lo) * j / (b_steps - 1);
            gibbs::GibbsReport report = run_one({av, bv, k, beta});
            if (as_json)
                cases.push_back(gibbs_report_to_json(report));
            else
                text << "a=" << av << " b=" << bv << " k=" << k << " n_tigm="
                     << (report.n_tigm ? std::to_string(*report.n_tigm) : "n/a") << "\n";
        }
    }
    (void)err;
    if (as_json)
        write_output(json{{"sweep", cases}}.dump(2) + "\n", out_path, out);
    else
        write_output(text.str(), out_path, out);
    return kExitOk;
}

int cmd_oracle(const std::string& kernel_path, int starts, int picard_seeds, std::ostream& out,
               std::ostream& err) {
    KernelFile kf = parse_kernel_file(kernel_path);
    solver::SolveReport report = solver::solve(kf.kernel, kf.options);
    oracle::OracleReport or_report = oracle::run(kf.kernel, report, starts, picard_seeds);
    out << oracle_report_to_json(or_report).dump(2) << "\n";
    if (!or_report.match) {
        err << "oracle mismatch: newton scan found " << or_report.newton_converged
            << " fixed points, solver found " << report.n_fix << "\n";
        return kExitContradiction;
    }
    return kExitOk;
}

int cmd_verify(const std::string& report_path, std::ostream& out, std::ostream& err) {
    std::ifstream file(report_path, std::ios::binary);
    if (!file)
        throw std::runtime_error("cannot open report: " + report_path);
    json j = json::parse(file);

    const json& inputs = j.at("inputs");
    quad::KernelSpec kernel{
        expr::Expression::parse(inputs.at("phi1").get<std::string>()),
        expr::Expression::parse(inputs.at("phi2").get<std::string>()),
        expr::Expression::parse(inputs.at("psi1").get<std::string>()),
        expr::Expression::parse(inputs.at("psi2").get<std::string>()),
        inputs.at("k").get<int>()};
    const double quad_tol = inputs.at("quad_tol").get<double>();
    const double root_tol = inputs.at("root_tol").get<double>();
    const double residual_tol = inputs.at("residual_tol").get<double>();

    quad::CoefficientSet c;
    c.k = kernel.k;
    c.quadrature_tol = quad_tol;
    c.a = j.at("coefficients").at("a").get<std::vector<double>>();
    c.b = j.at("coefficients").at("b").get<std::vector<double>>();
    c.finalize();
    poly::PolySpec p(j.at("polynomial").at("coeffs").get<std::vector<double>>(),
                     10.0 * quad_tol);

    bool ok = true;
    for (const json& root : j.at("roots")) {
        double residual = std::fabs(p.eval(root.at("value").get<double>()));
        if (residual > root_tol * p.scale() * 10.0) {
            err << "root " << root.at("value") << " residual " << residual << " too large\n";
            ok = false;
        }
    }
    for (const json& fp : j.at("fixed_points")) {
        solver::PlanePoint point{fp.at("x0").get<double>(), fp.at("y0").get<double>()};
        double q_res = solver::verify_q(point, c);
        if (q_res > 1e-8) {
            err << "fixed point (" << point.x << ", " << point.y << ") Q residual " << q_res
                << " too large\n";
            ok = false;
        }
        solver::FixedPointFn f =
            solver::reconstruct(point, kernel, inputs.at("grid").get<int>());
        double op_res = solver::verify_operator(f, kernel, quad_tol);
        if (op_res > residual_tol) {
            err << "fixed point (" << point.x << ", " << point.y << ") operator residual "
                << op_res << " exceeds " << residual_tol << "\n";
            ok = false;
        }
    }
    out << (ok ? "verify: all residual bounds hold\n" : "verify: FAILED\n");
    return ok ? kExitOk : kExitInput;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Positive fixed points of degenerate-kernel Hammerstein operators"};
    app.require_subcommand(1);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Solve a kernel config file");
    std::string kernel_path, out_path;
    bool as_json = false, cross_check = false;
    std::optional<double> quad_tol, root_tol;
    std::optional<int> grid;
    solve_cmd->add_option("--kernel", kernel_path, "kernel config file")->required();
    solve_cmd->add_flag("--json", as_json, "emit JSON report");
    solve_cmd->add_flag("--cross-check", cross_check, "run the 2D oracle cross-check");
    solve_cmd->add_option("--quad-tol", quad_tol, "quadrature tolerance");
    solve_cmd->add_option("--root-tol", root_tol, "root refinement tolerance");
    solve_cmd->add_option("--grid", grid, "report grid size");
    solve_cmd->add_option("-o,--output", out_path, "write report to file");

    // gibbs
    auto* gibbs_cmd = app.add_subcommand("gibbs", "Analyze the Cayley-tree model a + b*t*u");
    double a = 1.0, b = 1.0, beta = 1.0;
    int k = 2;
    std::string sweep;
    bool gibbs_json = false;
    std::string gibbs_out;
    gibbs_cmd->add_option("--a", a, "model parameter a > 0")->required();
    gibbs_cmd->add_option("--b", b, "model parameter b > 0")->required();
    gibbs_cmd->add_option("--k", k, "tree order")->required();
    gibbs_cmd->add_option("--beta", beta, "inverse temperature (reporting only)");
    gibbs_cmd->add_option("--sweep", sweep, "a_lo:a_hi:steps,b_lo:b_hi:steps");
    gibbs_cmd->add_flag("--json", gibbs_json, "emit JSON report");
    gibbs_cmd->add_option("-o,--output", gibbs_out, "write report to file");

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "Independent 2D/Picard cross-check");
    std::string oracle_kernel;
    int starts = 12, picard_seeds = 1;
    oracle_cmd->add_option("--kernel", oracle_kernel, "kernel config file")->required();
    oracle_cmd->add_option("--starts", starts, "newton starts per axis");
    oracle_cmd->add_option("--picard-seeds", picard_seeds, "number of picard seeds");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Re-check a previously emitted report");
    std::string report_path;
    verify_cmd->add_option("report", report_path, "JSON report path")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        int code = app.exit(e, msg, msg);
        (code == 0 ? out : err) << msg.str();
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (solve_cmd->parsed())
            return cmd_solve(kernel_path, as_json, cross_check, quad_tol, root_tol, grid,
                             out_path, out, err);
        if (gibbs_cmd->parsed())
            return cmd_gibbs(a, b, k, beta, sweep, gibbs_json, gibbs_out, out, err);
        if (oracle_cmd->parsed())
            return cmd_oracle(oracle_kernel, starts, picard_seeds, out, err);
        if (verify_cmd->parsed())
            return cmd_verify(report_path, out, err);
    } catch (const gibbs::ContradictionError& e) {
        err << "internal contradiction: " << e.what() << "\n";
        return kExitContradiction;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
    err << "no subcommand given\n";
    return kExitInput;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace hammerfix::cli
