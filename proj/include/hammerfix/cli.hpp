#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hammerfix/gibbs.hpp"
#include "hammerfix/oracle.hpp"
#include "hammerfix/solver.hpp"

namespace hammerfix::cli {

// Kernel config file: line-oriented key=value with keys phi1 phi2 psi1 psi2 k
// and optional quad_tol root_tol residual_tol grid; '#' starts a comment.
struct KernelFile {
    quad::KernelSpec kernel;
    solver::SolveOptions options;
};

KernelFile parse_kernel_file(const std::string& path);
KernelFile parse_kernel_text(const std::string& text, const std::string& origin);

nlohmann::json solve_report_to_json(const solver::SolveReport& report,
                                    const solver::SolveOptions& opts);
nlohmann::json gibbs_report_to_json(const gibbs::GibbsReport& report);
nlohmann::json oracle_report_to_json(const oracle::OracleReport& report);

// Exit codes: 0 success, 1 input/validation error, 2 internal contradiction.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace hammerfix::cli
