#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hammerfix/cli.hpp"

using namespace hammerfix;
using cli::parse_kernel_text;
using cli::run;
using nlohmann::json;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

const std::string kModelConfig =
    "# model kernel\n"
    "phi1 = 1\n"
    "phi2 = t\n"
    "psi1 = 1\n"
    "psi2 = t\n"
    "k = 2\n";

}  // namespace

TEST_CASE("kernel config parsing") {
    auto kf = parse_kernel_text(kModelConfig, "test");
    CHECK(kf.kernel.k == 2);
    CHECK(kf.kernel.phi2.eval(0.3) == 0.3);
    CHECK(kf.options.quad_tol == 1e-10);

    auto with_tol = parse_kernel_text(kModelConfig + "quad_tol = 1e-8\ngrid = 51\n", "test");
    CHECK(with_tol.options.quad_tol == 1e-8);
    CHECK(with_tol.options.report_grid == 51);

    CHECK_THROWS(parse_kernel_text("phi1 = 1\n", "test"));
    CHECK_THROWS(parse_kernel_text(kModelConfig + "bogus = 1\n", "test"));
    CHECK_THROWS(parse_kernel_text("phi1\n", "test"));
}

TEST_CASE("solve happy path emits schema-stable JSON") {
    auto path = write_temp("hammerfix_model.knl", kModelConfig);
    std::ostringstream out, err;
    int code = run({"solve", "--kernel", path.string(), "--json"}, out, err);
    CHECK(code == 0);
    json j = json::parse(out.str());
    for (const char* key : {"inputs", "coefficients", "polynomial", "roots", "fixed_points",
                            "classification", "n_fix", "oracle"})
        CHECK(j.contains(key));
    CHECK(j["n_fix"] == 1);
    CHECK(j["oracle"].is_null());
    CHECK(j["classification"]["verdict"] == "UNIQUE_BY_SIGN_PATTERN");
}

TEST_CASE("solve text output") {
    auto path = write_temp("hammerfix_model.knl", kModelConfig);
    std::ostringstream out, err;
    int code = run({"solve", "--kernel", path.string()}, out, err);
    CHECK(code == 0);
    CHECK(out.str().find("n_fix: 1") != std::string::npos);
}

TEST_CASE("solve with cross-check records oracle agreement") {
    auto path = write_temp("hammerfix_model.knl", kModelConfig);
    std::ostringstream out, err;
    int code = run({"solve", "--kernel", path.string(), "--json", "--cross-check"}, out, err);
    CHECK(code == 0);
    json j = json::parse(out.str());
    CHECK(j["oracle"]["match"] == true);
    CHECK(j["oracle"]["count"] == 1);
}

TEST_CASE("bad kernel exits 1 with a cone message") {
    auto path = write_temp("hammerfix_bad.knl",
                           "phi1 = 1\nphi2 = t\npsi1 = t-1\npsi2 = t\nk = 2\n");
    std::ostringstream out, err;
    int code = run({"solve", "--kernel", path.string()}, out, err);
    CHECK(code == 1);
    CHECK(err.str().find("cone") != std::string::npos);
}

TEST_CASE("missing file and malformed args exit 1") {
    std::ostringstream out, err;
    CHECK(run({"solve", "--kernel", "/nonexistent/x.knl"}, out, err) == 1);
    CHECK(run({"solve"}, out, err) == 1);
    CHECK(run({"frobnicate"}, out, err) == 1);
}

TEST_CASE("gibbs subcommand") {
    std::ostringstream out, err;
    int code = run({"gibbs", "--a", "1", "--b", "1", "--k", "2", "--json"}, out, err);
    CHECK(code == 0);
    json j = json::parse(out.str());
    CHECK(j["n_tigm"] == 1);
    CHECK(j["d_monotone_nondecreasing"] == true);
    CHECK(j["classification"]["verdict"] == "UNIQUE_BY_SIGN_PATTERN");
}

TEST_CASE("gibbs sweep") {
    std::ostringstream out, err;
    int code = run({"gibbs", "--a", "1", "--b", "1", "--k", "2", "--sweep",
                    "0.5:2:3,0.5:2:3", "--json"},
                   out, err);
    CHECK(code == 0);
    json j = json::parse(out.str());
    REQUIRE(j["sweep"].size() == 9);
    for (const auto& entry : j["sweep"]) CHECK(entry["n_tigm"] == 1);
}

TEST_CASE("gibbs rejects invalid parameters") {
    std::ostringstream out, err;
    CHECK(run({"gibbs", "--a", "0", "--b", "1", "--k", "2"}, out, err) == 1);
}

TEST_CASE("oracle subcommand") {
    auto path = write_temp("hammerfix_model.knl", kModelConfig);
    std::ostringstream out, err;
    int code = run({"oracle", "--kernel", path.string(), "--starts", "8"}, out, err);
    CHECK(code == 0);
    json j = json::parse(out.str());
    CHECK(j["match"] == true);
}

TEST_CASE("verify re-checks an emitted report") {
    auto path = write_temp("hammerfix_model.knl", kModelConfig);
    std::ostringstream out, err;
    REQUIRE(run({"solve", "--kernel", path.string(), "--json"}, out, err) == 0);
    auto report = write_temp("hammerfix_report.json", out.str());

    std::ostringstream vout, verr;
    CHECK(run({"verify", report.string()}, vout, verr) == 0);

    // tamper with a fixed point and verification must fail
    json j = json::parse(out.str());
    j["fixed_points"][0]["x0"] = 0.9;
    auto bad = write_temp("hammerfix_bad_report.json", j.dump());
    std::ostringstream bout, berr;
    CHECK(run({"verify", bad.string()}, bout, berr) == 1);
}

TEST_CASE("identical runs produce byte-identical JSON") {
    auto path = write_temp("hammerfix_model.knl", kModelConfig);
    std::ostringstream out1, out2, err;
    REQUIRE(run({"solve", "--kernel", path.string(), "--json"}, out1, err) == 0);
    REQUIRE(run({"solve", "--kernel", path.string(), "--json"}, out2, err) == 0);
    CHECK(out1.str() == out2.str());
}

TEST_CASE("output file flag") {
    auto path = write_temp("hammerfix_model.knl", kModelConfig);
    auto out_path = std::filesystem::temp_directory_path() / "hammerfix_out.json";
    std::ostringstream out, err;
    int code = run({"solve", "--kernel", path.string(), "--json", "-o", out_path.string()},
                   out, err);
    CHECK(code == 0);
    CHECK(out.str().empty());
    std::ifstream in(out_path);
    json j = json::parse(in);
    CHECK(j["n_fix"] == 1);
}
