#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "gsconvex/cli.hpp"
#include "gsconvex/oracle.hpp"
#include "support.hpp"

using namespace gsconvex;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path tmp(const std::string& name) {
  const fs::path p = fs::path(GSCONVEX_TEST_TMP) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config(const std::string& expr, double lo, double hi, const std::string& extra = "") {
  return R"({"functions": [{"name": "Q", "expression": ")" + expr + R"(", "box": [[)" + std::to_string(lo) +
         ", " + std::to_string(hi) + R"(]]}], "grid": {"points_per_axis": 11}, "a_grid": {"points": 11})" +
         extra + "}";
}

int run(const std::string& sub, const std::string& text, const fs::path& out, std::string* err = nullptr,
        cli::RunOptions o = {}) {
  std::ostringstream e;
  const int code = cli::run_text(sub, text, out, o, e);
  if (err) *err = e.str();
  return code;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("check exit codes") {
    const fs::path pass = tmp("check_pass");
    CHECK(run("check", config("x1^2", 0, 1), pass) == cli::kPass);
    const json report = json::parse(slurp(pass / "report.json"));
    CHECK(report["subcommand"] == "check");
    CHECK(report["verdicts"][0]["verdict"] == "pass");
    CHECK(report["timings"].empty());
    CHECK(report["config-echo"]["seed"] == 0);

    const fs::path fail = tmp("check_fail");
    CHECK(run("check", config("-1", 0, 1), fail) == cli::kNegative);
    const std::string csv = slurp(fail / "witnesses.csv");
    CHECK(csv.rfind("s,a,m1_1,m2_1,residual\n1,0,0,0,0.71828182845904", 0) == 0);
  }

  TEST_CASE("invalid input exits 2 with a located message") {
    std::string err;
    CHECK(run("check", config("x1 +", 0, 1), tmp("bad_expr"), &err) == cli::kInvalid);
    CHECK(err.find("position 5") != std::string::npos);
    CHECK(run("check", "{not json", tmp("bad_json"), &err) == cli::kInvalid);
    CHECK(run("check", config("x1", 0, 1, R"(, "s_list": [0])"), tmp("bad_s"), &err) == cli::kInvalid);
    CHECK(run("check", config("1/x1", 0, 1), tmp("bad_eval"), &err) == cli::kInvalid);
    CHECK(err.find("evaluation error") != std::string::npos);
    CHECK(run("nope", config("x1", 0, 1), tmp("bad_sub"), &err) == cli::kInvalid);
    cli::RunOptions zero;
    zero.threads = 0;
    CHECK(run("check", config("x1", 0, 1), tmp("bad_threads"), &err, zero) == cli::kInvalid);
  }

  TEST_CASE("reports are byte-identical across runs and thread counts") {
    const std::string text = config("exp(x1) - 1.2", -1, 1, R"(, "s_list": [0.5, 1], "grid": {"points_per_axis": 9, "refine": 40}, "seed": 3)");
    const fs::path a = tmp("repro_a"), b = tmp("repro_b");
    cli::RunOptions four;
    four.threads = 4;
    CHECK(run("check", text, a) == run("check", text, b, nullptr, four));
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(slurp(a / "witnesses.csv") == slurp(b / "witnesses.csv"));

    cli::RunOptions timed;
    timed.timings = true;
    const fs::path c = tmp("repro_timed");
    (void)run("check", text, c, nullptr, timed);
    CHECK(json::parse(slurp(c / "report.json"))["timings"].contains("wall-ms"));
  }

  TEST_CASE("seed override changes the run id") {
    const std::string text = config("x1^2", 0, 1);
    const fs::path a = tmp("seed_a"), b = tmp("seed_b");
    cli::RunOptions seeded;
    seeded.seed = 77;
    (void)run("check", text, a);
    (void)run("check", text, b, nullptr, seeded);
    const json ra = json::parse(slurp(a / "report.json")), rb = json::parse(slurp(b / "report.json"));
    CHECK(rb["config-echo"]["seed"] == 77);
    CHECK(ra["run-id"] != rb["run-id"]);
  }

  TEST_CASE("witness rows replay through the oracle") {
    const std::string body = "x1^3 - 0.4*x1 + 0.1";
    const fs::path out = tmp("replay_check");
    (void)run("check", config(body, -1, 1, R"(, "s_list": [0.2, 0.7, 1], "modmap": "G", "modmaps": [{"name": "G", "expression": "u1 - v1"}])"), out);
    const fs::path classes = tmp("replay_classes");
    (void)run("classes", config(body, -1, 1, R"(, "modmaps": [{"name": "G", "expression": "0.1"}])"), classes);

    const FunctionSpec q = test::fn(body, -1, 1);
    const ModMap g = ModMap::parse("u1 - v1", 1);
    std::ifstream in(out / "witnesses.csv");
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
      double s, a, m1, m2, r;
      REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &s, &a, &m1, &m2, &r) == 5);
      CHECK(std::fabs(oracle::reference_residual(q, g, s, {m1}, {m2}, a) - r) <= 1e-12);
      ++rows;
    }
    CHECK(rows == 3);

    const std::string replay = config(body, -1, 1,
                                      R"(, "modmaps": [{"name": "G", "expression": "u1 - v1"}], "witness_csv": ")" +
                                          (out / "witnesses.csv").string() + "\"");
    const fs::path ro = tmp("replay_oracle");
    (void)run("oracle", replay, ro);
    const json report = json::parse(slurp(ro / "report.json"));
    CHECK(report["verdicts"][1]["check"] == "witness-replay");
    CHECK(report["verdicts"][1]["verdict"] == "pass");
    CHECK(report["verdicts"][1]["rows"] == 3);
  }

  TEST_CASE("every subcommand runs on a small config") {
    const std::string text = config("x1^2 + 0.1", 0, 1,
                                    R"(, "s_list": [0.5, 1], "bounds": {"points": 21}, "certify": {"candidate": [0]}, "minimize": {"starts": 3}, "modmaps": [{"name": "G", "expression": "0.05"}])");
    for (const std::string& sub : cli::subcommands()) {
      std::string err;
      const fs::path out = tmp("sub_" + sub);
      const int code = run(sub, text, out, &err);
      INFO(sub << ": " << err);
      CHECK((code == cli::kPass || code == cli::kNegative));
      CHECK(fs::exists(out / "report.json"));
      CHECK(json::parse(slurp(out / "report.json"))["subcommand"] == sub);
    }
  }

  TEST_CASE("fnv1a") {
    CHECK(cli::fnv1a_hex("") == "cbf29ce484222325");
    CHECK(cli::fnv1a_hex("a") == "af63dc4c8601ec8c");
  }
}
