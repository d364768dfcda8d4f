#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lbound/cli.hpp"

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("lbound");
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = lbound::cli::run(static_cast<int>(argv.size()),
                                    argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/" + name;
  std::ofstream f(path);
  f << content;
  return path;
}

}  // namespace

TEST_CASE("estimate-normal flat prior with hard bound") {
  const auto r = run_cli({"estimate-normal", "--x", "1.0", "--sigma2", "1",
                          "--flat-prior", "--alpha-sigma2", "0"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("estimate").get<double>() ==
        doctest::Approx(1.2875999709391784).epsilon(1e-13));
  CHECK(j.at("mu_hat").get<double>() == 1.0);
  CHECK(j.at("tau_prime2").get<double>() == 1.0);
}

TEST_CASE("estimate-normal via config file") {
  const std::string path = write_temp(
      "lbound_cfg.json",
      R"({"sigma2": 1.0, "prior": {"tau2": "flat"}, "alpha": {"mu": 0.0, "sigma2": 0.0}})");
  const auto r = run_cli({"estimate-normal", "--x", "1.0", "--config", path});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out).at("estimate").get<double>() ==
        doctest::Approx(1.2875999709391784).epsilon(1e-13));
}

TEST_CASE("estimate-normal validation failures name the option") {
  SUBCASE("missing x") {
    const auto r = run_cli({"estimate-normal", "--sigma2", "1", "--flat-prior",
                            "--alpha-sigma2", "0"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--x") != std::string::npos);
  }
  SUBCASE("negative sigma2") {
    const auto r = run_cli({"estimate-normal", "--x", "0", "--sigma2", "-1",
                            "--flat-prior", "--alpha-sigma2", "0"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--sigma2") != std::string::npos);
  }
  SUBCASE("missing alpha variance") {
    const auto r =
        run_cli({"estimate-normal", "--x", "0", "--sigma2", "1", "--flat-prior"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--alpha-sigma2") != std::string::npos);
  }
  SUBCASE("flat prior conflicts with tau2") {
    const auto r =
        run_cli({"estimate-normal", "--x", "0", "--sigma2", "1", "--flat-prior",
                 "--prior-tau2", "1", "--alpha-sigma2", "0"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--prior-tau2") != std::string::npos);
  }
  SUBCASE("unreadable config") {
    const auto r = run_cli(
        {"estimate-normal", "--x", "0", "--config", "/nonexistent/c.json"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--config") != std::string::npos);
  }
  SUBCASE("malformed config") {
    const std::string path = write_temp("lbound_bad.json", "{not json");
    const auto r = run_cli({"estimate-normal", "--x", "0", "--config", path});
    CHECK(r.code == 2);
  }
}

TEST_CASE("unknown subcommand exits 2") {
  const auto r = run_cli({"frobnicate"});
  CHECK(r.code == 2);
  CHECK(!r.err.empty());
}

TEST_CASE("help exists for every subcommand") {
  for (const char* sub :
       {"estimate-normal", "estimate-poisson", "posterior", "sample",
        "risk-curve", "dominance", "minimax-check"}) {
    CAPTURE(sub);
    const auto r = run_cli({sub, "--help"});
    CHECK(r.code == 0);
    CHECK(!r.out.empty());
  }
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("estimate-poisson") {
  SUBCASE("theta mean") {
    const auto r = run_cli({"estimate-poisson", "--x", "0", "--a", "1", "--b",
                            "0", "--c", "1", "--d", "1"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out).at("mean").get<double>() ==
          doctest::Approx(1.5).epsilon(1e-9));
  }
  SUBCASE("alpha mean with mixture") {
    const auto r =
        run_cli({"estimate-poisson", "--x", "3", "--a", "2", "--b", "0", "--c",
                 "2", "--d", "1", "--target", "alpha"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("mean").get<double>() ==
          doctest::Approx(33.0 / 19.0).epsilon(1e-12));
    CHECK(j.at("mixture").at("weights").size() == 5);
    CHECK(j.at("mixture").at("rate").get<double>() == 2.0);
  }
  SUBCASE("d = 0 blocks the theta target") {
    const auto r = run_cli({"estimate-poisson", "--x", "1", "--a", "1", "--b",
                            "0", "--c", "1", "--d", "0"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--d") != std::string::npos);
  }
  SUBCASE("negative count is rejected by parsing") {
    const auto r = run_cli({"estimate-poisson", "--x", "-3", "--a", "1", "--b",
                            "0", "--c", "1", "--d", "1"});
    CHECK(r.code == 2);
  }
}

TEST_CASE("posterior summaries") {
  SUBCASE("normal theta, uncertain bound") {
    const auto r = run_cli({"posterior", "--model", "normal", "--x", "0",
                            "--sigma2", "1", "--flat-prior", "--alpha-sigma2",
                            "1"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("family") == "esn");
    CHECK(j.at("psi1").get<double>() == 0.0);
    CHECK(j.at("psi2").get<double>() == 1.0);
  }
  SUBCASE("normal theta, deterministic bound") {
    const auto r = run_cli({"posterior", "--model", "normal", "--x", "0",
                            "--sigma2", "1", "--flat-prior", "--alpha-sigma2",
                            "0"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("family") == "truncated_normal");
    CHECK(j.at("mean").get<double>() ==
          doctest::Approx(0.7978845608028654).epsilon(1e-13));
  }
  SUBCASE("normal alpha, uncertain bound") {
    const auto r = run_cli({"posterior", "--model", "normal", "--x", "2",
                            "--target", "alpha", "--sigma2", "1",
                            "--flat-prior", "--alpha-sigma2", "1"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("family") == "esn");
    CHECK(j.at("reflected").get<bool>());
    CHECK(j.at("psi1").get<double>() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(j.at("psi2").get<double>() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(j.at("mean").get<double>() < 0.0);
  }
  SUBCASE("normal alpha, degenerate prior") {
    const auto r = run_cli({"posterior", "--model", "normal", "--x", "0",
                            "--target", "alpha", "--sigma2", "1",
                            "--flat-prior", "--alpha-sigma2", "0"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out).at("family") == "point_mass");
  }
  SUBCASE("poisson alpha") {
    const auto r =
        run_cli({"posterior", "--model", "poisson", "--count", "3", "--a", "2",
                 "--b", "0", "--c", "2", "--d", "1", "--target", "alpha"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("family") == "gamma_mixture");
    CHECK(j.at("mean").get<double>() ==
          doctest::Approx(33.0 / 19.0).epsilon(1e-12));
  }
  SUBCASE("missing observation") {
    const auto r = run_cli({"posterior", "--model", "normal", "--sigma2", "1",
                            "--flat-prior", "--alpha-sigma2", "1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--x") != std::string::npos);
  }
}

TEST_CASE("sample") {
  const std::vector<std::string> args = {"sample", "--psi1", "0",  "--psi2",
                                         "1",      "--n",    "10", "--seed",
                                         "42"};
  const auto r1 = run_cli(args);
  REQUIRE(r1.code == 0);
  std::istringstream lines(r1.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "value");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 10);

  // byte-identical stdout for identical argv
  const auto r2 = run_cli(args);
  CHECK(r1.out == r2.out);

  SUBCASE("seed is mandatory") {
    const auto r = run_cli({"sample", "--psi1", "0", "--psi2", "1", "--n", "10"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--seed") != std::string::npos);
  }
  SUBCASE("negative psi2 is rejected") {
    const auto r = run_cli(
        {"sample", "--psi1", "0", "--psi2", "-1", "--n", "10", "--seed", "1"});
    CHECK(r.code == 2);
  }
}

TEST_CASE("risk-curve") {
  const std::vector<std::string> args = {
      "risk-curve", "--estimators", "unbiased,delta_c:0.5", "--from", "-1",
      "--to",       "1",            "--step",               "0.5"};
  const auto r1 = run_cli(args);
  REQUIRE(r1.code == 0);
  std::istringstream lines(r1.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "estimator,theta,risk,method,std_err");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 10);

  const auto r2 = run_cli(args);
  CHECK(r1.out == r2.out);

  SUBCASE("mc requires a seed") {
    const auto r = run_cli({"risk-curve", "--estimators", "unbiased", "--from",
                            "0", "--to", "1", "--step", "0.5", "--method",
                            "mc"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--seed") != std::string::npos);
  }
  SUBCASE("mc runs deterministically") {
    const std::vector<std::string> margs = {
        "risk-curve", "--estimators", "katz", "--from", "0",    "--to",
        "0.5",        "--step",       "0.5",  "--method", "mc", "--mc-n",
        "5000",       "--seed",       "7"};
    const auto m1 = run_cli(margs);
    const auto m2 = run_cli(margs);
    REQUIRE(m1.code == 0);
    CHECK(m1.out == m2.out);
    CHECK(m1.out.find("monte_carlo") != std::string::npos);
  }
  SUBCASE("unknown estimator id") {
    const auto r = run_cli({"risk-curve", "--estimators", "what", "--from",
                            "0", "--to", "1", "--step", "0.5"});
    CHECK(r.code == 2);
  }
}

TEST_CASE("dominance") {
  const auto r = run_cli({"dominance", "--c", "0.5"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("theta0").get<double>() ==
        doctest::Approx(-0.9394352443842788).epsilon(1e-4));

  CHECK(run_cli({"dominance", "--c", "0"}).code == 2);
  CHECK(run_cli({"dominance", "--c", "1.5"}).code == 2);
}

TEST_CASE("minimax-check") {
  const auto r = run_cli({"minimax-check", "--c", "0.5"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("dominates_on_nonneg").get<bool>());
  CHECK(j.at("sup_risk_on_nonneg").get<double>() <= 1.0 + 1e-6);
  CHECK(j.at("tail_converged").get<bool>());

  CHECK(run_cli({"minimax-check", "--c", "2"}).code == 2);
  CHECK(run_cli({"minimax-check", "--c", "0.5", "--theta-max", "5"}).code == 2);
  CHECK(run_cli({"minimax-check", "--c", "0.5", "--step", "0.2"}).code == 2);
}
