#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "steergap/record.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(STEERGAP_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (const std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const char* name) { return std::string(STEERGAP_DATA_DIR) + "/" + name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("steergap_cli_" + name);
}

const char* kQuick = " --replicas 2 --threads 1 --t-final 1e-5 --cool-factor 0.8 --steps-multiplier 20"
                     " --init-temp-multiplier 50 --quadrature product:12x24";

}  // namespace

TEST_CASE("gap subcommand prints the gap and writes a record") {
  const auto out = temp("gap.json");
  const Run r = run("gap --state werner:0.6" + std::string(kQuick) + " --out " + out.string());
  CHECK(r.code == 0);
  const double printed = std::stod(r.out);
  const auto rec = steergap::record_from_json(nlohmann::json::parse(slurp(out)));
  CHECK(std::abs(rec.gap - printed) <= 1e-11);
  CHECK(rec.mode == "pvm2");
  CHECK(rec.p == 0.6);
  CHECK(rec.quadrature == "product:12x24");
  CHECK(std::abs(printed + 0.05) < 0.01);
  std::filesystem::remove(out);
}

TEST_CASE("identical flags and seed give byte-identical records") {
  const auto a = temp("a.json"), b = temp("b.json");
  for (const char* mode : {"pvm2", "povm4"}) {
    const std::string args = std::string("gap --state werner:0.55 --reproducible --seed 99 --mode ") + mode + kQuick;
    REQUIRE(run(args + " --out " + a.string()).code == 0);
    REQUIRE(run(args + " --out " + b.string()).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());
  }
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("gap from a state file") {
  CHECK(run("gap --state " + data("werner_0.5_density.json") + kQuick).code == 0);
}

TEST_CASE("curve subcommand") {
  const Run r = run("curve --p-from 0.4 --p-to 0.6 --p-steps 3" + std::string(kQuick));
  REQUIRE(r.code == 0);
  const auto rows = steergap::parse_curve(r.out);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) CHECK(row.gap_pvm_analytic == 0.25 - row.p / 2);
  CHECK(rows[0].gap_numeric >= rows[2].gap_numeric);

  const Run par = run("curve --parallel --p-from 0.4 --p-to 0.6 --p-steps 3" + std::string(kQuick));
  CHECK(par.code == 0);
  CHECK(par.out == r.out);

  CHECK(run("curve --p-steps 0" + std::string(kQuick)).code == 1);
  CHECK(run("curve --p-from 0.7 --p-to 0.2" + std::string(kQuick)).code == 1);
}

TEST_CASE("check-lhs subcommand") {
  const Run ok = run("check-lhs --state werner:0.5");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("pass") != std::string::npos);
  const Run fail = run("check-lhs --state werner:0.5 --lhs discrete:" + data("ensemble_single.txt"));
  CHECK(fail.code == 3);
  CHECK(fail.out.find("fail") != std::string::npos);
  CHECK(run("check-lhs --state werner:0.5 --lhs discrete:" + data("ensemble_poles.txt")).code == 0);
  CHECK(run("check-lhs --state werner:0.5 --lhs discrete:/nonexistent/ens.txt").code == 2);
}

TEST_CASE("witness subcommand") {
  const Run neg = run("witness --state werner:0.6 --quadrature product:64x128 --direction " + data("direction_zdiag.txt"));
  REQUIRE(neg.code == 0);
  CHECK(neg.out.find("steering witness found") != std::string::npos);
  CHECK(std::abs(std::stod(neg.out.substr(7)) + 0.05) < 1e-4);
  const Run pos = run("witness --state werner:0.4 --quadrature product:64x128 --direction " + data("direction_zdiag.txt"));
  REQUIRE(pos.code == 0);
  CHECK(pos.out.find("steering witness found") == std::string::npos);
  CHECK(std::abs(std::stod(pos.out.substr(7)) - 0.05) < 1e-4);
  CHECK(run("witness --state werner:0.6 --direction " + data("direction_zero.txt")).code == 1);
}

TEST_CASE("error exit codes") {
  CHECK(run("gap --state /nonexistent/state.json").code == 2);
  CHECK(run("gap --state werner:1.5").code == 1);
  CHECK(run("gap --state werner:0.5 --mode pvm3").code == 1);
  CHECK(run("gap --state werner:0.5 --cool-factor 1.5").code == 1);
  CHECK(run("gap --state werner:0.5 --lhs discrete:" + data("ensemble_single.txt")).code == 3);
  CHECK(run("gap").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("--help").code == 0);
}
