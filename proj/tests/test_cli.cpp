#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "osqse/cli.hpp"

using namespace osqse;
using io::Json;

namespace {

const std::string kData = OSQSE_TEST_DATA;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run call(int (*cmd)(const cli::Options&, std::ostream&, std::ostream&), const cli::Options& opt) {
  std::ostringstream out, err;
  int code = cmd(opt, out, err);
  return {code, out.str(), err.str()};
}

cli::Options with_state(const std::string& file) {
  cli::Options o;
  o.state = kData + "/" + file;
  return o;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "osqse-tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("bound reports") {
  auto r = call(cli::cmd_bound, with_state("psi1.json"));
  REQUIRE(r.code == cli::kOk);
  auto j = Json::parse(r.out);
  CHECK(j["schema"] == cli::kReportSchema);
  CHECK(std::stod(j["results"]["argmax_alpha"].get<std::string>()) == doctest::Approx(3.362).epsilon(0.003));
  CHECK(j["results"].contains("term_split_A"));
  CHECK(j["results"].contains("term_split_B"));

  auto phi2 = Json::parse(call(cli::cmd_bound, with_state("phi2.json")).out);
  CHECK(phi2["results"]["bound"].get<double>() == doctest::Approx(-2.0));

  auto o = with_state("bell-symmetric.json");
  o.pair = "a1b1";
  auto bell = Json::parse(call(cli::cmd_bound, o).out);
  CHECK(bell["results"]["bound"].get<double>() == doctest::Approx(0.0));
}

TEST_CASE("exit codes for bad inputs") {
  for (const char* f : {"malformed-syntax.json", "malformed-duplicate-ket.json", "malformed-digit-range.json",
                        "malformed-norm.json", "does-not-exist.json"})
    CHECK(call(cli::cmd_bound, with_state(f)).code == cli::kParseError);
  CHECK(call(cli::cmd_bound, with_state("missing-roles.json")).code == cli::kMissingRoles);
  CHECK(call(cli::cmd_check_zero, with_state("missing-roles.json")).code == cli::kMissingRoles);
  auto o = with_state("psi1.json");
  o.pair = "xy";
  CHECK(call(cli::cmd_bound, o).code == cli::kParseError);
}

TEST_CASE("curve output") {
  auto o = with_state("psi1.json");
  o.out = scratch("psi1.csv").string();
  auto r = call(cli::cmd_curve, o);
  REQUIRE(r.code == cli::kOk);
  std::ifstream in(o.out);
  std::string header, line, last;
  std::getline(in, header);
  CHECK(header == "alpha,f,term_split_A,term_split_B");
  double best_alpha = -1, best_f = -1e9;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
    auto comma = line.find(',');
    auto next = line.find(',', comma + 1);
    double f = std::stod(line.substr(comma + 1, next - comma - 1));
    if (f > best_f && line.rfind("inf", 0) != 0) {
      best_f = f;
      best_alpha = std::stod(line.substr(0, comma));
    }
  }
  CHECK(rows == 501);
  CHECK(last.rfind("inf,", 0) == 0);
  CHECK(std::abs(best_alpha - 3.362) <= 0.02);

  o.out = "/nonexistent-dir/curve.csv";
  CHECK(call(cli::cmd_curve, o).code == cli::kUnwritablePath);
  o.out.clear();
  o.points = 1;
  CHECK(call(cli::cmd_curve, o).code == cli::kParseError);
}

TEST_CASE("flat and symmetric curves") {
  auto o = with_state("phi2.json");
  auto r = call(cli::cmd_curve, o);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    auto comma = line.find(',');
    CHECK(std::stod(line.substr(comma + 1)) == doctest::Approx(-2.0));
  }
  auto sym = call(cli::cmd_curve, with_state("bell-symmetric.json"));
  std::istringstream in2(sym.out);
  std::getline(in2, line);
  while (std::getline(in2, line)) {
    auto comma = line.find(',');
    CHECK(std::stod(line.substr(comma + 1)) <= 1e-12);
  }
}

TEST_CASE("check-zero verdicts") {
  auto o = with_state("phi1.json");
  o.pair = "ab";
  o.method = "theorem2";
  o.sidecar = scratch("phi1-isometries.json").string();
  auto r = call(cli::cmd_check_zero, o);
  REQUIRE(r.code == cli::kOk);
  auto j = Json::parse(r.out);
  CHECK(j["results"]["verdict"] == "found");
  CHECK(std::filesystem::exists(o.sidecar));
  auto side = io::read_json(o.sidecar);
  CHECK(side.contains("U"));
  CHECK(side["residual"].get<double>() < 1e-8);

  auto p = with_state("psi2.json");
  p.pair = "a1b1";
  p.method = "theorem3";
  auto jp = Json::parse(call(cli::cmd_check_zero, p).out);
  CHECK(jp["results"]["verdict"] == "necessary-holds");
  CHECK(jp["results"]["split_bound"].get<double>() == doctest::Approx(2.0));

  auto f = with_state("phi1.json");
  f.pair = "a1b1";
  f.method = "theorem3";
  auto jf = Json::parse(call(cli::cmd_check_zero, f).out);
  CHECK(jf["results"]["verdict"] == "necessary-fails");

  f.method = "theorem4";
  CHECK(call(cli::cmd_check_zero, f).code == cli::kParseError);
  f.method = "theorem3";
  f.pair = "split12";
  CHECK(call(cli::cmd_check_zero, f).code == cli::kParseError);
}

TEST_CASE("simulate") {
  auto o = with_state("phi2.json");
  o.protocol = "builtin:phi2-entanglement-swap";
  auto j = Json::parse(call(cli::cmd_simulate, o).out);
  CHECK(j["results"]["verified"] == true);
  CHECK(j["results"]["branch_count"] == 16);
  CHECK(j["results"]["net_cost"].get<double>() == -2.0);

  auto p = with_state("product.json");
  p.protocol = "builtin:double-teleport-swap";
  auto jp = Json::parse(call(cli::cmd_simulate, p).out);
  CHECK(jp["results"]["verified"] == true);
  CHECK(jp["results"]["net_cost"].get<double>() == 2.0);

  auto s = with_state("phi1.json");
  s.protocol = kData + "/protocol-phi1-cnots.json";
  auto js = Json::parse(call(cli::cmd_simulate, s).out);
  CHECK(js["results"]["verified"] == true);
  CHECK(js["results"]["net_cost"].get<double>() == 0.0);

  s.protocol = kData + "/protocol-incomplete-table.json";
  CHECK(call(cli::cmd_simulate, s).code == cli::kScriptError);
  s.protocol = kData + "/protocol-not-owner.json";
  CHECK(call(cli::cmd_simulate, s).code == cli::kScriptError);
  s.protocol = "builtin:nope";
  CHECK(call(cli::cmd_simulate, s).code == cli::kScriptError);
  s.protocol = kData + "/malformed-syntax.json";
  CHECK(call(cli::cmd_simulate, s).code == cli::kParseError);
}

TEST_CASE("examples") {
  cli::Options o;
  auto r = call(cli::cmd_examples, o);
  CHECK(r.code == cli::kOk);
  CHECK(Json::parse(r.out)["results"]["all_pass"] == true);
  for (const char* c : {"psi1", "psi2", "phi1", "phi2"})
    for (const auto& k : cli::example_checks(c)) CHECK_MESSAGE(k.pass, c << ": " << k.claim);
}

TEST_CASE("reports are deterministic") {
  auto o = with_state("phi1.json");
  o.pair = "ab";
  o.sidecar = scratch("det.json").string();
  o.seed = 99;
  CHECK(call(cli::cmd_check_zero, o).out == call(cli::cmd_check_zero, o).out);
  auto b = with_state("psi1.json");
  CHECK(call(cli::cmd_bound, b).out == call(cli::cmd_bound, b).out);
  auto s = with_state("phi2.json");
  s.protocol = "builtin:phi2-entanglement-swap";
  CHECK(call(cli::cmd_simulate, s).out == call(cli::cmd_simulate, s).out);
}

TEST_CASE("argument parsing") {
  std::ostringstream out, err;
  std::vector<std::string> args{"osqse", "bound"};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  CHECK(cli::run(int(argv.size()), argv.data(), out, err) == cli::kParseError);
}

}  // TEST_SUITE
