#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "qcap/channel_io.hpp"
#include "qcap/cloners.hpp"
#include "test_util.hpp"

using namespace qcap;
using namespace qcap::test;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path tmp_dir() {
  const fs::path dir = QCAP_TEST_TMPDIR;
  fs::create_directories(dir);
  return dir;
}

std::string path_of(const std::string& name) { return (tmp_dir() / name).string(); }

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

// Restores the environment variable when it goes out of scope.
struct EnvGuard {
  explicit EnvGuard(const char* value) {
    if (value) {
      ::setenv(cli::kToleranceEnvVar, value, 1);
    } else {
      ::unsetenv(cli::kToleranceEnvVar);
    }
  }
  ~EnvGuard() { ::unsetenv(cli::kToleranceEnvVar); }
};

}  // namespace

TEST_CASE("capacity cloner") {
  const Run r = run({"capacity", "cloner", "--n", "1", "--m", "2"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("0.584962500721156") != std::string::npos);

  const Run j = run({"--json", "capacity", "cloner", "--n", "2", "--m", "3"});
  REQUIRE(j.code == cli::kExitOk);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["closed_form_bits"].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(doc["numerical_bits"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(doc["delta"].get<double>() < 1e-12);

  // --json may also follow the subcommand.
  CHECK(run({"capacity", "cloner", "--n", "1", "--m", "2", "--json"}).out.front() == '{');

  CHECK(run({"capacity", "cloner", "--n", "3", "--m", "2"}).code == cli::kExitUsage);
  CHECK(run({"capacity", "cloner", "--n", "0", "--m", "2"}).code == cli::kExitUsage);
  CHECK(run({"capacity", "cloner", "--n", "1", "--m", "500"}).code == cli::kExitResource);
  CHECK(run({"capacity", "cloner", "--n", "1"}).code == cli::kExitUsage);
  CHECK(run({"capacity", "cloner", "--n", "x", "--m", "2"}).code == cli::kExitUsage);
}

TEST_CASE("optimizer output is deterministic") {
  const std::vector<std::string> args = {"--seed", "7", "--json", "capacity", "cloner", "--n", "1", "--m", "3",
                                         "--optimize", "--restarts", "4"};
  const Run a = run(args), b = run(args);
  REQUIRE(a.code == cli::kExitOk);
  CHECK(a.out == b.out);
  const auto doc = nlohmann::json::parse(a.out);
  CHECK(std::abs(doc["numerical_bits"].get<double>() - cloner_capacity_closed_form({1, 3})) < 1e-6);
}

TEST_CASE("capacity unruh") {
  const Run r = run({"--json", "capacity", "unruh", "--z", "0.5"});
  REQUIRE(r.code == cli::kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["q_bits"].get<double>() == doctest::Approx(0.4357632173757913).epsilon(1e-12));
  CHECK(doc["tail_bound"].get<double>() <= 1e-12);

  CHECK(run({"capacity", "unruh", "--z", "1.5"}).code == cli::kExitUsage);
  CHECK(run({"capacity", "unruh", "--z", "0"}).code == cli::kExitUsage);
  CHECK(run({"capacity", "unruh"}).code == cli::kExitUsage);

  const std::string csv = path_of("fig1.csv");
  const Run s = run({"capacity", "unruh", "--sweep", "0.01", "0.99", "--steps", "99", "--out", csv});
  REQUIRE(s.code == cli::kExitOk);
  const std::vector<std::string> lines = read_lines(csv);
  REQUIRE(lines.size() == 100);
  CHECK(lines[0] == "z,Q_bits");
  CHECK(lines[1].rfind("0.01", 0) == 0);
  CHECK(lines[99].rfind("0.98999999999999999,", 0) == 0);

  // Byte-identical reruns.
  std::ifstream first(csv);
  std::stringstream before;
  before << first.rdbuf();
  run({"capacity", "unruh", "--sweep", "0.01", "0.99", "--steps", "99", "--out", csv});
  std::ifstream second(csv);
  std::stringstream after;
  after << second.rdbuf();
  CHECK(before.str() == after.str());

  CHECK(run({"capacity", "unruh", "--sweep", "0.5", "0.2", "--steps", "10", "--out", path_of("bad.csv")}).code ==
        cli::kExitUsage);
  CHECK_FALSE(fs::exists(path_of("bad.csv")));
}

TEST_CASE("export and classify") {
  const std::string file = path_of("cloner12.json");
  REQUIRE(run({"export-cloner", "--n", "1", "--m", "2", "--out", file}).code == cli::kExitOk);
  CHECK(choi_distance(read_channel_json(file), cloner_channel({1, 2})) < 1e-12);

  const Run r = run({"--json", "classify", file});
  REQUIRE(r.code == cli::kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["choi_rank"] == 2);
  CHECK(doc["entanglement_breaking"] == false);
  for (const auto& v : doc["verdicts"]) {
    const std::string mode = v["mode"];
    CHECK(v["holds"].get<bool>() == (mode == "degradable" || mode == "conjugate_degradable"));
  }

  const Run text = run({"classify", file, "--modes", "conjugate-degradable"});
  CHECK(text.code == cli::kExitOk);
  CHECK(text.out.find("conjugate_degradable: yes") != std::string::npos);

  const std::string trivial = path_of("cloner33.json");
  REQUIRE(run({"export-cloner", "--n", "3", "--m", "3", "--out", trivial}).code == cli::kExitOk);
  CHECK(run({"classify", trivial, "--modes", "degradable"}).out.find("degradable: yes") != std::string::npos);

  const std::string rank2 = path_of("rank2.json");
  REQUIRE(run({"export-rank2", "--alpha", "0.7853981633974483", "--beta", "0.7853981633974483", "--out", rank2}).code ==
          cli::kExitOk);
  const Run eb = run({"classify", rank2});
  CHECK(eb.out.find("entanglement breaking: yes") != std::string::npos);
  CHECK(eb.out.find("conjugate_antidegradable: yes") != std::string::npos);

  CHECK(run({"classify", file, "--modes", "bogus"}).code == cli::kExitUsage);
  CHECK(run({"classify", file, "--residual-tol", "-1"}).code == cli::kExitUsage);
}

TEST_CASE("classify errors") {
  const std::string big = path_of("cloner17.json");
  REQUIRE(run({"export-cloner", "--n", "1", "--m", "7", "--out", big}).code == cli::kExitOk);
  const Run capped = run({"classify", big, "--modes", "degradable", "--max-choi-dim", "16"});
  CHECK(capped.code == cli::kExitResource);
  CHECK(capped.err.find("exceeds") != std::string::npos);

  const std::string broken = path_of("broken.json");
  std::ofstream(broken) << "{\n  \"din\": 2,\n  \"dout\": 2\n  \"kraus\": []\n}\n";
  const Run parse = run({"classify", broken});
  CHECK(parse.code == cli::kExitValidation);
  CHECK(parse.err.find("line 4") != std::string::npos);

  const std::string not_tp = path_of("not_tp.json");
  std::ofstream(not_tp) << R"({"din": 1, "dout": 1, "kraus": [[[[2, 0]]]]})";
  CHECK(run({"classify", not_tp}).code == cli::kExitValidation);

  const Run missing = run({"classify", path_of("missing.json")});
  CHECK(missing.code == cli::kExitValidation);
  CHECK(missing.err.find("missing.json") != std::string::npos);
}

TEST_CASE("tolerance environment variable") {
  const std::string file = path_of("cloner14.json");
  REQUIRE(run({"export-cloner", "--n", "1", "--m", "4", "--out", file}).code == cli::kExitOk);
  const std::vector<std::string> args = {"--json", "classify", file, "--modes", "conjugate_degradable"};
  auto iterations = [](const Run& r) { return nlohmann::json::parse(r.out)["verdicts"][0]["iterations"].get<int>(); };

  int strict = 0;
  {
    EnvGuard env(nullptr);
    strict = iterations(run(args));
  }
  EnvGuard loose("0.5");
  const Run r = run(args);
  REQUIRE(r.code == cli::kExitOk);
  CHECK(iterations(r) < strict);

  // The flag wins over the environment.
  std::vector<std::string> with_flag = args;
  with_flag.insert(with_flag.end(), {"--residual-tol", "1e-6"});
  CHECK(iterations(run(with_flag)) == strict);

  EnvGuard bad("abc");
  CHECK(run(args).code == cli::kExitUsage);
}

TEST_CASE("failed writes leave nothing behind") {
  const fs::path dir = tmp_dir() / "absent_dir";
  const Run r = run({"export-cloner", "--n", "1", "--m", "2", "--out", (dir / "x.json").string()});
  CHECK(r.code == cli::kExitValidation);
  CHECK(r.err.find("x.json") != std::string::npos);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("help and usage") {
  CHECK(run({"--help"}).code == cli::kExitOk);
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
}
