#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "qcap/channel_io.hpp"
#include "qcap/cloners.hpp"
#include "qcap/errors.hpp"
#include "qcap/random.hpp"
#include "test_util.hpp"

using namespace qcap;
using namespace qcap::test;
namespace fs = std::filesystem;

namespace {

std::string parse_message(const std::string& text) {
  try {
    parse_channel_json(text, "bad.json");
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("qcap_io_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("round trip") {
  Rng rng(70);
  for (int t = 0; t < 10; ++t) {
    const KrausChannel ch = random_channel(2 + t % 3, 1 + t % 4, 4, rng);
    const KrausChannel back = parse_channel_json(channel_to_json(ch));
    REQUIRE(back.num_kraus() == ch.num_kraus());
    for (Index k = 0; k < ch.num_kraus(); ++k) CHECK(max_abs_diff(back.ops()[k], ch.ops()[k]) <= 1e-12);
  }
  const KrausChannel cl = cloner_channel({2, 4});
  CHECK(choi_distance(parse_channel_json(channel_to_json(cl)), cl) == 0.0);
}

TEST_CASE("hand-written file") {
  const std::string text = R"({
  "din": 2, "dout": 2,
  "kraus": [ [ [[1, 0], [0, 0]], [[0, 0], [0, 1]] ] ]
})";
  const KrausChannel ch = parse_channel_json(text);
  CHECK(ch.din() == 2);
  CHECK(ch.ops()[0](1, 1) == Complex(0.0, 1.0));
}

TEST_CASE("malformed input") {
  SUBCASE("syntax error reports the line") {
    const std::string msg = parse_message("{\n  \"din\": 2,\n  \"dout\": 2\n  \"kraus\": []\n}");
    CHECK(msg.find("bad.json") != std::string::npos);
    CHECK(msg.find("line 4") != std::string::npos);
  }
  SUBCASE("structural errors") {
    CHECK(parse_message("[]").find("object") != std::string::npos);
    CHECK(parse_message(R"({"dout": 1, "kraus": [[[[1,0]]]]})").find("din") != std::string::npos);
    CHECK(parse_message(R"({"din": 0, "dout": 1, "kraus": [[[[1,0]]]]})").find("din") != std::string::npos);
    CHECK(parse_message(R"({"din": 1, "dout": 1, "kraus": []})").find("kraus") != std::string::npos);
    CHECK(parse_message(R"({"din": 1, "dout": 2, "kraus": [[[[1,0]]]]})").find("rows") != std::string::npos);
    CHECK(parse_message(R"({"din": 1, "dout": 1, "kraus": [[[[1,0,0]]]]})").find("[re, im]") != std::string::npos);
    CHECK(parse_message(R"({"din": 1, "dout": 1, "kraus": [[[["1",0]]]]})").find("[re, im]") != std::string::npos);
  }
  SUBCASE("operators that are not trace preserving") {
    CHECK_THROWS_AS(parse_channel_json(R"({"din": 1, "dout": 1, "kraus": [[[[2,0]]]]})"), ValidationError);
    CHECK_THROWS_AS(parse_channel_json(R"({"din": 2, "dout": 1, "kraus": [[[[1,0],[0,0]]]]})"), ValidationError);
  }
}

TEST_CASE("files") {
  const fs::path dir = scratch_dir();
  const fs::path file = dir / "channel.json";
  const KrausChannel cl = cloner_channel({1, 3});
  write_channel_json(file, cl);
  CHECK(choi_distance(read_channel_json(file), cl) == 0.0);
  CHECK_FALSE(fs::exists(dir / "channel.json.tmp"));

  // Overwrites in place.
  write_channel_json(file, identity_channel(2));
  CHECK(read_channel_json(file).dout() == 2);

  write_file_atomic(dir / "note.txt", "abc");
  std::ifstream in(dir / "note.txt");
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == "abc");

  CHECK_THROWS_AS(read_channel_json(dir / "missing.json"), std::runtime_error);
  CHECK_THROWS_AS(write_file_atomic(dir / "no_such_dir" / "x.json", "{}"), std::runtime_error);
  CHECK_FALSE(fs::exists(dir / "no_such_dir"));

  std::ofstream(dir / "broken.json") << "{\"din\": 2,";
  try {
    read_channel_json(dir / "broken.json");
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("broken.json") != std::string::npos);
  }
  fs::remove_all(dir);
}
