#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "sitcause/cli.hpp"
#include "test_util.hpp"

using namespace sitcause;

namespace {

struct RunResult {
  int exit;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = runCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fx(const std::string& name) { return sitcause::test::fixturePath(name); }

struct ColorOff {
  ColorOff() { setenv("SITCAUSE_COLOR", "0", 1); }
};
ColorOff colorOff;

}  // namespace

TEST_CASE("validate") {
  auto r = run({"validate", fx("car.sct")});
  CHECK(r.exit == kExitOk);
  CHECK(r.out == "ok: 2 worlds, 3 actions, 3 fluents\n");

  auto missing = run({"validate", fx("no_such_file.sct")});
  CHECK(missing.exit == kExitUsage);
  CHECK(missing.err.find("cannot open") != std::string::npos);
}

TEST_CASE("eval") {
  auto r = run({"eval", fx("car.sct"), "--narrative", "sigma1",
                "--effect", "damaged(C)"});
  CHECK(r.exit == kExitOk);
  CHECK(r.out == "true\n");

  auto f = run({"eval", fx("car.sct"), "--narrative", "drive(C,I,J)",
                "--effect", "damaged(C)"});
  CHECK(f.exit == kExitOk);
  CHECK(f.out == "false\n");

  auto bad = run({"eval", fx("car.sct"), "--narrative", "drive(C,J,K)",
                  "--effect", "damaged(C)"});
  CHECK(bad.exit == kExitSemantic);
  CHECK(bad.err.find("not executable") != std::string::npos);
}

TEST_CASE("regress") {
  auto r = run({"regress", fx("car.sct"), "--effect", "damaged(C)",
                "--action", "turn(C,K)"});
  CHECK(r.exit == kExitOk);
  CHECK(r.out == "corrupted(C) | damaged(C)\n");

  auto multi = run({"regress", fx("car.sct"), "--effect", "at(C,K)",
                    "--action", "drive(C,J,K)"});
  CHECK(multi.exit == kExitOk);
  CHECK(multi.out == "true\n");
}

TEST_CASE("causes text output") {
  auto r = run({"causes", fx("car.sct"), "--narrative", "sigma1",
                "--effect", "damaged(C)"});
  CHECK(r.exit == kExitOk);
  CHECK(r.out ==
        "(turn(C,K), 4)\n"
        "(drive(C,J,K), 3)\n"
        "(hack(C), 2)\n"
        "(drive(C,I,J), 0)\n");
}

TEST_CASE("causes --explain lists the recursion settings") {
  auto r = run({"causes", fx("car.sct"), "--narrative", "sigma1",
                "--effect", "damaged(C)", "--explain"});
  CHECK(r.exit == kExitOk);
  CHECK(r.out.find("derivation:\n") != std::string::npos);
  CHECK(r.out.find("prefix 5: damaged(C)\n") != std::string::npos);
  CHECK(r.out.find("prefix 4: (corrupted(C) | damaged(C)) & at(C,K)\n") != std::string::npos);
  CHECK(r.out.find("prefix 3: (corrupted(C) | damaged(C)) & at(C,J)\n") != std::string::npos);
  CHECK(r.out.find("prefix 2: at(C,J)\n") != std::string::npos);
}

TEST_CASE("causes JSON output") {
  auto r = run({"causes", fx("car.sct"), "--narrative", "sigma2",
                "--effect", "damaged(C)", "--format", "json"});
  CHECK(r.exit == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["effect"] == "damaged(C)");
  CHECK(j["world"] == "S0");
  CHECK(j["status"] == "ok");
  REQUIRE(j["chain"].size() == 4);
  CHECK(j["chain"][0]["action"] == "turn(C,K)");
  CHECK(j["chain"][0]["position"] == 5);
  CHECK(j["chain"][3]["action"] == "drive(C,I,J)");
  CHECK(j["chain"][3]["position"] == 0);
}

TEST_CASE("causes held-initially status") {
  auto r = run({"causes", fx("car.sct"), "--narrative", "sigma1",
                "--effect", "connected(I,J)", "--format", "json"});
  CHECK(r.exit == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["status"] == "held_initially");
  CHECK(j["chain"].empty());
}

TEST_CASE("causes semantic failures") {
  auto notAchieved = run({"causes", fx("car.sct"), "--narrative", "drive(C,I,J)",
                          "--effect", "damaged(C)"});
  CHECK(notAchieved.exit == kExitSemantic);
  CHECK(notAchieved.err.find("not achieved") != std::string::npos);
}

TEST_CASE("knows-causes text and exit codes") {
  auto neg = run({"knows-causes", fx("car.sct"), "--narrative", "sigma1",
                  "--effect", "damaged(C)"});
  CHECK(neg.exit == kExitKnowsFalse);
  CHECK(neg.out.find("knows: false\n") != std::string::npos);
  CHECK(neg.out.find("knows_effect: true\n") != std::string::npos);
  CHECK(neg.out.find("(turn(C,K), 4)\n") != std::string::npos);
  CHECK(neg.out.find("world S0star: survives=yes k_related=no chain:\n") != std::string::npos);
  CHECK(neg.out.find("(turn(C,J), 1)\n") != std::string::npos);

  auto pos = run({"knows-causes", fx("car_both_corrupted.sct"), "--narrative", "sigma1",
                  "--effect", "damaged(C)"});
  CHECK(pos.exit == kExitOk);
  CHECK(pos.out.find("knows: true\n") != std::string::npos);
}

TEST_CASE("knows-causes JSON output") {
  auto r = run({"knows-causes", fx("car.sct"), "--narrative", "sigma1",
                "--effect", "damaged(C)", "--format", "json"});
  CHECK(r.exit == kExitKnowsFalse);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["knows"] == false);
  CHECK(j["knows_effect"] == true);
  CHECK(j["actual"]["chain"].size() == 4);
  REQUIRE(j["alternatives"].size() == 2);
  CHECK(j["alternatives"][0]["world"] == "S0");
  CHECK(j["alternatives"][0]["k_related"] == true);
  CHECK(j["alternatives"][1]["world"] == "S0star");
  CHECK(j["alternatives"][1]["survives"] == true);
  CHECK(j["alternatives"][1]["k_related"] == false);
  CHECK(j["alternatives"][1]["chain"]["chain"].size() == 2);
}

TEST_CASE("kworlds") {
  auto filtered = run({"kworlds", fx("garage.sct"), "--narrative", "toGarage"});
  CHECK(filtered.exit == kExitOk);
  CHECK(filtered.out == "S0\n");

  auto open = run({"kworlds", fx("garage.sct"), "--narrative", "senseAtI"});
  CHECK(open.exit == kExitOk);
  CHECK(open.out == "S0\nS0star\n");

  auto json = run({"kworlds", fx("garage.sct"), "--narrative", "toGarage",
                   "--format", "json"});
  auto j = nlohmann::json::parse(json.out);
  CHECK(j == nlohmann::json::array({"S0"}));
}

TEST_CASE("oracle command") {
  auto r = run({"oracle", "--seed-first", "1", "--seed-last", "10"});
  CHECK(r.exit == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["passed"] == true);
  CHECK(j["instances"].get<int>() > 0);
  CHECK(j["failures"].empty());
}

TEST_CASE("usage errors") {
  CHECK(run({}).exit == kExitUsage);
  CHECK(run({"frobnicate"}).exit == kExitUsage);
  CHECK(run({"causes", fx("car.sct")}).exit == kExitUsage);  // missing --effect
  CHECK(run({"eval", fx("car.sct"), "--narrative", "sigma1",
             "--effect", "flying(C)"}).exit == kExitUsage);   // parse error
  CHECK(run({"--help"}).exit == kExitOk);
}

TEST_CASE("output is deterministic across runs") {
  std::vector<std::vector<std::string>> commands = {
      {"validate", fx("car.sct")},
      {"causes", fx("car.sct"), "--narrative", "sigma1", "--effect", "damaged(C)",
       "--format", "json"},
      {"knows-causes", fx("car.sct"), "--narrative", "sigma1", "--effect",
       "damaged(C)", "--format", "json"},
      {"kworlds", fx("garage.sct"), "--narrative", "toGarage"},
      {"oracle", "--seed-first", "1", "--seed-last", "5"},
  };
  for (const auto& cmd : commands) {
    auto a = run(cmd);
    auto b = run(cmd);
    CHECK(a.exit == b.exit);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
  }
}
