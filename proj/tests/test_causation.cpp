#include <doctest.h>

#include "sitcause/causation.hpp"
#include "sitcause/dsl.hpp"
#include "test_util.hpp"

using namespace sitcause;

namespace {
GroundAction ga(std::string sym, std::vector<std::string> args) {
  return {std::move(sym), std::move(args)};
}

CausalSetting settingFor(const Scenario& sc, const std::string& world,
                         const std::string& narrative, const std::string& effect) {
  return CausalSetting(sc.theory, sc.worlds,
                       Situation{world, sc.narratives.at(narrative)},
                       parseFormula(effect, sc));
}
}  // namespace

TEST_CASE("setting validation") {
  auto sc = test::loadFixture("car.sct");
  SUBCASE("effect must be closed") {
    auto open = Formula::fluent("damaged", {Term::variable("c", "car")});
    CHECK_THROWS_AS(CausalSetting(sc.theory, sc.worlds,
                                  Situation{"S0", sc.narratives.at("sigma1")}, open),
                    SitError);
  }
  SUBCASE("narrative must be executable") {
    try {
      CausalSetting(sc.theory, sc.worlds,
                    Situation{"S0", {ga("drive", {"C", "J", "K"})}},
                    parseFormula("true", sc));
      FAIL("expected SitError");
    } catch (const SitError& e) {
      CHECK(e.code() == ErrorCode::NotExecutable);
    }
  }
  SUBCASE("effect must hold at the end") {
    try {
      settingFor(sc, "S0", "sigma1", "at(C,I)");
      FAIL("expected SitError");
    } catch (const SitError& e) {
      CHECK(e.code() == ErrorCode::InvalidSetting);
    }
  }
}

TEST_CASE("achievementFlip finds the persistent flip") {
  auto sc = test::loadFixture("car.sct");
  auto flip = achievementFlip(settingFor(sc, "S0", "sigma1", "damaged(C)"));
  REQUIRE(flip.has_value());
  CHECK(flip->first == ga("turn", {"C", "K"}));
  CHECK(flip->second == 4);

  // An effect true throughout yields no flip.
  CHECK_FALSE(achievementFlip(settingFor(sc, "S0", "sigma1", "connected(I,J)")).has_value());
}

TEST_CASE("causal chain of sigma1") {
  auto sc = test::loadFixture("car.sct");
  auto setting = settingFor(sc, "S0", "sigma1", "damaged(C)");
  auto chain = causalChain(setting);
  std::vector<CauseEntry> expected = {
      {ga("turn", {"C", "K"}), 4},
      {ga("drive", {"C", "J", "K"}), 3},
      {ga("hack", {"C"}), 2},
      {ga("drive", {"C", "I", "J"}), 0},
  };
  CHECK(chain.entries == expected);

  CHECK(isCause(setting, ga("hack", {"C"}), 2));
  CHECK_FALSE(isCause(setting, ga("turn", {"C", "J"}), 1));
  CHECK_FALSE(isCause(setting, ga("hack", {"C"}), 3));
}

TEST_CASE("sigma1 recursion intermediates") {
  auto sc = test::loadFixture("car.sct");
  auto analysis = analyzeCauses(settingFor(sc, "S0", "sigma1", "damaged(C)"));
  REQUIRE(analysis.steps.size() == 5);
  CHECK(analysis.steps[0].prefixLen == 5);
  CHECK(equivalentModuloOrder(analysis.steps[0].effect, parseFormula("damaged(C)", sc)));
  CHECK(analysis.steps[1].prefixLen == 4);
  CHECK(equivalentModuloOrder(analysis.steps[1].effect,
                              parseFormula("(corrupted(C) | damaged(C)) & at(C,K)", sc)));
  CHECK(analysis.steps[2].prefixLen == 3);
  CHECK(equivalentModuloOrder(analysis.steps[2].effect,
                              parseFormula("(corrupted(C) | damaged(C)) & at(C,J)", sc)));
  CHECK(analysis.steps[3].prefixLen == 2);
  CHECK(equivalentModuloOrder(analysis.steps[3].effect, parseFormula("at(C,J)", sc)));
  CHECK(analysis.steps[4].prefixLen == 0);
  CHECK(analysis.status == ChainStatus::Ok);
}

TEST_CASE("sigma2 chain handles preemption and late no-ops") {
  auto sc = test::loadFixture("car.sct");
  auto setting = settingFor(sc, "S0", "sigma2", "damaged(C)");
  auto chain = causalChain(setting);
  std::vector<CauseEntry> expected = {
      {ga("turn", {"C", "K"}), 5},
      {ga("drive", {"C", "J", "K"}), 4},
      {ga("hack", {"C"}), 2},
      {ga("drive", {"C", "I", "J"}), 0},
  };
  CHECK(chain.entries == expected);
  // The preempted second hack and the trailing actions are not causes.
  CHECK_FALSE(isCause(setting, ga("hack", {"C"}), 3));
  CHECK_FALSE(isCause(setting, ga("turn", {"C", "K"}), 6));
  CHECK_FALSE(isCause(setting, ga("drive", {"C", "K", "J"}), 7));
}

TEST_CASE("quantified effect over two cars") {
  auto sc = test::loadFixture("cars2.sct");
  auto chain = causalChain(settingFor(sc, "S0", "sigma3", "forall c (damaged(c))"));
  std::vector<CauseEntry> expected = {
      {ga("turn", {"C2", "J"}), 6},
      {ga("hack", {"C2"}), 5},
      {ga("drive", {"C2", "I", "J"}), 3},
      {ga("turn", {"C1", "I"}), 1},
      {ga("hack", {"C1"}), 0},
  };
  CHECK(chain.entries == expected);
}

TEST_CASE("alternative world chain for sigma1") {
  auto sc = test::loadFixture("car.sct");
  auto chain = causalChain(settingFor(sc, "S0star", "sigma1", "damaged(C)"));
  std::vector<CauseEntry> expected = {
      {ga("turn", {"C", "J"}), 1},
      {ga("drive", {"C", "I", "J"}), 0},
  };
  CHECK(chain.entries == expected);
}

TEST_CASE("effects that held initially") {
  auto sc = test::loadFixture("car.sct");
  auto analysis = analyzeCauses(settingFor(sc, "S0", "sigma1", "connected(I,J)"));
  CHECK(analysis.chain.entries.empty());
  CHECK(analysis.status == ChainStatus::HeldInitially);

  CausalSetting empty(sc.theory, sc.worlds, Situation{"S0", {}},
                      parseFormula("at(C,I)", sc));
  auto a2 = analyzeCauses(empty);
  CHECK(a2.chain.entries.empty());
  CHECK(a2.status == ChainStatus::HeldInitially);
}

TEST_CASE("chain positions strictly decrease") {
  for (const char* name : {"car.sct", "cars2.sct"}) {
    auto sc = test::loadFixture(name);
    for (const auto& [nname, actions] : sc.narratives) {
      Situation sigma{actualWorld(sc.worlds).id, actions};
      auto phi = parseFormula("exists c (damaged(c))", sc);
      if (!holds(sc.theory, sc.worlds, phi, sigma)) continue;
      auto chain = causalChain(CausalSetting(sc.theory, sc.worlds, sigma, phi));
      for (size_t i = 1; i < chain.entries.size(); ++i)
        CHECK(chain.entries[i].prefixLen < chain.entries[i - 1].prefixLen);
      // Every entry names the action actually at that position.
      for (const auto& e : chain.entries)
        CHECK(e.action == sigma.actions[e.prefixLen]);
    }
  }
}
