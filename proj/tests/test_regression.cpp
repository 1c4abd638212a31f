#include <doctest.h>

#include "sitcause/dsl.hpp"
#include "sitcause/regression.hpp"
#include "test_util.hpp"

using namespace sitcause;

namespace {
GroundAction ga(std::string sym, std::vector<std::string> args) {
  return {std::move(sym), std::move(args)};
}
}  // namespace

TEST_CASE("rho of damaged through a turn") {
  auto sc = test::loadFixture("car.sct");
  auto got = rho(sc.theory, parseFormula("damaged(C)", sc), ga("turn", {"C", "K"}));
  CHECK(equivalentModuloOrder(got, parseFormula("corrupted(C) | damaged(C)", sc)));
}

TEST_CASE("rho resolves the drive SSA to a constant") {
  auto sc = test::loadFixture("car.sct");
  auto atCK = parseFormula("at(C,K)", sc);
  CHECK(rho(sc.theory, atCK, ga("drive", {"C", "J", "K"}))->kind ==
        Formula::Kind::True);
  // Driving away makes the source position false.
  CHECK(rho(sc.theory, parseFormula("at(C,J)", sc), ga("drive", {"C", "J", "K"}))->kind ==
        Formula::Kind::False);
  // An unrelated action leaves the fluent's frame condition.
  CHECK(formulaEquals(rho(sc.theory, atCK, ga("hack", {"C"})), atCK));
}

TEST_CASE("rho of corrupted") {
  auto sc = test::loadFixture("car.sct");
  auto corr = parseFormula("corrupted(C)", sc);
  CHECK(rho(sc.theory, corr, ga("hack", {"C"}))->kind == Formula::Kind::True);
  CHECK(formulaEquals(rho(sc.theory, corr, ga("turn", {"C", "J"})), corr));
}

TEST_CASE("rho leaves statics, equalities, and constants untouched") {
  auto sc = test::loadFixture("car.sct");
  auto conn = parseFormula("connected(J,K)", sc);
  CHECK(formulaEquals(rho(sc.theory, conn, ga("hack", {"C"})), conn));
  CHECK(rho(sc.theory, Formula::makeTrue(), ga("hack", {"C"}))->kind ==
        Formula::Kind::True);
}

TEST_CASE("rho distributes over connectives and quantifiers") {
  auto sc = test::loadFixture("car.sct");
  auto f = parseFormula("damaged(C) & at(C,K)", sc);
  auto got = rho(sc.theory, f, ga("turn", {"C", "K"}));
  CHECK(equivalentModuloOrder(
      got, parseFormula("(corrupted(C) | damaged(C)) & at(C,K)", sc)));

  auto sc2 = test::loadFixture("cars2.sct");
  auto q = parseFormula("forall c (damaged(c))", sc2);
  auto rq = rho(sc2.theory, q, ga("turn", {"C2", "J"}));
  // Semantics preserved: check at a couple of models instead of pinning shape.
  Situation sigma{"S0", sc2.narratives.at("sigma3")};
  auto models = modelsAlong(sc2.theory, sc2.worlds, sigma);
  for (size_t p = 0; p < models.size(); ++p) {
    if (!eval(precondition(sc2.theory, ga("turn", {"C2", "J"})), models[p], {}))
      continue;
    StateModel next = progress(sc2.theory, models[p], ga("turn", {"C2", "J"}));
    CHECK(eval(rq, models[p], {}) == eval(q, next, {}));
  }
}

TEST_CASE("rho requires an SSA for every fluent mentioned") {
  auto sc = test::loadFixture("car.sct");
  auto bat = sc.theory;
  bat.ssas.clear();
  CHECK_THROWS_AS(rho(bat, parseFormula("damaged(C)", sc), ga("hack", {"C"})), SitError);
}

TEST_CASE("regressAll reduces evaluation to the initial model") {
  auto sc = test::loadFixture("car.sct");
  std::vector<FormulaPtr> queries = {
      parseFormula("damaged(C)", sc),
      parseFormula("corrupted(C) & at(C,K)", sc),
      parseFormula("exists i (at(C,i) & connected(i,J))", sc),
      parseFormula("!damaged(C) | corrupted(C)", sc),
  };
  for (const char* world : {"S0", "S0star"}) {
    for (const char* narr : {"sigma1", "sigma2"}) {
      Situation sigma{world, sc.narratives.at(narr)};
      auto models = modelsAlong(sc.theory, sc.worlds, sigma);
      for (const auto& phi : queries)
        for (size_t p = 0; p <= sigma.length(); ++p) {
          bool direct = eval(phi, models[p], {});
          bool viaRegression =
              eval(regressAll(sc.theory, phi, sigma.prefix(p).actions), models[0], {});
          CHECK(direct == viaRegression);
        }
    }
  }
}

TEST_CASE("regressAll on a quantified effect over two cars") {
  auto sc = test::loadFixture("cars2.sct");
  Situation sigma{"S0", sc.narratives.at("sigma3")};
  auto models = modelsAlong(sc.theory, sc.worlds, sigma);
  auto phi = parseFormula("forall c (damaged(c))", sc);
  for (size_t p = 0; p <= sigma.length(); ++p) {
    bool direct = eval(phi, models[p], {});
    bool viaRegression =
        eval(regressAll(sc.theory, phi, sigma.prefix(p).actions), models[0], {});
    CHECK(direct == viaRegression);
  }
  CHECK_FALSE(eval(phi, models[6], {}));
  CHECK(eval(phi, models[7], {}));
}

TEST_CASE("regressAll of the empty sequence is the identity") {
  auto sc = test::loadFixture("car.sct");
  auto phi = parseFormula("damaged(C)", sc);
  CHECK(formulaEquals(regressAll(sc.theory, phi, {}), phi));
}
