#include <doctest.h>

#include <random>

#include "sitcause/dsl.hpp"
#include "sitcause/formula.hpp"
#include "test_util.hpp"

using namespace sitcause;

namespace {

StateModel initialModel(const Scenario& sc) { return actualWorld(sc.worlds).model; }

TermPtr carC() { return Term::constant("C", "car"); }
TermPtr loc(const std::string& n) { return Term::constant(n, "loc"); }

// Small random ground formula generator over the car fixture signature.
FormulaPtr randomGroundFormula(std::mt19937& rng, int depth) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  std::vector<std::string> locs{"I", "J", "K"};
  if (depth <= 0 || pick(3) == 0) {
    switch (pick(5)) {
      case 0: return Formula::makeTrue();
      case 1: return Formula::fluent("corrupted", {carC()});
      case 2: return Formula::fluent("damaged", {carC()});
      case 3: return Formula::fluent("at", {carC(), loc(locs[pick(3)])});
      default: return Formula::equal(loc(locs[pick(3)]), loc(locs[pick(3)]));
    }
  }
  switch (pick(6)) {
    case 0: return Formula::negation(randomGroundFormula(rng, depth - 1));
    case 1: return Formula::conj(randomGroundFormula(rng, depth - 1),
                                 randomGroundFormula(rng, depth - 1));
    case 2: return Formula::disj(randomGroundFormula(rng, depth - 1),
                                 randomGroundFormula(rng, depth - 1));
    case 3: return Formula::implies(randomGroundFormula(rng, depth - 1),
                                    randomGroundFormula(rng, depth - 1));
    case 4: return Formula::iff(randomGroundFormula(rng, depth - 1),
                                randomGroundFormula(rng, depth - 1));
    default: {
      auto atom = Formula::fluent("at", {carC(), Term::variable("x", "loc")});
      auto body = Formula::conj(atom, randomGroundFormula(rng, depth - 1));
      return pick(2) == 0 ? Formula::exists("x", "loc", body)
                          : Formula::forall("x", "loc", body);
    }
  }
}

StateModel randomModel(std::mt19937& rng, const Scenario& sc) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  StateModel m = initialModel(sc);
  m.fluents["corrupted"].clear();
  m.fluents["damaged"].clear();
  m.fluents["at"].clear();
  if (pick(2)) m.fluents["corrupted"].insert({"C"});
  if (pick(2)) m.fluents["damaged"].insert({"C"});
  for (const auto& l : {"I", "J", "K"})
    if (pick(2)) m.fluents["at"].insert({"C", l});
  return m;
}

}  // namespace

TEST_CASE("eval on the initial car model") {
  auto sc = test::loadFixture("car.sct");
  StateModel m0 = initialModel(sc);

  CHECK(eval(Formula::makeTrue(), m0, {}));
  CHECK(eval(parseFormula("at(C,I)", sc), m0, {}));
  CHECK(eval(parseFormula("forall c (at(c,I))", sc), m0, {}));
  CHECK_FALSE(eval(parseFormula("damaged(C)", sc), m0, {}));
  CHECK(eval(parseFormula("connected(I,J)", sc), m0, {}));
  CHECK_FALSE(eval(parseFormula("connected(I,K)", sc), m0, {}));
}

TEST_CASE("eval with an environment binding") {
  auto sc = test::loadFixture("car.sct");
  StateModel m0 = initialModel(sc);
  auto atom = Formula::fluent("at", {Term::variable("c", "car"), Term::variable("i", "loc")});
  Binding env{{"c", carC()}, {"i", loc("I")}};
  CHECK(eval(atom, m0, env));
  CHECK_THROWS_AS(eval(atom, m0, {}), SitError);  // unbound
}

TEST_CASE("eval rejects undeclared symbols") {
  auto sc = test::loadFixture("car.sct");
  auto bogus = Formula::fluent("flying", {carC()});
  CHECK_THROWS_AS(eval(bogus, initialModel(sc), {}), SitError);
}

TEST_CASE("substitute replaces free variables and respects binders") {
  auto sc = test::loadFixture("car.sct");
  auto atom = Formula::fluent("at", {Term::variable("c", "car"), Term::variable("i", "loc")});
  Binding b{{"c", carC()}, {"i", loc("K")}};
  CHECK(formulaEquals(substitute(atom, b), parseFormula("at(C,K)", sc)));

  // substitute(exists j (a = drive(c,j,i)), {c->C, i->K}) keeps j bound.
  auto drv = Term::apply("drive", "action",
                         {Term::variable("c", "car"), Term::variable("j", "loc"),
                          Term::variable("i", "loc")});
  auto q = Formula::exists("j", "loc",
                           Formula::equal(Term::variable("a", "action"), drv));
  auto got = substitute(q, b);
  auto fv = freeVars(got);
  CHECK(fv.size() == 1);  // only 'a' remains free
  CHECK(fv.begin()->first == "a");

  CHECK(formulaEquals(substitute(Formula::makeTrue(), {}), Formula::makeTrue()));
}

TEST_CASE("substitute is capture avoiding") {
  // Substituting i -> j under a binder for j must rename the binder.
  auto inner = Formula::fluent("at", {Term::variable("j", "car"), Term::variable("i", "loc")});
  auto q = Formula::exists("j", "car", inner);
  Binding b{{"i", Term::variable("j", "loc")}};
  auto got = substitute(q, b);
  CHECK(got->symbol != "j");  // binder renamed
  auto fv = freeVars(got);
  REQUIRE(fv.size() == 1);
  CHECK(fv.begin()->first == "j");  // the substituted-in variable stays free
}

TEST_CASE("freeVars") {
  auto sc = test::loadFixture("car.sct");
  CHECK(freeVars(parseFormula("at(C,I)", sc)).empty());

  auto open = Formula::fluent("at", {Term::variable("c", "car"), Term::variable("i", "loc")});
  CHECK(freeVars(open).size() == 2);

  auto drv = Term::apply("drive", "action",
                         {Term::variable("c", "car"), Term::variable("j", "loc"),
                          Term::variable("i", "loc")});
  auto q = Formula::exists("j", "loc",
                           Formula::equal(Term::variable("a", "action"), drv));
  auto fv = freeVars(q);
  CHECK(fv.size() == 3);
  CHECK(fv.count({"a", "action"}));
  CHECK(fv.count({"c", "car"}));
  CHECK(fv.count({"i", "loc"}));
}

TEST_CASE("simplify resolves equalities under unique names") {
  auto turnCK = Term::apply("turn", "action", {carC(), loc("K")});
  CHECK(simplify(Formula::equal(turnCK, turnCK))->kind == Formula::Kind::True);

  auto driveCIJ = Term::apply("drive", "action", {carC(), loc("I"), loc("J")});
  auto turnCJ = Term::apply("turn", "action", {carC(), loc("J")});
  CHECK(simplify(Formula::equal(driveCIJ, turnCJ))->kind == Formula::Kind::False);

  // Same symbol reduces to argument equalities.
  auto driveCIK = Term::apply("drive", "action", {carC(), loc("I"), loc("K")});
  CHECK(simplify(Formula::equal(driveCIJ, driveCIK))->kind == Formula::Kind::False);
}

TEST_CASE("simplify reproduces the regression example reduction") {
  auto sc = test::loadFixture("car.sct");
  auto turnCK = Term::apply("turn", "action", {carC(), loc("K")});
  auto f = Formula::disj(
      Formula::conj(parseFormula("corrupted(C)", sc), Formula::equal(turnCK, turnCK)),
      parseFormula("damaged(C)", sc));
  CHECK(formulaEquals(simplify(f), parseFormula("corrupted(C) | damaged(C)", sc)));
}

TEST_CASE("simplify eliminates decided quantifiers and applies one-point rule") {
  auto sc = test::loadFixture("car.sct");
  auto decided = Formula::exists("x", "loc", Formula::makeFalse());
  CHECK(simplify(decided)->kind == Formula::Kind::False);

  auto onePoint = Formula::exists("x", "loc",
                                  Formula::equal(Term::variable("x", "loc"), loc("K")));
  CHECK(simplify(onePoint)->kind == Formula::Kind::True);

  auto pinned = Formula::exists(
      "x", "loc",
      Formula::conj(Formula::equal(Term::variable("x", "loc"), loc("J")),
                    Formula::fluent("at", {carC(), Term::variable("x", "loc")})));
  CHECK(formulaEquals(simplify(pinned), parseFormula("at(C,J)", sc)));
}

TEST_CASE("eval respects logical laws on random formulas") {
  auto sc = test::loadFixture("car.sct");
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    auto m = randomModel(rng, sc);
    auto a = randomGroundFormula(rng, 3);
    auto b = randomGroundFormula(rng, 3);
    CHECK(eval(Formula::negation(a), m, {}) == !eval(a, m, {}));
    CHECK(eval(Formula::conj(a, b), m, {}) == (eval(a, m, {}) && eval(b, m, {})));
    // forall = conjunction over the domain
    auto open = Formula::fluent("at", {carC(), Term::variable("x", "loc")});
    bool all = true;
    for (const auto& l : m.domain.at("loc"))
      all = all && eval(open, m, {{"x", loc(l)}});
    CHECK(eval(Formula::forall("x", "loc", open), m, {}) == all);
  }
}

TEST_CASE("simplify is sound and idempotent on random formulas") {
  auto sc = test::loadFixture("car.sct");
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    auto m = randomModel(rng, sc);
    auto f = randomGroundFormula(rng, 4);
    auto s = simplify(f);
    CHECK(eval(s, m, {}) == eval(f, m, {}));
    CHECK(formulaEquals(simplify(s), s));
  }
}

TEST_CASE("substitute and eval cohere") {
  auto sc = test::loadFixture("car.sct");
  std::mt19937 rng(13);
  auto open = Formula::disj(
      Formula::fluent("at", {Term::variable("c", "car"), Term::variable("i", "loc")}),
      Formula::fluent("damaged", {Term::variable("c", "car")}));
  for (int i = 0; i < 50; ++i) {
    auto m = randomModel(rng, sc);
    for (const auto& l : {"I", "J", "K"}) {
      Binding b{{"c", carC()}, {"i", loc(l)}};
      CHECK(eval(substitute(open, b), m, {}) == eval(open, m, b));
    }
  }
}

TEST_CASE("canonical ordering makes operand order irrelevant") {
  auto sc = test::loadFixture("car.sct");
  auto a = parseFormula("corrupted(C) | damaged(C)", sc);
  auto b = parseFormula("damaged(C) | corrupted(C)", sc);
  CHECK(equivalentModuloOrder(a, b));
  CHECK_FALSE(equivalentModuloOrder(a, parseFormula("corrupted(C)", sc)));
}
