// Independent brute-force implementations and seed-deterministic random
// instance generation, used to cross-check the main algorithms.

#ifndef SITCAUSE_ORACLE_HPP
#define SITCAUSE_ORACLE_HPP

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sitcause/bat.hpp"
#include "sitcause/causation.hpp"
#include "sitcause/epistemic.hpp"
#include "sitcause/formula.hpp"
#include "sitcause/narrative.hpp"
#include "sitcause/regression.hpp"

namespace sitcause {

/// Literal re-implementation of the achievement-cause recursion: at each
/// level, the achievement condition is tested by evaluating the effect at
/// every prefix with no caching and no shortcut. Deliberately independent of
/// causalChain's code path.
inline CausalChain naiveCausalChain(const CausalSetting& setting) {
  CausalChain chain;
  const BasicActionTheory& bat = *setting.bat;
  const WorldSet& worlds = *setting.worlds;
  Situation sigma = setting.narrative;
  FormulaPtr phi = setting.effect;

  while (true) {
    // Find (alpha', sigma') with ~phi(sigma') and phi at every situation
    // between do(alpha', sigma') and sigma inclusive.
    std::optional<size_t> found;
    for (size_t p = 0; p < sigma.length(); ++p) {
      if (holds(bat, worlds, phi, sigma.prefix(p))) continue;
      bool persists = true;
      for (size_t q = p + 1; q <= sigma.length(); ++q)
        if (!holds(bat, worlds, phi, sigma.prefix(q))) persists = false;
      if (persists) found = p;
    }
    if (!found) return chain;
    const GroundAction alphaPrime = sigma.actions[*found];
    chain.entries.push_back({alphaPrime, *found});
    FormulaPtr next = Formula::conj(rho(bat, phi, alphaPrime),
                                    precondition(bat, alphaPrime));
    sigma = sigma.prefix(*found);
    phi = next;
  }
}

// ---------------------------------------------------------------------------
// Random instances

struct RandomTheorySpec {
  unsigned seed = 1;
  int maxObjects = 4;
  int maxFluents = 3;
  int maxActions = 3;
  int maxNarrativeLength = 6;
  int maxWorlds = 3;
  int maxFormulaDepth = 3;
};

struct RandomInstance {
  BasicActionTheory bat;
  WorldSet worlds;
  EpistemicFrame frame;
  std::vector<Agent> agents;
  Situation narrative;  // rooted at the actual world, executable
  FormulaPtr query;     // random closed formula

  EpistemicScenario epistemic() const { return {&bat, &worlds, &frame, agents}; }
};

namespace oracle_detail {

inline FormulaPtr randomFormula(std::mt19937& rng, const BasicActionTheory& bat,
                                const std::vector<std::string>& objects,
                                int depth) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  if (depth <= 0 || pick(4) == 0) {
    // Ground fluent atom, or a constant.
    int r = pick(6);
    if (r == 0) return Formula::makeTrue();
    if (r == 1) return Formula::makeFalse();
    std::vector<std::pair<std::string, std::vector<std::string>>> fluents(
        bat.fluentSignatures.begin(), bat.fluentSignatures.end());
    const auto& [sym, sig] = fluents[pick(static_cast<int>(fluents.size()))];
    std::vector<TermPtr> args;
    for (size_t i = 0; i < sig.size(); ++i)
      args.push_back(Term::constant(objects[pick(static_cast<int>(objects.size()))], "obj"));
    return Formula::fluent(sym, std::move(args));
  }
  switch (pick(5)) {
    case 0: return Formula::negation(randomFormula(rng, bat, objects, depth - 1));
    case 1: return Formula::conj(randomFormula(rng, bat, objects, depth - 1),
                                 randomFormula(rng, bat, objects, depth - 1));
    case 2: return Formula::disj(randomFormula(rng, bat, objects, depth - 1),
                                 randomFormula(rng, bat, objects, depth - 1));
    case 3: return Formula::implies(randomFormula(rng, bat, objects, depth - 1),
                                    randomFormula(rng, bat, objects, depth - 1));
    default: {
      std::string var = "x" + std::to_string(depth);
      auto body = randomFormula(rng, bat, objects, depth - 1);
      // Replace one random constant occurrence pattern crudely: quantify over
      // a fresh variable inside a fluent atom.
      std::vector<std::pair<std::string, std::vector<std::string>>> fluents(
          bat.fluentSignatures.begin(), bat.fluentSignatures.end());
      const auto& [sym, sig] = fluents[pick(static_cast<int>(fluents.size()))];
      if (sig.empty()) return body;
      std::vector<TermPtr> args;
      for (size_t i = 0; i < sig.size(); ++i)
        args.push_back(i == 0 ? Term::variable(var, "obj")
                              : Term::constant(objects[pick(static_cast<int>(objects.size()))], "obj"));
      auto atom = Formula::fluent(sym, std::move(args));
      return pick(2) == 0 ? Formula::exists(var, "obj", Formula::conj(atom, body))
                          : Formula::forall(var, "obj", Formula::implies(atom, body));
    }
  }
}

}  // namespace oracle_detail

/// Seed-deterministic generator. SSA right-hand sides have the shape
/// (positive trigger) | (F & !negative trigger), so generated theories have a
/// sensible frame structure. Narratives are resampled until executable.
inline std::optional<RandomInstance> generateInstance(const RandomTheorySpec& spec) {
  std::mt19937 rng(spec.seed);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };

  RandomInstance inst;
  BasicActionTheory& bat = inst.bat;
  bat.sorts = {{"obj", SortKind::Object}, {"action", SortKind::Action}};

  int nObjects = 2 + pick(spec.maxObjects - 1);
  std::vector<std::string> objects;
  for (int i = 0; i < nObjects; ++i) objects.push_back("O" + std::to_string(i));

  int nFluents = 1 + pick(spec.maxFluents);
  for (int i = 0; i < nFluents; ++i) {
    int arity = pick(2);  // 0 or 1
    bat.fluentSignatures["f" + std::to_string(i)] =
        std::vector<std::string>(arity, "obj");
  }

  int nActions = 1 + pick(spec.maxActions);
  for (int i = 0; i < nActions; ++i) {
    ActionSchema schema;
    schema.name = "act" + std::to_string(i);
    int arity = pick(2);
    for (int j = 0; j < arity; ++j)
      schema.params.push_back({"p" + std::to_string(j), "obj"});
    // Precondition: true, or one fluent atom over params/constants.
    if (pick(3) == 0) {
      schema.precondition = Formula::makeTrue();
    } else {
      std::vector<std::pair<std::string, std::vector<std::string>>> fluents(
          bat.fluentSignatures.begin(), bat.fluentSignatures.end());
      const auto& [sym, sig] = fluents[pick(static_cast<int>(fluents.size()))];
      std::vector<TermPtr> args;
      for (size_t k = 0; k < sig.size(); ++k) {
        if (!schema.params.empty() && pick(2) == 0)
          args.push_back(Term::variable(
              schema.params[pick(static_cast<int>(schema.params.size()))].first, "obj"));
        else
          args.push_back(Term::constant(objects[pick(nObjects)], "obj"));
      }
      auto atom = Formula::fluent(sym, std::move(args));
      schema.precondition = pick(4) == 0 ? Formula::negation(atom) : atom;
    }
    bat.actions.push_back(std::move(schema));
  }

  // One SSA per fluent: (a = trigger+) | (F(params) & !(a = trigger-)).
  auto randomActionPattern = [&](const std::vector<std::pair<std::string, std::string>>& fluentParams)
      -> FormulaPtr {
    const ActionSchema& schema = bat.actions[pick(nActions)];
    std::vector<TermPtr> args;
    for (const auto& [pn, ps] : schema.params) {
      if (!fluentParams.empty() && pick(2) == 0)
        args.push_back(Term::variable(
            fluentParams[pick(static_cast<int>(fluentParams.size()))].first, "obj"));
      else
        args.push_back(Term::constant(objects[pick(nObjects)], "obj"));
    }
    return Formula::equal(Term::variable("a", "action"),
                          Term::apply(schema.name, "action", std::move(args)));
  };
  for (const auto& [sym, sig] : bat.fluentSignatures) {
    SuccessorStateAxiom ssa;
    ssa.fluent = sym;
    ssa.actionVar = "a";
    std::vector<TermPtr> selfArgs;
    for (size_t i = 0; i < sig.size(); ++i) {
      ssa.params.push_back({"v" + std::to_string(i), "obj"});
      selfArgs.push_back(Term::variable("v" + std::to_string(i), "obj"));
    }
    FormulaPtr self = Formula::fluent(sym, selfArgs);
    FormulaPtr positive = randomActionPattern(ssa.params);
    FormulaPtr frame = pick(2) == 0
        ? Formula::conj(self, Formula::negation(randomActionPattern(ssa.params)))
        : self;
    ssa.rhs = Formula::disj(positive, frame);
    bat.ssas.push_back(std::move(ssa));
  }

  // Worlds: random extensions over the same domain; world 0 actual.
  int nWorlds = 1 + pick(spec.maxWorlds);
  for (int w = 0; w < nWorlds; ++w) {
    InitialModel world;
    world.id = "W" + std::to_string(w);
    world.isActual = w == 0;
    world.model.domain["obj"] = objects;
    for (const auto& [sym, sig] : bat.fluentSignatures) {
      auto& rel = world.model.fluents[sym];
      if (sig.empty()) {
        if (pick(2) == 0) rel.insert({});
      } else {
        for (const auto& o : objects)
          if (pick(2) == 0) rel.insert({o});
      }
    }
    inst.worlds.push_back(std::move(world));
  }

  // Frame: random partition of the worlds into equivalence classes.
  inst.agents.push_back({"agt"});
  std::vector<int> classOf(nWorlds);
  int nClasses = 1 + pick(nWorlds);
  for (int w = 0; w < nWorlds; ++w) classOf[w] = pick(nClasses);
  auto& edges = inst.frame.kEdges["agt"];
  for (int i = 0; i < nWorlds; ++i)
    for (int j = 0; j < nWorlds; ++j)
      if (classOf[i] == classOf[j])
        edges.insert({inst.worlds[i].id, inst.worlds[j].id});

  // Executable narrative from the actual world, bounded retries.
  int length = pick(spec.maxNarrativeLength + 1);
  for (int attempt = 0; attempt < 50; ++attempt) {
    Situation sigma{"W0", {}};
    StateModel m = inst.worlds[0].model;
    bool ok = true;
    for (int i = 0; i < length && ok; ++i) {
      // Try a few random ground actions at this step.
      bool stepped = false;
      for (int tries = 0; tries < 10 && !stepped; ++tries) {
        const ActionSchema& schema = bat.actions[pick(nActions)];
        GroundAction a{schema.name, {}};
        for (size_t j = 0; j < schema.params.size(); ++j)
          a.args.push_back(objects[pick(nObjects)]);
        if (eval(precondition(bat, a), m, {})) {
          m = progress(bat, m, a);
          sigma.actions.push_back(std::move(a));
          stepped = true;
        }
      }
      if (!stepped) ok = false;
    }
    if (ok) {
      inst.narrative = std::move(sigma);
      inst.query = simplify(oracle_detail::randomFormula(rng, bat, objects,
                                                         spec.maxFormulaDepth));
      return inst;
    }
  }
  return std::nullopt;  // could not find an executable narrative
}

// ---------------------------------------------------------------------------
// Differential reports

struct OracleReport {
  int instances = 0;
  int checks = 0;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

/// holds(phi, sigma) must equal regression to the initial model, and each
/// step must agree with single-step regression.
inline void regressionDifferential(const BasicActionTheory& bat, const WorldSet& worlds,
                                   const Situation& narrative, const FormulaPtr& phi,
                                   OracleReport& report) {
  auto models = modelsAlong(bat, worlds, narrative);
  for (size_t p = 0; p <= narrative.length(); ++p) {
    Situation prefix = narrative.prefix(p);
    bool direct = eval(phi, models[p], {});
    bool regressed = eval(regressAll(bat, phi, prefix.actions), models[0], {});
    ++report.checks;
    if (direct != regressed)
      report.failures.push_back("reduction mismatch at " + situationLabel(prefix) +
                                " for " + formulaToString(phi));
    if (p > 0) {
      bool viaRho = eval(rho(bat, phi, narrative.actions[p - 1]), models[p - 1], {});
      ++report.checks;
      if (direct != viaRho)
        report.failures.push_back("rho mismatch at " + situationLabel(prefix) +
                                  " for " + formulaToString(phi));
    }
  }
}

/// The accessibility induced among surviving worlds at every prefix must stay
/// reflexive, transitive, and Euclidean.
inline void framePropertyCheck(const EpistemicScenario& sc, const std::string& agent,
                               const Situation& narrative, OracleReport& report) {
  for (size_t p = 0; p <= narrative.length(); ++p) {
    std::vector<GroundAction> prefix(narrative.actions.begin(),
                                     narrative.actions.begin() + p);
    // Induced relation among worlds whose copy of the prefix is executable.
    std::map<std::string, std::set<std::string>> rel;
    for (const auto& w : *sc.worlds) {
      if (!executable(*sc.bat, *sc.worlds, Situation{w.id, prefix})) continue;
      auto acc = kAccessibleWorlds(sc, agent, w.id, prefix);
      rel[w.id] = {acc.begin(), acc.end()};
    }
    for (const auto& [w, acc] : rel) {
      ++report.checks;
      if (!acc.count(w))
        report.failures.push_back("not reflexive at " + w + "+" + std::to_string(p));
      for (const auto& v : acc) {
        if (!rel.count(v)) continue;
        for (const auto& u : rel.at(v)) {
          ++report.checks;
          if (!acc.count(u))
            report.failures.push_back("not transitive at " + w + "+" + std::to_string(p));
        }
        for (const auto& u : acc) {
          ++report.checks;
          if (!rel.at(v).count(u))
            report.failures.push_back("not Euclidean at " + w + "+" + std::to_string(p));
        }
      }
    }
  }
}

/// Runs all differential suites over seeds [first, last].
inline OracleReport runOracleSuite(unsigned firstSeed, unsigned lastSeed) {
  OracleReport report;
  for (unsigned seed = firstSeed; seed <= lastSeed; ++seed) {
    RandomTheorySpec spec;
    spec.seed = seed;
    auto inst = generateInstance(spec);
    if (!inst) continue;
    ++report.instances;

    regressionDifferential(inst->bat, inst->worlds, inst->narrative, inst->query, report);

    // Chain agreement whenever the query makes a valid setting.
    if (holds(inst->bat, inst->worlds, inst->query, inst->narrative)) {
      CausalSetting setting(inst->bat, inst->worlds, inst->narrative, inst->query);
      ++report.checks;
      if (!(causalChain(setting) == naiveCausalChain(setting)))
        report.failures.push_back("chain disagreement at seed " + std::to_string(seed));
    }

    auto sc = inst->epistemic();
    framePropertyCheck(sc, "agt", inst->narrative, report);

    // Factivity and monotone filtering along every prefix.
    auto prevAcc = kAccessibleWorlds(sc, "agt", "W0", {});
    for (size_t p = 0; p <= inst->narrative.length(); ++p) {
      Situation prefix = inst->narrative.prefix(p);
      auto acc = kAccessibleWorlds(sc, "agt", "W0", prefix.actions);
      ++report.checks;
      if (know(sc, "agt", inst->query, prefix) &&
          !holds(inst->bat, inst->worlds, inst->query, prefix))
        report.failures.push_back("factivity violated at seed " + std::to_string(seed));
      ++report.checks;
      for (const auto& w : acc)
        if (std::find(prevAcc.begin(), prevAcc.end(), w) == prevAcc.end())
          report.failures.push_back("filtering not monotone at seed " + std::to_string(seed));
      prevAcc = acc;
    }
  }
  return report;
}

}  // namespace sitcause

#endif  // SITCAUSE_ORACLE_HPP
