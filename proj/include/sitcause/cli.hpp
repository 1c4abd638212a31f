// Command-line surface: validate | eval | regress | causes | knows-causes |
// kworlds, plus the hidden oracle suite. Kept as a library function so tests
// can run commands in-process and compare outputs byte for byte.

#ifndef SITCAUSE_CLI_HPP
#define SITCAUSE_CLI_HPP

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sitcause/causation.hpp"
#include "sitcause/dsl.hpp"
#include "sitcause/epistemic.hpp"
#include "sitcause/oracle.hpp"
#include "sitcause/regression.hpp"
#include "sitcause/render.hpp"

namespace sitcause {

// Exit codes: 0 success (and knows=true), 1 knows=false, 2 usage/parse
// errors, 3 semantic errors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitKnowsFalse = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSemantic = 3;

namespace cli_detail {

inline bool colorEnabled() {
  const char* v = std::getenv("SITCAUSE_COLOR");
  return v == nullptr || std::string(v) != "0";
}

inline std::string styled(const std::string& s, const char* code) {
  if (!colorEnabled()) return s;
  return std::string("\033[") + code + "m" + s + "\033[0m";
}

inline std::optional<Scenario> loadScenario(const std::string& path,
                                            std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "error: cannot open " << path << "\n";
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  auto result = parseScenario(buf.str(), path);
  if (!result.ok()) {
    for (const auto& d : result.diagnostics) err << d.str() << "\n";
    return std::nullopt;
  }
  return std::move(result.scenario);
}

/// A named narrative from the scenario, or inline text.
inline std::vector<GroundAction> resolveNarrative(const Scenario& sc,
                                                  const std::string& spec) {
  auto it = sc.narratives.find(spec);
  if (it != sc.narratives.end()) return it->second;
  return parseNarrative(spec, sc);
}

inline std::string agentOrDefault(const Scenario& sc, const std::string& agent) {
  if (!agent.empty()) return agent;
  if (sc.agents.size() == 1) return sc.agents.front().name;
  throw SitError(ErrorCode::UnknownSymbol,
                 "scenario declares several agents; pass --agent");
}

}  // namespace cli_detail

inline int runCli(const std::vector<std::string>& args, std::ostream& out,
                  std::ostream& err) {
  using cli_detail::loadScenario;
  using cli_detail::resolveNarrative;

  CLI::App app{"actual-cause and epistemic-cause queries over action traces"};
  app.require_subcommand(1);

  std::string scenarioPath, narrativeSpec, effectText, agentName;
  std::vector<std::string> actionTexts;
  std::string format = "text";
  bool explain = false;
  unsigned seedFirst = 1, seedLast = 100;

  auto addCommon = [&](CLI::App* cmd, bool needsEffect, bool needsNarrative) {
    cmd->add_option("scenario", scenarioPath, "scenario file (.sct)")->required();
    if (needsNarrative)
      cmd->add_option("--narrative", narrativeSpec,
                      "narrative name from the scenario, or inline actions");
    if (needsEffect)
      cmd->add_option("--effect", effectText, "effect formula")->required();
    cmd->add_option("--format", format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
  };

  CLI::App* cmdValidate = app.add_subcommand("validate", "check a scenario file");
  cmdValidate->add_option("scenario", scenarioPath)->required();

  CLI::App* cmdEval = app.add_subcommand("eval", "evaluate a formula at the end of a narrative");
  addCommon(cmdEval, true, true);

  CLI::App* cmdRegress = app.add_subcommand("regress", "regress a formula through actions");
  addCommon(cmdRegress, true, false);
  cmdRegress->add_option("--action", actionTexts, "ground action (repeatable; last regressed first)")
      ->required();

  CLI::App* cmdCauses = app.add_subcommand("causes", "achievement causal chain of an effect");
  addCommon(cmdCauses, true, true);
  cmdCauses->add_flag("--explain", explain, "print each recursion step's setting");

  CLI::App* cmdKnows = app.add_subcommand("knows-causes",
                                          "does the agent know the causal chain?");
  addCommon(cmdKnows, true, true);
  cmdKnows->add_option("--agent", agentName, "agent name");

  CLI::App* cmdKworlds = app.add_subcommand("kworlds", "K-accessible worlds after a narrative");
  cmdKworlds->add_option("scenario", scenarioPath)->required();
  cmdKworlds->add_option("--narrative", narrativeSpec);
  cmdKworlds->add_option("--agent", agentName, "agent name");
  cmdKworlds->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  CLI::App* cmdOracle = app.add_subcommand("oracle", "differential self-check suite");
  cmdOracle->add_option("--seed-first", seedFirst);
  cmdOracle->add_option("--seed-last", seedLast);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (cmdValidate->parsed()) {
      auto sc = loadScenario(scenarioPath, err);
      if (!sc) return kExitUsage;
      out << "ok: " << sc->worlds.size() << " worlds, " << sc->theory.actions.size()
          << " actions, " << sc->theory.fluentSignatures.size() << " fluents\n";
      return kExitOk;
    }

    if (cmdOracle->parsed()) {
      OracleReport report = runOracleSuite(seedFirst, seedLast);
      nlohmann::ordered_json j;
      j["instances"] = report.instances;
      j["checks"] = report.checks;
      j["failures"] = report.failures;
      j["passed"] = report.passed();
      out << j.dump(2) << "\n";
      return report.passed() ? kExitOk : kExitKnowsFalse;
    }

    auto sc = loadScenario(scenarioPath, err);
    if (!sc) return kExitUsage;

    if (cmdEval->parsed()) {
      auto phi = parseFormula(effectText, *sc);
      Situation sigma{actualWorld(sc->worlds).id, resolveNarrative(*sc, narrativeSpec)};
      if (!executable(sc->theory, sc->worlds, sigma)) {
        err << "error: narrative is not executable\n";
        return kExitSemantic;
      }
      out << (holds(sc->theory, sc->worlds, phi, sigma) ? "true" : "false") << "\n";
      return kExitOk;
    }

    if (cmdRegress->parsed()) {
      auto phi = parseFormula(effectText, *sc);
      std::vector<GroundAction> actions;
      for (const auto& t : actionTexts)
        for (const auto& a : parseNarrative(t, *sc)) actions.push_back(a);
      out << formulaToString(regressAll(sc->theory, phi, actions)) << "\n";
      return kExitOk;
    }

    if (cmdCauses->parsed()) {
      auto phi = parseFormula(effectText, *sc);
      Situation sigma{actualWorld(sc->worlds).id, resolveNarrative(*sc, narrativeSpec)};
      if (!executable(sc->theory, sc->worlds, sigma)) {
        err << "error: narrative is not executable\n";
        return kExitSemantic;
      }
      if (!holds(sc->theory, sc->worlds, phi, sigma)) {
        err << "error: effect not achieved\n";
        return kExitSemantic;
      }
      CausalSetting setting(sc->theory, sc->worlds, sigma, phi);
      auto analysis = analyzeCauses(setting);
      if (format == "json") {
        out << chainJson(analysis.chain, analysis.status, effectText, sigma.initial)
                   .dump(2)
            << "\n";
      } else {
        out << chainText(analysis.chain, analysis.status);
        if (explain) {
          out << "derivation:\n";
          for (const auto& step : analysis.steps)
            out << "  prefix " << step.prefixLen << ": "
                << formulaToString(step.effect) << "\n";
        }
      }
      return kExitOk;
    }

    if (cmdKnows->parsed()) {
      auto phi = parseFormula(effectText, *sc);
      std::string agent = cli_detail::agentOrDefault(*sc, agentName);
      Situation sigma{actualWorld(sc->worlds).id, resolveNarrative(*sc, narrativeSpec)};
      if (!executable(sc->theory, sc->worlds, sigma)) {
        err << "error: narrative is not executable\n";
        return kExitSemantic;
      }
      if (!holds(sc->theory, sc->worlds, phi, sigma)) {
        err << "error: effect not achieved\n";
        return kExitSemantic;
      }
      CausalSetting setting(sc->theory, sc->worlds, sigma, phi);
      auto verdict = knowsCausalChain(sc->epistemic(), agent, setting);
      if (format == "json") {
        out << verdictJson(verdict, effectText, sigma.initial).dump(2) << "\n";
      } else {
        out << "knows: "
            << cli_detail::styled(verdict.knows ? "true" : "false",
                                  verdict.knows ? "32" : "31")
            << "\n";
        out << "knows_effect: " << (verdict.knowsEffect ? "true" : "false") << "\n";
        out << "actual chain:\n" << chainText(verdict.actual, verdict.actualStatus);
        for (const auto& alt : verdict.alternatives) {
          out << "world " << alt.world << ": survives=" << (alt.survives ? "yes" : "no");
          if (alt.chain) {
            out << " k_related=" << (alt.kRelated ? "yes" : "no") << " chain:\n";
            out << chainText(*alt.chain, alt.chainStatus.value_or(ChainStatus::Ok));
          } else {
            out << "\n";
          }
        }
      }
      return verdict.knows ? kExitOk : kExitKnowsFalse;
    }

    if (cmdKworlds->parsed()) {
      std::string agent = cli_detail::agentOrDefault(*sc, agentName);
      Situation sigma{actualWorld(sc->worlds).id, resolveNarrative(*sc, narrativeSpec)};
      if (!executable(sc->theory, sc->worlds, sigma)) {
        err << "error: narrative is not executable\n";
        return kExitSemantic;
      }
      auto worlds = kAccessibleWorlds(sc->epistemic(), agent, sigma.initial, sigma.actions);
      if (format == "json") {
        nlohmann::ordered_json j = worlds;
        out << j.dump(2) << "\n";
      } else {
        for (const auto& w : worlds) out << w << "\n";
      }
      return kExitOk;
    }
  } catch (const SitError& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::NotExecutable:
      case ErrorCode::InvalidSetting:
      case ErrorCode::ConflictingSensing:
      case ErrorCode::NarrativeMismatch:
        return kExitSemantic;
      default:
        return kExitUsage;
    }
  }
  return kExitUsage;
}

}  // namespace sitcause

#endif  // SITCAUSE_CLI_HPP
