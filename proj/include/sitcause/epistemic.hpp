// Possible-worlds knowledge over initial models: K frames, the successor
// relation on accessibility with sensing filters, Know, and knowledge of
// causal chains.

#ifndef SITCAUSE_EPISTEMIC_HPP
#define SITCAUSE_EPISTEMIC_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sitcause/bat.hpp"
#include "sitcause/causation.hpp"
#include "sitcause/formula.hpp"
#include "sitcause/narrative.hpp"

namespace sitcause {

struct Agent {
  std::string name;
  bool operator==(const Agent& o) const { return name == o.name; }
};

/// K edges among initial worlds, per agent. An edge (from, to) means that in
/// world `from` the agent considers `to` possible.
struct EpistemicFrame {
  std::map<std::string, std::set<std::pair<std::string, std::string>>> kEdges;

  bool related(const std::string& agent, const std::string& from,
               const std::string& to) const {
    auto it = kEdges.find(agent);
    return it != kEdges.end() && it->second.count({from, to}) > 0;
  }
};

/// Reflexive, transitive, and Euclidean per agent over the given worlds.
inline std::vector<Diagnostic> validateFrame(const EpistemicFrame& frame,
                                             const WorldSet& worlds) {
  std::vector<Diagnostic> out;
  for (const auto& [agent, edges] : frame.kEdges) {
    for (const auto& w : worlds)
      if (!edges.count({w.id, w.id}))
        out.push_back({"FrameViolation",
                       "K for " + agent + " is not reflexive at " + w.id});
    for (const auto& [a, b] : edges) {
      for (const auto& [c, d] : edges) {
        if (b == c && !edges.count({a, d}))
          out.push_back({"FrameViolation",
                         "K for " + agent + " is not transitive: " + a + "->" +
                             b + "->" + d});
        if (a == c && b != d && !edges.count({b, d}))
          out.push_back({"FrameViolation",
                         "K for " + agent + " is not Euclidean: " + a + "->" +
                             b + ", " + a + "->" + d});
      }
    }
  }
  return out;
}

/// Scenario bundle: everything the epistemic queries need.
struct EpistemicScenario {
  const BasicActionTheory* bat;
  const WorldSet* worlds;
  const EpistemicFrame* frame;
  std::vector<Agent> agents;
};

namespace detail {
inline const SensingAxiom* sensingFor(const BasicActionTheory& bat,
                                      const std::string& action) {
  for (const auto& sa : bat.sensing)
    if (sa.action == action) return &sa;
  return nullptr;
}

// Owner of a sensing action: its first argument when that names a declared
// agent, otherwise the sole agent of a single-agent scenario.
inline std::optional<std::string> sensingOwner(const EpistemicScenario& sc,
                                               const GroundAction& a) {
  if (!a.args.empty())
    for (const auto& agt : sc.agents)
      if (agt.name == a.args.front()) return agt.name;
  if (sc.agents.size() == 1) return sc.agents.front().name;
  return std::nullopt;
}
}  // namespace detail

/// Binary sensing result of action a in model m: the condition of the first
/// sensing axiom whose guard holds; true when no guard applies.
inline bool sf(const BasicActionTheory& bat, const GroundAction& a,
               const StateModel& m) {
  const ActionSchema* schema = bat.findAction(a.symbol);
  if (!schema)
    throw SitError(ErrorCode::UnknownAction, "unknown action " + a.symbol);
  std::optional<bool> result;
  for (const auto& sa : bat.sensing) {
    if (sa.action != a.symbol) continue;
    Binding b = detail::schemaBinding(*schema, a);
    if (!eval(substitute(sa.guard, b), m, {})) continue;
    bool v = eval(substitute(sa.condition, b), m, {});
    if (result && *result != v)
      throw SitError(ErrorCode::ConflictingSensing,
                     "conflicting sensing axioms for " + actionToString(a));
    result = v;
  }
  return result.value_or(true);  // a failed guard conveys no information
}

/// Worlds whose narratives are K-accessible from (sourceWorld, actions) for
/// the agent, after stepwise precondition and sensing filtering. All
/// accessible situations share the source's action history, so world ids
/// identify them.
inline std::vector<std::string> kAccessibleWorlds(const EpistemicScenario& sc,
                                                  const std::string& agent,
                                                  const std::string& sourceWorld,
                                                  const std::vector<GroundAction>& actions) {
  Situation source{sourceWorld, actions};
  if (!executable(*sc.bat, *sc.worlds, source))
    throw SitError(ErrorCode::NotExecutable, "source narrative is not executable");

  struct Candidate {
    std::string id;
    StateModel model;
  };
  std::vector<Candidate> alive;
  for (const auto& w : *sc.worlds)
    if (sc.frame->related(agent, sourceWorld, w.id))
      alive.push_back({w.id, w.model});

  StateModel sourceModel = findWorld(*sc.worlds, sourceWorld).model;
  for (const auto& a : actions) {
    FormulaPtr pre = precondition(*sc.bat, a);
    bool sensed = detail::sensingFor(*sc.bat, a.symbol) != nullptr &&
                  detail::sensingOwner(sc, a) == agent;
    bool sourceSf = sensed ? sf(*sc.bat, a, sourceModel) : true;
    std::vector<Candidate> next;
    for (auto& c : alive) {
      if (!eval(pre, c.model, {})) continue;
      if (sensed && sf(*sc.bat, a, c.model) != sourceSf) continue;
      next.push_back({c.id, progress(*sc.bat, c.model, a)});
    }
    alive = std::move(next);
    sourceModel = progress(*sc.bat, sourceModel, a);
  }
  std::vector<std::string> out;
  for (const auto& c : alive) out.push_back(c.id);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Situation> kAccessible(const EpistemicScenario& sc,
                                          const std::string& agent,
                                          const Situation& sigma) {
  std::vector<Situation> out;
  for (const auto& w : kAccessibleWorlds(sc, agent, sigma.initial, sigma.actions))
    out.push_back({w, sigma.actions});
  return out;
}

/// Know(agt, phi, sigma): phi holds in every K-accessible situation.
inline bool know(const EpistemicScenario& sc, const std::string& agent,
                 const FormulaPtr& phi, const Situation& sigma) {
  for (const auto& alt : kAccessible(sc, agent, sigma))
    if (!holds(*sc.bat, *sc.worlds, phi, alt)) return false;
  return true;
}

/// Two chains over the same action sequence are K-related iff they have the
/// same entries action- and position-wise and each pair of chain situations
/// is K-related at its prefix. Two empty chains count as K-related.
inline bool chainsKRelated(const EpistemicScenario& sc, const std::string& agent,
                           const CausalChain& k1, const Situation& sigma1,
                           const CausalChain& k2, const Situation& sigma2) {
  if (sigma1.actions.size() != sigma2.actions.size())
    throw SitError(ErrorCode::NarrativeMismatch,
                   "narratives differ in action sequence");
  for (size_t i = 0; i < sigma1.actions.size(); ++i)
    if (!(sigma1.actions[i] == sigma2.actions[i]))
      throw SitError(ErrorCode::NarrativeMismatch,
                     "narratives differ in action sequence");
  if (k1.entries.size() != k2.entries.size()) return false;
  for (size_t i = 0; i < k1.entries.size(); ++i) {
    const auto& e1 = k1.entries[i];
    const auto& e2 = k2.entries[i];
    if (!(e1.action == e2.action) || e1.prefixLen != e2.prefixLen) return false;
    // D |= K(agt, s_i^1, s_i^2): from the chain-2 situation, the chain-1
    // situation must be accessible at that prefix.
    std::vector<GroundAction> prefix(sigma2.actions.begin(),
                                     sigma2.actions.begin() + e2.prefixLen);
    auto acc = kAccessibleWorlds(sc, agent, sigma2.initial, prefix);
    if (std::find(acc.begin(), acc.end(), sigma1.initial) == acc.end())
      return false;
  }
  return true;
}

struct AlternativeVerdict {
  std::string world;
  bool survives = false;           // still K-accessible at the full narrative
  bool effectHolds = false;
  std::optional<CausalChain> chain;  // absent when the effect fails there
  std::optional<ChainStatus> chainStatus;
  bool kRelated = false;
};

struct KnowsChainVerdict {
  bool knows = false;
  bool knowsEffect = false;
  CausalChain actual;
  ChainStatus actualStatus = ChainStatus::Ok;
  std::vector<AlternativeVerdict> alternatives;
};

/// Whether the agent knows, at the end of the setting's narrative, that the
/// actual chain is the achievement causal chain: every surviving alternative
/// world where the effect holds must yield a K-related chain.
inline KnowsChainVerdict knowsCausalChain(const EpistemicScenario& sc,
                                          const std::string& agent,
                                          const CausalSetting& setting) {
  const Situation& sigma = setting.narrative;
  if (!findWorld(*sc.worlds, sigma.initial).isActual)
    throw SitError(ErrorCode::InvalidSetting,
                   "narrative must be rooted at the actual world");

  KnowsChainVerdict verdict;
  auto actualAnalysis = analyzeCauses(setting);
  verdict.actual = actualAnalysis.chain;
  verdict.actualStatus = actualAnalysis.status;
  verdict.knowsEffect = know(sc, agent, setting.effect, sigma);

  auto surviving = kAccessibleWorlds(sc, agent, sigma.initial, sigma.actions);
  verdict.knows = true;
  for (const auto& w : *sc.worlds) {
    if (!sc.frame->related(agent, sigma.initial, w.id)) continue;
    AlternativeVerdict alt;
    alt.world = w.id;
    alt.survives =
        std::find(surviving.begin(), surviving.end(), w.id) != surviving.end();
    if (alt.survives) {
      Situation altSigma{w.id, sigma.actions};
      alt.effectHolds = holds(*sc.bat, *sc.worlds, setting.effect, altSigma);
      if (alt.effectHolds) {
        auto analysis = analyzeCauses(
            CausalSetting(*sc.bat, *sc.worlds, altSigma, setting.effect));
        alt.chain = analysis.chain;
        alt.chainStatus = analysis.status;
        alt.kRelated = chainsKRelated(sc, agent, verdict.actual, sigma,
                                      *alt.chain, altSigma);
        if (!alt.kRelated) verdict.knows = false;
      } else {
        alt.kRelated = true;  // no chain to disagree with, vacuously related
      }
    }
    verdict.alternatives.push_back(std::move(alt));
  }
  std::sort(verdict.alternatives.begin(), verdict.alternatives.end(),
            [](const AlternativeVerdict& a, const AlternativeVerdict& b) {
              return a.world < b.world;
            });
  return verdict;
}

}  // namespace sitcause

#endif  // SITCAUSE_EPISTEMIC_HPP
