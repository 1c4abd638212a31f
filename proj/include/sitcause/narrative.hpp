// Ground situations as (initial world, action sequence) pairs, executability,
// and formula evaluation at any prefix.

#ifndef SITCAUSE_NARRATIVE_HPP
#define SITCAUSE_NARRATIVE_HPP

#include <string>
#include <vector>

#include "sitcause/bat.hpp"
#include "sitcause/formula.hpp"

namespace sitcause {

/// A possible world: a complete initial interpretation. Exactly one world per
/// scenario is the actual one.
struct InitialModel {
  std::string id;
  StateModel model;
  bool isActual = false;
};

using WorldSet = std::vector<InitialModel>;

inline const InitialModel& findWorld(const WorldSet& worlds, const std::string& id) {
  for (const auto& w : worlds)
    if (w.id == id) return w;
  throw SitError(ErrorCode::UnknownWorld, "unknown world " + id);
}

inline const InitialModel& actualWorld(const WorldSet& worlds) {
  for (const auto& w : worlds)
    if (w.isActual) return w;
  throw SitError(ErrorCode::UnknownWorld, "no actual world");
}

/// A situation is the branch reached from an initial world by a ground action
/// sequence. Prefixes are situations with the same world and a shorter list.
struct Situation {
  std::string initial;
  std::vector<GroundAction> actions;

  Situation prefix(size_t len) const {
    return {initial, {actions.begin(), actions.begin() + len}};
  }
  size_t length() const { return actions.size(); }
};

inline bool samePrefix(const Situation& a, const Situation& b) {
  if (a.initial != b.initial || a.actions.size() > b.actions.size()) return false;
  for (size_t i = 0; i < a.actions.size(); ++i)
    if (!(a.actions[i] == b.actions[i])) return false;
  return true;
}

inline bool executable(const BasicActionTheory& bat, const WorldSet& worlds,
                       const Situation& sigma) {
  StateModel m = findWorld(worlds, sigma.initial).model;
  for (const auto& a : sigma.actions) {
    if (!eval(precondition(bat, a), m, {})) return false;
    m = progress(bat, m, a);
  }
  return true;
}

/// The state model after executing sigma's actions from its initial world.
inline StateModel modelAt(const BasicActionTheory& bat, const WorldSet& worlds,
                          const Situation& sigma) {
  StateModel m = findWorld(worlds, sigma.initial).model;
  for (const auto& a : sigma.actions) m = progress(bat, m, a);
  return m;
}

/// All models along sigma, index i = model after i actions. Shared by callers
/// that query several prefixes of one narrative.
inline std::vector<StateModel> modelsAlong(const BasicActionTheory& bat,
                                           const WorldSet& worlds,
                                           const Situation& sigma) {
  std::vector<StateModel> out;
  out.push_back(findWorld(worlds, sigma.initial).model);
  for (const auto& a : sigma.actions) out.push_back(progress(bat, out.back(), a));
  return out;
}

inline bool holds(const BasicActionTheory& bat, const WorldSet& worlds,
                  const FormulaPtr& phi, const Situation& sigma) {
  return eval(phi, modelAt(bat, worlds, sigma), {});
}

/// Output label for a prefix, "<worldId>+<prefixLen>".
inline std::string situationLabel(const Situation& sigma) {
  return sigma.initial + "+" + std::to_string(sigma.actions.size());
}

}  // namespace sitcause

#endif  // SITCAUSE_NARRATIVE_HPP
