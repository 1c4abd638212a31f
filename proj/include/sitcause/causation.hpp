// Achievement causes and causal chains: the persistent false-to-true flip of
// the effect, plus recursively the causes of the regressed effect conjoined
// with the flipping action's precondition.

#ifndef SITCAUSE_CAUSATION_HPP
#define SITCAUSE_CAUSATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "sitcause/bat.hpp"
#include "sitcause/formula.hpp"
#include "sitcause/narrative.hpp"
#include "sitcause/regression.hpp"

namespace sitcause {

/// An (action, prefix length) pair: the action at that position of the
/// narrative is an achievement cause.
struct CauseEntry {
  GroundAction action;
  size_t prefixLen;

  bool operator==(const CauseEntry& o) const {
    return action == o.action && prefixLen == o.prefixLen;
  }
};

enum class ChainStatus { Ok, HeldInitially };

/// Entries ordered by strictly decreasing prefix length, latest cause first.
struct CausalChain {
  std::vector<CauseEntry> entries;

  bool operator==(const CausalChain& o) const { return entries == o.entries; }
};

/// One recursion level, for explanation output: the (possibly regressed)
/// effect under analysis and the prefix length of its narrative.
struct AnalysisStep {
  size_t prefixLen;
  FormulaPtr effect;
};

struct CausalAnalysis {
  CausalChain chain;
  ChainStatus status = ChainStatus::Ok;
  std::vector<AnalysisStep> steps;
};

/// Theory + executable narrative + effect that holds at the narrative's end.
struct CausalSetting {
  const BasicActionTheory* bat;
  const WorldSet* worlds;
  Situation narrative;
  FormulaPtr effect;

  CausalSetting(const BasicActionTheory& theory, const WorldSet& ws,
                Situation sigma, FormulaPtr phi)
      : bat(&theory), worlds(&ws), narrative(std::move(sigma)), effect(std::move(phi)) {
    if (!freeVars(effect).empty())
      throw SitError(ErrorCode::UnboundVariable, "effect must be closed");
    if (!executable(*bat, *worlds, narrative))
      throw SitError(ErrorCode::NotExecutable, "narrative is not executable");
    if (!holds(*bat, *worlds, effect, narrative))
      throw SitError(ErrorCode::InvalidSetting,
                     "effect does not hold at the end of the narrative");
  }
};

/// The latest position p with the effect false at prefix p and true at every
/// prefix from p+1 to the end. None iff the effect holds at every prefix.
inline std::optional<std::pair<GroundAction, size_t>> achievementFlip(
    const CausalSetting& setting) {
  auto models = modelsAlong(*setting.bat, *setting.worlds, setting.narrative);
  // Scan backwards for the persistent flip; everything after it must be true.
  for (size_t i = models.size(); i-- > 0;) {
    if (!eval(setting.effect, models[i], {})) {
      if (i + 1 == models.size()) return std::nullopt;  // cannot happen for a valid setting
      return std::make_pair(setting.narrative.actions[i], i);
    }
  }
  return std::nullopt;  // held at every prefix including the initial one
}

/// The next recursion level: narrative truncated at the flip, effect replaced
/// by the regressed effect conjoined with the flipping action's precondition.
/// Ground static atoms are resolved against the setting world's statics.
inline CausalSetting childSetting(const CausalSetting& setting,
                                  const GroundAction& alpha, size_t prefixLen) {
  FormulaPtr regressed = rho(*setting.bat, setting.effect, alpha);
  FormulaPtr pre = precondition(*setting.bat, alpha);
  const auto& statics = findWorld(*setting.worlds, setting.narrative.initial).model.statics;
  FormulaPtr next = simplifyWithStatics(Formula::conj(regressed, pre), statics);
  return CausalSetting(*setting.bat, *setting.worlds,
                       setting.narrative.prefix(prefixLen), next);
}

/// Full recursion: flip, truncate, regress, repeat until no flip remains.
inline CausalAnalysis analyzeCauses(const CausalSetting& setting) {
  CausalAnalysis out;
  CausalSetting current = setting;
  out.steps.push_back({current.narrative.length(), current.effect});
  while (true) {
    auto flip = achievementFlip(current);
    if (!flip) {
      if (out.chain.entries.empty()) out.status = ChainStatus::HeldInitially;
      return out;
    }
    out.chain.entries.push_back({flip->first, flip->second});
    current = childSetting(current, flip->first, flip->second);
    out.steps.push_back({current.narrative.length(), current.effect});
  }
}

inline CausalChain causalChain(const CausalSetting& setting) {
  return analyzeCauses(setting).chain;
}

inline bool isCause(const CausalSetting& setting, const GroundAction& action,
                    size_t prefixLen) {
  for (const auto& e : causalChain(setting).entries)
    if (e.action == action && e.prefixLen == prefixLen) return true;
  return false;
}

}  // namespace sitcause

#endif  // SITCAUSE_CAUSATION_HPP
