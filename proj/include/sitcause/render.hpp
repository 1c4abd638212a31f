// JSON and text rendering of chains and verdicts. Field names are stable;
// positions are prefix lengths.

#ifndef SITCAUSE_RENDER_HPP
#define SITCAUSE_RENDER_HPP

#include <string>

#include <json.hpp>

#include "sitcause/causation.hpp"
#include "sitcause/epistemic.hpp"

namespace sitcause {

inline nlohmann::ordered_json chainJson(const CausalChain& chain, ChainStatus status,
                                        const std::string& effect,
                                        const std::string& world) {
  nlohmann::ordered_json j;
  j["effect"] = effect;
  j["world"] = world;
  j["chain"] = nlohmann::ordered_json::array();
  for (const auto& e : chain.entries)
    j["chain"].push_back({{"action", actionToString(e.action)},
                          {"position", e.prefixLen}});
  j["status"] = status == ChainStatus::Ok ? "ok" : "held_initially";
  return j;
}

inline nlohmann::ordered_json verdictJson(const KnowsChainVerdict& v,
                                          const std::string& effect,
                                          const std::string& actualWorld) {
  nlohmann::ordered_json j;
  j["knows"] = v.knows;
  j["knows_effect"] = v.knowsEffect;
  j["actual"] = chainJson(v.actual, v.actualStatus, effect, actualWorld);
  j["alternatives"] = nlohmann::ordered_json::array();
  for (const auto& alt : v.alternatives) {
    nlohmann::ordered_json a;
    a["world"] = alt.world;
    a["survives"] = alt.survives;
    if (alt.chain)
      a["chain"] = chainJson(*alt.chain, alt.chainStatus.value_or(ChainStatus::Ok),
                             effect, alt.world);
    else
      a["chain"] = nullptr;
    a["k_related"] = alt.kRelated;
    j["alternatives"].push_back(std::move(a));
  }
  return j;
}

inline std::string chainText(const CausalChain& chain, ChainStatus status) {
  if (status == ChainStatus::HeldInitially)
    return "effect held initially; no achievement cause\n";
  std::string out;
  for (const auto& e : chain.entries)
    out += "(" + actionToString(e.action) + ", " + std::to_string(e.prefixLen) + ")\n";
  return out;
}

}  // namespace sitcause

#endif  // SITCAUSE_RENDER_HPP
