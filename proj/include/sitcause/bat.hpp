// Basic action theories: action schemas, successor-state axioms, sensing
// axioms, precondition extraction, and one-step progression of state models.

#ifndef SITCAUSE_BAT_HPP
#define SITCAUSE_BAT_HPP

#include <map>
#include <string>
#include <vector>

#include "sitcause/formula.hpp"

namespace sitcause {

/// Ground action term: symbol plus object-constant arguments.
struct GroundAction {
  std::string symbol;
  std::vector<std::string> args;

  bool operator==(const GroundAction& o) const {
    return symbol == o.symbol && args == o.args;
  }
  bool operator<(const GroundAction& o) const {
    return symbol != o.symbol ? symbol < o.symbol : args < o.args;
  }
};

inline std::string actionToString(const GroundAction& a) {
  std::string s = a.symbol;
  if (!a.args.empty()) {
    s += "(";
    for (size_t i = 0; i < a.args.size(); ++i) {
      if (i) s += ",";
      s += a.args[i];
    }
    s += ")";
  }
  return s;
}

struct ActionSchema {
  std::string name;
  std::vector<std::pair<std::string, std::string>> params;  // (name, sort)
  FormulaPtr precondition;  // over params
};

struct SuccessorStateAxiom {
  std::string fluent;
  std::vector<std::pair<std::string, std::string>> params;
  std::string actionVar;  // distinguished action-sort variable, "a" in surface syntax
  FormulaPtr rhs;         // fluent atoms read at the pre-action state
};

/// Binary sensing: when guard holds, executing the action tells the owning
/// agent whether condition holds.
struct SensingAxiom {
  std::string action;
  FormulaPtr guard;      // over the schema's params
  FormulaPtr condition;  // over the schema's params
};

struct Diagnostic {
  std::string category;
  std::string message;
};

struct BasicActionTheory {
  std::vector<Sort> sorts;
  std::map<std::string, std::vector<std::string>> staticSignatures;  // symbol -> arg sorts
  std::map<std::string, std::vector<std::string>> fluentSignatures;
  std::vector<ActionSchema> actions;
  std::vector<SuccessorStateAxiom> ssas;
  std::vector<SensingAxiom> sensing;

  const ActionSchema* findAction(const std::string& name) const {
    for (const auto& a : actions)
      if (a.name == name) return &a;
    return nullptr;
  }
  const SuccessorStateAxiom* findSsa(const std::string& fluent) const {
    for (const auto& s : ssas)
      if (s.fluent == fluent) return &s;
    return nullptr;
  }
  const Sort* findSort(const std::string& name) const {
    for (const auto& s : sorts)
      if (s.name == name) return &s;
    return nullptr;
  }
};

namespace detail {
inline Binding schemaBinding(const ActionSchema& schema, const GroundAction& a) {
  if (schema.params.size() != a.args.size())
    throw SitError(ErrorCode::UnknownAction,
                   "arity mismatch for " + actionToString(a));
  Binding b;
  for (size_t i = 0; i < schema.params.size(); ++i)
    b[schema.params[i].first] =
        Term::constant(a.args[i], schema.params[i].second);
  return b;
}

inline TermPtr actionTerm(const BasicActionTheory& bat, const GroundAction& a) {
  const ActionSchema* schema = bat.findAction(a.symbol);
  if (!schema)
    throw SitError(ErrorCode::UnknownAction, "unknown action " + a.symbol);
  std::vector<TermPtr> args;
  for (size_t i = 0; i < a.args.size(); ++i)
    args.push_back(Term::constant(a.args[i], schema->params[i].second));
  return Term::apply(a.symbol, "action", std::move(args));
}
}  // namespace detail

/// Instantiated right-hand side of the action precondition axiom.
inline FormulaPtr precondition(const BasicActionTheory& bat, const GroundAction& a) {
  const ActionSchema* schema = bat.findAction(a.symbol);
  if (!schema)
    throw SitError(ErrorCode::UnknownAction, "unknown action " + a.symbol);
  return simplify(substitute(schema->precondition, detail::schemaBinding(*schema, a)));
}

/// Successor model: each fluent tuple holds iff its SSA right-hand side holds
/// in m with the action variable bound to a. Statics and domain unchanged.
inline StateModel progress(const BasicActionTheory& bat, const StateModel& m,
                           const GroundAction& a) {
  if (!eval(precondition(bat, a), m, {}))
    throw SitError(ErrorCode::NotExecutable,
                   actionToString(a) + " is not executable here");
  TermPtr at = detail::actionTerm(bat, a);

  StateModel next;
  next.domain = m.domain;
  next.statics = m.statics;
  for (const auto& [fluent, argSorts] : bat.fluentSignatures) {
    const SuccessorStateAxiom* ssa = bat.findSsa(fluent);
    if (!ssa)
      throw SitError(ErrorCode::UnknownFluent, "no SSA for fluent " + fluent);
    auto& rel = next.fluents[fluent];
    // Enumerate all tuples over the fluent's argument sorts.
    std::vector<std::vector<std::string>> tuples{{}};
    for (const auto& sort : argSorts) {
      std::vector<std::vector<std::string>> grown;
      auto it = m.domain.find(sort);
      if (it == m.domain.end())
        throw SitError(ErrorCode::UnknownSymbol, "no domain for sort " + sort);
      for (const auto& t : tuples)
        for (const auto& c : it->second) {
          auto t2 = t;
          t2.push_back(c);
          grown.push_back(std::move(t2));
        }
      tuples = std::move(grown);
    }
    for (const auto& tuple : tuples) {
      Binding env;
      for (size_t i = 0; i < tuple.size(); ++i)
        env[ssa->params[i].first] = Term::constant(tuple[i], argSorts[i]);
      env[ssa->actionVar] = at;
      if (eval(ssa->rhs, m, env)) rel.insert(tuple);
    }
  }
  return next;
}

/// Well-formedness diagnostics: empty result means the theory is valid.
inline std::vector<Diagnostic> validate(const BasicActionTheory& bat) {
  std::vector<Diagnostic> out;
  std::map<std::string, int> actionCount;
  for (const auto& a : bat.actions) {
    if (++actionCount[a.name] == 2)
      out.push_back({"DuplicateAction", "action " + a.name + " declared more than once"});
    for (const auto& [pn, ps] : a.params)
      if (!bat.findSort(ps))
        out.push_back({"UnknownSort", "action " + a.name + ": unknown sort " + ps});
    for (const auto& [vn, vs] : freeVars(a.precondition)) {
      bool isParam = false;
      for (const auto& [pn, ps] : a.params)
        if (pn == vn) isParam = true;
      if (!isParam)
        out.push_back({"FreeVariable",
                       "precondition of " + a.name + " mentions free variable " + vn});
    }
  }
  std::map<std::string, int> ssaCount;
  for (const auto& s : bat.ssas) {
    ++ssaCount[s.fluent];
    auto sig = bat.fluentSignatures.find(s.fluent);
    if (sig == bat.fluentSignatures.end()) {
      out.push_back({"UnknownFluent", "SSA for undeclared fluent " + s.fluent});
      continue;
    }
    if (sig->second.size() != s.params.size())
      out.push_back({"ArityError", "SSA for " + s.fluent + " has wrong arity"});
    for (const auto& [vn, vs] : freeVars(s.rhs)) {
      if (vn == s.actionVar) continue;
      bool isParam = false;
      for (const auto& [pn, ps] : s.params)
        if (pn == vn) isParam = true;
      if (!isParam)
        out.push_back({"FreeVariable",
                       "SSA for " + s.fluent + " mentions free variable " + vn});
    }
  }
  for (const auto& [fluent, sig] : bat.fluentSignatures) {
    auto it = ssaCount.find(fluent);
    if (it == ssaCount.end())
      out.push_back({"MissingSSA", "fluent " + fluent + " has no SSA"});
    else if (it->second > 1)
      out.push_back({"DuplicateSSA", "fluent " + fluent + " has multiple SSAs"});
  }
  for (const auto& sa : bat.sensing)
    if (!bat.findAction(sa.action))
      out.push_back({"UnknownAction", "sensing axiom for undeclared action " + sa.action});
  return out;
}

}  // namespace sitcause

#endif  // SITCAUSE_BAT_HPP
