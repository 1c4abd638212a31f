// Single-step regression and its fold over ground action sequences.

#ifndef SITCAUSE_REGRESSION_HPP
#define SITCAUSE_REGRESSION_HPP

#include <vector>

#include "sitcause/bat.hpp"
#include "sitcause/formula.hpp"

namespace sitcause {

namespace detail {
inline FormulaPtr rhoRec(const BasicActionTheory& bat, const FormulaPtr& f,
                         const TermPtr& actionTerm) {
  using K = Formula::Kind;
  if (f->kind == K::FluentAtom) {
    const SuccessorStateAxiom* ssa = bat.findSsa(f->symbol);
    if (!ssa)
      throw SitError(ErrorCode::UnknownFluent, "no SSA for fluent " + f->symbol);
    Binding b;
    for (size_t i = 0; i < ssa->params.size(); ++i)
      b[ssa->params[i].first] = f->terms[i];
    b[ssa->actionVar] = actionTerm;
    return substitute(ssa->rhs, b);
  }
  if (f->sub.empty()) return f;  // statics, equalities, constants untouched
  auto g = std::make_shared<Formula>(*f);
  g->sub.clear();
  for (const auto& s : f->sub) g->sub.push_back(rhoRec(bat, s, actionTerm));
  return g;
}
}  // namespace detail

/// Single-step regression: each fluent atom is replaced by its SSA right-hand
/// side instantiated with the atom's arguments and the given ground action,
/// then the result is simplified under unique names.
inline FormulaPtr rho(const BasicActionTheory& bat, const FormulaPtr& phi,
                      const GroundAction& alpha) {
  return simplify(detail::rhoRec(bat, phi, detail::actionTerm(bat, alpha)));
}

/// Regress phi through the whole sequence, last action first: evaluating the
/// result at the initial model equals evaluating phi at the end of the trace.
inline FormulaPtr regressAll(const BasicActionTheory& bat, FormulaPtr phi,
                             const std::vector<GroundAction>& actions) {
  for (auto it = actions.rbegin(); it != actions.rend(); ++it)
    phi = rho(bat, phi, *it);
  return phi;
}

}  // namespace sitcause

#endif  // SITCAUSE_REGRESSION_HPP
