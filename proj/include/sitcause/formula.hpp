// Terms, first-order state formulas, finite-model evaluation, substitution,
// and equality simplification under unique-names assumptions.

#ifndef SITCAUSE_FORMULA_HPP
#define SITCAUSE_FORMULA_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sitcause {

enum class SortKind { Object, Action };

struct Sort {
  std::string name;
  SortKind kind = SortKind::Object;
};

// ---------------------------------------------------------------------------
// Errors

enum class ErrorCode {
  UnknownSymbol,
  UnknownAction,
  UnknownFluent,
  UnknownWorld,
  UnboundVariable,
  SortMismatch,
  NotExecutable,
  ConflictingSensing,
  NarrativeMismatch,
  InvalidSetting,
};

class SitError : public std::runtime_error {
 public:
  SitError(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// ---------------------------------------------------------------------------
// Terms

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Variable, Constant, Apply };

  Kind kind;
  std::string name;   // variable or constant name, or function symbol
  std::string sort;   // result sort name
  std::vector<TermPtr> args;  // Apply only

  static TermPtr variable(std::string name, std::string sort) {
    return std::make_shared<Term>(Term{Kind::Variable, std::move(name), std::move(sort), {}});
  }
  static TermPtr constant(std::string name, std::string sort) {
    return std::make_shared<Term>(Term{Kind::Constant, std::move(name), std::move(sort), {}});
  }
  static TermPtr apply(std::string fn, std::string sort, std::vector<TermPtr> args) {
    return std::make_shared<Term>(Term{Kind::Apply, std::move(fn), std::move(sort), std::move(args)});
  }

  bool isGround() const {
    if (kind == Kind::Variable) return false;
    for (const auto& a : args)
      if (!a->isGround()) return false;
    return true;
  }
};

inline bool termEquals(const TermPtr& a, const TermPtr& b) {
  if (a->kind != b->kind || a->name != b->name) return false;
  if (a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!termEquals(a->args[i], b->args[i])) return false;
  return true;
}

inline std::string termToString(const TermPtr& t) {
  std::string s = t->name;
  if (t->kind == Term::Kind::Apply) {
    s += "(";
    for (size_t i = 0; i < t->args.size(); ++i) {
      if (i) s += ",";
      s += termToString(t->args[i]);
    }
    s += ")";
  }
  return s;
}

/// Variable -> ground term map. Sorts must agree at insertion sites.
using Binding = std::map<std::string, TermPtr>;

// ---------------------------------------------------------------------------
// Formulas

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind {
    True, False,
    FluentAtom, StaticAtom, Equal,
    Not, And, Or, Implies, Iff,
    Forall, Exists,
  };

  Kind kind;
  std::string symbol;        // atom symbol, or quantified variable name
  std::string varSort;       // quantifier variable sort
  std::vector<TermPtr> terms;    // atom arguments, or the two equality sides
  std::vector<FormulaPtr> sub;   // subformulas

  static FormulaPtr makeTrue() { return node(Kind::True); }
  static FormulaPtr makeFalse() { return node(Kind::False); }
  static FormulaPtr fluent(std::string sym, std::vector<TermPtr> args) {
    auto f = node(Kind::FluentAtom);
    f->symbol = std::move(sym);
    f->terms = std::move(args);
    return f;
  }
  static FormulaPtr staticAtom(std::string sym, std::vector<TermPtr> args) {
    auto f = node(Kind::StaticAtom);
    f->symbol = std::move(sym);
    f->terms = std::move(args);
    return f;
  }
  static FormulaPtr equal(TermPtr lhs, TermPtr rhs) {
    auto f = node(Kind::Equal);
    f->terms = {std::move(lhs), std::move(rhs)};
    return f;
  }
  static FormulaPtr negation(FormulaPtr a) {
    auto f = node(Kind::Not);
    f->sub = {std::move(a)};
    return f;
  }
  static FormulaPtr conj(FormulaPtr a, FormulaPtr b) {
    auto f = node(Kind::And);
    f->sub = {std::move(a), std::move(b)};
    return f;
  }
  static FormulaPtr disj(FormulaPtr a, FormulaPtr b) {
    auto f = node(Kind::Or);
    f->sub = {std::move(a), std::move(b)};
    return f;
  }
  static FormulaPtr implies(FormulaPtr a, FormulaPtr b) {
    auto f = node(Kind::Implies);
    f->sub = {std::move(a), std::move(b)};
    return f;
  }
  static FormulaPtr iff(FormulaPtr a, FormulaPtr b) {
    auto f = node(Kind::Iff);
    f->sub = {std::move(a), std::move(b)};
    return f;
  }
  static FormulaPtr forall(std::string var, std::string sort, FormulaPtr body) {
    auto f = node(Kind::Forall);
    f->symbol = std::move(var);
    f->varSort = std::move(sort);
    f->sub = {std::move(body)};
    return f;
  }
  static FormulaPtr exists(std::string var, std::string sort, FormulaPtr body) {
    auto f = node(Kind::Exists);
    f->symbol = std::move(var);
    f->varSort = std::move(sort);
    f->sub = {std::move(body)};
    return f;
  }

 private:
  static std::shared_ptr<Formula> node(Kind k) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    return f;
  }
};

inline bool formulaEquals(const FormulaPtr& a, const FormulaPtr& b) {
  if (a->kind != b->kind || a->symbol != b->symbol || a->varSort != b->varSort)
    return false;
  if (a->terms.size() != b->terms.size() || a->sub.size() != b->sub.size())
    return false;
  for (size_t i = 0; i < a->terms.size(); ++i)
    if (!termEquals(a->terms[i], b->terms[i])) return false;
  for (size_t i = 0; i < a->sub.size(); ++i)
    if (!formulaEquals(a->sub[i], b->sub[i])) return false;
  return true;
}

// Surface-syntax printing. Parenthesizes children whose connective binds
// weaker than the parent; matches the grammar accepted by the parser.
inline std::string formulaToString(const FormulaPtr& f) {
  using K = Formula::Kind;
  auto prec = [](K k) -> int {
    switch (k) {
      case K::Forall: case K::Exists: return 0;
      case K::Iff: return 1;
      case K::Implies: return 2;
      case K::Or: return 3;
      case K::And: return 4;
      case K::Not: return 5;
      default: return 6;
    }
  };
  auto wrap = [&](const FormulaPtr& child, int minPrec) {
    std::string s = formulaToString(child);
    if (prec(child->kind) < minPrec) return "(" + s + ")";
    return s;
  };
  switch (f->kind) {
    case K::True: return "true";
    case K::False: return "false";
    case K::FluentAtom:
    case K::StaticAtom: {
      std::string s = f->symbol;
      if (!f->terms.empty()) {
        s += "(";
        for (size_t i = 0; i < f->terms.size(); ++i) {
          if (i) s += ",";
          s += termToString(f->terms[i]);
        }
        s += ")";
      }
      return s;
    }
    case K::Equal:
      return termToString(f->terms[0]) + " = " + termToString(f->terms[1]);
    case K::Not:
      return "!" + wrap(f->sub[0], 6);
    case K::And:
      return wrap(f->sub[0], 4) + " & " + wrap(f->sub[1], 5);
    case K::Or:
      return wrap(f->sub[0], 3) + " | " + wrap(f->sub[1], 4);
    case K::Implies:
      return wrap(f->sub[0], 3) + " -> " + wrap(f->sub[1], 2);
    case K::Iff:
      return wrap(f->sub[0], 2) + " <-> " + wrap(f->sub[1], 2);
    case K::Forall:
      return "forall " + f->symbol + " (" + formulaToString(f->sub[0]) + ")";
    case K::Exists:
      return "exists " + f->symbol + " (" + formulaToString(f->sub[0]) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// State models

/// Complete finite interpretation of all statics and fluents.
/// Closed world: a tuple absent from a relation is false.
struct StateModel {
  std::map<std::string, std::vector<std::string>> domain;  // sort -> constants
  std::map<std::string, std::set<std::vector<std::string>>> statics;
  std::map<std::string, std::set<std::vector<std::string>>> fluents;

  bool operator==(const StateModel& o) const {
    return domain == o.domain && statics == o.statics && fluents == o.fluents;
  }
};

// ---------------------------------------------------------------------------
// Free variables

namespace detail {
inline void freeVarsTerm(const TermPtr& t, const std::set<std::string>& bound,
                         std::set<std::pair<std::string, std::string>>& out) {
  if (t->kind == Term::Kind::Variable) {
    if (!bound.count(t->name)) out.insert({t->name, t->sort});
  }
  for (const auto& a : t->args) freeVarsTerm(a, bound, out);
}

inline void freeVarsRec(const FormulaPtr& f, std::set<std::string> bound,
                        std::set<std::pair<std::string, std::string>>& out) {
  using K = Formula::Kind;
  if (f->kind == K::Forall || f->kind == K::Exists) bound.insert(f->symbol);
  for (const auto& t : f->terms) freeVarsTerm(t, bound, out);
  for (const auto& s : f->sub) freeVarsRec(s, bound, out);
}

// Every variable name occurring in f, free or bound.
inline void allVarNames(const FormulaPtr& f, std::set<std::string>& out) {
  using K = Formula::Kind;
  if (f->kind == K::Forall || f->kind == K::Exists) out.insert(f->symbol);
  for (const auto& t : f->terms) {
    std::set<std::pair<std::string, std::string>> fv;
    freeVarsTerm(t, {}, fv);
    for (const auto& [n, s] : fv) out.insert(n);
  }
  for (const auto& s : f->sub) allVarNames(s, out);
}
}  // namespace detail

inline std::set<std::pair<std::string, std::string>> freeVars(const FormulaPtr& f) {
  std::set<std::pair<std::string, std::string>> out;
  detail::freeVarsRec(f, {}, out);
  return out;
}

// ---------------------------------------------------------------------------
// Substitution

namespace detail {
inline TermPtr substTerm(const TermPtr& t, const Binding& b) {
  if (t->kind == Term::Kind::Variable) {
    auto it = b.find(t->name);
    if (it == b.end()) return t;
    if (it->second->sort != t->sort)
      throw SitError(ErrorCode::SortMismatch,
                     "cannot bind " + t->name + ":" + t->sort + " to a " +
                         it->second->sort + " term");
    return it->second;
  }
  if (t->kind == Term::Kind::Constant) return t;
  std::vector<TermPtr> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) args.push_back(substTerm(a, b));
  return Term::apply(t->name, t->sort, std::move(args));
}
}  // namespace detail

/// Replaces free variables per b. Replacement terms are ground, so only
/// binder shadowing needs handling.
inline FormulaPtr substitute(const FormulaPtr& f, const Binding& b) {
  using K = Formula::Kind;
  if (b.empty()) return f;
  switch (f->kind) {
    case K::True:
    case K::False:
      return f;
    case K::FluentAtom:
    case K::StaticAtom: {
      std::vector<TermPtr> args;
      for (const auto& t : f->terms) args.push_back(detail::substTerm(t, b));
      return f->kind == K::FluentAtom ? Formula::fluent(f->symbol, std::move(args))
                                      : Formula::staticAtom(f->symbol, std::move(args));
    }
    case K::Equal:
      return Formula::equal(detail::substTerm(f->terms[0], b),
                            detail::substTerm(f->terms[1], b));
    case K::Forall:
    case K::Exists: {
      Binding inner = b;
      inner.erase(f->symbol);  // shadowed
      // Capture avoidance: if some replacement term mentions the bound
      // variable's name, rename the binder first.
      bool captures = false;
      for (const auto& [v, t] : inner) {
        std::set<std::pair<std::string, std::string>> fv;
        detail::freeVarsTerm(t, {}, fv);
        for (const auto& [n, s] : fv)
          if (n == f->symbol) captures = true;
      }
      std::string var = f->symbol;
      FormulaPtr body = f->sub[0];
      if (captures) {
        std::set<std::string> avoid;
        for (const auto& [v, t] : inner) {
          std::set<std::pair<std::string, std::string>> fv;
          detail::freeVarsTerm(t, {}, fv);
          for (const auto& [n, s] : fv) avoid.insert(n);
        }
        detail::allVarNames(body, avoid);
        int i = 1;
        do {
          var = f->symbol + "_" + std::to_string(i++);
        } while (avoid.count(var));
        Binding rename{{f->symbol, Term::variable(var, f->varSort)}};
        body = substitute(body, rename);
      }
      body = substitute(body, inner);
      return f->kind == K::Forall ? Formula::forall(var, f->varSort, body)
                                  : Formula::exists(var, f->varSort, body);
    }
    default: {
      auto g = std::make_shared<Formula>(*f);
      g->sub.clear();
      for (const auto& s : f->sub) g->sub.push_back(substitute(s, b));
      return g;
    }
  }
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {
inline TermPtr resolveTerm(const TermPtr& t, const Binding& env) {
  if (t->kind == Term::Kind::Variable) {
    auto it = env.find(t->name);
    if (it == env.end())
      throw SitError(ErrorCode::UnboundVariable, "unbound variable " + t->name);
    return it->second;
  }
  if (t->kind == Term::Kind::Constant) return t;
  std::vector<TermPtr> args;
  for (const auto& a : t->args) args.push_back(resolveTerm(a, env));
  return Term::apply(t->name, t->sort, std::move(args));
}
}  // namespace detail

/// Truth value of phi in m under env. Quantifiers enumerate the finite
/// object domain of the variable's sort.
inline bool eval(const FormulaPtr& f, const StateModel& m, const Binding& env) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::True: return true;
    case K::False: return false;
    case K::FluentAtom:
    case K::StaticAtom: {
      const auto& rels = f->kind == K::FluentAtom ? m.fluents : m.statics;
      auto it = rels.find(f->symbol);
      if (it == rels.end())
        throw SitError(ErrorCode::UnknownSymbol, "undeclared symbol " + f->symbol);
      std::vector<std::string> tuple;
      for (const auto& t : f->terms) {
        auto r = detail::resolveTerm(t, env);
        tuple.push_back(r->name);
      }
      return it->second.count(tuple) > 0;
    }
    case K::Equal: {
      auto l = detail::resolveTerm(f->terms[0], env);
      auto r = detail::resolveTerm(f->terms[1], env);
      return termEquals(l, r);  // unique names: syntactic identity
    }
    case K::Not: return !eval(f->sub[0], m, env);
    case K::And: return eval(f->sub[0], m, env) && eval(f->sub[1], m, env);
    case K::Or: return eval(f->sub[0], m, env) || eval(f->sub[1], m, env);
    case K::Implies: return !eval(f->sub[0], m, env) || eval(f->sub[1], m, env);
    case K::Iff: return eval(f->sub[0], m, env) == eval(f->sub[1], m, env);
    case K::Forall:
    case K::Exists: {
      auto it = m.domain.find(f->varSort);
      if (it == m.domain.end())
        throw SitError(ErrorCode::UnknownSymbol, "no domain for sort " + f->varSort);
      Binding env2 = env;
      for (const auto& c : it->second) {
        env2[f->symbol] = Term::constant(c, f->varSort);
        bool v = eval(f->sub[0], m, env2);
        if (f->kind == K::Exists && v) return true;
        if (f->kind == K::Forall && !v) return false;
      }
      return f->kind == K::Forall;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Simplification

namespace detail {

// Unique-names resolution of a ground/partial equality. Returns True, False,
// or a residual formula (possibly a conjunction of argument equalities).
inline FormulaPtr resolveEqual(const TermPtr& l, const TermPtr& r);

inline FormulaPtr simplifyRec(const FormulaPtr& f);

inline FormulaPtr resolveEqual(const TermPtr& l, const TermPtr& r) {
  using TK = Term::Kind;
  if (termEquals(l, r)) return Formula::makeTrue();
  if (l->kind == TK::Constant && r->kind == TK::Constant)
    return l->name == r->name ? Formula::makeTrue() : Formula::makeFalse();
  if (l->kind == TK::Apply && r->kind == TK::Apply) {
    if (l->name != r->name || l->args.size() != r->args.size())
      return Formula::makeFalse();
    // Same function symbol: equal iff arguments pairwise equal.
    FormulaPtr acc = Formula::makeTrue();
    for (size_t i = 0; i < l->args.size(); ++i) {
      auto e = resolveEqual(l->args[i], r->args[i]);
      if (e->kind == Formula::Kind::False) return Formula::makeFalse();
      if (e->kind == Formula::Kind::True) continue;
      acc = acc->kind == Formula::Kind::True ? e : Formula::conj(acc, e);
    }
    return acc;
  }
  if ((l->kind == TK::Apply && r->kind == TK::Constant) ||
      (l->kind == TK::Constant && r->kind == TK::Apply))
    return Formula::makeFalse();  // a compound term never names a constant
  return Formula::equal(l, r);  // at least one side is a variable
}

// One-point rule support: if conj contains var = t (or t = var) with t not
// mentioning var, return t.
inline TermPtr pinnedValue(const FormulaPtr& f, const std::string& var) {
  using K = Formula::Kind;
  if (f->kind == K::Equal) {
    const auto& l = f->terms[0];
    const auto& r = f->terms[1];
    auto mentions = [&](const TermPtr& t) {
      std::set<std::pair<std::string, std::string>> fv;
      freeVarsTerm(t, {}, fv);
      for (const auto& [n, s] : fv)
        if (n == var) return true;
      return false;
    };
    if (l->kind == Term::Kind::Variable && l->name == var && !mentions(r)) return r;
    if (r->kind == Term::Kind::Variable && r->name == var && !mentions(l)) return l;
    return nullptr;
  }
  if (f->kind == K::And) {
    for (const auto& s : f->sub)
      if (auto t = pinnedValue(s, var)) return t;
  }
  return nullptr;
}

inline FormulaPtr simplifyRec(const FormulaPtr& f) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::True:
    case K::False:
    case K::FluentAtom:
    case K::StaticAtom:
      return f;
    case K::Equal:
      return resolveEqual(f->terms[0], f->terms[1]);
    case K::Not: {
      auto a = simplifyRec(f->sub[0]);
      if (a->kind == K::True) return Formula::makeFalse();
      if (a->kind == K::False) return Formula::makeTrue();
      if (a->kind == K::Not) return a->sub[0];
      return Formula::negation(a);
    }
    case K::And: {
      auto a = simplifyRec(f->sub[0]);
      auto b = simplifyRec(f->sub[1]);
      if (a->kind == K::False || b->kind == K::False) return Formula::makeFalse();
      if (a->kind == K::True) return b;
      if (b->kind == K::True) return a;
      if (formulaEquals(a, b)) return a;
      return Formula::conj(a, b);
    }
    case K::Or: {
      auto a = simplifyRec(f->sub[0]);
      auto b = simplifyRec(f->sub[1]);
      if (a->kind == K::True || b->kind == K::True) return Formula::makeTrue();
      if (a->kind == K::False) return b;
      if (b->kind == K::False) return a;
      if (formulaEquals(a, b)) return a;
      return Formula::disj(a, b);
    }
    case K::Implies: {
      auto a = simplifyRec(f->sub[0]);
      auto b = simplifyRec(f->sub[1]);
      if (a->kind == K::False || b->kind == K::True) return Formula::makeTrue();
      if (a->kind == K::True) return b;
      if (b->kind == K::False) return simplifyRec(Formula::negation(a));
      return Formula::implies(a, b);
    }
    case K::Iff: {
      auto a = simplifyRec(f->sub[0]);
      auto b = simplifyRec(f->sub[1]);
      if (a->kind == K::True) return b;
      if (b->kind == K::True) return a;
      if (a->kind == K::False) return simplifyRec(Formula::negation(b));
      if (b->kind == K::False) return simplifyRec(Formula::negation(a));
      if (formulaEquals(a, b)) return Formula::makeTrue();
      return Formula::iff(a, b);
    }
    case K::Forall:
    case K::Exists: {
      auto body = simplifyRec(f->sub[0]);
      // Sorts are inhabited, so a constant body decides the quantifier.
      if (body->kind == K::True || body->kind == K::False) return body;
      bool bodyUsesVar = false;
      for (const auto& [n, s] : freeVars(body))
        if (n == f->symbol) bodyUsesVar = true;
      if (!bodyUsesVar) return body;
      if (f->kind == K::Exists) {
        // One-point rule: exists x (x = t & rest) -> rest[x := t].
        if (auto t = pinnedValue(body, f->symbol); t && t->isGround()) {
          Binding b{{f->symbol, t}};
          return simplifyRec(substitute(body, b));
        }
      }
      return f->kind == K::Forall ? Formula::forall(f->symbol, f->varSort, body)
                                  : Formula::exists(f->symbol, f->varSort, body);
    }
  }
  return f;
}

}  // namespace detail

/// Equality resolution under unique names, boolean constant propagation, and
/// quantifier elimination. Result is logically equivalent to the input in
/// every model with inhabited sorts.
inline FormulaPtr simplify(const FormulaPtr& f) { return detail::simplifyRec(f); }

/// Like simplify, but additionally resolves ground static atoms against a
/// fixed interpretation of the statics (statics are rigid, so this is sound
/// relative to any narrative rooted in a world with those statics).
inline FormulaPtr simplifyWithStatics(
    const FormulaPtr& f,
    const std::map<std::string, std::set<std::vector<std::string>>>& statics) {
  using K = Formula::Kind;
  std::function<FormulaPtr(const FormulaPtr&)> pre = [&](const FormulaPtr& g) -> FormulaPtr {
    if (g->kind == K::StaticAtom) {
      bool ground = true;
      std::vector<std::string> tuple;
      for (const auto& t : g->terms) {
        if (t->kind != Term::Kind::Constant) { ground = false; break; }
        tuple.push_back(t->name);
      }
      if (ground) {
        auto it = statics.find(g->symbol);
        bool v = it != statics.end() && it->second.count(tuple) > 0;
        return v ? Formula::makeTrue() : Formula::makeFalse();
      }
      return g;
    }
    if (g->sub.empty()) return g;
    auto h = std::make_shared<Formula>(*g);
    h->sub.clear();
    for (const auto& s : g->sub) h->sub.push_back(pre(s));
    return h;
  };
  return simplify(pre(f));
}

// ---------------------------------------------------------------------------
// Canonical form: flatten and sort associative connectives, for structural
// comparison of formulas that differ only in operand order.

inline FormulaPtr canonical(const FormulaPtr& f) {
  using K = Formula::Kind;
  if (f->kind == K::And || f->kind == K::Or) {
    std::vector<FormulaPtr> ops;
    std::function<void(const FormulaPtr&)> flatten = [&](const FormulaPtr& g) {
      if (g->kind == f->kind) {
        for (const auto& s : g->sub) flatten(s);
      } else {
        ops.push_back(canonical(g));
      }
    };
    flatten(f);
    std::stable_sort(ops.begin(), ops.end(), [](const FormulaPtr& a, const FormulaPtr& b) {
      return formulaToString(a) < formulaToString(b);
    });
    std::vector<FormulaPtr> uniq;
    for (const auto& o : ops)
      if (uniq.empty() || !formulaEquals(uniq.back(), o)) uniq.push_back(o);
    FormulaPtr acc = uniq[0];
    for (size_t i = 1; i < uniq.size(); ++i)
      acc = f->kind == K::And ? Formula::conj(acc, uniq[i]) : Formula::disj(acc, uniq[i]);
    return acc;
  }
  if (f->sub.empty()) return f;
  auto g = std::make_shared<Formula>(*f);
  g->sub.clear();
  for (const auto& s : f->sub) g->sub.push_back(canonical(s));
  return g;
}

inline bool equivalentModuloOrder(const FormulaPtr& a, const FormulaPtr& b) {
  return formulaEquals(canonical(a), canonical(b));
}

}  // namespace sitcause

#endif  // SITCAUSE_FORMULA_HPP
