// Scenario file format (.sct): sectioned, line-oriented surface syntax for
// theories, worlds, K frames, sensing axioms, and named narratives, plus the
// formula and narrative parsers used by the CLI.

#ifndef SITCAUSE_DSL_HPP
#define SITCAUSE_DSL_HPP

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sitcause/bat.hpp"
#include "sitcause/epistemic.hpp"
#include "sitcause/formula.hpp"
#include "sitcause/narrative.hpp"

namespace sitcause {

struct SourceLocation {
  std::string file;
  int line = 1;
  int column = 1;
};

struct ParseDiagnostic {
  SourceLocation loc;
  std::string category;
  std::string message;

  std::string str() const {
    std::ostringstream os;
    os << loc.file << ":" << loc.line << ":" << loc.column << ": " << category
       << ": " << message;
    return os.str();
  }
};

/// A parsed and validated scenario: theory, worlds, frame, agents, and the
/// narratives named in the file.
struct Scenario {
  BasicActionTheory theory;
  WorldSet worlds;
  EpistemicFrame frame;
  std::vector<Agent> agents;
  std::map<std::string, std::vector<GroundAction>> narratives;
  std::map<std::string, std::string> objectSorts;  // constant -> sort

  EpistemicScenario epistemic() const { return {&theory, &worlds, &frame, agents}; }
};

namespace dsl_detail {

struct ParseError {
  std::string category;
  std::string message;
  int column;
};

// ---------------------------------------------------------------------------
// Formula tokenizer

struct Token {
  enum class Kind { Ident, LParen, RParen, Comma, Eq, Neq, Not, And, Or, Implies, Iff, End };
  Kind kind;
  std::string text;
  int column;
};

inline std::vector<Token> tokenize(const std::string& s, int baseColumn) {
  std::vector<Token> out;
  size_t i = 0;
  auto push = [&](Token::Kind k, std::string t, size_t at) {
    out.push_back({k, std::move(t), baseColumn + static_cast<int>(at)});
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      push(Token::Kind::Ident, s.substr(i, j - i), i);
      i = j;
      continue;
    }
    switch (c) {
      case '(': push(Token::Kind::LParen, "(", i); ++i; break;
      case ')': push(Token::Kind::RParen, ")", i); ++i; break;
      case ',': push(Token::Kind::Comma, ",", i); ++i; break;
      case '=': push(Token::Kind::Eq, "=", i); ++i; break;
      case '&': push(Token::Kind::And, "&", i); ++i; break;
      case '|': push(Token::Kind::Or, "|", i); ++i; break;
      case '!':
        if (i + 1 < s.size() && s[i + 1] == '=') { push(Token::Kind::Neq, "!=", i); i += 2; }
        else { push(Token::Kind::Not, "!", i); ++i; }
        break;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') { push(Token::Kind::Implies, "->", i); i += 2; }
        else throw ParseError{"SyntaxError", "stray '-'", baseColumn + static_cast<int>(i)};
        break;
      case '<':
        if (i + 2 < s.size() && s[i + 1] == '-' && s[i + 2] == '>') {
          push(Token::Kind::Iff, "<->", i); i += 3;
        } else throw ParseError{"SyntaxError", "stray '<'", baseColumn + static_cast<int>(i)};
        break;
      default:
        throw ParseError{"SyntaxError", std::string("unexpected character '") + c + "'",
                         baseColumn + static_cast<int>(i)};
    }
  }
  push(Token::Kind::End, "", s.size());
  return out;
}

// ---------------------------------------------------------------------------
// Formula parser. Precedence: ! > & > | > -> > <->. A quantifier's body is a
// unary-level formula (in practice parenthesized).

class FormulaParser {
 public:
  FormulaParser(const BasicActionTheory& bat,
                const std::map<std::string, std::string>& objectSorts,
                std::vector<Token> tokens)
      : bat_(bat), objectSorts_(objectSorts), tokens_(std::move(tokens)) {}

  // Two typing passes share varSorts_, so a variable constrained late in the
  // formula (e.g. by an atom after an equality) types the earlier occurrence.
  FormulaPtr parse() {
    strict_ = false;
    pos_ = 0;
    try { (void)parseIff(); } catch (const ParseError&) {}
    strict_ = true;
    pos_ = 0;
    auto f = parseIff();
    expect(Token::Kind::End, "end of formula");
    return f;
  }

  const std::map<std::string, std::string>& varSorts() const { return varSorts_; }

  void preset(const std::vector<std::pair<std::string, std::string>>& params) {
    for (const auto& [n, s] : params) varSorts_[n] = s;
  }

 private:
  const Token& cur() const { return tokens_[pos_]; }
  bool at(Token::Kind k) const { return cur().kind == k; }
  Token take() { return tokens_[pos_++]; }
  void expect(Token::Kind k, const std::string& what) {
    if (!at(k))
      throw ParseError{"SyntaxError", "expected " + what + ", got '" + cur().text + "'",
                       cur().column};
    ++pos_;
  }

  FormulaPtr parseIff() {
    auto l = parseImplies();
    while (at(Token::Kind::Iff)) {
      take();
      l = Formula::iff(l, parseImplies());
    }
    return l;
  }
  FormulaPtr parseImplies() {
    auto l = parseOr();
    if (at(Token::Kind::Implies)) {
      take();
      return Formula::implies(l, parseImplies());  // right associative
    }
    return l;
  }
  FormulaPtr parseOr() {
    auto l = parseAnd();
    while (at(Token::Kind::Or)) {
      take();
      l = Formula::disj(l, parseAnd());
    }
    return l;
  }
  FormulaPtr parseAnd() {
    auto l = parseUnary();
    while (at(Token::Kind::And)) {
      take();
      l = Formula::conj(l, parseUnary());
    }
    return l;
  }

  FormulaPtr parseUnary() {
    if (at(Token::Kind::Not)) {
      take();
      return Formula::negation(parseUnary());
    }
    if (at(Token::Kind::Ident) && (cur().text == "forall" || cur().text == "exists")) {
      bool isForall = take().text == "forall";
      std::vector<std::string> vars;
      vars.push_back(expectIdent("quantified variable"));
      while (at(Token::Kind::Comma)) {
        take();
        vars.push_back(expectIdent("quantified variable"));
      }
      auto body = parseUnary();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
        std::string sort = sortOfVar(*it);
        body = isForall ? Formula::forall(*it, sort, body)
                        : Formula::exists(*it, sort, body);
      }
      return body;
    }
    return parsePrimary();
  }

  FormulaPtr parsePrimary() {
    if (at(Token::Kind::LParen)) {
      take();
      auto f = parseIff();
      expect(Token::Kind::RParen, "')'");
      return f;
    }
    if (!at(Token::Kind::Ident))
      throw ParseError{"SyntaxError", "expected formula, got '" + cur().text + "'",
                       cur().column};
    const Token& id = cur();
    if (id.text == "true") { take(); return Formula::makeTrue(); }
    if (id.text == "false") { take(); return Formula::makeFalse(); }

    // Fluent/static atom, unless the identifier starts an equality's term.
    if (bat_.fluentSignatures.count(id.text) || bat_.staticSignatures.count(id.text)) {
      bool isFluent = bat_.fluentSignatures.count(id.text) > 0;
      const auto& sig = isFluent ? bat_.fluentSignatures.at(id.text)
                                 : bat_.staticSignatures.at(id.text);
      take();
      std::vector<TermPtr> args;
      if (at(Token::Kind::LParen)) {
        take();
        while (true) {
          args.push_back(parseTerm(args.size() < sig.size() ? sig[args.size()] : ""));
          if (at(Token::Kind::Comma)) { take(); continue; }
          break;
        }
        expect(Token::Kind::RParen, "')'");
      }
      if (strict_ && args.size() != sig.size())
        throw ParseError{"ArityError",
                         id.text + " expects " + std::to_string(sig.size()) +
                             " arguments, got " + std::to_string(args.size()),
                         id.column};
      return isFluent ? Formula::fluent(id.text, std::move(args))
                      : Formula::staticAtom(id.text, std::move(args));
    }

    // Otherwise a term followed by = or !=.
    auto lhs = parseTerm("");
    bool negated;
    if (at(Token::Kind::Eq)) { negated = false; take(); }
    else if (at(Token::Kind::Neq)) { negated = true; take(); }
    else
      throw ParseError{"SyntaxError", "expected '=' or '!=' after term", cur().column};
    auto rhs = parseTerm(lhs->sort);
    unifyTerms(lhs, rhs, id.column);
    auto eq = Formula::equal(lhs, rhs);
    return negated ? Formula::negation(eq) : eq;
  }

  std::string expectIdent(const std::string& what) {
    if (!at(Token::Kind::Ident))
      throw ParseError{"SyntaxError", "expected " + what, cur().column};
    return take().text;
  }

  // expectedSort may be "" when the context gives no constraint.
  TermPtr parseTerm(const std::string& expectedSort) {
    const Token& id = cur();
    std::string name = expectIdent("term");

    if (const ActionSchema* schema = bat_.findAction(name)) {
      expect(Token::Kind::LParen, "'(' after action symbol");
      std::vector<TermPtr> args;
      while (true) {
        std::string slot = args.size() < schema->params.size()
                               ? schema->params[args.size()].second : "";
        args.push_back(parseTerm(slot));
        if (at(Token::Kind::Comma)) { take(); continue; }
        break;
      }
      expect(Token::Kind::RParen, "')'");
      if (strict_ && args.size() != schema->params.size())
        throw ParseError{"ArityError",
                         name + " expects " + std::to_string(schema->params.size()) +
                             " arguments, got " + std::to_string(args.size()),
                         id.column};
      return Term::apply(name, "action", std::move(args));
    }
    if (auto it = objectSorts_.find(name); it != objectSorts_.end()) {
      if (strict_ && !expectedSort.empty() && it->second != expectedSort)
        throw ParseError{"SortMismatch",
                         name + " has sort " + it->second + ", expected " + expectedSort,
                         id.column};
      return Term::constant(name, it->second);
    }
    // Variable. Record or check its inferred sort.
    if (!expectedSort.empty()) {
      auto [it, inserted] = varSorts_.insert({name, expectedSort});
      if (!inserted && it->second != expectedSort && strict_)
        throw ParseError{"SortMismatch",
                         "variable " + name + " used at sorts " + it->second +
                             " and " + expectedSort,
                         id.column};
    }
    return Term::variable(name, sortOfVarLenient(name, id.column));
  }

  void unifyTerms(const TermPtr& l, const TermPtr& r, int column) {
    auto pin = [&](const TermPtr& v, const TermPtr& other) {
      if (v->kind == Term::Kind::Variable && !other->sort.empty())
        varSorts_.insert({v->name, other->sort});
    };
    pin(l, r);
    pin(r, l);
    if (strict_ && l->kind != Term::Kind::Variable && r->kind != Term::Kind::Variable &&
        !l->sort.empty() && !r->sort.empty() && l->sort != r->sort)
      throw ParseError{"SortMismatch",
                       "cannot compare a " + l->sort + " with a " + r->sort, column};
  }

  std::string sortOfVarLenient(const std::string& name, int column) {
    auto it = varSorts_.find(name);
    if (it != varSorts_.end()) return it->second;
    if (!strict_) return "";
    return sortOfVar(name, column);
  }

  std::string sortOfVar(const std::string& name, int column = 0) {
    auto it = varSorts_.find(name);
    if (it != varSorts_.end()) return it->second;
    if (!strict_) return "";
    // Fall back to the only object sort when there is exactly one.
    std::string found;
    int n = 0;
    for (const auto& s : bat_.sorts)
      if (s.kind == SortKind::Object) { found = s.name; ++n; }
    if (n == 1) {
      varSorts_[name] = found;
      return found;
    }
    throw ParseError{"UnknownSymbol",
                     "cannot infer a sort for variable " + name, column};
  }

  const BasicActionTheory& bat_;
  const std::map<std::string, std::string>& objectSorts_;
  std::vector<Token> tokens_;
  size_t pos_ = 0;
  bool strict_ = true;
  std::map<std::string, std::string> varSorts_;
};

/// Parses with declared parameter sorts preset, then checks that every free
/// variable of the result is one of the parameters.
inline FormulaPtr parseWithPreset(
    FormulaParser& p,
    const std::vector<std::pair<std::string, std::string>>& params) {
  p.preset(params);
  auto f = p.parse();
  for (const auto& [n, s] : freeVars(f)) {
    bool declared = false;
    for (const auto& [pn, ps] : params)
      if (pn == n) declared = true;
    if (!declared)
      throw ParseError{"UnknownSymbol", "free variable " + n + " is not a parameter", 1};
  }
  return f;
}

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> splitTop(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

/// Builds a complete closed-world model from a semicolon-separated list of
/// ground atoms: listed atoms are true, everything else false.
inline StateModel buildWorldModel(const Scenario& sc, const std::string& atomsSrc) {
  StateModel m;
  for (const auto& [constant, sort] : sc.objectSorts) m.domain[sort].push_back(constant);
  for (const auto& [sym, sig] : sc.theory.staticSignatures) m.statics[sym];
  for (const auto& [sym, sig] : sc.theory.fluentSignatures) m.fluents[sym];

  for (const auto& part : splitTop(atomsSrc, ';')) {
    std::string t = trim(part);
    if (t.empty()) continue;
    auto paren = t.find('(');
    std::string sym = trim(paren == std::string::npos ? t : t.substr(0, paren));
    bool isFluent = sc.theory.fluentSignatures.count(sym) > 0;
    bool isStatic = sc.theory.staticSignatures.count(sym) > 0;
    if (!isFluent && !isStatic)
      throw ParseError{"UnknownSymbol", "undeclared symbol " + sym + " in world", 1};
    const auto& sig = isFluent ? sc.theory.fluentSignatures.at(sym)
                               : sc.theory.staticSignatures.at(sym);
    std::vector<std::string> tuple;
    if (paren != std::string::npos) {
      auto close = t.rfind(')');
      if (close == std::string::npos)
        throw ParseError{"SyntaxError", "missing ')' in atom " + t, 1};
      std::string inner = t.substr(paren + 1, close - paren - 1);
      if (!trim(inner).empty())
        for (const auto& arg : splitTop(inner, ',')) tuple.push_back(trim(arg));
    }
    if (tuple.size() != sig.size())
      throw ParseError{"ArityError",
                       sym + " expects " + std::to_string(sig.size()) +
                           " arguments, got " + std::to_string(tuple.size()), 1};
    for (size_t i = 0; i < tuple.size(); ++i) {
      auto it = sc.objectSorts.find(tuple[i]);
      if (it == sc.objectSorts.end())
        throw ParseError{"UnknownSymbol", "unknown constant " + tuple[i], 1};
      if (it->second != sig[i])
        throw ParseError{"SortMismatch",
                         tuple[i] + " has sort " + it->second + ", expected " + sig[i], 1};
    }
    (isFluent ? m.fluents : m.statics)[sym].insert(tuple);
  }
  return m;
}

}  // namespace dsl_detail

// ---------------------------------------------------------------------------
// Public parsing entry points

/// Parses a formula in surface syntax against the scenario's signature.
/// Variable sorts are inferred from argument positions. Throws SitError on
/// failure.
inline FormulaPtr parseFormula(const std::string& text, const Scenario& scenario) {
  try {
    dsl_detail::FormulaParser p(scenario.theory, scenario.objectSorts,
                                dsl_detail::tokenize(text, 1));
    return p.parse();
  } catch (const dsl_detail::ParseError& e) {
    throw SitError(ErrorCode::UnknownSymbol,
                   e.category + ": " + e.message + " (column " +
                       std::to_string(e.column) + ")");
  }
}

/// Semicolon-separated ground actions, e.g. "drive(C,I,J); turn(C,J)".
inline std::vector<GroundAction> parseNarrative(const std::string& text,
                                                const Scenario& scenario) {
  std::vector<GroundAction> out;
  for (const auto& part : dsl_detail::splitTop(text, ';')) {
    std::string t = dsl_detail::trim(part);
    if (t.empty()) continue;
    size_t paren = t.find('(');
    std::string name = dsl_detail::trim(paren == std::string::npos ? t : t.substr(0, paren));
    const ActionSchema* schema = scenario.theory.findAction(name);
    if (!schema)
      throw SitError(ErrorCode::UnknownAction, "unknown action " + name);
    GroundAction a{name, {}};
    if (paren != std::string::npos) {
      size_t close = t.rfind(')');
      if (close == std::string::npos || close < paren)
        throw SitError(ErrorCode::UnknownAction, "malformed action term: " + t);
      std::string inner = t.substr(paren + 1, close - paren - 1);
      if (!dsl_detail::trim(inner).empty())
        for (const auto& arg : dsl_detail::splitTop(inner, ','))
          a.args.push_back(dsl_detail::trim(arg));
    }
    if (a.args.size() != schema->params.size())
      throw SitError(ErrorCode::UnknownAction,
                     name + " expects " + std::to_string(schema->params.size()) +
                         " arguments, got " + std::to_string(a.args.size()));
    for (size_t i = 0; i < a.args.size(); ++i) {
      auto it = scenario.objectSorts.find(a.args[i]);
      if (it == scenario.objectSorts.end())
        throw SitError(ErrorCode::UnknownSymbol, "unknown constant " + a.args[i]);
      if (it->second != schema->params[i].second)
        throw SitError(ErrorCode::SortMismatch,
                       a.args[i] + " has sort " + it->second + ", expected " +
                           schema->params[i].second);
    }
    out.push_back(std::move(a));
  }
  return out;
}

struct ParseResult {
  std::optional<Scenario> scenario;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return scenario.has_value() && diagnostics.empty(); }
};

/// Parses a whole .sct file. Collects all diagnosable errors with locations;
/// recovery is per line.
inline ParseResult parseScenario(const std::string& text,
                                 const std::string& filename = "<input>") {
  using namespace dsl_detail;
  ParseResult result;
  Scenario sc;
  std::vector<ParseDiagnostic>& diags = result.diagnostics;
  std::map<std::string, int> worldLines;
  bool sawAnySection = false;

  auto addDiag = [&](int line, const std::string& cat, const std::string& msg,
                     int col = 1) {
    diags.push_back({{filename, line, col}, cat, msg});
  };
  auto declareSort = [&](const std::string& name, SortKind kind) {
    if (!sc.theory.findSort(name)) sc.theory.sorts.push_back({name, kind});
  };
  declareSort("action", SortKind::Action);

  std::istringstream in(text);
  std::string rawLine;
  int lineNo = 0;
  while (std::getline(in, rawLine)) {
    ++lineNo;
    std::string line = rawLine;
    if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    sawAnySection = true;

    try {
      // First colon at paren depth 0; colons inside parameter lists like
      // drive(c:car,...) belong to the declaration head.
      size_t colon = std::string::npos;
      int depth = 0;
      for (size_t ci = 0; ci < line.size(); ++ci) {
        if (line[ci] == '(') ++depth;
        if (line[ci] == ')') --depth;
        if (line[ci] == ':' && depth == 0) { colon = ci; break; }
      }
      std::string head = colon == std::string::npos ? line : trim(line.substr(0, colon));
      std::string rest = colon == std::string::npos ? "" : trim(line.substr(colon + 1));
      std::istringstream hs(head);
      std::string keyword;
      hs >> keyword;

      if (keyword == "sorts") {
        std::istringstream rs(rest);
        std::string name;
        while (rs >> name) declareSort(name, SortKind::Object);
      } else if (keyword == "objects") {
        for (const auto& group : splitTop(rest, ';')) {
          auto gcolon = group.rfind(':');
          if (gcolon == std::string::npos)
            throw ParseError{"SyntaxError", "objects group needs ': <sort>'", 1};
          std::string sortName = trim(group.substr(gcolon + 1));
          declareSort(sortName, SortKind::Object);
          std::istringstream names(group.substr(0, gcolon));
          std::string n;
          while (names >> n) {
            if (sc.objectSorts.count(n))
              throw ParseError{"DuplicateDeclaration", "constant " + n + " redeclared", 1};
            sc.objectSorts[n] = sortName;
          }
        }
      } else if (keyword == "statics" || keyword == "fluents") {
        auto& sigs = keyword == "statics" ? sc.theory.staticSignatures
                                          : sc.theory.fluentSignatures;
        for (const auto& declRaw : splitTop(rest, ';')) {
          std::string decl = trim(declRaw);
          if (decl.empty()) continue;
          auto paren = decl.find('(');
          std::string sym = trim(paren == std::string::npos ? decl : decl.substr(0, paren));
          std::vector<std::string> argSorts;
          if (paren != std::string::npos) {
            auto close = decl.rfind(')');
            if (close == std::string::npos)
              throw ParseError{"SyntaxError", "missing ')' in " + decl, 1};
            for (const auto& s : splitTop(decl.substr(paren + 1, close - paren - 1), ',')) {
              std::string sn = trim(s);
              if (!sc.theory.findSort(sn))
                throw ParseError{"UnknownSymbol", "unknown sort " + sn, 1};
              argSorts.push_back(sn);
            }
          }
          if (sc.theory.staticSignatures.count(sym) || sc.theory.fluentSignatures.count(sym))
            throw ParseError{"DuplicateDeclaration", "symbol " + sym + " redeclared", 1};
          sigs[sym] = argSorts;
        }
      } else if (keyword == "action") {
        // action name(p:sort, ...) poss: <formula>
        std::string sig = trim(head.substr(keyword.size()));
        auto possAt = sig.rfind("poss");
        if (possAt == std::string::npos || colon == std::string::npos)
          throw ParseError{"SyntaxError", "action declaration needs 'poss: <formula>'", 1};
        std::string nameAndParams = trim(sig.substr(0, possAt));
        ActionSchema schema;
        auto paren = nameAndParams.find('(');
        schema.name = trim(paren == std::string::npos ? nameAndParams
                                                      : nameAndParams.substr(0, paren));
        if (paren != std::string::npos) {
          auto close = nameAndParams.rfind(')');
          for (const auto& p : splitTop(
                   nameAndParams.substr(paren + 1, close - paren - 1), ',')) {
            auto pc = p.find(':');
            if (pc == std::string::npos)
              throw ParseError{"SyntaxError", "parameter needs 'name:sort'", 1};
            std::string pn = trim(p.substr(0, pc));
            std::string ps = trim(p.substr(pc + 1));
            if (!sc.theory.findSort(ps))
              throw ParseError{"UnknownSymbol", "unknown sort " + ps, 1};
            schema.params.push_back({pn, ps});
          }
        }
        if (sc.theory.findAction(schema.name))
          throw ParseError{"DuplicateDeclaration",
                           "action " + schema.name + " redeclared", 1};
        // Parse precondition with parameter sorts preset.
        FormulaParser fp(sc.theory, sc.objectSorts, tokenize(rest, 1));
        schema.precondition = parseWithPreset(fp, schema.params);
        sc.theory.actions.push_back(std::move(schema));
      } else if (keyword == "ssa") {
        // ssa fluent(p1,p2): <formula>   (reserved action variable: a)
        std::string decl = trim(head.substr(keyword.size()));
        SuccessorStateAxiom ssa;
        ssa.actionVar = "a";
        auto paren = decl.find('(');
        ssa.fluent = trim(paren == std::string::npos ? decl : decl.substr(0, paren));
        auto sigIt = sc.theory.fluentSignatures.find(ssa.fluent);
        if (sigIt == sc.theory.fluentSignatures.end())
          throw ParseError{"UnknownSymbol", "SSA for undeclared fluent " + ssa.fluent, 1};
        if (paren != std::string::npos) {
          auto close = decl.rfind(')');
          size_t idx = 0;
          for (const auto& p : splitTop(decl.substr(paren + 1, close - paren - 1), ',')) {
            std::string pn = trim(p);
            if (idx >= sigIt->second.size())
              throw ParseError{"ArityError", "too many SSA parameters for " + ssa.fluent, 1};
            ssa.params.push_back({pn, sigIt->second[idx]});
            ++idx;
          }
        }
        if (ssa.params.size() != sigIt->second.size())
          throw ParseError{"ArityError", "SSA parameter count mismatch for " + ssa.fluent, 1};
        auto params = ssa.params;
        params.push_back({ssa.actionVar, "action"});
        FormulaParser fp(sc.theory, sc.objectSorts, tokenize(rest, 1));
        ssa.rhs = parseWithPreset(fp, params);
        sc.theory.ssas.push_back(std::move(ssa));
      } else if (keyword == "world") {
        std::string w = trim(head.substr(keyword.size()));
        std::istringstream ws(w);
        InitialModel world;
        ws >> world.id;
        std::string flag;
        if (ws >> flag) {
          if (flag == "actual") world.isActual = true;
          else throw ParseError{"SyntaxError", "unexpected token '" + flag + "'", 1};
        }
        if (world.id.empty())
          throw ParseError{"SyntaxError", "world needs an id", 1};
        for (const auto& other : sc.worlds)
          if (other.id == world.id)
            throw ParseError{"DuplicateDeclaration", "world " + world.id + " redeclared", 1};
        worldLines[world.id] = lineNo;
        world.model = buildWorldModel(sc, rest);
        sc.worlds.push_back(std::move(world));
      } else if (keyword == "agent") {
        std::string name = trim(head.substr(keyword.size()));
        if (name.empty())
          throw ParseError{"SyntaxError", "agent needs a name", 1};
        for (const auto& a : sc.agents)
          if (a.name == name)
            throw ParseError{"DuplicateDeclaration", "agent " + name + " redeclared", 1};
        sc.agents.push_back({name});
      } else if (keyword == "k") {
        std::string agent;
        hs >> agent;
        if (agent.empty())
          throw ParseError{"SyntaxError", "k declaration needs an agent", 1};
        bool known = false;
        for (const auto& a : sc.agents)
          if (a.name == agent) known = true;
        if (!known)
          throw ParseError{"UnknownSymbol", "undeclared agent " + agent, 1};
        auto& edges = sc.frame.kEdges[agent];
        if (rest.find("->") != std::string::npos) {
          // Edge form: W1 -> W2
          auto arrow = rest.find("->");
          std::string from = trim(rest.substr(0, arrow));
          std::string to = trim(rest.substr(arrow + 2));
          edges.insert({from, to});
        } else {
          // Equivalence class: W1 ~ W2 ~ ...; closure generated.
          std::vector<std::string> members;
          for (const auto& m : splitTop(rest, '~')) {
            std::string id = trim(m);
            if (!id.empty()) members.push_back(id);
          }
          for (const auto& a : members)
            for (const auto& b : members) edges.insert({a, b});
        }
      } else if (keyword == "sense") {
        // sense action(p:sort,...) guard: <formula> tells: <formula>
        std::string decl = trim(head.substr(keyword.size()));
        auto guardAt = decl.rfind("guard");
        if (guardAt == std::string::npos)
          throw ParseError{"SyntaxError", "sense declaration needs 'guard: ... tells: ...'", 1};
        std::string nameAndParams = trim(decl.substr(0, guardAt));
        auto paren = nameAndParams.find('(');
        SensingAxiom sa;
        sa.action = trim(paren == std::string::npos ? nameAndParams
                                                    : nameAndParams.substr(0, paren));
        const ActionSchema* schema = sc.theory.findAction(sa.action);
        if (!schema)
          throw ParseError{"UnknownSymbol", "sensing axiom for undeclared action " + sa.action, 1};
        auto tellsAt = rest.find("tells");
        if (tellsAt == std::string::npos)
          throw ParseError{"SyntaxError", "sense declaration needs 'tells: <formula>'", 1};
        std::string guardSrc = trim(rest.substr(0, tellsAt));
        std::string tellsRest = trim(rest.substr(tellsAt + 5));
        if (!tellsRest.empty() && tellsRest.front() == ':')
          tellsRest = trim(tellsRest.substr(1));
        FormulaParser gp(sc.theory, sc.objectSorts, tokenize(guardSrc, 1));
        sa.guard = parseWithPreset(gp, schema->params);
        FormulaParser tp(sc.theory, sc.objectSorts, tokenize(tellsRest, 1));
        sa.condition = parseWithPreset(tp, schema->params);
        sc.theory.sensing.push_back(std::move(sa));
      } else if (keyword == "narrative") {
        std::string name = trim(head.substr(keyword.size()));
        if (name.empty())
          throw ParseError{"SyntaxError", "narrative needs a name", 1};
        if (sc.narratives.count(name))
          throw ParseError{"DuplicateDeclaration", "narrative " + name + " redeclared", 1};
        sc.narratives[name] = parseNarrative(rest, sc);
      } else {
        throw ParseError{"SyntaxError", "unknown declaration '" + keyword + "'", 1};
      }
    } catch (const ParseError& e) {
      addDiag(lineNo, e.category, e.message, e.column);
    } catch (const SitError& e) {
      addDiag(lineNo, "SemanticError", e.what());
    }
  }

  if (!sawAnySection) {
    addDiag(1, "SyntaxError", "empty input: missing required sections");
    return result;
  }

  // Whole-scenario validation.
  for (const auto& d : validate(sc.theory)) addDiag(1, d.category, d.message);

  int actualCount = 0;
  for (const auto& w : sc.worlds)
    if (w.isActual) ++actualCount;
  if (sc.worlds.empty())
    addDiag(1, "SyntaxError", "scenario declares no worlds");
  else if (actualCount == 0)
    addDiag(worldLines.begin()->second, "MultipleActualWorlds",
            "no world is marked actual");
  else if (actualCount > 1)
    addDiag(worldLines.begin()->second, "MultipleActualWorlds",
            "more than one world is marked actual");

  // Every agent is at least reflexively related to every world.
  for (const auto& a : sc.agents) {
    auto& edges = sc.frame.kEdges[a.name];
    for (const auto& w : sc.worlds) edges.insert({w.id, w.id});
  }
  for (const auto& [agent, edges] : sc.frame.kEdges)
    for (const auto& [from, to] : edges) {
      for (const auto& id : {from, to})
        if (worldLines.find(id) == worldLines.end())
          addDiag(1, "UnknownSymbol", "K edge mentions unknown world " + id);
    }
  for (const auto& d : validateFrame(sc.frame, sc.worlds))
    addDiag(1, d.category, d.message);

  if (!diags.empty()) return result;
  result.scenario = std::move(sc);
  return result;
}

}  // namespace sitcause

#endif  // SITCAUSE_DSL_HPP
