#ifndef CONGREL_DSL_HPP
#define CONGREL_DSL_HPP

// Quantified relational identities.
//
//   statement  := [ "forall" decl ("," decl)* "." ] expr ("<=" | "=") expr
//   decl       := ident ":" ("Cong" | "Tol" | "Refl")
//
// Operators, loosest first:
//   +    alternating join (transitive closure of the union; reflexive operands)
//   |    union
//   ;    relational product
//   &    meet
//   *    transitive closure (postfix)
//   ^-   converse (postfix)
// Atoms: variables, 0 (diagonal), 1 (full relation), cl(e) (compatible
// closure), cg(e) (generated congruence), parenthesised expressions.
// Binary operators associate to the left.

#include <cctype>
#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "binrel.hpp"
#include "error.hpp"
#include "parallel.hpp"
#include "relations.hpp"
#include "report.hpp"
#include "theorems.hpp"

namespace congrel::dsl {

enum class Sort { cong, tol, refl };

inline const char *to_string(Sort s) {
  switch (s) {
  case Sort::cong:
    return "Cong";
  case Sort::tol:
    return "Tol";
  case Sort::refl:
    return "Refl";
  }
  return "?";
}

struct Expr {
  enum class Kind { var, diagonal, full, join, unite, compose, meet, star, converse, closure, cg };

  Kind kind = Kind::diagonal;
  std::string name;       ///< variable name for Kind::var
  std::vector<Expr> args; ///< operands, left to right

  static Expr var(std::string n) { return {Kind::var, std::move(n), {}}; }
  static Expr unary(Kind k, Expr e) {
    Expr out{k, {}, {}};
    out.args.push_back(std::move(e));
    return out;
  }
  static Expr binary(Kind k, Expr l, Expr r) {
    Expr out{k, {}, {}};
    out.args.push_back(std::move(l));
    out.args.push_back(std::move(r));
    return out;
  }

  friend bool operator==(const Expr &, const Expr &) = default;
};

struct Quantifier {
  std::string name;
  Sort sort = Sort::refl;

  friend bool operator==(const Quantifier &, const Quantifier &) = default;
};

enum class Relation { included, equal };

struct Statement {
  std::vector<Quantifier> quantifiers;
  Relation relation = Relation::included;
  Expr lhs;
  Expr rhs;

  friend bool operator==(const Statement &, const Statement &) = default;
};

// ---------------------------------------------------------------------------
// Lexer

namespace detail {

enum class Tok { ident, zero, one, lparen, rparen, comma, colon, dot, amp, semi, plus, bar, star, conv, le, eq, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    const std::size_t l = line, c = col;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      out.push_back({Tok::ident, std::string(src.substr(i, j - i)), l, c});
      advance(j - i);
      continue;
    }
    auto single = [&](Tok t) {
      out.push_back({t, std::string(1, ch), l, c});
      advance(1);
    };
    switch (ch) {
    case '0':
      single(Tok::zero);
      break;
    case '1':
      single(Tok::one);
      break;
    case '(':
      single(Tok::lparen);
      break;
    case ')':
      single(Tok::rparen);
      break;
    case ',':
      single(Tok::comma);
      break;
    case ':':
      single(Tok::colon);
      break;
    case '.':
      single(Tok::dot);
      break;
    case '&':
      single(Tok::amp);
      break;
    case ';':
      single(Tok::semi);
      break;
    case '+':
      single(Tok::plus);
      break;
    case '|':
      single(Tok::bar);
      break;
    case '*':
      single(Tok::star);
      break;
    case '=':
      single(Tok::eq);
      break;
    case '^':
      if (i + 1 < src.size() && src[i + 1] == '-') {
        out.push_back({Tok::conv, "^-", l, c});
        advance(2);
        break;
      }
      throw ParseError("expected '-' after '^'", l, c);
    case '<':
      if (i + 1 < src.size() && src[i + 1] == '=') {
        out.push_back({Tok::le, "<=", l, c});
        advance(2);
        break;
      }
      throw ParseError("expected '=' after '<'", l, c);
    default:
      throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
    }
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

class Parser {
public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Statement statement() {
    Statement st;
    if (peek().kind == Tok::ident && peek().text == "forall") {
      next();
      for (;;) {
        const Token &name = expect(Tok::ident, "variable name");
        if (reserved(name.text))
          throw ParseError("'" + name.text + "' is reserved", name.line, name.column);
        for (const auto &q : st.quantifiers)
          if (q.name == name.text)
            throw ParseError("duplicate declaration of '" + name.text + "'", name.line, name.column);
        expect(Tok::colon, "':'");
        const Token &sort = expect(Tok::ident, "sort");
        Sort s;
        if (sort.text == "Cong")
          s = Sort::cong;
        else if (sort.text == "Tol")
          s = Sort::tol;
        else if (sort.text == "Refl")
          s = Sort::refl;
        else
          throw ParseError("unknown sort '" + sort.text + "' (expected Cong, Tol or Refl)", sort.line, sort.column);
        st.quantifiers.push_back({name.text, s});
        if (peek().kind == Tok::comma) {
          next();
          continue;
        }
        expect(Tok::dot, "'.' after quantifiers");
        break;
      }
    }
    scope_ = &st.quantifiers;
    st.lhs = join();
    if (peek().kind == Tok::le)
      st.relation = Relation::included;
    else if (peek().kind == Tok::eq)
      st.relation = Relation::equal;
    else
      throw ParseError("expected '<=' or '='", peek().line, peek().column);
    next();
    st.rhs = join();
    if (peek().kind != Tok::end)
      throw ParseError("unexpected '" + peek().text + "'", peek().line, peek().column);
    return st;
  }

private:
  static bool reserved(const std::string &s) { return s == "forall" || s == "cl" || s == "cg"; }

  const Token &peek() const { return toks_[pos_]; }
  const Token &next() { return toks_[pos_++]; }
  const Token &expect(Tok k, const char *what) {
    if (peek().kind != k)
      throw ParseError(std::string("expected ") + what, peek().line, peek().column);
    return next();
  }

  Expr join() {
    Expr e = unite();
    while (peek().kind == Tok::plus) {
      next();
      e = Expr::binary(Expr::Kind::join, std::move(e), unite());
    }
    return e;
  }

  Expr unite() {
    Expr e = compose();
    while (peek().kind == Tok::bar) {
      next();
      e = Expr::binary(Expr::Kind::unite, std::move(e), compose());
    }
    return e;
  }

  Expr compose() {
    Expr e = meet();
    while (peek().kind == Tok::semi) {
      next();
      e = Expr::binary(Expr::Kind::compose, std::move(e), meet());
    }
    return e;
  }

  Expr meet() {
    Expr e = postfix();
    while (peek().kind == Tok::amp) {
      next();
      e = Expr::binary(Expr::Kind::meet, std::move(e), postfix());
    }
    return e;
  }

  Expr postfix() {
    Expr e = atom();
    for (;;) {
      if (peek().kind == Tok::star)
        e = Expr::unary(Expr::Kind::star, std::move(e));
      else if (peek().kind == Tok::conv)
        e = Expr::unary(Expr::Kind::converse, std::move(e));
      else
        return e;
      next();
    }
  }

  Expr atom() {
    const Token &t = next();
    switch (t.kind) {
    case Tok::zero:
      return Expr{Expr::Kind::diagonal, {}, {}};
    case Tok::one:
      return Expr{Expr::Kind::full, {}, {}};
    case Tok::lparen: {
      Expr e = join();
      expect(Tok::rparen, "')'");
      return e;
    }
    case Tok::ident: {
      if (t.text == "cl" || t.text == "cg") {
        expect(Tok::lparen, "'(' after function name");
        Expr inner = join();
        expect(Tok::rparen, "')'");
        return Expr::unary(t.text == "cl" ? Expr::Kind::closure : Expr::Kind::cg, std::move(inner));
      }
      if (t.text == "forall")
        throw ParseError("unexpected 'forall'", t.line, t.column);
      bool declared = false;
      for (const auto &q : *scope_)
        declared = declared || q.name == t.text;
      if (!declared)
        throw ParseError("undeclared variable '" + t.text + "'", t.line, t.column);
      return Expr::var(t.text);
    }
    case Tok::end:
      throw ParseError("unexpected end of input", t.line, t.column);
    default:
      throw ParseError("unexpected '" + t.text + "'", t.line, t.column);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const std::vector<Quantifier> *scope_ = nullptr;
};

inline int precedence(Expr::Kind k) {
  switch (k) {
  case Expr::Kind::join:
    return 1;
  case Expr::Kind::unite:
    return 2;
  case Expr::Kind::compose:
    return 3;
  case Expr::Kind::meet:
    return 4;
  case Expr::Kind::star:
  case Expr::Kind::converse:
    return 5;
  default:
    return 6;
  }
}

inline void print(const Expr &e, std::string &out) {
  using K = Expr::Kind;
  auto child = [&](const Expr &c, bool parens) {
    if (parens)
      out += '(';
    print(c, out);
    if (parens)
      out += ')';
  };
  const int p = precedence(e.kind);
  switch (e.kind) {
  case K::var:
    out += e.name;
    return;
  case K::diagonal:
    out += '0';
    return;
  case K::full:
    out += '1';
    return;
  case K::closure:
  case K::cg:
    out += e.kind == K::closure ? "cl(" : "cg(";
    print(e.args[0], out);
    out += ')';
    return;
  case K::star:
  case K::converse:
    child(e.args[0], precedence(e.args[0].kind) < p);
    out += e.kind == K::star ? "*" : "^-";
    return;
  case K::join:
  case K::unite:
  case K::compose:
  case K::meet: {
    static constexpr const char *ops[] = {"", "", "", " + ", " | ", " ; ", " & "};
    child(e.args[0], precedence(e.args[0].kind) < p);
    out += ops[static_cast<int>(e.kind)];
    child(e.args[1], precedence(e.args[1].kind) <= p);
    return;
  }
  }
}

} // namespace detail

inline Statement parse(std::string_view text) { return detail::Parser(text).statement(); }

inline std::string print(const Expr &e) {
  std::string out;
  detail::print(e, out);
  return out;
}

/// "LHS <= RHS" or "LHS = RHS".
inline std::string print_claim(const Statement &s) {
  return print(s.lhs) + (s.relation == Relation::included ? " <= " : " = ") + print(s.rhs);
}

/// Canonical one-line form with minimal parentheses.
inline std::string print(const Statement &s) {
  std::string out;
  if (!s.quantifiers.empty()) {
    out += "forall ";
    for (std::size_t i = 0; i < s.quantifiers.size(); ++i) {
      if (i)
        out += ", ";
      out += s.quantifiers[i].name + ":" + to_string(s.quantifiers[i].sort);
    }
    out += " . ";
  }
  return out + print_claim(s);
}

// ---------------------------------------------------------------------------
// Evaluation

using Environment = std::map<std::string, BinRel, std::less<>>;

inline BinRel evaluate(const FiniteAlgebra &A, const Environment &env, const Expr &e) {
  using K = Expr::Kind;
  switch (e.kind) {
  case K::var: {
    auto it = env.find(e.name);
    if (it == env.end())
      throw SortError("variable '" + e.name + "' is unbound");
    check_carrier(it->second, A);
    return it->second;
  }
  case K::diagonal:
    return BinRel::diagonal(A.size());
  case K::full:
    return BinRel::full(A.size());
  case K::join:
    return rel_plus(evaluate(A, env, e.args[0]), evaluate(A, env, e.args[1]));
  case K::unite:
    return evaluate(A, env, e.args[0]) | evaluate(A, env, e.args[1]);
  case K::compose:
    return compose(evaluate(A, env, e.args[0]), evaluate(A, env, e.args[1]));
  case K::meet:
    return evaluate(A, env, e.args[0]) & evaluate(A, env, e.args[1]);
  case K::star:
    return transitive_closure(evaluate(A, env, e.args[0]));
  case K::converse:
    return converse(evaluate(A, env, e.args[0]));
  case K::closure:
    return compatible_closure(evaluate(A, env, e.args[0]), A);
  case K::cg:
    return cg(evaluate(A, env, e.args[0]), A).to_relation();
  }
  throw Error("unknown expression kind");
}

/// Throws SortError unless every quantified variable is bound to a value of
/// its declared sort.
inline void check_sorts(const FiniteAlgebra &A, const Statement &s, const Environment &env) {
  for (const auto &q : s.quantifiers) {
    auto it = env.find(q.name);
    if (it == env.end())
      throw SortError("variable '" + q.name + "' is unbound");
    check_carrier(it->second, A);
    const auto flags = classify(it->second, A);
    const bool ok = q.sort == Sort::cong ? flags.is_congruence
                    : q.sort == Sort::tol ? flags.is_tolerance
                                          : flags.reflexive;
    if (!ok)
      throw SortError("'" + q.name + "' is not of sort " + to_string(q.sort));
  }
}

/// Evaluates both sides under env (sorts are not rechecked). Returns a
/// violation when the claim fails.
inline std::optional<Violation> check_instance(const FiniteAlgebra &A, const Statement &s, const Environment &env) {
  const BinRel lhs = evaluate(A, env, s.lhs);
  const BinRel rhs = evaluate(A, env, s.rhs);
  std::optional<std::pair<std::size_t, std::size_t>> miss;
  std::string claim;
  if ((miss = lhs.first_missing_from(rhs))) {
    claim = print(s.lhs) + " <= " + print(s.rhs);
  } else if (s.relation == Relation::equal && (miss = rhs.first_missing_from(lhs))) {
    claim = print(s.rhs) + " <= " + print(s.lhs);
  } else {
    return std::nullopt;
  }
  Violation v;
  v.theorem = "statement";
  for (const auto &q : s.quantifiers)
    v.binding.emplace_back(q.name, env.at(q.name));
  v.missing_pair = *miss;
  v.failed_claim = std::move(claim);
  return v;
}

/// Iterates the quantifier domains: Cong over all congruences, Tol over the
/// tolerance domain, Refl jointly over the reflexive grid of the strategy.
/// Cong/Tol variables form the outer loops in declaration order, the Refl
/// grid the innermost one, matching the built-in sweeps.
inline CheckReport check_statement(const FiniteAlgebra &A, const Statement &s, const SweepOptions &opts) {
  const auto start = std::chrono::steady_clock::now();
  if (A.size() > opts.limits.max_size)
    throw BoundExceeded("statement checks limited to algebras of size " + std::to_string(opts.limits.max_size));
  std::mt19937_64 rng(opts.seed);

  std::vector<BinRel> congruences;
  std::vector<BinRel> tolerances;
  bool want_cong = false, want_tol = false;
  std::vector<std::string> refl_names;
  std::vector<const Quantifier *> outer;
  for (const auto &q : s.quantifiers) {
    if (q.sort == Sort::refl) {
      refl_names.push_back(q.name);
    } else {
      outer.push_back(&q);
      (q.sort == Sort::cong ? want_cong : want_tol) = true;
    }
  }
  if (want_cong)
    for (const auto &p : enumerate_congruences(A, opts.limits))
      congruences.push_back(p.to_relation());
  if (want_tol)
    tolerances = tolerance_domain(A, opts, rng);
  const auto grid = reflexive_grid(A.size(), refl_names.size(), opts.strategy, opts.samples, rng);

  std::vector<const std::vector<BinRel> *> domains;
  std::size_t outer_count = 1;
  for (const auto *q : outer) {
    domains.push_back(q->sort == Sort::cong ? &congruences : &tolerances);
    outer_count *= domains.back()->size();
  }
  const std::size_t total = outer_count * grid.size();

  auto partials = parallel_chunks<Tally>(total, 64, opts.jobs, [&](std::size_t lo, std::size_t hi) {
    Tally tally;
    for (std::size_t i = lo; i < hi; ++i) {
      Environment env;
      const auto &tuple = grid[i % grid.size()];
      for (std::size_t r = 0; r < refl_names.size(); ++r)
        env.emplace(refl_names[r], tuple[r]);
      std::size_t rest = i / grid.size();
      for (std::size_t d = domains.size(); d-- > 0;) {
        const auto &dom = *domains[d];
        env.emplace(outer[d]->name, dom[rest % dom.size()]);
        rest /= dom.size();
      }
      ++tally.instances;
      auto v = check_instance(A, s, env);
      if (v && tally.violations.size() < opts.max_violations)
        tally.violations.push_back(std::move(*v));
    }
    return tally;
  });
  Tally merged;
  for (auto &p : partials)
    merged.absorb(std::move(p), opts.max_violations);

  CheckReport rep;
  rep.algebra = A.name();
  rep.theorem = print(s);
  rep.instances_checked = merged.instances;
  rep.violations = std::move(merged.violations);
  rep.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  return rep;
}

/// Re-evaluates a violation produced by check_instance/check_statement.
/// Sorts are not rechecked: the binding is taken as given.
inline bool replay(const FiniteAlgebra &A, const Violation &v) {
  std::string text = "forall ";
  Environment env;
  for (std::size_t i = 0; i < v.binding.size(); ++i) {
    text += (i ? ", " : "") + v.binding[i].first + ":Refl";
    env.emplace(v.binding[i].first, v.binding[i].second);
  }
  text += " . " + v.failed_claim;
  const Statement s = parse(v.binding.empty() ? v.failed_claim : text);
  auto again = check_instance(A, s, env);
  return again && again->missing_pair == v.missing_pair && again->failed_claim == v.failed_claim;
}

} // namespace congrel::dsl

#endif // CONGREL_DSL_HPP
