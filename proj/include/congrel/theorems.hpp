#ifndef CONGREL_THEOREMS_HPP
#define CONGREL_THEOREMS_HPP

#include <algorithm>
#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
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
#include "partition.hpp"
#include "relations.hpp"
#include "report.hpp"

namespace congrel {

/// Claim texts, written in the identity language so that a Violation's
/// failed_claim can be parsed back and replayed. Variable names: a is the
/// congruence alpha, R and S reflexive relations, T a tolerance.
namespace claims {

inline constexpr std::string_view hypothesis = "beta & (gamma ; delta ; gamma) <= beta & gamma + delta";
inline constexpr std::string_view modularity = "beta & (gamma + delta) = beta & gamma + delta";

inline constexpr std::string_view subrel = "a & (R ; S) <= a & cl(R | S^-) + a & cl(R^- | S)";

inline constexpr std::array<std::string_view, 3> subrelpiu = {
    "a & (R + S) <= a & cl(R | S^-) + a & cl(R^- | S)",
    "a & cl(R | S^-) + a & cl(R^- | S) = a & cl(R | S) + a & cl(R^- | S^-)",
    "a & cl(R | S) + a & cl(R^- | S^-) = a & (cg(R) + cg(S))",
};

inline constexpr std::string_view wtip = "a & T* = (a & T)*";

inline constexpr std::array<std::string_view, 3> rr = {
    "a & (R + R^-) <= a & (cl(R) + cl(R)^-)",
    "a & (cl(R) + cl(R)^-) = a & cl(R) + a & cl(R)^-",
    "a & cl(R) + a & cl(R)^- = a & cg(R)",
};

} // namespace claims

enum class Theorem { subrel, subrelpiu, wtip, rr };

inline constexpr std::array<Theorem, 4> all_theorems = {Theorem::subrel, Theorem::subrelpiu, Theorem::wtip,
                                                        Theorem::rr};

inline const char *to_string(Theorem t) {
  switch (t) {
  case Theorem::subrel:
    return "subrel";
  case Theorem::subrelpiu:
    return "subrelpiu";
  case Theorem::wtip:
    return "wtip";
  case Theorem::rr:
    return "rr";
  }
  return "?";
}

inline Theorem theorem_from_string(std::string_view s) {
  for (Theorem t : all_theorems)
    if (s == to_string(t))
      return t;
  throw InputError("unknown theorem '" + std::string(s) + "'");
}

/// The built-in theorems as quantified statements of the identity language.
/// A theorem holds on an instance iff every one of its statements does.
inline std::vector<std::string> theorem_statements(Theorem t) {
  const std::string binary = "forall a:Cong, R:Refl, S:Refl . ";
  switch (t) {
  case Theorem::subrel:
    return {binary + std::string(claims::subrel)};
  case Theorem::subrelpiu: {
    std::vector<std::string> out;
    for (auto c : claims::subrelpiu)
      out.push_back(binary + std::string(c));
    return out;
  }
  case Theorem::wtip:
    return {"forall a:Cong, T:Tol . " + std::string(claims::wtip)};
  case Theorem::rr: {
    std::vector<std::string> out;
    for (auto c : claims::rr)
      out.push_back("forall a:Cong, R:Refl . " + std::string(c));
    return out;
  }
  }
  return {};
}

namespace detail {

struct ClaimFailure {
  std::pair<std::size_t, std::size_t> missing;
  std::string claim;
};

inline std::pair<std::string, std::string> split_equality(std::string_view claim) {
  const auto pos = claim.find(" = ");
  return {std::string(claim.substr(0, pos)), std::string(claim.substr(pos + 3))};
}

inline std::optional<ClaimFailure> check_inclusion(const BinRel &lhs, const BinRel &rhs, std::string_view claim) {
  if (auto miss = lhs.first_missing_from(rhs))
    return ClaimFailure{*miss, std::string(claim)};
  return std::nullopt;
}

/// Equality checked as two inclusions; the failing one is named.
inline std::optional<ClaimFailure> check_equality(const BinRel &lhs, const BinRel &rhs, std::string_view claim) {
  auto [l, r] = split_equality(claim);
  if (auto miss = lhs.first_missing_from(rhs))
    return ClaimFailure{*miss, l + " <= " + r};
  if (auto miss = rhs.first_missing_from(lhs))
    return ClaimFailure{*miss, r + " <= " + l};
  return std::nullopt;
}

inline BinRel cg_relation(const BinRel &r, const FiniteAlgebra &A) { return cg(r, A).to_relation(); }

inline std::optional<ClaimFailure> eval_subrel(const FiniteAlgebra &A, const BinRel &alpha, const BinRel &R,
                                               const BinRel &S) {
  const BinRel lhs = alpha & compose(R, S);
  const BinRel rhs = rel_plus(alpha & compatible_closure(R | converse(S), A),
                              alpha & compatible_closure(converse(R) | S, A));
  return check_inclusion(lhs, rhs, claims::subrel);
}

inline std::optional<ClaimFailure> eval_subrelpiu(const FiniteAlgebra &A, const BinRel &alpha, const BinRel &R,
                                                  const BinRel &S) {
  const BinRel Rc = converse(R);
  const BinRel Sc = converse(S);
  const BinRel e0 = alpha & rel_plus(R, S);
  const BinRel e1 = rel_plus(alpha & compatible_closure(R | Sc, A), alpha & compatible_closure(Rc | S, A));
  const BinRel e2 = rel_plus(alpha & compatible_closure(R | S, A), alpha & compatible_closure(Rc | Sc, A));
  const BinRel e3 = alpha & rel_plus(cg_relation(R, A), cg_relation(S, A));
  if (auto f = check_inclusion(e0, e1, claims::subrelpiu[0]))
    return f;
  if (auto f = check_equality(e1, e2, claims::subrelpiu[1]))
    return f;
  return check_equality(e2, e3, claims::subrelpiu[2]);
}

inline std::optional<ClaimFailure> eval_wtip(const BinRel &alpha, const BinRel &theta) {
  const BinRel lhs = alpha & transitive_closure(theta);
  const BinRel rhs = transitive_closure(alpha & theta);
  return check_equality(lhs, rhs, claims::wtip);
}

inline std::optional<ClaimFailure> eval_rr(const FiniteAlgebra &A, const BinRel &alpha, const BinRel &R) {
  const BinRel closed = compatible_closure(R, A);
  const BinRel closed_c = converse(closed);
  const BinRel f0 = alpha & rel_plus(R, converse(R));
  const BinRel f1 = alpha & rel_plus(closed, closed_c);
  const BinRel f2 = rel_plus(alpha & closed, alpha & closed_c);
  const BinRel f3 = alpha & cg_relation(R, A);
  if (auto f = check_inclusion(f0, f1, claims::rr[0]))
    return f;
  if (auto f = check_equality(f1, f2, claims::rr[1]))
    return f;
  return check_equality(f2, f3, claims::rr[2]);
}

inline Violation make_violation(std::string theorem, std::vector<std::pair<std::string, BinRel>> binding,
                                ClaimFailure failure) {
  Violation v;
  v.theorem = std::move(theorem);
  v.binding = std::move(binding);
  v.missing_pair = failure.missing;
  v.failed_claim = std::move(failure.claim);
  return v;
}

inline void require_congruence(const BinRel &alpha, const FiniteAlgebra &A) {
  check_carrier(alpha, A);
  if (!classify(alpha, A).is_congruence)
    throw SortError("alpha is not a congruence of " + A.name());
}

inline void require_reflexive(const BinRel &r, const FiniteAlgebra &A, const char *name) {
  check_carrier(r, A);
  if (!is_reflexive(r))
    throw SortError(std::string(name) + " is not reflexive");
}

inline CheckReport single_report(const FiniteAlgebra &A, Theorem t, std::optional<Violation> v,
                                 std::chrono::steady_clock::time_point start) {
  CheckReport rep;
  rep.algebra = A.name();
  rep.theorem = to_string(t);
  rep.instances_checked = 1;
  if (v)
    rep.violations.push_back(std::move(*v));
  rep.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  return rep;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Single-instance verifiers

inline std::optional<Violation> subrel_instance(const FiniteAlgebra &A, const BinRel &alpha, const BinRel &R,
                                                const BinRel &S) {
  if (auto f = detail::eval_subrel(A, alpha, R, S))
    return detail::make_violation("subrel", {{"a", alpha}, {"R", R}, {"S", S}}, std::move(*f));
  return std::nullopt;
}

inline std::optional<Violation> subrelpiu_instance(const FiniteAlgebra &A, const BinRel &alpha, const BinRel &R,
                                                   const BinRel &S) {
  if (auto f = detail::eval_subrelpiu(A, alpha, R, S))
    return detail::make_violation("subrelpiu", {{"a", alpha}, {"R", R}, {"S", S}}, std::move(*f));
  return std::nullopt;
}

inline std::optional<Violation> wtip_instance(const BinRel &alpha, const BinRel &theta) {
  if (auto f = detail::eval_wtip(alpha, theta))
    return detail::make_violation("wtip", {{"a", alpha}, {"T", theta}}, std::move(*f));
  return std::nullopt;
}

inline std::optional<Violation> rr_instance(const FiniteAlgebra &A, const BinRel &alpha, const BinRel &R) {
  if (auto f = detail::eval_rr(A, alpha, R))
    return detail::make_violation("rr", {{"a", alpha}, {"R", R}}, std::move(*f));
  return std::nullopt;
}

/// alpha (R o S) <= alpha cl(R u S^-) + alpha cl(R^- u S).
inline CheckReport verify_subrel(const FiniteAlgebra &A, const Partition &alpha, const BinRel &R, const BinRel &S) {
  const auto start = std::chrono::steady_clock::now();
  const BinRel a = alpha.to_relation();
  detail::require_congruence(a, A);
  detail::require_reflexive(R, A, "R");
  detail::require_reflexive(S, A, "S");
  return detail::single_report(A, Theorem::subrel, subrel_instance(A, a, R, S), start);
}

/// The inclusion and both equalities for alpha(R + S); a violation names the
/// claim that failed.
inline CheckReport verify_subrelpiu(const FiniteAlgebra &A, const Partition &alpha, const BinRel &R,
                                    const BinRel &S) {
  const auto start = std::chrono::steady_clock::now();
  const BinRel a = alpha.to_relation();
  detail::require_congruence(a, A);
  detail::require_reflexive(R, A, "R");
  detail::require_reflexive(S, A, "S");
  return detail::single_report(A, Theorem::subrelpiu, subrelpiu_instance(A, a, R, S), start);
}

/// alpha theta* = (alpha theta)*, checked as two inclusions. The direction
/// (alpha theta)* <= alpha theta* holds in every algebra.
inline CheckReport verify_wtip(const FiniteAlgebra &A, const Partition &alpha, const BinRel &theta) {
  const auto start = std::chrono::steady_clock::now();
  const BinRel a = alpha.to_relation();
  detail::require_congruence(a, A);
  check_carrier(theta, A);
  if (!classify(theta, A).is_tolerance)
    throw SortError("theta is not a tolerance of " + A.name());
  return detail::single_report(A, Theorem::wtip, wtip_instance(a, theta), start);
}

inline CheckReport verify_rr(const FiniteAlgebra &A, const Partition &alpha, const BinRel &R) {
  const auto start = std::chrono::steady_clock::now();
  const BinRel a = alpha.to_relation();
  detail::require_congruence(a, A);
  detail::require_reflexive(R, A, "R");
  return detail::single_report(A, Theorem::rr, rr_instance(A, a, R), start);
}

// ---------------------------------------------------------------------------
// Hypothesis and modularity over the 4-generated subalgebras of A x A

struct SubsquareCheckOptions {
  /// Cap on the number of generator 4-multisets visited.
  std::optional<std::size_t> seed_limit;
  std::size_t jobs = 1;
  std::size_t max_violations = 10;
  Limits limits{};
};

/// A distinct 4-generated subalgebra together with the first generator
/// multiset that produced it.
struct GeneratedSubsquare {
  std::array<std::pair<Element, Element>, 4> generators;
  SubSquare subsquare;
};

/// Every subalgebra of A x A generated by a 4-element multiset, deduplicated
/// by its (sorted) element set, in order of first discovery.
inline std::vector<GeneratedSubsquare> four_generated_subsquares(const FiniteAlgebra &A,
                                                                 std::optional<std::size_t> seed_limit = {}) {
  const std::size_t n = A.size();
  const std::size_t m = n * n;
  const FiniteAlgebra sq = square(A);
  std::map<std::vector<Element>, std::size_t> seen;
  std::vector<GeneratedSubsquare> out;
  std::size_t visited = 0;
  auto as_pair = [n](std::size_t code) {
    return std::pair{static_cast<Element>(code / n), static_cast<Element>(code % n)};
  };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j)
      for (std::size_t k = j; k < m; ++k)
        for (std::size_t l = k; l < m; ++l) {
          if (seed_limit && visited >= *seed_limit)
            return out;
          ++visited;
          std::array<std::pair<Element, Element>, 4> gens{as_pair(i), as_pair(j), as_pair(k), as_pair(l)};
          SubSquare B = generate_subsquare(A, sq, gens);
          auto key = B.subuniverse().sorted_elements();
          if (seen.emplace(std::move(key), out.size()).second)
            out.push_back({gens, std::move(B)});
        }
  return out;
}

namespace detail {

enum class SubsquareLaw { hypothesis, modularity };

inline Tally check_subsquare(const GeneratedSubsquare &g, SubsquareLaw law, const Limits &limits) {
  const FiniteAlgebra &B = g.subsquare.induced();
  const auto congs = enumerate_congruences(B, limits);
  std::vector<BinRel> rels;
  rels.reserve(congs.size());
  for (const auto &c : congs)
    rels.push_back(c.to_relation());

  Tally tally;
  auto record = [&](std::size_t b, std::size_t gm, std::size_t d, ClaimFailure f) {
    Violation v = make_violation(law == SubsquareLaw::hypothesis ? "hypothesis" : "modularity",
                                 {{"beta", rels[b]}, {"gamma", rels[gm]}, {"delta", rels[d]}}, std::move(f));
    v.generators.assign(g.generators.begin(), g.generators.end());
    tally.violations.push_back(std::move(v));
  };

  for (std::size_t gm = 0; gm < congs.size(); ++gm)
    for (std::size_t d = 0; d < congs.size(); ++d) {
      BinRel gdg;
      if (law == SubsquareLaw::hypothesis)
        gdg = compose(compose(rels[gm], rels[d]), rels[gm]);
      const Partition gd_join = join(congs[gm], congs[d]);
      for (std::size_t b = 0; b < congs.size(); ++b) {
        if (!congs[d].refines(congs[b]))
          continue;
        ++tally.instances;
        const Partition rhs = join(meet(congs[b], congs[gm]), congs[d]);
        if (law == SubsquareLaw::hypothesis) {
          const BinRel lhs = rels[b] & gdg;
          if (auto f = check_inclusion(lhs, rhs.to_relation(), claims::hypothesis)) {
            record(b, gm, d, std::move(*f));
            return tally;
          }
        } else {
          const Partition lhs = meet(congs[b], gd_join);
          if (lhs != rhs) {
            auto f = check_equality(lhs.to_relation(), rhs.to_relation(), claims::modularity);
            record(b, gm, d, std::move(*f));
            return tally;
          }
        }
      }
    }
  return tally;
}

inline CheckReport check_subsquares(const FiniteAlgebra &A, SubsquareLaw law, const SubsquareCheckOptions &opts) {
  const auto start = std::chrono::steady_clock::now();
  if (A.size() > opts.limits.max_size)
    throw BoundExceeded("subsquare checks limited to algebras of size " + std::to_string(opts.limits.max_size) +
                        " (set CONGREL_MAX_SIZE to override)");
  const auto subs = four_generated_subsquares(A, opts.seed_limit);
  auto partials = parallel_chunks<Tally>(subs.size(), 4, opts.jobs, [&](std::size_t lo, std::size_t hi) {
    Tally t;
    for (std::size_t i = lo; i < hi; ++i)
      t.absorb(check_subsquare(subs[i], law, opts.limits), opts.max_violations);
    return t;
  });
  Tally total;
  for (auto &p : partials)
    total.absorb(std::move(p), opts.max_violations);

  CheckReport rep;
  rep.algebra = A.name();
  rep.theorem = law == SubsquareLaw::hypothesis ? "hypothesis" : "modularity";
  rep.instances_checked = total.instances;
  rep.violations = std::move(total.violations);
  rep.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  return rep;
}

} // namespace detail

/// For every 4-generated B <= A x A and congruences beta, gamma, delta of B
/// with delta <= beta: beta(gamma o delta o gamma) <= beta gamma + delta.
/// Counts one instance per (B, beta, gamma, delta); stops at the first
/// violation within each B.
inline CheckReport check_hypothesis(const FiniteAlgebra &A, const SubsquareCheckOptions &opts = {}) {
  return detail::check_subsquares(A, detail::SubsquareLaw::hypothesis, opts);
}

/// The modular law on the congruence lattice of every 4-generated B <= A x A.
inline CheckReport check_modularity_subsquares(const FiniteAlgebra &A, const SubsquareCheckOptions &opts = {}) {
  return detail::check_subsquares(A, detail::SubsquareLaw::modularity, opts);
}

// ---------------------------------------------------------------------------
// Witness chains

/// Even links move the second coordinate inside an alpha-class, odd links
/// the first.
enum class LinkKind { y_step, x_step };

struct WitnessChain {
  std::array<std::pair<Element, Element>, 4> generators;
  SubSquare subsquare;
  std::vector<std::size_t> positions; ///< (x_i, y_i) as positions in the subsquare
  std::vector<LinkKind> links;        ///< links[i] joins positions[i] and positions[i+1]

  std::size_t length() const noexcept { return links.size(); }
  Element x(std::size_t i) const noexcept { return subsquare.first(positions[i]); }
  Element y(std::size_t i) const noexcept { return subsquare.second(positions[i]); }
};

struct WitnessOutcome {
  std::optional<WitnessChain> chain;
  /// Set when (a,a) and (c,c) are not connected, i.e. the hypothesis fails
  /// on the generated subalgebra.
  std::string diagnostic;

  bool found() const noexcept { return chain.has_value(); }
};

namespace detail {

inline bool y_link(const SubSquare &B, const Partition &alpha, std::size_t p, std::size_t q) {
  return B.first(p) == B.first(q) && alpha.related(B.second(p), B.second(q));
}

inline bool x_link(const SubSquare &B, const Partition &alpha, std::size_t p, std::size_t q) {
  return alpha.related(B.first(p), B.first(q)) && B.second(p) == B.second(q);
}

} // namespace detail

/// Builds B = Sg((a,a), (a,b), (c,b), (c,c)) in A x A and an alternating
/// chain from (a,a) to (c,c) in (0 x alpha)|B + (alpha x 0)|B.
inline WitnessOutcome witness_chain(const FiniteAlgebra &A, const Partition &alpha, Element a, Element b, Element c,
                                    const BinRel &R, const BinRel &S) {
  const std::size_t n = A.size();
  if (alpha.size() != n)
    throw SizeMismatch(alpha.size(), n);
  check_carrier(R, A);
  check_carrier(S, A);
  if (a >= n || b >= n || c >= n)
    throw InputError("a, b, c must lie in the universe");
  if (!alpha.related(a, c))
    throw SortError("witness chain needs a alpha c");
  if (!R.test(a, b) || !S.test(b, c))
    throw SortError("witness chain needs a R b and b S c");

  WitnessChain chain;
  chain.generators = {std::pair{a, a}, std::pair{a, b}, std::pair{c, b}, std::pair{c, c}};
  chain.subsquare = generate_subsquare(A, chain.generators);
  const SubSquare &B = chain.subsquare;
  const std::size_t m = B.size();
  const std::size_t source = B.index_of(a, a);
  const std::size_t target = B.index_of(c, c);

  std::vector<std::size_t> parent(m, Subuniverse::npos);
  std::vector<LinkKind> via(m, LinkKind::y_step);
  std::queue<std::size_t> queue;
  parent[source] = source;
  queue.push(source);
  while (!queue.empty() && parent[target] == Subuniverse::npos) {
    const std::size_t p = queue.front();
    queue.pop();
    for (std::size_t q = 0; q < m; ++q) {
      if (parent[q] != Subuniverse::npos)
        continue;
      if (detail::y_link(B, alpha, p, q))
        via[q] = LinkKind::y_step;
      else if (detail::x_link(B, alpha, p, q))
        via[q] = LinkKind::x_step;
      else
        continue;
      parent[q] = p;
      queue.push(q);
    }
  }
  if (parent[target] == Subuniverse::npos) {
    WitnessOutcome out;
    out.diagnostic = "(" + std::to_string(a) + "," + std::to_string(a) + ") and (" + std::to_string(c) + "," +
                     std::to_string(c) + ") are not connected by (0 x alpha)|B + (alpha x 0)|B: the hypothesis "
                     "fails on this subalgebra";
    return out;
  }

  std::vector<std::size_t> path;
  std::vector<LinkKind> kinds;
  for (std::size_t p = target; p != source; p = parent[p]) {
    path.push_back(p);
    kinds.push_back(via[p]);
  }
  path.push_back(source);
  std::reverse(path.begin(), path.end());
  std::reverse(kinds.begin(), kinds.end());

  // strict alternation starting with a y-step; a stationary link of the
  // missing kind is inserted wherever the BFS path repeats a kind
  chain.positions.push_back(path.front());
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    const LinkKind expected = chain.links.size() % 2 == 0 ? LinkKind::y_step : LinkKind::x_step;
    if (kinds[i] != expected) {
      chain.links.push_back(expected);
      chain.positions.push_back(path[i]);
    }
    chain.links.push_back(kinds[i]);
    chain.positions.push_back(path[i + 1]);
  }
  return WitnessOutcome{std::move(chain), {}};
}

/// Re-checks every property of a witness chain from scratch. Returns a
/// description of the first broken property, or nullopt when all hold.
inline std::optional<std::string> validate_chain(const FiniteAlgebra &A, const Partition &alpha, const BinRel &R,
                                                 const BinRel &S, Element a, Element c, const WitnessChain &chain) {
  const SubSquare &B = chain.subsquare;
  if (chain.positions.empty() || chain.positions.size() != chain.links.size() + 1)
    return "malformed chain";
  for (std::size_t p : chain.positions)
    if (p >= B.size())
      return "chain leaves the subalgebra";
  const std::size_t len = chain.length();
  if (chain.x(0) != a || chain.y(0) != a)
    return "chain does not start at (a,a)";
  if (chain.x(len) != c || chain.y(len) != c)
    return "chain does not end at (c,c)";

  for (std::size_t i = 0; i < len; ++i) {
    const LinkKind expected = i % 2 == 0 ? LinkKind::y_step : LinkKind::x_step;
    if (chain.links[i] != expected)
      return "link " + std::to_string(i) + " breaks alternation";
    const bool ok = expected == LinkKind::y_step
                        ? chain.x(i) == chain.x(i + 1) && alpha.related(chain.y(i), chain.y(i + 1))
                        : alpha.related(chain.x(i), chain.x(i + 1)) && chain.y(i) == chain.y(i + 1);
    if (!ok)
      return "link " + std::to_string(i) + " is not a step of its kind";
  }

  for (std::size_t i = 0; i <= len; ++i)
    for (std::size_t j = 0; j <= len; ++j)
      if (!alpha.related(chain.x(i), chain.y(j)))
        return "x_" + std::to_string(i) + " and y_" + std::to_string(j) + " not alpha-related";

  const BinRel al = alpha.to_relation();
  const BinRel omega = compatible_closure(R | converse(S), A);
  for (std::size_t i = 0; i <= len; ++i)
    if (!omega.test(chain.x(i), chain.y(i)))
      return "(x_" + std::to_string(i) + ", y_" + std::to_string(i) + ") outside cl(R | S^-)";

  // walk a = x_1, y_1 = y_2, x_2 = x_3, ... alternating alpha cl(R|S^-) and
  // alpha cl(R^-|S) steps
  const BinRel forward = al & omega;
  const BinRel backward = al & compatible_closure(converse(R) | S, A);
  Element current = a;
  for (std::size_t i = 1; i <= len; ++i) {
    if (i % 2 == 1) {
      if (current != chain.x(i) || !forward.test(chain.x(i), chain.y(i)))
        return "zigzag step " + std::to_string(i) + " fails";
      current = chain.y(i);
    } else {
      if (current != chain.y(i) || !backward.test(chain.y(i), chain.x(i)))
        return "zigzag step " + std::to_string(i) + " fails";
      current = chain.x(i);
    }
  }
  if (current != c)
    return "zigzag does not reach c";
  if (!rel_plus(forward, backward).test(a, c))
    return "(a,c) not in alpha cl(R | S^-) + alpha cl(R^- | S)";
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Quantifier sweeps

enum class Strategy { exhaust, principal, sample };

inline const char *to_string(Strategy s) {
  switch (s) {
  case Strategy::exhaust:
    return "exhaust";
  case Strategy::principal:
    return "principal";
  case Strategy::sample:
    return "sample";
  }
  return "?";
}

inline Strategy strategy_from_string(std::string_view s) {
  for (Strategy st : {Strategy::exhaust, Strategy::principal, Strategy::sample})
    if (s == to_string(st))
      return st;
  throw InputError("unknown strategy '" + std::string(s) + "'");
}

struct SweepOptions {
  Strategy strategy = Strategy::principal;
  /// Random tuples added by the principal and sample strategies.
  std::size_t samples = 1000;
  std::uint64_t seed = 7;
  std::size_t jobs = 1;
  std::size_t max_violations = 10;
  Limits limits{};
};

/// A seeded random reflexive relation with a density drawn uniformly.
inline BinRel sample_reflexive(std::size_t n, std::mt19937_64 &rng) {
  const double density = unit_interval(rng);
  return random_reflexive(n, density, rng);
}

/// Tuples of `arity` reflexive relations on n elements:
///   exhaust   - every tuple of reflexive relations (n <= 3),
///   principal - every tuple of principal relations, then `samples` random tuples,
///   sample    - `samples` random tuples.
/// Random tuples draw their components left to right from rng.
inline std::vector<std::vector<BinRel>> reflexive_grid(std::size_t n, std::size_t arity, Strategy strategy,
                                                       std::size_t samples, std::mt19937_64 &rng) {
  std::vector<std::vector<BinRel>> out;
  if (arity == 0) {
    out.emplace_back();
    return out;
  }
  if (strategy == Strategy::exhaust && n > 3)
    throw BoundExceeded("strategy exhaust is limited to algebras of size <= 3");
  if (strategy != Strategy::sample) {
    const auto domain = strategy == Strategy::exhaust ? all_reflexive(n) : principal_reflexive(n);
    detail::for_each_tuple(arity, domain.size(), [&](std::span<const std::size_t> t) {
      std::vector<BinRel> tuple;
      tuple.reserve(arity);
      for (std::size_t i : t)
        tuple.push_back(domain[i]);
      out.push_back(std::move(tuple));
    });
  }
  if (strategy != Strategy::exhaust)
    for (std::size_t s = 0; s < samples; ++s) {
      std::vector<BinRel> tuple;
      for (std::size_t i = 0; i < arity; ++i)
        tuple.push_back(sample_reflexive(n, rng));
      out.push_back(std::move(tuple));
    }
  return out;
}

/// The tolerance quantifier domain: all tolerances when enumerable, else
/// closures of principal and sampled symmetric generators.
inline std::vector<BinRel> tolerance_domain(const FiniteAlgebra &A, const SweepOptions &opts, std::mt19937_64 &rng) {
  const std::size_t n = A.size();
  if (n <= 5 || opts.limits.allow_large_tolerance_sweep)
    return enumerate_tolerances(A, opts.limits);
  std::set<BinRel> seen;
  for (const auto &r : principal_reflexive(n))
    seen.insert(compatible_closure(r | converse(r), A));
  for (std::size_t s = 0; s < opts.samples; ++s) {
    BinRel r = sample_reflexive(n, rng);
    seen.insert(compatible_closure(r | converse(r), A));
  }
  return {seen.begin(), seen.end()};
}

/// Runs one built-in theorem over its quantifier grid: every congruence
/// alpha (outer loop) against every relation tuple (inner loop).
inline CheckReport sweep_theorem(const FiniteAlgebra &A, Theorem t, const SweepOptions &opts) {
  const auto start = std::chrono::steady_clock::now();
  if (A.size() > opts.limits.max_size)
    throw BoundExceeded("sweeps limited to algebras of size " + std::to_string(opts.limits.max_size));
  const std::size_t n = A.size();
  std::mt19937_64 rng(opts.seed);
  std::vector<BinRel> alphas;
  for (const auto &p : enumerate_congruences(A, opts.limits))
    alphas.push_back(p.to_relation());

  std::vector<std::vector<BinRel>> tuples;
  if (t == Theorem::wtip) {
    for (auto &theta : tolerance_domain(A, opts, rng))
      tuples.push_back({std::move(theta)});
  } else {
    tuples = reflexive_grid(n, t == Theorem::rr ? 1 : 2, opts.strategy, opts.samples, rng);
  }

  const std::size_t total = alphas.size() * tuples.size();
  auto partials = parallel_chunks<Tally>(total, 64, opts.jobs, [&](std::size_t lo, std::size_t hi) {
    Tally tally;
    for (std::size_t i = lo; i < hi; ++i) {
      const BinRel &alpha = alphas[i / tuples.size()];
      const auto &tuple = tuples[i % tuples.size()];
      std::optional<Violation> v;
      switch (t) {
      case Theorem::subrel:
        v = subrel_instance(A, alpha, tuple[0], tuple[1]);
        break;
      case Theorem::subrelpiu:
        v = subrelpiu_instance(A, alpha, tuple[0], tuple[1]);
        break;
      case Theorem::wtip:
        v = wtip_instance(alpha, tuple[0]);
        break;
      case Theorem::rr:
        v = rr_instance(A, alpha, tuple[0]);
        break;
      }
      ++tally.instances;
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
  rep.theorem = to_string(t);
  rep.instances_checked = merged.instances;
  rep.violations = std::move(merged.violations);
  rep.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  return rep;
}

/// All four theorems; each report is handed to on_report as soon as it is done.
inline std::vector<CheckReport> sweep(const FiniteAlgebra &A, const SweepOptions &opts,
                                      const std::function<void(const CheckReport &)> &on_report = {}) {
  std::vector<CheckReport> out;
  for (Theorem t : all_theorems) {
    out.push_back(sweep_theorem(A, t, opts));
    if (on_report)
      on_report(out.back());
  }
  return out;
}

/// Samples (alpha, R, S, theta) instances round-robin over the four
/// theorems and returns the first violation found within budget.
inline std::optional<Violation> search_counterexample(const FiniteAlgebra &A, std::size_t budget, std::uint64_t seed,
                                                      const Limits &limits = {}) {
  if (A.size() > limits.max_size)
    throw BoundExceeded("search limited to algebras of size " + std::to_string(limits.max_size));
  const std::size_t n = A.size();
  std::mt19937_64 rng(seed);
  std::vector<BinRel> alphas;
  for (const auto &p : enumerate_congruences(A, limits))
    alphas.push_back(p.to_relation());
  SweepOptions tol_opts;
  tol_opts.limits = limits;
  tol_opts.samples = 100;
  const auto tolerances = tolerance_domain(A, tol_opts, rng);

  for (std::size_t i = 0; i < budget; ++i) {
    const Theorem t = all_theorems[i % all_theorems.size()];
    const BinRel &alpha = alphas[uniform_index(rng, alphas.size())];
    std::optional<Violation> v;
    switch (t) {
    case Theorem::subrel: {
      BinRel R = sample_reflexive(n, rng);
      BinRel S = sample_reflexive(n, rng);
      v = subrel_instance(A, alpha, R, S);
      break;
    }
    case Theorem::subrelpiu: {
      BinRel R = sample_reflexive(n, rng);
      BinRel S = sample_reflexive(n, rng);
      v = subrelpiu_instance(A, alpha, R, S);
      break;
    }
    case Theorem::wtip:
      v = wtip_instance(alpha, tolerances[uniform_index(rng, tolerances.size())]);
      break;
    case Theorem::rr:
      v = rr_instance(A, alpha, sample_reflexive(n, rng));
      break;
    }
    if (v)
      return v;
  }
  return std::nullopt;
}

/// Re-evaluates a recorded violation of a built-in check. Returns true when
/// the failure is reproduced with the same missing pair and claim.
inline bool replay(const FiniteAlgebra &A, const Violation &v) {
  auto get = [&](const char *name) -> const BinRel & {
    const BinRel *r = v.find(name);
    if (!r)
      throw InputError(std::string("binding lacks ") + name);
    return *r;
  };
  std::optional<Violation> again;
  if (v.theorem == "hypothesis" || v.theorem == "modularity") {
    GeneratedSubsquare g;
    if (v.generators.size() != 4)
      throw InputError("subsquare violation needs four generators");
    std::copy(v.generators.begin(), v.generators.end(), g.generators.begin());
    g.subsquare = generate_subsquare(A, g.generators);
    const auto beta = Partition::from_relation(get("beta"));
    const auto gamma = Partition::from_relation(get("gamma"));
    const auto delta = Partition::from_relation(get("delta"));
    const FiniteAlgebra &B = g.subsquare.induced();
    for (const auto *p : {&beta, &gamma, &delta})
      if (p->size() != B.size() || !classify(p->to_relation(), B).is_congruence)
        return false;
    if (!delta.refines(beta))
      return false;
    std::optional<detail::ClaimFailure> f;
    const Partition rhs = join(meet(beta, gamma), delta);
    if (v.theorem == "hypothesis") {
      const BinRel lhs = get("beta") & compose(compose(get("gamma"), get("delta")), get("gamma"));
      f = detail::check_inclusion(lhs, rhs.to_relation(), claims::hypothesis);
    } else {
      f = detail::check_equality(meet(beta, join(gamma, delta)).to_relation(), rhs.to_relation(),
                                 claims::modularity);
    }
    return f && f->missing == v.missing_pair && f->claim == v.failed_claim;
  }
  const Theorem t = theorem_from_string(v.theorem);
  const BinRel &alpha = get("a");
  switch (t) {
  case Theorem::subrel:
    again = subrel_instance(A, alpha, get("R"), get("S"));
    break;
  case Theorem::subrelpiu:
    again = subrelpiu_instance(A, alpha, get("R"), get("S"));
    break;
  case Theorem::wtip:
    again = wtip_instance(alpha, get("T"));
    break;
  case Theorem::rr:
    again = rr_instance(A, alpha, get("R"));
    break;
  }
  return again && again->missing_pair == v.missing_pair && again->failed_claim == v.failed_claim;
}

} // namespace congrel

#endif // CONGREL_THEOREMS_HPP
