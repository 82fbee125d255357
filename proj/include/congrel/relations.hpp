#ifndef CONGREL_RELATIONS_HPP
#define CONGREL_RELATIONS_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "algebra.hpp"
#include "binrel.hpp"
#include "error.hpp"
#include "partition.hpp"

namespace congrel {

inline BinRel diagonal(std::size_t n) { return BinRel::diagonal(n); }
inline BinRel full(std::size_t n) { return BinRel::full(n); }
inline BinRel unite(const BinRel &r, const BinRel &s) { return r | s; }
/// The meet written by juxtaposition.
inline BinRel intersect(const BinRel &r, const BinRel &s) { return r & s; }

inline BinRel converse(const BinRel &r) {
  BinRel out(r.size());
  r.for_each_pair([&](std::size_t a, std::size_t b) { out.set(b, a); });
  return out;
}

/// (a, c) iff a R b S c for some b.
inline BinRel compose(const BinRel &r, const BinRel &s) {
  r.check_same(s);
  BinRel out(r.size());
  for (std::size_t a = 0; a < r.size(); ++a)
    r.for_each_in_row(a, [&](std::size_t b) { out.or_row(a, s, b); });
  return out;
}

/// Bit-parallel Warshall.
inline BinRel transitive_closure(BinRel r) {
  const std::size_t n = r.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r.test(i, k))
        r.or_row(i, r, k);
  return r;
}

inline BinRel reflexive_closure(BinRel r) {
  for (std::size_t i = 0; i < r.size(); ++i)
    r.set(i, i);
  return r;
}

inline bool is_reflexive(const BinRel &r) {
  for (std::size_t i = 0; i < r.size(); ++i)
    if (!r.test(i, i))
      return false;
  return true;
}

inline bool is_symmetric(const BinRel &r) { return converse(r) == r; }

inline bool is_transitive(const BinRel &r) { return compose(r, r).is_subset_of(r); }

inline void check_carrier(const BinRel &r, const FiniteAlgebra &A) {
  if (r.size() != A.size())
    throw SizeMismatch(r.size(), A.size());
}

/// Least relation containing r that is a subuniverse of A x A.
inline BinRel compatible_closure(const BinRel &r, const FiniteAlgebra &A) {
  check_carrier(r, A);
  BinRel out = r;
  std::vector<std::pair<Element, Element>> list;
  auto add = [&](Element a, Element b) {
    if (!out.test(a, b)) {
      out.set(a, b);
      list.emplace_back(a, b);
    }
  };
  r.for_each_pair([&](std::size_t a, std::size_t b) {
    list.emplace_back(static_cast<Element>(a), static_cast<Element>(b));
  });
  for (std::size_t o = 0; o < A.operations().size(); ++o)
    if (A.operations()[o].arity == 0) {
      Element c = A.apply(o, {});
      add(c, c);
    }

  std::vector<Element> xs, ys;
  std::vector<std::size_t> tuple;
  for (std::size_t i = 0; i < list.size(); ++i) {
    for (std::size_t o = 0; o < A.operations().size(); ++o) {
      const std::size_t k = A.operations()[o].arity;
      xs.resize(k);
      ys.resize(k);
      detail::for_each_tuple_with_pivot(k, i, tuple, [&](std::span<const std::size_t> t) {
        for (std::size_t j = 0; j < k; ++j) {
          xs[j] = list[t[j]].first;
          ys[j] = list[t[j]].second;
        }
        add(A.apply(o, xs), A.apply(o, ys));
      });
    }
  }
  return out;
}

inline bool is_compatible(const BinRel &r, const FiniteAlgebra &A) {
  check_carrier(r, A);
  const auto list = r.pairs();
  std::vector<Element> xs, ys;
  for (std::size_t o = 0; o < A.operations().size(); ++o) {
    const std::size_t k = A.operations()[o].arity;
    xs.resize(k);
    ys.resize(k);
    bool ok = true;
    detail::for_each_tuple(k, list.size(), [&](std::span<const std::size_t> t) {
      if (!ok)
        return;
      for (std::size_t j = 0; j < k; ++j) {
        xs[j] = static_cast<Element>(list[t[j]].first);
        ys[j] = static_cast<Element>(list[t[j]].second);
      }
      ok = r.test(A.apply(o, xs), A.apply(o, ys));
    });
    if (!ok)
      return false;
  }
  return true;
}

/// R + S: the transitive closure of R u S. Both operands must be reflexive.
inline BinRel rel_plus(const BinRel &r, const BinRel &s) {
  r.check_same(s);
  if (!is_reflexive(r) || !is_reflexive(s))
    throw SortError("R + S requires reflexive operands");
  BinRel out = transitive_closure(r | s);
#ifndef NDEBUG
  if (out != transitive_closure(compose(r, s)))
    throw Error("internal: R + S differs from (R o S)*");
#endif
  return out;
}

enum class CgStrategy { formula, unionfind };

namespace detail {

/// Merges the images of (a, b) under every basic translation until stable.
inline Partition cg_unionfind(const BinRel &r, const FiniteAlgebra &A) {
  const std::size_t n = A.size();
  UnionFind uf(n);
  std::vector<std::pair<Element, Element>> pending;
  r.for_each_pair([&](std::size_t a, std::size_t b) {
    if (uf.unite(a, b))
      pending.emplace_back(static_cast<Element>(a), static_cast<Element>(b));
  });
  std::vector<Element> args;
  while (!pending.empty()) {
    auto [a, b] = pending.back();
    pending.pop_back();
    for (std::size_t o = 0; o < A.operations().size(); ++o) {
      const std::size_t k = A.operations()[o].arity;
      if (k == 0)
        continue;
      args.resize(k);
      for (std::size_t pos = 0; pos < k; ++pos) {
        // every translation f(c_0, .., x, .., c_{k-1}) with x at position pos
        detail::for_each_tuple(k - 1, n, [&](std::span<const std::size_t> rest) {
          for (std::size_t j = 0, q = 0; j < k; ++j)
            if (j != pos)
              args[j] = static_cast<Element>(rest[q++]);
          args[pos] = a;
          Element fa = A.apply(o, args);
          args[pos] = b;
          Element fb = A.apply(o, args);
          if (uf.unite(fa, fb))
            pending.emplace_back(fa, fb);
        });
      }
    }
  }
  return Partition::from_union_find(uf);
}

} // namespace detail

/// Least congruence of A containing r.
inline Partition cg(const BinRel &r, const FiniteAlgebra &A, CgStrategy strategy = CgStrategy::unionfind) {
  check_carrier(r, A);
  if (strategy == CgStrategy::unionfind)
    return detail::cg_unionfind(r, A);
  BinRel closed = compatible_closure(reflexive_closure(r), A);
  return Partition::from_relation(rel_plus(closed, converse(closed)));
}

struct RelationFlags {
  bool reflexive = false;
  bool symmetric = false;
  bool transitive = false;
  bool compatible = false;
  bool is_tolerance = false;
  bool is_congruence = false;

  friend bool operator==(const RelationFlags &, const RelationFlags &) = default;
};

inline RelationFlags classify(const BinRel &r, const FiniteAlgebra &A) {
  RelationFlags f;
  f.reflexive = is_reflexive(r);
  f.symmetric = is_symmetric(r);
  f.transitive = is_transitive(r);
  f.compatible = is_compatible(r, A);
  f.is_tolerance = f.reflexive && f.symmetric && f.compatible;
  f.is_congruence = f.is_tolerance && f.transitive;
  return f;
}

/// (p, q) related iff first(p) alpha first(q) and second(p) beta second(q).
inline BinRel product_relation(const BinRel &alpha, const BinRel &beta, const SubSquare &B) {
  if (alpha.size() != B.parent_size())
    throw SizeMismatch(alpha.size(), B.parent_size());
  if (beta.size() != B.parent_size())
    throw SizeMismatch(beta.size(), B.parent_size());
  const std::size_t m = B.size();
  BinRel out(m);
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = 0; q < m; ++q)
      if (alpha.test(B.first(p), B.first(q)) && beta.test(B.second(p), B.second(q)))
        out.set(p, q);
  return out;
}

inline BinRel product_relation(const Partition &alpha, const Partition &beta, const SubSquare &B) {
  return product_relation(alpha.to_relation(), beta.to_relation(), B);
}

/// All congruences of A, in canonical order (sorted by block labels).
inline std::vector<Partition> enumerate_congruences(const FiniteAlgebra &A, const Limits &limits = {}) {
  const std::size_t n = A.size();
  if (n > limits.max_congruence_universe())
    throw BoundExceeded("congruence enumeration limited to universes of size " +
                        std::to_string(limits.max_congruence_universe()));
  std::set<Partition> seen;
  std::vector<Partition> order;
  auto add = [&](Partition p) {
    if (seen.insert(p).second)
      order.push_back(std::move(p));
  };
  add(Partition::identity(n));
  std::vector<Partition> principals;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      BinRel gen(n);
      gen.set(a, b);
      Partition p = detail::cg_unionfind(gen, A);
      if (!seen.contains(p))
        principals.push_back(p);
      add(std::move(p));
    }
  // every congruence is a join of principal ones
  for (std::size_t i = 1; i < order.size(); ++i)
    for (const auto &p : principals) {
      Partition j = join(order[i], p);
      if (!seen.contains(j))
        add(std::move(j));
    }
  return {seen.begin(), seen.end()};
}

/// All tolerances of A: closures of the reflexive-symmetric relations
/// generated by every subset of off-diagonal pairs.
inline std::vector<BinRel> enumerate_tolerances(const FiniteAlgebra &A, const Limits &limits = {}) {
  const std::size_t n = A.size();
  if (n > 5 && !limits.allow_large_tolerance_sweep)
    throw BoundExceeded("tolerance enumeration is limited to size 5 without override");
  if (n > limits.max_size)
    throw BoundExceeded("tolerance enumeration limited to size " + std::to_string(limits.max_size));
  std::vector<std::pair<std::size_t, std::size_t>> off;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      off.emplace_back(a, b);
  std::set<BinRel> seen;
  const std::uint64_t subsets = std::uint64_t{1} << off.size();
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    BinRel g = BinRel::diagonal(n);
    for (std::size_t i = 0; i < off.size(); ++i)
      if ((mask >> i) & 1u) {
        g.set(off[i].first, off[i].second);
        g.set(off[i].second, off[i].first);
      }
    seen.insert(compatible_closure(g, A));
  }
  return {seen.begin(), seen.end()};
}

/// Uniform double in [0, 1) from the top 53 bits; portable across standard
/// libraries, unlike std::uniform_real_distribution.
inline double unit_interval(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t uniform_index(std::mt19937_64 &rng, std::size_t bound) {
  return static_cast<std::size_t>(unit_interval(rng) * static_cast<double>(bound));
}

inline BinRel random_reflexive(std::size_t n, double density, std::mt19937_64 &rng) {
  if (!(density >= 0.0 && density <= 1.0))
    throw InputError("density must lie in [0, 1]");
  BinRel r = BinRel::diagonal(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b && unit_interval(rng) < density)
        r.set(a, b);
  return r;
}

inline BinRel random_reflexive(std::size_t n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_reflexive(n, density, rng);
}

/// Every reflexive relation on n elements (2^(n^2-n) of them).
inline std::vector<BinRel> all_reflexive(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> off;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b)
        off.emplace_back(a, b);
  if (off.size() > 20)
    throw BoundExceeded("exhaustive reflexive enumeration limited to size 3");
  std::vector<BinRel> out;
  out.reserve(std::size_t{1} << off.size());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << off.size()); ++mask) {
    BinRel r = BinRel::diagonal(n);
    for (std::size_t i = 0; i < off.size(); ++i)
      if ((mask >> i) & 1u)
        r.set(off[i].first, off[i].second);
    out.push_back(std::move(r));
  }
  return out;
}

/// Diagonal plus the diagonal extended by each single off-diagonal pair.
inline std::vector<BinRel> principal_reflexive(std::size_t n) {
  std::vector<BinRel> out{BinRel::diagonal(n)};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b) {
        BinRel r = BinRel::diagonal(n);
        r.set(a, b);
        out.push_back(std::move(r));
      }
  return out;
}

// Relation literal: {"size": n, "pairs": [[a,b],...], "reflexive_close": bool}

inline BinRel relation_from_json(const nlohmann::json &doc) {
  if (!doc.is_object() || !doc.contains("size") || !doc["size"].is_number_integer() ||
      doc["size"].get<long long>() <= 0)
    throw InputError("relation literal needs a positive integer 'size'");
  const auto n = doc["size"].get<std::size_t>();
  BinRel r(n);
  if (doc.contains("pairs")) {
    if (!doc["pairs"].is_array())
      throw InputError("relation 'pairs' must be an array");
    for (const auto &p : doc["pairs"]) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
        throw InputError("relation pair must be [a, b]");
      long long a = p[0].get<long long>(), b = p[1].get<long long>();
      if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n)
        throw InputError("relation pair [" + std::to_string(a) + "," + std::to_string(b) + "] out of range");
      r.set(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    }
  }
  if (doc.value("reflexive_close", false))
    r = reflexive_closure(std::move(r));
  return r;
}

inline BinRel parse_relation(const std::string &text) {
  try {
    return relation_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("malformed relation literal: ") + e.what());
  }
}

inline nlohmann::ordered_json relation_to_json(const BinRel &r) {
  nlohmann::ordered_json doc;
  doc["size"] = r.size();
  auto pairs = nlohmann::ordered_json::array();
  r.for_each_pair([&](std::size_t a, std::size_t b) { pairs.push_back({a, b}); });
  doc["pairs"] = std::move(pairs);
  doc["reflexive_close"] = false;
  return doc;
}

} // namespace congrel

#endif // CONGREL_RELATIONS_HPP
