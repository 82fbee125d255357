#ifndef CONGREL_CORPUS_HPP
#define CONGREL_CORPUS_HPP

#include <cstddef>
#include <array>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "algebra.hpp"
#include "error.hpp"

namespace congrel::corpus {

namespace detail {

inline Operation binary(std::string name, std::size_t n, const std::function<Element(Element, Element)> &f) {
  Operation op{std::move(name), 2, {}};
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      op.table.push_back(f(a, b));
  return op;
}

inline void require(bool ok, const std::string &what) {
  if (!ok)
    throw Error("built-in algebra fails axiom: " + what);
}

inline void check_semigroup(const FiniteAlgebra &A, std::size_t op, bool commutative) {
  const std::size_t n = A.size();
  auto f = [&](Element a, Element b) { return A.apply(op, std::array<Element, 2>{a, b}); };
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      if (commutative)
        require(f(a, b) == f(b, a), A.name() + " commutativity");
      for (Element c = 0; c < n; ++c)
        require(f(f(a, b), c) == f(a, f(b, c)), A.name() + " associativity");
    }
}

inline void check_group(const FiniteAlgebra &A) {
  check_semigroup(A, 0, true);
  // identity 0 and inverses
  for (Element a = 0; a < A.size(); ++a) {
    require(A.apply(0, std::array<Element, 2>{0, a}) == a, A.name() + " identity");
    bool has_inverse = false;
    for (Element b = 0; b < A.size(); ++b)
      has_inverse = has_inverse || A.apply(0, std::array<Element, 2>{a, b}) == 0;
    require(has_inverse, A.name() + " inverses");
  }
}

inline void check_lattice(const FiniteAlgebra &A) {
  check_semigroup(A, 0, true);
  check_semigroup(A, 1, true);
  for (Element a = 0; a < A.size(); ++a)
    for (Element b = 0; b < A.size(); ++b) {
      const Element m = A.apply(0, std::array<Element, 2>{a, b});
      const Element j = A.apply(1, std::array<Element, 2>{a, b});
      require(A.apply(1, std::array<Element, 2>{a, m}) == a, A.name() + " absorption");
      require(A.apply(0, std::array<Element, 2>{a, j}) == a, A.name() + " absorption");
    }
}

/// Meet/join reduct of the lattice given by its order relation.
inline FiniteAlgebra lattice(std::string name, std::size_t n, const std::function<bool(Element, Element)> &leq) {
  auto bound = [&](Element a, Element b, bool lower) {
    for (Element x = 0; x < n; ++x) {
      const bool is_bound = lower ? leq(x, a) && leq(x, b) : leq(a, x) && leq(b, x);
      if (!is_bound)
        continue;
      bool extreme = true;
      for (Element y = 0; y < n && extreme; ++y) {
        const bool y_bound = lower ? leq(y, a) && leq(y, b) : leq(a, y) && leq(b, y);
        if (y_bound)
          extreme = lower ? leq(y, x) : leq(x, y);
      }
      if (extreme)
        return x;
    }
    throw Error(name + " is not a lattice");
  };
  FiniteAlgebra A(name, n,
                  {binary("meet", n, [&](Element a, Element b) { return bound(a, b, true); }),
                   binary("join", n, [&](Element a, Element b) { return bound(a, b, false); })});
  check_lattice(A);
  return A;
}

inline FiniteAlgebra cyclic(std::string name, std::size_t n) {
  FiniteAlgebra A(std::move(name), n,
                  {binary("add", n, [n](Element a, Element b) { return static_cast<Element>((a + b) % n); })});
  check_group(A);
  return A;
}

inline bool covers_upto(Element a, Element b, std::initializer_list<std::pair<Element, Element>> strict) {
  if (a == b)
    return true;
  for (auto [x, y] : strict)
    if (x == a && y == b)
      return true;
  return false;
}

} // namespace detail

inline FiniteAlgebra trivial() { return FiniteAlgebra("trivial", 1, {}); }

inline FiniteAlgebra pure_set(std::size_t n) { return FiniteAlgebra("pureset" + std::to_string(n), n, {}); }

inline FiniteAlgebra z2() { return detail::cyclic("z2", 2); }
inline FiniteAlgebra z4() { return detail::cyclic("z4", 4); }

inline FiniteAlgebra z2xz2() {
  FiniteAlgebra A("z2xz2", 4, {detail::binary("add", 4, [](Element a, Element b) { return a ^ b; })});
  detail::check_group(A);
  return A;
}

/// Two-element lattice 0 < 1.
inline FiniteAlgebra bool2() {
  return detail::lattice("bool2", 2, [](Element a, Element b) { return a <= b; });
}

/// Four-element Boolean lattice: 0 < 1, 2 < 3.
inline FiniteAlgebra bool4() {
  return detail::lattice("bool4", 4, [](Element a, Element b) { return (a & b) == a; });
}

/// Pentagon: 0 < 1 < 2 < 4 and 0 < 3 < 4.
inline FiniteAlgebra n5() {
  return detail::lattice("n5", 5, [](Element a, Element b) {
    return detail::covers_upto(a, b, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 4}, {2, 4}, {3, 4}});
  });
}

/// Diamond: 0 < 1, 2, 3 < 4.
inline FiniteAlgebra m3() {
  return detail::lattice("m3", 5, [](Element a, Element b) {
    return detail::covers_upto(a, b, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 4}, {2, 4}, {3, 4}});
  });
}

inline std::vector<std::string> names() {
  return {"trivial", "pureset2", "pureset3", "pureset4", "z2", "z4", "z2xz2", "bool2", "bool4", "n5", "m3"};
}

inline FiniteAlgebra builtin(std::string_view name) {
  if (name == "trivial")
    return trivial();
  if (name == "pureset2")
    return pure_set(2);
  if (name == "pureset3")
    return pure_set(3);
  if (name == "pureset4")
    return pure_set(4);
  if (name == "z2")
    return z2();
  if (name == "z4")
    return z4();
  if (name == "z2xz2")
    return z2xz2();
  if (name == "bool2")
    return bool2();
  if (name == "bool4")
    return bool4();
  if (name == "n5")
    return n5();
  if (name == "m3")
    return m3();
  throw InputError("unknown builtin '" + std::string(name) + "'");
}

inline std::vector<FiniteAlgebra> all() {
  std::vector<FiniteAlgebra> out;
  for (const auto &n : names())
    out.push_back(builtin(n));
  return out;
}

} // namespace congrel::corpus

#endif // CONGREL_CORPUS_HPP
