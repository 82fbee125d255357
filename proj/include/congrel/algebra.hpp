#ifndef CONGREL_ALGEBRA_HPP
#define CONGREL_ALGEBRA_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"

namespace congrel {

using Element = std::uint32_t;

/// A k-ary operation table over {0..n-1}, row-major over argument tuples:
/// for arity 2 the entry for (a, b) sits at a*n + b.
struct Operation {
  std::string name;
  std::size_t arity = 0;
  std::vector<Element> table;
};

/// Size bounds for the exhaustive drivers.
struct Limits {
  std::size_t max_size = 6;
  bool allow_large_tolerance_sweep = false;

  /// Congruence enumeration runs on subalgebras of the square.
  std::size_t max_congruence_universe() const noexcept { return max_size * max_size; }

  /// Defaults, with CONGREL_MAX_SIZE overriding max_size when set.
  static Limits from_env() {
    Limits l;
    if (const char *v = std::getenv("CONGREL_MAX_SIZE")) {
      char *end = nullptr;
      unsigned long parsed = std::strtoul(v, &end, 10);
      if (end != v && *end == '\0' && parsed > 0)
        l.max_size = parsed;
    }
    return l;
  }
};

inline std::size_t checked_power(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (n != 0 && r > std::numeric_limits<std::uint32_t>::max() / n)
      throw InputError("operation table n^k too large");
    r *= n;
  }
  return r;
}

/// A finite algebra on {0..size-1}. Construction validates every table.
class FiniteAlgebra {
public:
  FiniteAlgebra() = default;

  FiniteAlgebra(std::string name, std::size_t size, std::vector<Operation> ops)
      : name_(std::move(name)), size_(size), ops_(std::move(ops)) {
    if (size_ == 0)
      throw InputError("algebra size must be positive");
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      auto &op = ops_[i];
      if (op.name.empty())
        op.name = "op" + std::to_string(i);
      const std::size_t expected = checked_power(size_, op.arity);
      if (op.table.size() != expected)
        throw InputError("operation '" + op.name + "': table length " + std::to_string(op.table.size()) +
                         " ≠ " + std::to_string(expected));
      for (std::size_t j = 0; j < op.table.size(); ++j)
        if (op.table[j] >= size_)
          throw InputError("operation '" + op.name + "': entry " + std::to_string(op.table[j]) +
                           " out of range at index " + std::to_string(j));
    }
  }

  const std::string &name() const noexcept { return name_; }
  std::size_t size() const noexcept { return size_; }
  std::span<const Operation> operations() const noexcept { return ops_; }

  /// Applies operation `op` to args (args.size() must equal its arity).
  Element apply(std::size_t op, std::span<const Element> args) const noexcept {
    const auto &o = ops_[op];
    std::size_t idx = 0;
    for (std::size_t i = 0; i < o.arity; ++i)
      idx = idx * size_ + args[i];
    return o.table[idx];
  }

  std::size_t max_arity() const noexcept {
    std::size_t k = 0;
    for (const auto &o : ops_)
      k = std::max(k, o.arity);
    return k;
  }

private:
  std::string name_;
  std::size_t size_ = 0;
  std::vector<Operation> ops_;
};

inline FiniteAlgebra algebra_from_json(const nlohmann::json &doc) {
  if (!doc.is_object())
    throw InputError("algebra document must be a JSON object");
  if (!doc.contains("size") || !doc["size"].is_number_integer() || doc["size"].get<long long>() <= 0)
    throw InputError("algebra 'size' must be a positive integer");
  const auto n = doc["size"].get<std::size_t>();
  std::string name = doc.value("name", std::string{});
  std::vector<Operation> ops;
  if (doc.contains("operations")) {
    if (!doc["operations"].is_array())
      throw InputError("'operations' must be an array");
    for (std::size_t i = 0; i < doc["operations"].size(); ++i) {
      const auto &o = doc["operations"][i];
      Operation op;
      op.name = o.is_object() ? o.value("name", std::string{}) : std::string{};
      const std::string label = op.name.empty() ? "#" + std::to_string(i) : "'" + op.name + "'";
      if (!o.is_object() || !o.contains("arity") || !o["arity"].is_number_integer() ||
          o["arity"].get<long long>() < 0)
        throw InputError("operation " + label + ": 'arity' must be a non-negative integer");
      if (!o.contains("table") || !o["table"].is_array())
        throw InputError("operation " + label + ": 'table' must be an array");
      op.arity = o["arity"].get<std::size_t>();
      const std::size_t expected = checked_power(n, op.arity);
      const auto &t = o["table"];
      if (t.size() != expected)
        throw InputError("operation " + label + ": table length " + std::to_string(t.size()) + " ≠ " +
                         std::to_string(expected));
      for (std::size_t j = 0; j < t.size(); ++j) {
        if (!t[j].is_number_integer())
          throw InputError("operation " + label + ": entry at index " + std::to_string(j) + " is not an integer");
        long long v = t[j].get<long long>();
        if (v < 0 || static_cast<std::size_t>(v) >= n)
          throw InputError("operation " + label + ": entry " + std::to_string(v) + " out of range at index " +
                           std::to_string(j));
        op.table.push_back(static_cast<Element>(v));
      }
      ops.push_back(std::move(op));
    }
  }
  return FiniteAlgebra(std::move(name), n, std::move(ops));
}

/// Parses the algebra file format.
inline FiniteAlgebra load_algebra(const std::string &text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw InputError(std::string("malformed algebra document: ") + e.what());
  }
  return algebra_from_json(doc);
}

inline nlohmann::ordered_json algebra_to_json(const FiniteAlgebra &a) {
  nlohmann::ordered_json doc;
  doc["name"] = a.name();
  doc["size"] = a.size();
  doc["operations"] = nlohmann::ordered_json::array();
  for (const auto &op : a.operations())
    doc["operations"].push_back({{"name", op.name}, {"arity", op.arity}, {"table", op.table}});
  return doc;
}

namespace detail {

/// Enumerates every k-tuple over {0..limit} that uses `pivot` at least once,
/// where pivot == limit. Used by the semi-naive closure loops: once element
/// `pivot` is processed, every tuple mixing it with earlier ones is visited.
template <class F>
void for_each_tuple_with_pivot(std::size_t arity, std::size_t pivot, std::vector<std::size_t> &tuple, F &&f) {
  tuple.assign(arity, 0);
  if (arity == 0)
    return;
  for (;;) {
    if (std::find(tuple.begin(), tuple.end(), pivot) != tuple.end())
      f(std::span<const std::size_t>(tuple));
    std::size_t i = arity;
    while (i > 0) {
      --i;
      if (tuple[i] < pivot) {
        ++tuple[i];
        break;
      }
      tuple[i] = 0;
      if (i == 0)
        return;
    }
  }
}

/// Calls f on every k-tuple over {0..m-1}, lexicographically.
template <class F> void for_each_tuple(std::size_t arity, std::size_t m, F &&f) {
  std::vector<std::size_t> tuple(arity, 0);
  if (m == 0 && arity > 0)
    return;
  for (;;) {
    f(std::span<const std::size_t>(tuple));
    std::size_t i = arity;
    for (;;) {
      if (i == 0)
        return;
      --i;
      if (++tuple[i] < m)
        break;
      tuple[i] = 0;
    }
  }
}

} // namespace detail

/// A subuniverse of some algebra together with the algebra it induces.
struct Subuniverse {
  std::vector<Element> elements; ///< discovery order
  std::vector<std::size_t> index; ///< parent element -> position, npos if absent
  FiniteAlgebra induced;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  bool contains(Element x) const noexcept { return x < index.size() && index[x] != npos; }
  std::size_t size() const noexcept { return elements.size(); }

  /// Canonical key: sorted element list.
  std::vector<Element> sorted_elements() const {
    auto s = elements;
    std::sort(s.begin(), s.end());
    return s;
  }
};

/// Algebra induced on `elements` (which must be closed in A).
inline FiniteAlgebra induced_algebra(const FiniteAlgebra &A, const std::vector<Element> &elements,
                                     const std::vector<std::size_t> &index, std::string name) {
  const std::size_t m = elements.size();
  std::vector<Operation> ops;
  std::vector<Element> args;
  for (std::size_t o = 0; o < A.operations().size(); ++o) {
    const auto &op = A.operations()[o];
    Operation io{op.name, op.arity, {}};
    io.table.reserve(checked_power(m, op.arity));
    args.resize(op.arity);
    detail::for_each_tuple(op.arity, m, [&](std::span<const std::size_t> t) {
      for (std::size_t i = 0; i < t.size(); ++i)
        args[i] = elements[t[i]];
      io.table.push_back(static_cast<Element>(index[A.apply(o, args)]));
    });
    ops.push_back(std::move(io));
  }
  return FiniteAlgebra(std::move(name), m, std::move(ops));
}

/// Least subuniverse of A containing `seeds` (and every constant).
/// Elements are listed in BFS discovery order starting from the sorted seeds.
inline Subuniverse generate_subuniverse(const FiniteAlgebra &A, std::vector<Element> seeds) {
  const std::size_t n = A.size();
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  Subuniverse s;
  s.index.assign(n, Subuniverse::npos);
  auto add = [&](Element x) {
    if (s.index[x] == Subuniverse::npos) {
      s.index[x] = s.elements.size();
      s.elements.push_back(x);
    }
  };
  for (Element x : seeds) {
    if (x >= n)
      throw InputError("seed " + std::to_string(x) + " outside the universe");
    add(x);
  }
  std::vector<Element> args;
  for (std::size_t o = 0; o < A.operations().size(); ++o)
    if (A.operations()[o].arity == 0)
      add(A.apply(o, {}));

  std::vector<std::size_t> tuple;
  for (std::size_t i = 0; i < s.elements.size(); ++i) {
    for (std::size_t o = 0; o < A.operations().size(); ++o) {
      const std::size_t k = A.operations()[o].arity;
      args.resize(k);
      detail::for_each_tuple_with_pivot(k, i, tuple, [&](std::span<const std::size_t> t) {
        for (std::size_t j = 0; j < k; ++j)
          args[j] = s.elements[t[j]];
        add(A.apply(o, args));
      });
    }
  }
  s.induced = induced_algebra(A, s.elements, s.index, A.name() + "|sub");
  return s;
}

/// Pair (x, y) of A x A encoded as x*n + y.
inline Element encode_pair(std::size_t n, Element x, Element y) noexcept {
  return static_cast<Element>(x * n + y);
}

/// A x A with every operation applied coordinatewise.
inline FiniteAlgebra square(const FiniteAlgebra &A) {
  const std::size_t n = A.size();
  const std::size_t m = n * n;
  std::vector<Operation> ops;
  std::vector<Element> xs, ys;
  for (std::size_t o = 0; o < A.operations().size(); ++o) {
    const auto &op = A.operations()[o];
    Operation sq{op.name, op.arity, {}};
    sq.table.reserve(checked_power(m, op.arity));
    xs.resize(op.arity);
    ys.resize(op.arity);
    detail::for_each_tuple(op.arity, m, [&](std::span<const std::size_t> t) {
      for (std::size_t i = 0; i < t.size(); ++i) {
        xs[i] = static_cast<Element>(t[i] / n);
        ys[i] = static_cast<Element>(t[i] % n);
      }
      sq.table.push_back(encode_pair(n, A.apply(o, xs), A.apply(o, ys)));
    });
    ops.push_back(std::move(sq));
  }
  return FiniteAlgebra(A.name() + "^2", m, std::move(ops));
}

/// A subuniverse B of A x A, with pair-level access.
class SubSquare {
public:
  SubSquare() = default;
  SubSquare(std::size_t parent_size, Subuniverse sub) : n_(parent_size), sub_(std::move(sub)) {}

  std::size_t parent_size() const noexcept { return n_; }
  std::size_t size() const noexcept { return sub_.size(); }
  const FiniteAlgebra &induced() const noexcept { return sub_.induced; }
  const Subuniverse &subuniverse() const noexcept { return sub_; }
  std::span<const Element> codes() const noexcept { return sub_.elements; }

  Element first(std::size_t i) const noexcept { return static_cast<Element>(sub_.elements[i] / n_); }
  Element second(std::size_t i) const noexcept { return static_cast<Element>(sub_.elements[i] % n_); }
  std::pair<Element, Element> pair(std::size_t i) const noexcept { return {first(i), second(i)}; }

  bool contains(Element x, Element y) const noexcept { return sub_.contains(encode_pair(n_, x, y)); }
  /// Position of (x, y), or Subuniverse::npos.
  std::size_t index_of(Element x, Element y) const noexcept {
    return x < n_ && y < n_ ? sub_.index[encode_pair(n_, x, y)] : Subuniverse::npos;
  }

private:
  std::size_t n_ = 0;
  Subuniverse sub_;
};

/// Subalgebra of A x A generated by the given pairs.
inline SubSquare generate_subsquare(const FiniteAlgebra &A, const FiniteAlgebra &square_of_A,
                                    std::span<const std::pair<Element, Element>> generators) {
  std::vector<Element> seeds;
  for (auto [x, y] : generators) {
    if (x >= A.size() || y >= A.size())
      throw InputError("generator outside the universe");
    seeds.push_back(encode_pair(A.size(), x, y));
  }
  return SubSquare(A.size(), generate_subuniverse(square_of_A, std::move(seeds)));
}

inline SubSquare generate_subsquare(const FiniteAlgebra &A, std::span<const std::pair<Element, Element>> generators) {
  return generate_subsquare(A, square(A), generators);
}

} // namespace congrel

#endif // CONGREL_ALGEBRA_HPP
