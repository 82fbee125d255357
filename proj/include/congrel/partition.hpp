#ifndef CONGREL_PARTITION_HPP
#define CONGREL_PARTITION_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "binrel.hpp"
#include "error.hpp"

namespace congrel {

/// Disjoint-set forest with path halving and union by size.
class UnionFind {
public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) noexcept {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Returns true if a merge happened.
  bool unite(std::size_t a, std::size_t b) noexcept {
    a = find(a);
    b = find(b);
    if (a == b)
      return false;
    if (size_[a] < size_[b])
      std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  std::size_t size() const noexcept { return parent_.size(); }

private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

/// An equivalence relation on {0..n-1} as one block id per element.
/// Block ids are canonical: blocks are numbered in order of their least
/// element, so two partitions are equal iff their id vectors are equal.
class Partition {
public:
  Partition() = default;

  /// The identity partition (every block a singleton), written 0.
  static Partition identity(std::size_t n) {
    Partition p;
    p.block_.resize(n);
    std::iota(p.block_.begin(), p.block_.end(), std::uint32_t{0});
    p.blocks_ = n;
    return p;
  }

  /// The one-block partition, written 1.
  static Partition total(std::size_t n) {
    Partition p;
    p.block_.assign(n, 0);
    p.blocks_ = n ? 1 : 0;
    return p;
  }

  /// Canonicalises arbitrary labels: x ~ y iff labels[x] == labels[y].
  template <class Label> static Partition from_labels(std::span<const Label> labels) {
    Partition p;
    p.block_.resize(labels.size());
    std::vector<std::pair<Label, std::uint32_t>> seen;
    for (std::size_t x = 0; x < labels.size(); ++x) {
      auto it = std::find_if(seen.begin(), seen.end(), [&](auto &s) { return s.first == labels[x]; });
      if (it == seen.end()) {
        seen.emplace_back(labels[x], static_cast<std::uint32_t>(seen.size()));
        p.block_[x] = seen.back().second;
      } else {
        p.block_[x] = it->second;
      }
    }
    p.blocks_ = seen.size();
    return p;
  }

  static Partition from_union_find(UnionFind &uf) {
    const std::size_t n = uf.size();
    Partition p;
    p.block_.resize(n);
    std::vector<std::uint32_t> id(n, UINT32_MAX);
    std::uint32_t next = 0;
    for (std::size_t x = 0; x < n; ++x) {
      std::size_t r = uf.find(x);
      if (id[r] == UINT32_MAX)
        id[r] = next++;
      p.block_[x] = id[r];
    }
    p.blocks_ = next;
    return p;
  }

  static Partition from_blocks(std::size_t n, const std::vector<std::vector<std::size_t>> &blocks) {
    UnionFind uf(n);
    std::vector<bool> covered(n, false);
    for (const auto &b : blocks)
      for (std::size_t x : b) {
        if (x >= n)
          throw InputError("block element " + std::to_string(x) + " out of range");
        if (covered[x])
          throw InputError("element " + std::to_string(x) + " appears in two blocks");
        covered[x] = true;
        uf.unite(b.front(), x);
      }
    return from_union_find(uf);
  }

  /// Throws SortError unless r is reflexive, symmetric and transitive.
  static Partition from_relation(const BinRel &r) {
    const std::size_t n = r.size();
    UnionFind uf(n);
    r.for_each_pair([&](std::size_t a, std::size_t b) { uf.unite(a, b); });
    Partition p = from_union_find(uf);
    if (p.to_relation() != r)
      throw SortError("relation is not an equivalence");
    return p;
  }

  std::size_t size() const noexcept { return block_.size(); }
  std::size_t num_blocks() const noexcept { return blocks_; }
  std::uint32_t block_of(std::size_t x) const noexcept { return block_[x]; }
  std::span<const std::uint32_t> labels() const noexcept { return block_; }
  bool related(std::size_t x, std::size_t y) const noexcept { return block_[x] == block_[y]; }

  std::vector<std::vector<std::size_t>> blocks() const {
    std::vector<std::vector<std::size_t>> out(blocks_);
    for (std::size_t x = 0; x < block_.size(); ++x)
      out[block_[x]].push_back(x);
    return out;
  }

  BinRel to_relation() const {
    const std::size_t n = size();
    BinRel r(n);
    auto bs = blocks();
    for (const auto &b : bs)
      for (std::size_t x : b)
        for (std::size_t y : b)
          r.set(x, y);
    return r;
  }

  /// *this <= other in the refinement order.
  bool refines(const Partition &other) const {
    check_same(other);
    std::vector<std::uint32_t> image(blocks_, UINT32_MAX);
    for (std::size_t x = 0; x < size(); ++x) {
      auto &slot = image[block_[x]];
      if (slot == UINT32_MAX)
        slot = other.block_[x];
      else if (slot != other.block_[x])
        return false;
    }
    return true;
  }

  friend Partition meet(const Partition &a, const Partition &b) {
    a.check_same(b);
    std::vector<std::uint64_t> key(a.size());
    for (std::size_t x = 0; x < a.size(); ++x)
      key[x] = (std::uint64_t{a.block_[x]} << 32) | b.block_[x];
    return from_labels<std::uint64_t>(key);
  }

  friend Partition join(const Partition &a, const Partition &b) {
    a.check_same(b);
    const std::size_t n = a.size();
    UnionFind uf(n);
    std::vector<std::size_t> first_a(a.blocks_, n), first_b(b.blocks_, n);
    for (std::size_t x = 0; x < n; ++x) {
      auto &fa = first_a[a.block_[x]];
      fa == n ? void(fa = x) : void(uf.unite(fa, x));
      auto &fb = first_b[b.block_[x]];
      fb == n ? void(fb = x) : void(uf.unite(fb, x));
    }
    return from_union_find(uf);
  }

  friend bool operator==(const Partition &, const Partition &) = default;
  friend auto operator<=>(const Partition &a, const Partition &b) { return a.block_ <=> b.block_; }

  /// "{0,2}{1,3}" style text.
  std::string to_string() const {
    std::string out;
    for (const auto &b : blocks()) {
      out += '{';
      for (std::size_t i = 0; i < b.size(); ++i) {
        if (i)
          out += ',';
        out += std::to_string(b[i]);
      }
      out += '}';
    }
    return out;
  }

private:
  void check_same(const Partition &other) const {
    if (size() != other.size())
      throw SizeMismatch(size(), other.size());
  }

  std::vector<std::uint32_t> block_;
  std::size_t blocks_ = 0;
};

} // namespace congrel

#endif // CONGREL_PARTITION_HPP
