#ifndef CONGREL_BINREL_HPP
#define CONGREL_BINREL_HPP

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace congrel {

using Element = std::uint32_t;

/// A binary relation on {0..n-1} stored as an n x n bit matrix with
/// word-packed rows. Bit (r, c) set means (r, c) belongs to the relation.
class BinRel {
public:
  using word_type = std::uint64_t;
  static constexpr std::size_t word_bits = 64;

  BinRel() = default;
  explicit BinRel(std::size_t n)
      : n_(n), words_((n + word_bits - 1) / word_bits), bits_(n_ * words_, 0) {}

  static BinRel empty(std::size_t n) { return BinRel(n); }

  static BinRel diagonal(std::size_t n) {
    BinRel r(n);
    for (std::size_t i = 0; i < n; ++i)
      r.set(i, i);
    return r;
  }

  static BinRel full(std::size_t n) {
    BinRel r(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t w = 0; w < r.words_; ++w)
        r.bits_[i * r.words_ + w] = r.row_mask(w);
    return r;
  }

  static BinRel from_pairs(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> pairs) {
    BinRel r(n);
    for (auto [a, b] : pairs) {
      if (a >= n || b >= n)
        throw InputError("pair (" + std::to_string(a) + "," + std::to_string(b) +
                         ") out of range for size " + std::to_string(n));
      r.set(a, b);
    }
    return r;
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t words_per_row() const noexcept { return words_; }

  bool test(std::size_t r, std::size_t c) const noexcept {
    return (bits_[r * words_ + c / word_bits] >> (c % word_bits)) & 1u;
  }
  void set(std::size_t r, std::size_t c) noexcept {
    bits_[r * words_ + c / word_bits] |= word_type{1} << (c % word_bits);
  }
  void reset(std::size_t r, std::size_t c) noexcept {
    bits_[r * words_ + c / word_bits] &= ~(word_type{1} << (c % word_bits));
  }

  std::span<const word_type> row(std::size_t r) const noexcept {
    return {bits_.data() + r * words_, words_};
  }
  std::span<word_type> row(std::size_t r) noexcept { return {bits_.data() + r * words_, words_}; }

  /// row(dst) |= row(src)
  void or_row(std::size_t dst, const BinRel &other, std::size_t src) noexcept {
    auto d = row(dst);
    auto s = other.row(src);
    for (std::size_t w = 0; w < words_; ++w)
      d[w] |= s[w];
  }

  /// Calls f(c) for every c with (r, c) set, in ascending order.
  template <class F> void for_each_in_row(std::size_t r, F &&f) const {
    for (std::size_t w = 0; w < words_; ++w) {
      word_type word = bits_[r * words_ + w];
      while (word) {
        std::size_t c = w * word_bits + static_cast<std::size_t>(std::countr_zero(word));
        f(c);
        word &= word - 1;
      }
    }
  }

  /// Calls f(r, c) for every pair, row-major ascending.
  template <class F> void for_each_pair(F &&f) const {
    for (std::size_t r = 0; r < n_; ++r)
      for_each_in_row(r, [&](std::size_t c) { f(r, c); });
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for_each_pair([&](std::size_t r, std::size_t c) { out.emplace_back(r, c); });
    return out;
  }

  std::size_t count() const noexcept {
    std::size_t k = 0;
    for (auto w : bits_)
      k += static_cast<std::size_t>(std::popcount(w));
    return k;
  }

  bool is_subset_of(const BinRel &other) const {
    check_same(other);
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i] & ~other.bits_[i])
        return false;
    return true;
  }

  /// Least pair (row-major) in *this but not in other.
  std::optional<std::pair<std::size_t, std::size_t>> first_missing_from(const BinRel &other) const {
    check_same(other);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t w = 0; w < words_; ++w) {
        word_type d = bits_[r * words_ + w] & ~other.bits_[r * words_ + w];
        if (d)
          return std::pair{r, w * word_bits + static_cast<std::size_t>(std::countr_zero(d))};
      }
    return std::nullopt;
  }

  BinRel &operator|=(const BinRel &other) {
    check_same(other);
    for (std::size_t i = 0; i < bits_.size(); ++i)
      bits_[i] |= other.bits_[i];
    return *this;
  }
  BinRel &operator&=(const BinRel &other) {
    check_same(other);
    for (std::size_t i = 0; i < bits_.size(); ++i)
      bits_[i] &= other.bits_[i];
    return *this;
  }
  friend BinRel operator|(BinRel a, const BinRel &b) { return a |= b; }
  friend BinRel operator&(BinRel a, const BinRel &b) { return a &= b; }

  friend bool operator==(const BinRel &, const BinRel &) = default;
  friend auto operator<=>(const BinRel &a, const BinRel &b) {
    if (auto c = a.n_ <=> b.n_; c != 0)
      return c;
    return a.bits_ <=> b.bits_;
  }

  /// Canonical text dump: one line of '0'/'1' per row.
  std::string dump() const {
    std::string out;
    out.reserve(n_ * (n_ + 1));
    for (std::size_t r = 0; r < n_; ++r) {
      for (std::size_t c = 0; c < n_; ++c)
        out.push_back(test(r, c) ? '1' : '0');
      out.push_back('\n');
    }
    return out;
  }

  std::size_t hash() const noexcept {
    std::size_t h = n_;
    for (auto w : bits_)
      h = h * 0x9e3779b97f4a7c15ull ^ (w + (h >> 29));
    return h;
  }

  void check_same(const BinRel &other) const {
    if (n_ != other.n_)
      throw SizeMismatch(n_, other.n_);
  }

private:
  word_type row_mask(std::size_t w) const noexcept {
    std::size_t hi = std::min(n_, (w + 1) * word_bits) - w * word_bits;
    return hi == word_bits ? ~word_type{0} : (word_type{1} << hi) - 1;
  }

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<word_type> bits_;
};

struct BinRelHash {
  std::size_t operator()(const BinRel &r) const noexcept { return r.hash(); }
};

} // namespace congrel

#endif // CONGREL_BINREL_HPP
