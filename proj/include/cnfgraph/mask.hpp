#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cnfgraph {

// Clause-index sets are stored as bit masks: bit i set means clause i
// excludes the vertex. Adjacency is mask disjointness, so the hot
// operations are AND-emptiness, OR and popcount. Mask64 handles systems
// of up to 64 clauses in a single word; MaskDyn handles any width.

class Mask64 {
 public:
  static constexpr int kMaxBits = 64;

  Mask64() = default;

  static Mask64 zero(int n_bits) {
    if (n_bits < 0 || n_bits > kMaxBits)
      throw std::invalid_argument("clause count exceeds 64-bit mask width");
    return Mask64{};
  }

  static Mask64 full(int n_bits) {
    Mask64 m = zero(n_bits);
    m.bits_ = n_bits == 64 ? ~std::uint64_t{0}
                           : (std::uint64_t{1} << n_bits) - 1;
    return m;
  }

  static Mask64 from_word(std::uint64_t w) {
    Mask64 m;
    m.bits_ = w;
    return m;
  }

  void set(int i) { bits_ |= std::uint64_t{1} << i; }

  bool test(int i) const {
    return i >= 0 && i < 64 && ((bits_ >> i) & 1u) != 0;
  }

  bool disjoint(const Mask64& o) const { return (bits_ & o.bits_) == 0; }

  // (*this & (x | y)) == 0, without materializing the union.
  bool disjoint_with_or(const Mask64& x, const Mask64& y) const {
    return (bits_ & (x.bits_ | y.bits_)) == 0;
  }

  void assign_or(const Mask64& x, const Mask64& y) { bits_ = x.bits_ | y.bits_; }

  Mask64 operator|(const Mask64& o) const { return from_word(bits_ | o.bits_); }
  Mask64 operator&(const Mask64& o) const { return from_word(bits_ & o.bits_); }

  int popcount() const { return std::popcount(bits_); }
  bool none() const { return bits_ == 0; }

  std::uint64_t low_word() const { return bits_; }

  bool high_bits_clear(int n_bits) const {
    if (n_bits >= 64) return true;
    return (bits_ >> n_bits) == 0;
  }

  template <typename F>
  void for_each_set_bit(F&& f) const {
    std::uint64_t w = bits_;
    while (w != 0) {
      f(std::countr_zero(w));
      w &= w - 1;
    }
  }

  friend auto operator<=>(const Mask64&, const Mask64&) = default;

  std::size_t hash() const {
    std::uint64_t z = bits_ + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return static_cast<std::size_t>(z ^ (z >> 31));
  }

 private:
  std::uint64_t bits_ = 0;
};

class MaskDyn {
 public:
  MaskDyn() = default;

  static MaskDyn zero(int n_bits) {
    if (n_bits < 0) throw std::invalid_argument("negative clause count");
    MaskDyn m;
    m.words_.assign((n_bits + 63) / 64, 0);
    return m;
  }

  static MaskDyn full(int n_bits) {
    MaskDyn m = zero(n_bits);
    for (int i = 0; i < n_bits; ++i) m.set(i);
    return m;
  }

  void set(int i) {
    std::size_t w = static_cast<std::size_t>(i) / 64;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] |= std::uint64_t{1} << (i % 64);
  }

  bool test(int i) const {
    if (i < 0) return false;
    std::size_t w = static_cast<std::size_t>(i) / 64;
    return w < words_.size() && ((words_[w] >> (i % 64)) & 1u) != 0;
  }

  bool disjoint(const MaskDyn& o) const {
    std::size_t k = std::min(words_.size(), o.words_.size());
    for (std::size_t i = 0; i < k; ++i)
      if ((words_[i] & o.words_[i]) != 0) return false;
    return true;
  }

  bool disjoint_with_or(const MaskDyn& x, const MaskDyn& y) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t u = (i < x.words_.size() ? x.words_[i] : 0) |
                        (i < y.words_.size() ? y.words_[i] : 0);
      if ((words_[i] & u) != 0) return false;
    }
    return true;
  }

  void assign_or(const MaskDyn& x, const MaskDyn& y) {
    words_.assign(std::max(x.words_.size(), y.words_.size()), 0);
    for (std::size_t i = 0; i < words_.size(); ++i)
      words_[i] = (i < x.words_.size() ? x.words_[i] : 0) |
                  (i < y.words_.size() ? y.words_[i] : 0);
  }

  MaskDyn operator|(const MaskDyn& o) const {
    MaskDyn r;
    r.assign_or(*this, o);
    return r;
  }

  MaskDyn operator&(const MaskDyn& o) const {
    MaskDyn r;
    r.words_.assign(std::min(words_.size(), o.words_.size()), 0);
    for (std::size_t i = 0; i < r.words_.size(); ++i)
      r.words_[i] = words_[i] & o.words_[i];
    return r;
  }

  int popcount() const {
    int c = 0;
    for (std::uint64_t w : words_) c += std::popcount(w);
    return c;
  }

  bool none() const {
    for (std::uint64_t w : words_)
      if (w != 0) return false;
    return true;
  }

  std::uint64_t low_word() const { return words_.empty() ? 0 : words_[0]; }

  bool high_bits_clear(int n_bits) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      if (w == 0) continue;
      int top = static_cast<int>(i) * 64 + 63 - std::countl_zero(w);
      if (top >= n_bits) return false;
    }
    return true;
  }

  template <typename F>
  void for_each_set_bit(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        f(static_cast<int>(i) * 64 + std::countr_zero(w));
        w &= w - 1;
      }
    }
  }

  // Numeric comparison; trailing zero words are not significant.
  bool operator==(const MaskDyn& o) const {
    std::size_t k = std::max(words_.size(), o.words_.size());
    for (std::size_t i = 0; i < k; ++i)
      if (word_at(i) != o.word_at(i)) return false;
    return true;
  }

  std::strong_ordering operator<=>(const MaskDyn& o) const {
    std::size_t k = std::max(words_.size(), o.words_.size());
    for (std::size_t i = k; i-- > 0;) {
      std::uint64_t a = word_at(i), b = o.word_at(i);
      if (a != b) return a <=> b;
    }
    return std::strong_ordering::equal;
  }

  std::size_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::uint64_t w : words_) {
      if (w == 0) continue;  // keep equal values hashing equal across widths
      h = (h ^ w) * 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  std::uint64_t word_at(std::size_t i) const {
    return i < words_.size() ? words_[i] : 0;
  }

  std::vector<std::uint64_t> words_;
};

template <typename M>
concept BitMask = requires(M m, const M c, int i) {
  { M::zero(i) } -> std::same_as<M>;
  { M::full(i) } -> std::same_as<M>;
  m.set(i);
  { c.test(i) } -> std::convertible_to<bool>;
  { c.disjoint(c) } -> std::convertible_to<bool>;
  { c.disjoint_with_or(c, c) } -> std::convertible_to<bool>;
  m.assign_or(c, c);
  { c.popcount() } -> std::convertible_to<int>;
  { c.none() } -> std::convertible_to<bool>;
  { c.low_word() } -> std::convertible_to<std::uint64_t>;
  { c.high_bits_clear(i) } -> std::convertible_to<bool>;
  { c == c } -> std::convertible_to<bool>;
  { c.hash() } -> std::convertible_to<std::size_t>;
};

inline int hex_digits_for_bits(int n_bits) {
  return n_bits <= 0 ? 1 : (n_bits + 3) / 4;
}

// Lowercase hex, most-significant nibble first, fixed width
// ceil(n/4) digits (minimum one).
template <BitMask M>
std::string mask_to_hex(const M& m, int n_bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  int nd = hex_digits_for_bits(n_bits);
  std::string out(static_cast<std::size_t>(nd), '0');
  for (int j = 0; j < nd; ++j) {
    int nib = 0;
    for (int b = 0; b < 4; ++b)
      if (m.test(4 * j + b)) nib |= 1 << b;
    out[static_cast<std::size_t>(nd - 1 - j)] = kDigits[nib];
  }
  return out;
}

template <BitMask M>
M mask_from_hex(std::string_view s, int n_bits) {
  int nd = hex_digits_for_bits(n_bits);
  if (static_cast<int>(s.size()) != nd)
    throw std::invalid_argument("mask hex string has wrong width");
  M m = M::zero(n_bits);
  for (int j = 0; j < nd; ++j) {
    char c = s[static_cast<std::size_t>(nd - 1 - j)];
    int nib;
    if (c >= '0' && c <= '9') nib = c - '0';
    else if (c >= 'a' && c <= 'f') nib = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') nib = c - 'A' + 10;
    else throw std::invalid_argument("mask hex string has invalid character");
    for (int b = 0; b < 4; ++b) {
      if ((nib >> b) & 1) {
        int bit = 4 * j + b;
        if (bit >= n_bits)
          throw std::invalid_argument("mask has bits at or above clause count");
        m.set(bit);
      }
    }
  }
  return m;
}

}  // namespace cnfgraph

template <>
struct std::hash<cnfgraph::Mask64> {
  std::size_t operator()(const cnfgraph::Mask64& m) const noexcept {
    return m.hash();
  }
};

template <>
struct std::hash<cnfgraph::MaskDyn> {
  std::size_t operator()(const cnfgraph::MaskDyn& m) const noexcept {
    return m.hash();
  }
};
