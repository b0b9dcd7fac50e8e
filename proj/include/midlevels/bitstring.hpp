#ifndef MIDLEVELS_BITSTRING_HPP
#define MIDLEVELS_BITSTRING_HPP

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace midlevels {

/// Problem size: strings of odd length n = 2k + 1, vertices of M_n.
struct Params {
  int k = 1;
  int n = 3;

  static Params for_k(int k) {
    if (k < 1 || k > 31) {
      throw std::out_of_range("k must lie in [1, 31], got " + std::to_string(k));
    }
    return Params{k, 2 * k + 1};
  }

  friend bool operator==(const Params&, const Params&) = default;
};

/// An n-bit binary word, n <= 63. Character x_1 (leftmost) is the most
/// significant of the n low bits, so numeric order equals lexicographic order.
class BitString {
 public:
  constexpr BitString() = default;

  constexpr BitString(std::uint64_t bits, int len) : bits_(bits), len_(len) {
    if (len < 1 || len > 63) {
      throw std::out_of_range("bit string length must lie in [1, 63]");
    }
    if ((bits & ~mask()) != 0) {
      throw std::invalid_argument("bits set above the string length");
    }
  }

  /// Parses ASCII '0'/'1', leftmost character first.
  static BitString parse(std::string_view text) {
    if (text.empty() || text.size() > 63) {
      throw std::invalid_argument("bit string must have 1..63 characters");
    }
    std::uint64_t bits = 0;
    for (char c : text) {
      if (c != '0' && c != '1') {
        throw std::invalid_argument("bit string may contain only '0' and '1': " +
                                    std::string(text));
      }
      bits = (bits << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return BitString(bits, static_cast<int>(text.size()));
  }

  constexpr std::uint64_t bits() const noexcept { return bits_; }
  constexpr int size() const noexcept { return len_; }
  constexpr std::uint64_t mask() const noexcept {
    return (std::uint64_t{1} << len_) - 1;
  }
  constexpr int popcount() const noexcept { return std::popcount(bits_); }

  /// Character x_i for 1 <= i <= n.
  constexpr bool at(int i) const noexcept {
    return ((bits_ >> (len_ - i)) & 1U) != 0;
  }

  /// Flips character x_i (1-based).
  constexpr BitString flipped(int i) const noexcept {
    BitString out = *this;
    out.bits_ ^= std::uint64_t{1} << (len_ - i);
    return out;
  }

  std::string str() const {
    std::string out(static_cast<std::size_t>(len_), '0');
    for (int i = 1; i <= len_; ++i) {
      if (at(i)) out[static_cast<std::size_t>(i - 1)] = '1';
    }
    return out;
  }

  friend constexpr bool operator==(const BitString&, const BitString&) = default;
  friend constexpr auto operator<=>(const BitString& a, const BitString& b) {
    if (auto c = a.len_ <=> b.len_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

 private:
  std::uint64_t bits_ = 0;
  int len_ = 1;
};

/// sigma^i: x_{i+1} ... x_n x_1 ... x_i.
constexpr BitString rotate(const BitString& x, long long i) {
  const int n = x.size();
  const int s = static_cast<int>(((i % n) + n) % n);
  if (s == 0) return x;
  const std::uint64_t b = x.bits();
  return BitString(((b << s) | (b >> (n - s))) & x.mask(), n);
}

constexpr BitString complement(const BitString& x) {
  return BitString(~x.bits() & x.mask(), x.size());
}

constexpr BitString reverse(const BitString& x) {
  const int n = x.size();
  std::uint64_t r = std::uint64_t{0};
  std::uint64_t b = x.bits();
  for (int i = 0; i < n; ++i) {
    r = (r << 1) | (b & 1U);
    b >>= 1;
  }
  return BitString(r, n);
}

/// With 0 -> +1 and 1 -> -1, every nonempty prefix sum is >= 1 and the total is 1.
constexpr bool is_correctly_matched(const BitString& x) {
  int height = 0;
  for (int i = 1; i <= x.size(); ++i) {
    height += x.at(i) ? -1 : 1;
    if (height < 1) return false;
  }
  return height == 1;
}

/// The unique correctly matched member of a class rho(x). Only obtainable
/// through canon() or a checked conversion.
class CanonicalString {
 public:
  /// The length-1 word "0" (k = 0).
  constexpr CanonicalString() = default;

  static CanonicalString from(const BitString& s) {
    if (s.size() % 2 == 0 || !is_correctly_matched(s)) {
      throw std::invalid_argument("not a correctly matched string: " + s.str());
    }
    return CanonicalString(s);
  }

  static CanonicalString parse(std::string_view text) {
    return from(BitString::parse(text));
  }

  constexpr const BitString& bits() const noexcept { return s_; }
  constexpr int k() const noexcept { return s_.size() / 2; }
  std::string str() const { return s_.str(); }

  friend constexpr bool operator==(const CanonicalString&, const CanonicalString&) = default;
  friend constexpr auto operator<=>(const CanonicalString& a, const CanonicalString& b) {
    return a.s_ <=> b.s_;
  }

 private:
  constexpr CanonicalString(const BitString& s) : s_(s) {}

  friend CanonicalString canon(const BitString& x);
  friend CanonicalString hc(int k, int r);

  BitString s_;
};

/// Canonical representative of rho(x) = { sigma^i(x), sigma^i(complement x) }.
///
/// Level-(k+1) inputs are complemented first. The walk 0 -> up, 1 -> down ends
/// one step above its start; cutting just after the rightmost lowest point and
/// rotating that point to the front leaves a path that never returns to its
/// starting level, i.e. a correctly matched string.
inline CanonicalString canon(const BitString& x) {
  const int n = x.size();
  if (n % 2 == 0 || n < 3) {
    throw std::invalid_argument("canon needs an odd length n = 2k+1 >= 3");
  }
  const int k = n / 2;
  BitString y = x;
  const int ones = x.popcount();
  if (ones == k + 1) {
    y = complement(x);
  } else if (ones != k) {
    throw std::invalid_argument("popcount " + std::to_string(ones) +
                                " is not a middle level for " + x.str());
  }
  int height = 0;
  int lowest = 0;
  int cut = 0;
  for (int i = 1; i <= n; ++i) {
    height += y.at(i) ? -1 : 1;
    if (height <= lowest) {
      lowest = height;
      cut = i;
    }
  }
  // The start point (height 0 before x_1) also counts; ties go right.
  return CanonicalString(rotate(y, cut));
}

/// Half the number of maximal runs, i.e. the number of "01" occurrences.
constexpr int brun(const CanonicalString& s) {
  const std::uint64_t b = s.bits().bits();
  const int n = s.bits().size();
  // "01" at characters (i, i+1) is bit pattern 0 at position p+1, 1 at p.
  const std::uint64_t pairs = (~b >> 1) & b & ((std::uint64_t{1} << (n - 1)) - 1);
  return std::popcount(pairs);
}

/// Path terminal 0^{k-r+1} (01)^r 1^{k-r}.
inline CanonicalString hc(int k, int r) {
  if (k < 1 || k > 31) throw std::out_of_range("hc: k out of range");
  if (r < 1 || r > k) {
    throw std::out_of_range("hc: r must lie in [1, k], got " + std::to_string(r));
  }
  std::uint64_t b = 0;
  for (int i = 0; i < k - r + 1; ++i) b <<= 1;
  for (int i = 0; i < r; ++i) b = (b << 2) | 1U;
  for (int i = 0; i < k - r; ++i) b = (b << 1) | 1U;
  return CanonicalString(BitString(b, 2 * k + 1));
}

}  // namespace midlevels

#endif  // MIDLEVELS_BITSTRING_HPP
