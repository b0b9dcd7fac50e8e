#ifndef MIDLEVELS_RANKING_HPP
#define MIDLEVELS_RANKING_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "midlevels/bitstring.hpp"
#include "midlevels/part.hpp"

namespace midlevels {

/// 32-bit vertex index used for stored paths and search state.
using ClassRank = std::uint32_t;

enum class RankScope : std::uint8_t { global = 0, part_local = 1 };

namespace detail {
using u128 = unsigned __int128;
using i128 = __int128;

inline std::uint64_t checked_u64(u128 v, const char* what) {
  if (v > u128{UINT64_MAX}) throw std::overflow_error(std::string(what) + " overflows 64 bits");
  return static_cast<std::uint64_t>(v);
}
}  // namespace detail

/// Exact binomial coefficient; 0 when k < 0 or k > n.
inline std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  detail::u128 r = 1;
  for (int i = 0; i < k; ++i) {
    r = r * static_cast<unsigned>(n - i) / static_cast<unsigned>(i + 1);
    if (r > detail::u128{UINT64_MAX}) throw std::overflow_error("binomial overflows 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

inline constexpr int kMaxRankK = 31;

inline void check_k_range(int k, const char* what) {
  if (k < 0 || k > kMaxRankK) {
    throw std::out_of_range(std::string(what) + ": k must lie in [0, 31], got " +
                            std::to_string(k));
  }
}

/// C(k) = binom(2k, k) / (k + 1).
inline std::uint64_t catalan(int k) {
  check_k_range(k, "catalan");
  return binomial(2 * k, k) / static_cast<std::uint64_t>(k + 1);
}

/// Catalan triangle: correctly matched completions with k ones left to place
/// from height p + 1, i.e. (p+1)/(k+1) * binom(2k-p, k-p). Zero when no
/// completion exists.
inline std::uint64_t cw(int k, int p) {
  if (k < 0 || p < 0 || p > k) return 0;
  check_k_range(k, "cw");
  const detail::u128 num =
      detail::u128{static_cast<std::uint64_t>(p + 1)} * binomial(2 * k - p, k - p);
  return detail::checked_u64(num / static_cast<unsigned>(k + 1), "cw");
}

/// Balanced words with k pairs and exactly r occurrences of "()":
/// binom(k, r) binom(k, r-1) / k.
inline std::uint64_t narayana(int k, int r) {
  check_k_range(k, "narayana");
  if (k < 1 || r < 1 || r > k) {
    throw std::out_of_range("narayana: need 1 <= r <= k, got k = " + std::to_string(k) +
                            ", r = " + std::to_string(r));
  }
  const detail::u128 num = detail::u128{binomial(k, r)} * binomial(k, r - 1);
  return detail::checked_u64(num / static_cast<unsigned>(k), "narayana");
}

/// Completions with k ones left, height p + 1 and r "01" occurrences still to
/// form, where a completion starting with 1 forms one "01" with the prefix's
/// trailing 0. Evaluated as
///   (k + (p-1)(r-1)) / (k (k-p+1)) * binom(k-p+1, r) * binom(k, r-1),
/// which equals the familiar form with binom(k-p, r) / (k-p-r+1) but has no
/// removable singularity at r = k-p+1.
inline std::uint64_t nw(int k, int p, int r) {
  if (k < 0 || p < 0 || r < 0) return 0;
  check_k_range(k, "nw");
  if (k == 0) return (p == 0 && r == 0) ? 1 : 0;
  if (p > k || r < 1) return 0;
  const int m = k - p + 1;
  const std::uint64_t b1 = binomial(m, r);
  const std::uint64_t b2 = binomial(k, r - 1);
  if (b1 == 0 || b2 == 0) return 0;
  const detail::i128 lead = k + static_cast<detail::i128>(p - 1) * (r - 1);
  const detail::u128 num = static_cast<detail::u128>(lead) * b1 * b2;
  const detail::u128 den = static_cast<detail::u128>(k) * static_cast<unsigned>(m);
  return detail::checked_u64(num / den, "nw");
}

/// Precomputed C_w / N_w tables and rank/unrank for one k. Immutable after
/// construction.
class RankTables {
 public:
  explicit RankTables(int k) : k_(k) {
    (void)Params::for_k(k);
    const auto w = static_cast<std::size_t>(k + 2);
    cw_.assign(w * w, 0);
    nw_.assign(w * w * w, 0);
    for (int kr = 0; kr <= k; ++kr) {
      for (int p = 0; p <= k + 1; ++p) {
        cw_[idx2(kr, p)] = midlevels::cw(kr, p);
        for (int r = 0; r <= k + 1; ++r) nw_[idx3(kr, p, r)] = midlevels::nw(kr, p, r);
      }
    }
    narayana_.assign(static_cast<std::size_t>(k + 1), 0);
    for (int r = 1; r <= k; ++r) narayana_[static_cast<std::size_t>(r)] = midlevels::narayana(k, r);
    catalan_ = midlevels::catalan(k);
  }

  int k() const noexcept { return k_; }
  int n() const noexcept { return 2 * k_ + 1; }
  std::uint64_t catalan() const noexcept { return catalan_; }

  std::uint64_t narayana(int r) const {
    if (r < 1 || r > k_) throw std::out_of_range("narayana: r out of range");
    return narayana_[static_cast<std::size_t>(r)];
  }

  std::uint64_t cw(int kr, int p) const noexcept {
    if (kr < 0 || p < 0 || kr > k_ || p > k_ + 1) return 0;
    return cw_[idx2(kr, p)];
  }

  std::uint64_t nw(int kr, int p, int r) const noexcept {
    if (kr < 0 || p < 0 || r < 0 || kr > k_ || p > k_ + 1 || r > k_ + 1) return 0;
    return nw_[idx3(kr, p, r)];
  }

  /// Number of lexicographically smaller canonical strings of the same k.
  std::uint64_t rank_catalan(const CanonicalString& s) const {
    check_length(s);
    std::uint64_t rank = 0;
    int zeros = 0;
    int ones = 0;
    for (int i = 1; i <= n(); ++i) {
      if (s.bits().at(i)) {
        rank += cw(k_ - ones, zeros - ones);
        ++ones;
      } else {
        ++zeros;
      }
    }
    return rank;
  }

  CanonicalString unrank_catalan(std::uint64_t rank) const {
    if (rank >= catalan_) {
      throw std::out_of_range("catalan rank " + std::to_string(rank) + " out of range [0, " +
                              std::to_string(catalan_) + ")");
    }
    std::uint64_t bits = 0;
    int zeros = 0;
    int ones = 0;
    for (int i = 1; i <= n(); ++i) {
      const std::uint64_t with_zero = cw(k_ - ones, zeros + 1 - ones - 1);
      if (rank < with_zero) {
        bits <<= 1;
        ++zeros;
      } else {
        rank -= with_zero;
        bits = (bits << 1) | 1U;
        ++ones;
      }
    }
    return CanonicalString::from(BitString(bits, n()));
  }

  /// Rank among canonical strings with the same k and the same brun.
  std::uint64_t rank_narayana(const CanonicalString& s) const {
    check_length(s);
    const int target = brun(s);
    std::uint64_t rank = 0;
    int zeros = 0;
    int ones = 0;
    int formed = 0;  // "01" occurrences inside the consumed prefix
    bool prev_zero = false;
    for (int i = 1; i <= n(); ++i) {
      if (s.bits().at(i)) {
        rank += nw(k_ - ones, zeros - ones, target - formed);
        ++ones;
        if (prev_zero) ++formed;
        prev_zero = false;
      } else {
        ++zeros;
        prev_zero = true;
      }
    }
    return rank;
  }

  CanonicalString unrank_narayana(int r, std::uint64_t rank) const {
    const std::uint64_t size = narayana(r);
    if (rank >= size) {
      throw std::out_of_range("narayana rank " + std::to_string(rank) + " out of range [0, " +
                              std::to_string(size) + ")");
    }
    std::uint64_t bits = 0;
    int zeros = 0;
    int ones = 0;
    int formed = 0;
    bool prev_zero = false;
    for (int i = 1; i <= n(); ++i) {
      const std::uint64_t with_zero = nw(k_ - ones, zeros - ones, r - formed);
      if (rank < with_zero) {
        bits <<= 1;
        ++zeros;
        prev_zero = true;
      } else {
        rank -= with_zero;
        bits = (bits << 1) | 1U;
        ++ones;
        if (prev_zero) ++formed;
        prev_zero = false;
      }
    }
    return CanonicalString::from(BitString(bits, n()));
  }

  /// Vertices with brun in [lo, hi].
  std::uint64_t interval_size(int lo, int hi) const {
    std::uint64_t total = 0;
    for (int r = lo; r <= hi; ++r) total += narayana(r);
    return total;
  }

  std::uint64_t part_size(const PartSpec& part) const {
    check_part(part);
    return interval_size(part.brun_lo, part.brun_hi);
  }

  /// Dense index inside a part: smaller bruns first, then Narayana order.
  std::uint64_t part_rank(const CanonicalString& s, const PartSpec& part) const {
    check_part(part);
    check_length(s);
    const int r = brun(s);
    if (!part.contains_brun(r)) {
      throw std::out_of_range(s.str() + " has brun " + std::to_string(r) + ", outside " +
                              std::string(to_string(part.tag)) + " part [" +
                              std::to_string(part.brun_lo) + ", " +
                              std::to_string(part.brun_hi) + "]");
    }
    return interval_size(part.brun_lo, r - 1) + rank_narayana(s);
  }

  CanonicalString part_unrank(const PartSpec& part, std::uint64_t rank) const {
    check_part(part);
    const std::uint64_t original = rank;
    for (int r = part.brun_lo; r <= part.brun_hi; ++r) {
      const std::uint64_t size = narayana(r);
      if (rank < size) return unrank_narayana(r, rank);
      rank -= size;
    }
    throw std::out_of_range("part rank " + std::to_string(original) + " out of range");
  }

 private:
  std::size_t idx2(int kr, int p) const noexcept {
    return static_cast<std::size_t>(kr) * static_cast<std::size_t>(k_ + 2) +
           static_cast<std::size_t>(p);
  }
  std::size_t idx3(int kr, int p, int r) const noexcept {
    const auto w = static_cast<std::size_t>(k_ + 2);
    return (static_cast<std::size_t>(kr) * w + static_cast<std::size_t>(p)) * w +
           static_cast<std::size_t>(r);
  }

  void check_length(const CanonicalString& s) const {
    if (s.k() != k_) {
      throw std::invalid_argument("string " + s.str() + " has k = " + std::to_string(s.k()) +
                                  ", tables are for k = " + std::to_string(k_));
    }
  }

  void check_part(const PartSpec& part) const {
    if (part.k != k_) throw std::invalid_argument("part spec built for a different k");
  }

  int k_;
  std::uint64_t catalan_ = 0;
  std::vector<std::uint64_t> cw_;
  std::vector<std::uint64_t> nw_;
  std::vector<std::uint64_t> narayana_;
};

}  // namespace midlevels

#endif  // MIDLEVELS_RANKING_HPP
