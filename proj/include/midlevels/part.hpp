#ifndef MIDLEVELS_PART_HPP
#define MIDLEVELS_PART_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "midlevels/bitstring.hpp"

namespace midlevels {

/// Wire values match the path file's part byte.
enum class PartTag : std::uint8_t { whole = 0, front = 1, middle = 2, rear = 3 };

inline constexpr std::array<PartTag, 3> kDecomposedParts = {PartTag::front, PartTag::middle,
                                                            PartTag::rear};

/// Smallest k for which the three-part split has a usable front interval.
inline constexpr int kMinDecomposedK = 8;

inline std::string_view to_string(PartTag tag) {
  switch (tag) {
    case PartTag::whole: return "whole";
    case PartTag::front: return "front";
    case PartTag::middle: return "middle";
    case PartTag::rear: return "rear";
  }
  return "?";
}

inline std::optional<PartTag> parse_part_tag(std::string_view name) {
  if (name == "whole") return PartTag::whole;
  if (name == "front") return PartTag::front;
  if (name == "middle") return PartTag::middle;
  if (name == "rear") return PartTag::rear;
  return std::nullopt;
}

inline std::optional<PartTag> part_tag_from_byte(std::uint8_t b) {
  if (b > 3) return std::nullopt;
  return static_cast<PartTag>(b);
}

/// A closed brun interval [brun_lo, brun_hi] with path terminals
/// hc(k, brun_lo) -> hc(k, brun_hi).
struct PartSpec {
  PartTag tag = PartTag::whole;
  int k = 1;
  int brun_lo = 1;
  int brun_hi = 1;
  CanonicalString start_terminal;
  CanonicalString end_terminal;

  bool contains_brun(int r) const noexcept { return brun_lo <= r && r <= brun_hi; }
};

struct BrunInterval {
  int lo;
  int hi;
};

/// front = [1, k/2 - 1], middle = [k/2, k - k/2 + 1], rear = [k - k/2 + 2, k].
inline BrunInterval brun_interval(int k, PartTag tag) {
  const int half = k / 2;
  switch (tag) {
    case PartTag::whole: return {1, k};
    case PartTag::front: return {1, half - 1};
    case PartTag::middle: return {half, k - half + 1};
    case PartTag::rear: return {k - half + 2, k};
  }
  throw std::invalid_argument("unknown part tag");
}

inline PartSpec make_part(int k, PartTag tag) {
  (void)Params::for_k(k);
  if (tag != PartTag::whole && k < kMinDecomposedK) {
    throw std::invalid_argument("decomposed parts need k >= " +
                                std::to_string(kMinDecomposedK) + ", got k = " +
                                std::to_string(k));
  }
  const auto [lo, hi] = brun_interval(k, tag);
  return PartSpec{tag, k, lo, hi, hc(k, lo), hc(k, hi)};
}

/// The part (front/middle/rear) whose interval holds brun(s). Valid for any
/// k; for small k some intervals are empty and never returned.
inline PartTag part_of(const CanonicalString& s) {
  const int k = s.k();
  const int r = brun(s);
  const int half = k / 2;
  if (r <= half - 1) return PartTag::front;
  if (r <= k - half + 1) return PartTag::middle;
  return PartTag::rear;
}

}  // namespace midlevels

#endif  // MIDLEVELS_PART_HPP
