#ifndef MIDLEVELS_REDUCED_GRAPH_HPP
#define MIDLEVELS_REDUCED_GRAPH_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>

#include "midlevels/bitstring.hpp"
#include "midlevels/part.hpp"
#include "midlevels/ranking.hpp"

namespace midlevels {

/// Fixed-capacity neighbor set; a vertex of R_n has at most k + 1 <= 32 neighbors.
template <typename T>
class NeighborList {
 public:
  static constexpr std::size_t kCapacity = 32;

  void push_back(const T& v) { items_[size_++] = v; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  const T& operator[](std::size_t i) const noexcept { return items_[i]; }
  T& operator[](std::size_t i) noexcept { return items_[i]; }
  const T* begin() const noexcept { return items_.data(); }
  const T* end() const noexcept { return items_.data() + size_; }
  T* begin() noexcept { return items_.data(); }
  T* end() noexcept { return items_.data() + size_; }
  bool contains(const T& v) const { return std::find(begin(), end(), v) != end(); }
  std::span<const T> view() const noexcept { return {items_.data(), size_}; }

 private:
  std::array<T, kCapacity> items_{};
  std::size_t size_ = 0;
};

/// Classes reachable from s by setting one 0-bit, deduplicated, self-loops
/// dropped, without any brun restriction.
inline NeighborList<CanonicalString> whole_neighbors(const CanonicalString& s) {
  NeighborList<CanonicalString> out;
  const BitString& b = s.bits();
  for (int i = 1; i <= b.size(); ++i) {
    if (b.at(i)) continue;
    const CanonicalString t = canon(b.flipped(i));
    if (t == s || out.contains(t)) continue;
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Adjacency in the whole of R_n.
inline bool adjacent(const CanonicalString& a, const CanonicalString& b) {
  return a != b && whole_neighbors(a).contains(b);
}

/// Induced subgraph of R_n on one brun interval, with its rank bijection:
/// Catalan order for the whole graph, part-local Narayana order otherwise.
class ReducedGraphView {
 public:
  ReducedGraphView(int k, PartTag tag)
      : ReducedGraphView(std::make_shared<const RankTables>(k), make_part(k, tag)) {}

  ReducedGraphView(std::shared_ptr<const RankTables> tables, PartSpec part)
      : tables_(std::move(tables)), part_(std::move(part)) {
    if (!tables_ || tables_->k() != part_.k) {
      throw std::invalid_argument("rank tables and part spec disagree on k");
    }
    count_ = tables_->part_size(part_);
  }

  int k() const noexcept { return part_.k; }
  Params params() const { return Params::for_k(part_.k); }
  const PartSpec& part() const noexcept { return part_; }
  PartTag tag() const noexcept { return part_.tag; }
  const RankTables& tables() const noexcept { return *tables_; }
  std::shared_ptr<const RankTables> shared_tables() const noexcept { return tables_; }
  RankScope scope() const noexcept {
    return part_.tag == PartTag::whole ? RankScope::global : RankScope::part_local;
  }

  /// Sum of N(k, r) over the interval; no enumeration.
  std::uint64_t vertex_count() const noexcept { return count_; }

  /// Throws when the view does not fit 32-bit ranks.
  ClassRank vertex_count32() const {
    if (count_ > UINT32_MAX) {
      throw std::overflow_error("view has " + std::to_string(count_) +
                                " vertices; ranks need more than 32 bits");
    }
    return static_cast<ClassRank>(count_);
  }

  bool contains(const CanonicalString& s) const {
    return s.k() == k() && part_.contains_brun(brun(s));
  }

  std::uint64_t rank(const CanonicalString& s) const {
    check_member(s);
    if (part_.tag == PartTag::whole) return tables_->rank_catalan(s);
    return tables_->part_rank(s, part_);
  }

  CanonicalString unrank(std::uint64_t r) const {
    if (part_.tag == PartTag::whole) return tables_->unrank_catalan(r);
    return tables_->part_unrank(part_, r);
  }

  ClassRank start_rank() const { return static_cast<ClassRank>(rank(part_.start_terminal)); }
  ClassRank end_rank() const { return static_cast<ClassRank>(rank(part_.end_terminal)); }

  NeighborList<CanonicalString> neighbors(const CanonicalString& s) const {
    check_member(s);
    NeighborList<CanonicalString> out;
    for (const CanonicalString& t : whole_neighbors(s)) {
      if (part_.contains_brun(brun(t))) out.push_back(t);
    }
    return out;
  }

  /// Hot-path form: unrank, flip, canon, rank. Sorted ascending.
  NeighborList<ClassRank> neighbors_ranked(ClassRank r) const {
    const CanonicalString s = unrank(r);
    NeighborList<ClassRank> out;
    const BitString& b = s.bits();
    for (int i = 1; i <= b.size(); ++i) {
      if (b.at(i)) continue;
      const CanonicalString t = canon(b.flipped(i));
      if (t == s || !part_.contains_brun(brun(t))) continue;
      const auto tr = static_cast<ClassRank>(rank_unchecked(t));
      if (!out.contains(tr)) out.push_back(tr);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void check_member(const CanonicalString& s) const {
    if (!contains(s)) {
      throw std::out_of_range(s.str() + " is not a vertex of the " +
                              std::string(to_string(part_.tag)) + " view for k = " +
                              std::to_string(k()));
    }
  }

  std::uint64_t rank_unchecked(const CanonicalString& s) const {
    if (part_.tag == PartTag::whole) return tables_->rank_catalan(s);
    return tables_->part_rank(s, part_);
  }

  std::shared_ptr<const RankTables> tables_;
  PartSpec part_;
  std::uint64_t count_ = 0;
};

}  // namespace midlevels

#endif  // MIDLEVELS_REDUCED_GRAPH_HPP
