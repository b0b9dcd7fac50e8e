#ifndef MIDLEVELS_ASSEMBLY_HPP
#define MIDLEVELS_ASSEMBLY_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "midlevels/bitstring.hpp"
#include "midlevels/ham_search.hpp"
#include "midlevels/part.hpp"
#include "midlevels/ranking.hpp"
#include "midlevels/reduced_graph.hpp"

namespace midlevels {

/// Inconsistent inputs to stitching or lifting (wrong parts, broken
/// junctions, no admissible lift).
class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Maps every class rho(x) to rho(Rev(x)), keeping the order. Brun is
/// invariant under reversal, so the result lives in the same view.
inline ReducedPath reverse_path(const ReducedPath& path, const ReducedGraphView& view) {
  if (const Violation v = verify_reduced(path, view); !v.ok()) {
    throw AssemblyError("reverse_path: invalid input at index " + std::to_string(v.index) +
                        ": " + v.message);
  }
  ReducedPath out = path;
  for (ClassRank& r : out.ranks) {
    r = static_cast<ClassRank>(view.rank(canon(reverse(view.unrank(r).bits()))));
  }
  out.reversed = !path.reversed;
  return out;
}

/// P_F . Rev(P_M) . P_R converted to global Catalan ranks. Both junctions are
/// checked for adjacency in R_n.
inline ReducedPath stitch(const ReducedPath& front, const ReducedPath& middle,
                          const ReducedPath& rear,
                          std::shared_ptr<const RankTables> tables) {
  const int k = front.k;
  if (middle.k != k || rear.k != k) throw AssemblyError("stitch: parts disagree on k");
  if (k < kMinDecomposedK) {
    throw AssemblyError("stitch: decomposition needs k >= " + std::to_string(kMinDecomposedK));
  }
  if (!tables) tables = std::make_shared<const RankTables>(k);
  if (tables->k() != k) throw AssemblyError("stitch: rank tables are for another k");

  const ReducedGraphView fv(tables, make_part(k, PartTag::front));
  const ReducedGraphView mv(tables, make_part(k, PartTag::middle));
  const ReducedGraphView rv(tables, make_part(k, PartTag::rear));
  const std::pair<const ReducedPath*, const ReducedGraphView*> parts[] = {
      {&front, &fv}, {&middle, &mv}, {&rear, &rv}};
  for (const auto& [p, v] : parts) {
    if (p->part != v->tag() || p->scope != RankScope::part_local || p->reversed) {
      throw AssemblyError("stitch: expected a forward part-local " +
                          std::string(to_string(v->tag())) + " path");
    }
    if (const Violation viol = verify_reduced(*p, *v); !viol.ok()) {
      throw AssemblyError("stitch: " + std::string(to_string(v->tag())) +
                          " path invalid at index " + std::to_string(viol.index) + ": " +
                          viol.message);
    }
  }
  const ReducedPath middle_rev = reverse_path(middle, mv);

  ReducedPath out;
  out.k = k;
  out.part = PartTag::whole;
  out.scope = RankScope::global;
  out.seed = front.seed;
  out.wall_seconds = std::max({front.wall_seconds, middle.wall_seconds, rear.wall_seconds});
  out.backtracks = front.backtracks + middle.backtracks + rear.backtracks;
  out.ranks.reserve(front.ranks.size() + middle.ranks.size() + rear.ranks.size());

  std::optional<CanonicalString> last;
  auto append = [&](const ReducedPath& p, const ReducedGraphView& v) {
    for (std::size_t i = 0; i < p.ranks.size(); ++i) {
      const CanonicalString s = v.unrank(p.ranks[i]);
      if (i == 0 && last && !adjacent(*last, s)) {
        throw AssemblyError("stitch: junction " + last->str() + " -> " + s.str() +
                            " is not an edge of R_n");
      }
      out.ranks.push_back(static_cast<ClassRank>(tables->rank_catalan(s)));
      last = s;
    }
  };
  append(front, fv);
  append(middle_rev, mv);
  append(rear, rv);

  const ReducedGraphView whole(tables, make_part(k, PartTag::whole));
  if (const Violation v = verify_reduced(out, whole); !v.ok()) {
    throw AssemblyError("stitch: assembled path invalid at index " + std::to_string(v.index) +
                        ": " + v.message);
  }
  return out;
}

/// Element of the group generated by the cyclic shift and the complement,
/// acting as x -> complement^flip(sigma^shift(x)). The group is abelian and
/// cyclic of order 2n (n odd).
struct Symmetry {
  int shift = 0;
  bool flip = false;

  BitString apply(const BitString& x) const {
    const BitString r = rotate(x, shift);
    return flip ? complement(r) : r;
  }

  Symmetry then(const Symmetry& other, int n) const {
    return {(shift + other.shift) % n, flip != other.flip};
  }

  Symmetry inverse(int n) const { return {(n - shift) % n, flip}; }

  int index(int n) const { return shift + (flip ? n : 0); }
  static Symmetry from_index(int i, int n) { return {i % n, i >= n}; }

  /// Generates the whole group iff gcd(shift, n) = 1 and flip is set.
  bool generates(int n) const { return flip && std::gcd(shift, n) == 1; }

  friend bool operator==(const Symmetry&, const Symmetry&) = default;
};

/// All g with g(target) == x. The group acts freely on middle-level strings,
/// so there is at most one.
inline std::optional<Symmetry> symmetry_mapping(const BitString& target, const BitString& x) {
  const int n = x.size();
  for (int i = 0; i < 2 * n; ++i) {
    const Symmetry g = Symmetry::from_index(i, n);
    if (g.apply(target) == x) return g;
  }
  return std::nullopt;
}

/// Index of a fixed-popcount word in the combinatorial number system.
inline std::uint64_t colex_rank(std::uint64_t bits) {
  std::uint64_t r = 0;
  int i = 1;
  while (bits != 0) {
    const int pos = std::countr_zero(bits);
    r += binomial(pos, i);
    ++i;
    bits &= bits - 1;
  }
  return r;
}

/// Dense index of a vertex of M_n: level k first, then level k + 1.
inline std::uint64_t middle_level_index(const BitString& x) {
  const int n = x.size();
  const int k = n / 2;
  const std::uint64_t base = x.popcount() == k + 1 ? binomial(n, k) : 0;
  return base + colex_rank(x.bits());
}

/// A closed walk through M_n stored as raw words of length 2k + 1.
struct LiftedCycle {
  int k = 1;
  std::vector<std::uint64_t> vertices;
  bool closed = true;

  int n() const noexcept { return 2 * k + 1; }
  std::size_t size() const noexcept { return vertices.size(); }
  BitString vertex(std::size_t i) const { return BitString(vertices[i], n()); }
};

inline std::uint64_t middle_levels_vertex_count(int k) {
  return 2 * binomial(2 * k + 1, k);
}

/// Checks vertex count, middle levels, single-bit steps (cyclically), level
/// alternation and distinctness. Reports the first violation.
inline Violation verify_cycle(const LiftedCycle& cycle) {
  const int k = cycle.k;
  if (k < 1 || k > 31) return {Violation::Kind::scope, 0, "k out of range"};
  const int n = cycle.n();
  const std::uint64_t expected = middle_levels_vertex_count(k);
  const std::size_t len = cycle.vertices.size();
  if (len != expected) {
    return {Violation::Kind::count, len,
            "cycle has " + std::to_string(len) + " vertices, expected " +
                std::to_string(expected)};
  }
  if (!cycle.closed) return {Violation::Kind::not_closed, len, "cycle is not closed"};
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  for (std::size_t i = 0; i < len; ++i) {
    const std::uint64_t v = cycle.vertices[i];
    const int pc = std::popcount(v);
    if ((v & ~mask) != 0 || (pc != k && pc != k + 1)) {
      return {Violation::Kind::level, i, "vertex is not on a middle level"};
    }
  }
  for (std::size_t i = 0; i < len; ++i) {
    const std::uint64_t v = cycle.vertices[i];
    const int pc = std::popcount(v);
    const std::uint64_t w = cycle.vertices[(i + 1) % len];
    if (std::popcount(v ^ w) != 1) {
      return {Violation::Kind::not_adjacent, i,
              "vertices " + std::to_string(i) + " and " + std::to_string((i + 1) % len) +
                  " differ in more than one bit"};
    }
    if (std::popcount(w) == pc) {
      return {Violation::Kind::level, i, "levels do not alternate"};
    }
  }
  std::vector<std::pair<std::uint64_t, std::size_t>> sorted(len);
  for (std::size_t i = 0; i < len; ++i) sorted[i] = {cycle.vertices[i], i};
  std::sort(sorted.begin(), sorted.end());
  std::optional<std::size_t> first_repeat;
  for (std::size_t i = 1; i < len; ++i) {
    if (sorted[i].first == sorted[i - 1].first) {
      const std::size_t later = std::max(sorted[i].second, sorted[i - 1].second);
      if (!first_repeat || later < *first_repeat) first_repeat = later;
    }
  }
  if (first_repeat) {
    return {Violation::Kind::duplicate, *first_repeat,
            "vertex " + cycle.vertex(*first_repeat).str() + " repeated"};
  }
  return Violation::none();
}

struct LiftReport {
  LiftedCycle cycle;
  std::vector<BitString> first_copy;  // lift of the path starting at 0^{k+1}1^k
  Symmetry start_link;                // x0 ~ start_link(x0)
  Symmetry end_link;                  // z ~ end_link(z), z the last vertex of the first copy
};

/// Lifts a whole-graph Hamiltonian path from rho(0^{k+1}1^k) to rho(0(01)^k)
/// to a Hamiltonian cycle of M_n.
///
/// The path lifts to 2n vertex-disjoint copies g(P), one per group element g,
/// where P starts at x0 = 0^{k+1}1^k and ends at some z. Both terminal classes
/// contain an edge, so x0 ~ a(x0) and z ~ b(z) for elements a and b that both
/// complement. Copies without complement are joined to copy g.a at the start
/// and copies with complement to copy g.b^-1 at the end. The walk then moves
/// by a.b^-1 every two copies and is one cycle iff that element has order n.
inline LiftReport lift_with_report(const ReducedPath& path,
                                   std::shared_ptr<const RankTables> tables = nullptr) {
  const int k = path.k;
  if (!tables) tables = std::make_shared<const RankTables>(k);
  const ReducedGraphView whole(tables, make_part(k, PartTag::whole));
  if (path.part != PartTag::whole || path.reversed) {
    throw AssemblyError("lift needs a forward whole-graph path");
  }
  if (const Violation v = verify_reduced(path, whole); !v.ok()) {
    throw AssemblyError("lift: input path invalid at index " + std::to_string(v.index) + ": " +
                        v.message);
  }
  const int n = 2 * k + 1;
  const int order = 2 * n;
  const std::size_t len = path.ranks.size();

  LiftReport report;
  std::vector<BitString>& first = report.first_copy;
  first.reserve(len);
  first.push_back(hc(k, 1).bits());
  for (std::size_t i = 1; i < len; ++i) {
    const BitString& cur = first.back();
    const BitString next = whole.unrank(path.ranks[i]).bits();
    std::optional<BitString> step;
    for (int j = 1; j <= n && !step; ++j) {
      if (cur.at(j) != (cur.popcount() == k + 1)) continue;
      const BitString w = cur.flipped(j);
      if (canon(w).bits() == next) step = w;
    }
    if (!step) {
      throw AssemblyError("lift: classes at positions " + std::to_string(i - 1) + " and " +
                          std::to_string(i) + " are not adjacent");
    }
    first.push_back(*step);
  }

  // Group elements g with g(x) adjacent to x.
  auto links = [&](const BitString& x) {
    std::vector<Symmetry> out;
    for (int e = 0; e < order; ++e) {
      const Symmetry g = Symmetry::from_index(e, n);
      if (std::popcount(g.apply(x).bits() ^ x.bits()) == 1) out.push_back(g);
    }
    return out;
  };
  const BitString x0 = first.front();
  const BitString z = first.back();
  std::optional<Symmetry> step;
  for (const Symmetry& a : links(x0)) {
    for (const Symmetry& b : links(z)) {
      const Symmetry d = a.then(b.inverse(n), n);
      if (!step && !d.flip && std::gcd(d.shift, n) == 1) {
        report.start_link = a;
        report.end_link = b;
        step = d;
      }
    }
  }
  if (!step) {
    throw AssemblyError("lift: the terminal classes do not link the copies into one cycle");
  }

  // Copy g backwards, then copy g.a forwards, n times; then rotate so the
  // cycle opens with the first copy.
  LiftedCycle& cycle = report.cycle;
  cycle.k = k;
  cycle.vertices.reserve(len * static_cast<std::size_t>(order));
  const std::uint64_t level_size = binomial(n, k);
  std::vector<std::uint64_t> visited((2 * level_size + 63) / 64, 0);
  auto emit = [&](const Symmetry& g, const BitString& x) {
    const BitString v = g.apply(x);
    const std::uint64_t idx = middle_level_index(v);
    std::uint64_t& word = visited[idx / 64];
    const std::uint64_t bit = std::uint64_t{1} << (idx % 64);
    if (word & bit) throw AssemblyError("lift: vertex " + v.str() + " visited twice");
    word |= bit;
    cycle.vertices.push_back(v.bits());
  };
  Symmetry g{};
  for (int j = 0; j < n; ++j) {
    for (std::size_t i = len; i-- > 0;) emit(g, first[i]);
    const Symmetry ga = g.then(report.start_link, n);
    for (std::size_t i = 0; i < len; ++i) emit(ga, first[i]);
    g = g.then(*step, n);
  }
  std::reverse(cycle.vertices.begin(), cycle.vertices.end());
  std::rotate(cycle.vertices.begin(), cycle.vertices.end() - static_cast<std::ptrdiff_t>(len),
              cycle.vertices.end());
  cycle.closed = true;
  if (const Violation v = verify_cycle(cycle); !v.ok()) {
    throw AssemblyError("lift: output fails verification at index " + std::to_string(v.index) +
                        ": " + v.message);
  }
  return report;
}

inline LiftedCycle lift(const ReducedPath& path,
                        std::shared_ptr<const RankTables> tables = nullptr) {
  return lift_with_report(path, std::move(tables)).cycle;
}

}  // namespace midlevels

#endif  // MIDLEVELS_ASSEMBLY_HPP
