#ifndef MIDLEVELS_HAM_SEARCH_HPP
#define MIDLEVELS_HAM_SEARCH_HPP

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "midlevels/bitstring.hpp"
#include "midlevels/byte_io.hpp"
#include "midlevels/part.hpp"
#include "midlevels/ranking.hpp"
#include "midlevels/reduced_graph.hpp"

namespace midlevels {

enum class PruneLevel : std::uint8_t { none = 0, local_degree = 1 };
enum class TieBreak : std::uint8_t { rank_order = 0, seeded_random = 1 };
enum class Strategy : std::uint8_t { rotation = 0, backtracking = 1 };

inline std::string_view to_string(Strategy s) {
  return s == Strategy::rotation ? "rotation" : "backtracking";
}

struct SearchConfig {
  std::uint64_t seed = 1;
  /// 0 disables restarts triggered by backtracking.
  std::uint64_t max_backtracks_before_restart = 2'000'000;
  std::uint32_t max_restarts = 50;
  PruneLevel prune_level = PruneLevel::local_degree;
  double checkpoint_interval_seconds = 600.0;
  TieBreak tie_break = TieBreak::rank_order;
  Strategy strategy = Strategy::rotation;
};

/// A sequence of ranks in one view's scope plus run metadata.
struct ReducedPath {
  int k = 1;
  PartTag part = PartTag::whole;
  RankScope scope = RankScope::global;
  std::vector<ClassRank> ranks;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  std::uint64_t backtracks = 0;
  /// Terminals are rho(Rev(start)) and rho(Rev(end)) of the view instead of
  /// the view's own terminals.
  bool reversed = false;
};

/// First failed check of a verifier; ok() when none.
struct Violation {
  enum class Kind {
    none,
    scope,
    out_of_range,
    duplicate,
    not_adjacent,
    start_terminal,
    end_terminal,
    incomplete,
    count,
    level,
    not_closed,
  };
  Kind kind = Kind::none;
  std::size_t index = 0;
  std::string message;

  bool ok() const noexcept { return kind == Kind::none; }
  static Violation none() { return {}; }
};

/// Adjacency of two classes by scanning all 2n members of rho(b) for one at
/// Hamming distance 1 from a. Shares nothing with canon-based neighbor
/// generation.
inline bool classes_adjacent_by_scan(const BitString& a, const BitString& b) {
  const int n = b.size();
  for (int i = 0; i < n; ++i) {
    const BitString r = rotate(b, i);
    if (std::popcount(a.bits() ^ r.bits()) == 1) return true;
    if (std::popcount(a.bits() ^ complement(r).bits()) == 1) return true;
  }
  return false;
}

/// Checks range, distinctness, adjacency of consecutive pairs, terminals and
/// completeness. Reports the first violation.
inline Violation verify_reduced(const ReducedPath& path, const ReducedGraphView& view) {
  if (path.k != view.k() || path.part != view.tag() || path.scope != view.scope()) {
    return {Violation::Kind::scope, 0,
            "path is for k = " + std::to_string(path.k) + " part " +
                std::string(to_string(path.part)) + ", view is k = " + std::to_string(view.k()) +
                " part " + std::string(to_string(view.tag()))};
  }
  const std::uint64_t n = view.vertex_count();
  std::uint64_t want_start = view.start_rank();
  std::uint64_t want_end = view.end_rank();
  if (path.reversed) {
    want_start = view.rank(canon(reverse(view.part().start_terminal.bits())));
    want_end = view.rank(canon(reverse(view.part().end_terminal.bits())));
  }
  if (path.ranks.empty()) return {Violation::Kind::incomplete, 0, "empty path"};
  if (path.ranks.front() != want_start) {
    return {Violation::Kind::start_terminal, 0,
            "path starts at rank " + std::to_string(path.ranks.front()) + ", expected " +
                std::to_string(want_start)};
  }
  std::vector<std::uint64_t> seen((n + 63) / 64, 0);
  std::optional<CanonicalString> prev;
  for (std::size_t i = 0; i < path.ranks.size(); ++i) {
    const ClassRank r = path.ranks[i];
    if (r >= n) {
      return {Violation::Kind::out_of_range, i, "rank " + std::to_string(r) + " out of range"};
    }
    std::uint64_t& word = seen[r / 64];
    const std::uint64_t bit = std::uint64_t{1} << (r % 64);
    if (word & bit) {
      return {Violation::Kind::duplicate, i, "rank " + std::to_string(r) + " repeated"};
    }
    word |= bit;
    const CanonicalString cur = view.unrank(r);
    if (prev && !classes_adjacent_by_scan(prev->bits(), cur.bits())) {
      return {Violation::Kind::not_adjacent, i,
              "ranks " + std::to_string(path.ranks[i - 1]) + " and " + std::to_string(r) +
                  " are not adjacent"};
    }
    prev = cur;
  }
  if (path.ranks.size() != n) {
    return {Violation::Kind::incomplete, path.ranks.size(),
            "path has " + std::to_string(path.ranks.size()) + " of " + std::to_string(n) +
                " vertices"};
  }
  if (path.ranks.back() != want_end) {
    return {Violation::Kind::end_terminal, path.ranks.size() - 1,
            "path ends at rank " + std::to_string(path.ranks.back()) + ", expected " +
                std::to_string(want_end)};
  }
  return Violation::none();
}

enum class SearchStatus { found, exhausted, interrupted };

inline std::string_view to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::exhausted: return "exhausted";
    case SearchStatus::interrupted: return "interrupted";
  }
  return "?";
}

struct SearchProgress {
  std::size_t depth = 0;
  std::uint64_t backtracks = 0;
  std::uint32_t restarts = 0;
  double elapsed_seconds = 0.0;
};

struct SearchOutcome {
  SearchStatus status = SearchStatus::exhausted;
  ReducedPath path;  // complete on success
  std::size_t best_depth = 0;
  std::uint64_t backtracks = 0;
  std::uint32_t restarts = 0;
  std::uint64_t steps = 0;
  double elapsed_seconds = 0.0;
  std::string detail;
};

/// Serialized search state. The stack is the current path. For the
/// backtracking strategy the choice cursor of every level but the top is
/// implied by the next element.
struct SearchCheckpoint {
  static constexpr std::string_view kMagic = "MLCKPT1";
  static constexpr std::uint16_t kVersion = 1;

  int k = 1;
  PartTag part = PartTag::whole;
  std::uint64_t seed = 0;          // configured seed
  Strategy strategy = Strategy::rotation;
  std::uint64_t current_seed = 0;  // seed of the active restart
  TieBreak tie_break = TieBreak::rank_order;
  std::uint32_t restarts = 0;
  std::uint64_t backtracks = 0;
  std::uint64_t backtracks_since_restart = 0;
  std::uint64_t steps = 0;
  std::uint64_t best_depth = 0;
  std::uint64_t elapsed_ms = 0;
  std::uint32_t top_cursor = 0;
  std::vector<ClassRank> stack;
  std::vector<std::uint64_t> visited;

  std::vector<std::uint8_t> serialize() const {
    ByteWriter w;
    w.raw(kMagic);
    w.u16(kVersion);
    w.u32(static_cast<std::uint32_t>(k));
    w.u8(static_cast<std::uint8_t>(part));
    w.u64(seed);
    w.u8(static_cast<std::uint8_t>(strategy));
    w.u64(current_seed);
    w.u8(static_cast<std::uint8_t>(tie_break));
    w.u32(restarts);
    w.u64(backtracks);
    w.u64(backtracks_since_restart);
    w.u64(steps);
    w.u64(best_depth);
    w.u64(elapsed_ms);
    w.u32(top_cursor);
    w.u64(stack.size());
    for (ClassRank r : stack) w.u32(r);
    w.u64(visited.size());
    for (std::uint64_t word : visited) w.u64(word);
    w.checksum();
    return w.bytes();
  }

  static SearchCheckpoint deserialize(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    r.expect_magic(kMagic);
    if (const auto v = r.u16(); v != kVersion) {
      throw FormatError("unsupported checkpoint version " + std::to_string(v));
    }
    SearchCheckpoint c;
    c.k = static_cast<int>(r.u32());
    const auto tag = part_tag_from_byte(r.u8());
    if (!tag) throw FormatError("bad part tag in checkpoint");
    c.part = *tag;
    c.seed = r.u64();
    const std::uint8_t st = r.u8();
    if (st > 1) throw FormatError("bad strategy value in checkpoint");
    c.strategy = static_cast<Strategy>(st);
    c.current_seed = r.u64();
    const std::uint8_t tb = r.u8();
    if (tb > 1) throw FormatError("bad tie-break value in checkpoint");
    c.tie_break = static_cast<TieBreak>(tb);
    c.restarts = r.u32();
    c.backtracks = r.u64();
    c.backtracks_since_restart = r.u64();
    c.steps = r.u64();
    c.best_depth = r.u64();
    c.elapsed_ms = r.u64();
    c.top_cursor = r.u32();
    const std::uint64_t depth = r.u64();
    if (depth > r.remaining() / 4) throw FormatError("checkpoint stack length exceeds file size");
    c.stack.resize(depth);
    for (auto& x : c.stack) x = r.u32();
    const std::uint64_t words = r.u64();
    if (words > r.remaining() / 8) throw FormatError("checkpoint bitset length exceeds file size");
    c.visited.resize(words);
    for (auto& x : c.visited) x = r.u64();
    r.verify_checksum();
    r.expect_end();
    return c;
  }
};

/// Optional observers and stop conditions for a run.
struct SearchHooks {
  std::function<void(const SearchProgress&)> on_progress;
  double progress_interval_seconds = 5.0;
  /// Called at least every SearchConfig::checkpoint_interval_seconds.
  std::function<void(const SearchCheckpoint&)> on_checkpoint;
  /// Polled periodically; returning true interrupts the run.
  std::function<bool()> should_stop;
  /// Interrupt once this many steps (forward moves) have been taken; 0 = never.
  std::uint64_t stop_after_steps = 0;
};

/// Hamiltonian path search between a view's terminals.
///
/// Both strategies grow a path from the start terminal, always extending to
/// the unvisited neighbor with the fewest unvisited neighbors of its own
/// (Warnsdorff), ties by rank or by a seeded hash. The end terminal is only
/// entered as the last vertex.
///
/// rotation: when the head has no usable neighbor, pick a path vertex y
/// adjacent to the head and reverse the path after y, so the vertex after y
/// becomes the head. Each rotation counts as a backtrack.
///
/// backtracking: plain depth-first search. With local-degree pruning an
/// unvisited vertex next to the head that has a single unvisited neighbor
/// left is a forced move; two such vertices, a non-terminal with none, or an
/// isolated end terminal kill the branch.
class HamiltonianSearch {
 public:
  HamiltonianSearch(const ReducedGraphView& view, SearchConfig cfg)
      : view_(view), cfg_(cfg) {
    count_ = view_.vertex_count32();
    start_ = view_.start_rank();
    end_ = view_.end_rank();
    reset(cfg_.seed, cfg_.tie_break);
  }

  /// Rebuilds the state captured in a checkpoint. The configured seed,
  /// strategy, k and part must match.
  static HamiltonianSearch resume(const ReducedGraphView& view, SearchConfig cfg,
                                  const SearchCheckpoint& ckpt) {
    if (ckpt.k != view.k()) {
      throw FormatError("checkpoint is for k = " + std::to_string(ckpt.k) + ", not " +
                        std::to_string(view.k()));
    }
    if (ckpt.part != view.tag()) {
      throw FormatError("checkpoint is for part " + std::string(to_string(ckpt.part)) +
                        ", not " + std::string(to_string(view.tag())));
    }
    if (ckpt.seed != cfg.seed) {
      throw FormatError("checkpoint was written with seed " + std::to_string(ckpt.seed));
    }
    if (ckpt.strategy != cfg.strategy) {
      throw FormatError("checkpoint was written by the " +
                        std::string(to_string(ckpt.strategy)) + " strategy");
    }
    HamiltonianSearch s(view, cfg);
    s.reset(ckpt.current_seed, ckpt.tie_break);
    if (ckpt.stack.empty() || ckpt.stack.front() != s.start_) {
      throw FormatError("checkpoint stack does not begin at the start terminal");
    }
    for (std::size_t d = 0; d + 1 < ckpt.stack.size(); ++d) {
      const ClassRank next = ckpt.stack[d + 1];
      if (cfg.strategy == Strategy::backtracking) {
        const auto cands = s.candidates(s.path_[d]);
        const auto* it = std::find(cands.begin(), cands.end(), next);
        if (it == cands.end()) {
          throw FormatError("checkpoint stack is not a reachable search state at depth " +
                            std::to_string(d + 1));
        }
        s.cursor_[d] = static_cast<std::uint8_t>(it - cands.begin() + 1);
      } else if (next >= s.count_ || s.is_visited(next) ||
                 !view.neighbors_ranked(s.path_[d]).contains(next)) {
        throw FormatError("checkpoint stack is not a simple path at depth " +
                          std::to_string(d + 1));
      }
      s.visit(next);
    }
    s.cursor_.back() = static_cast<std::uint8_t>(ckpt.top_cursor);
    if (ckpt.visited != s.visited_) {
      throw FormatError("checkpoint visited bitset disagrees with its stack");
    }
    s.restarts_ = ckpt.restarts;
    s.backtracks_ = ckpt.backtracks;
    s.since_restart_ = ckpt.backtracks_since_restart;
    s.steps_ = ckpt.steps;
    s.best_depth_ = static_cast<std::size_t>(ckpt.best_depth);
    s.elapsed_before_ = static_cast<double>(ckpt.elapsed_ms) / 1000.0;
    return s;
  }

  SearchCheckpoint checkpoint() const {
    SearchCheckpoint c;
    c.k = view_.k();
    c.part = view_.tag();
    c.seed = cfg_.seed;
    c.strategy = cfg_.strategy;
    c.current_seed = current_seed_;
    c.tie_break = tie_break_;
    c.restarts = restarts_;
    c.backtracks = backtracks_;
    c.backtracks_since_restart = since_restart_;
    c.steps = steps_;
    c.best_depth = best_depth_;
    c.elapsed_ms = static_cast<std::uint64_t>(elapsed() * 1000.0);
    c.top_cursor = cursor_.back();
    c.stack = path_;
    c.visited = visited_;
    return c;
  }

  SearchOutcome run(const SearchHooks& hooks = {}) {
    using Clock = std::chrono::steady_clock;
    elapsed_before_ = elapsed();
    const auto started = Clock::now();
    run_started_ = started;
    auto last_progress = started;
    auto last_checkpoint = started;
    std::uint64_t steps_this_run = 0;

    for (std::uint64_t iter = 0;; ++iter) {
      if (path_.size() == count_) {
        return finish_found();
      }
      if ((iter & 0x3ff) == 0 && iter != 0) {
        const auto now = Clock::now();
        if (hooks.on_progress &&
            seconds_between(last_progress, now) >= hooks.progress_interval_seconds) {
          hooks.on_progress(progress());
          last_progress = now;
        }
        if (hooks.on_checkpoint &&
            seconds_between(last_checkpoint, now) >= cfg_.checkpoint_interval_seconds) {
          hooks.on_checkpoint(checkpoint());
          last_checkpoint = now;
        }
        if (hooks.should_stop && hooks.should_stop()) return outcome(SearchStatus::interrupted);
      }
      if (hooks.stop_after_steps != 0 && steps_this_run >= hooks.stop_after_steps) {
        return outcome(SearchStatus::interrupted);
      }

      bool moved = false;
      bool stuck = false;
      if (cfg_.strategy == Strategy::rotation) {
        const Move m = extend_or_rotate();
        moved = m == Move::extended;
        stuck = m == Move::stuck;
      } else {
        const std::size_t d = path_.size() - 1;
        const auto cands = candidates(path_[d]);
        const std::size_t next = cursor_[d];
        if (next < cands.size()) {
          cursor_[d] = static_cast<std::uint8_t>(next + 1);
          visit(cands[next]);
          moved = true;
        } else if (d == 0) {
          // Pruning is sound, so an exhausted tree means no path exists.
          auto out = outcome(SearchStatus::exhausted);
          out.detail = "search tree exhausted: no Hamiltonian path between the terminals";
          return out;
        } else {
          unvisit();
        }
      }
      if (moved) {
        ++steps_;
        ++steps_this_run;
        best_depth_ = std::max(best_depth_, path_.size());
        continue;
      }
      ++backtracks_;
      ++since_restart_;
      if (stuck || (cfg_.max_backtracks_before_restart != 0 &&
                    since_restart_ >= cfg_.max_backtracks_before_restart)) {
        if (restarts_ >= cfg_.max_restarts) {
          auto out = outcome(SearchStatus::exhausted);
          out.detail = "restart budget exhausted after " + std::to_string(restarts_) +
                       " restarts";
          return out;
        }
        ++restarts_;
        reset(current_seed_ + 1, TieBreak::seeded_random);
      }
    }
  }

  SearchProgress progress() const {
    return {path_.size(), backtracks_, restarts_, elapsed()};
  }

  std::uint64_t backtracks_since_restart() const noexcept { return since_restart_; }

  /// Bytes held by the per-vertex search state.
  std::size_t memory_bytes() const noexcept {
    return visited_.capacity() * sizeof(std::uint64_t) + degree_.capacity() +
           path_.capacity() * sizeof(ClassRank) + cursor_.capacity() +
           position_.capacity() * sizeof(std::uint32_t);
  }

 private:
  static constexpr std::uint32_t kNotOnPath = 0xffffffffU;

  static double seconds_between(std::chrono::steady_clock::time_point a,
                                std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  }

  double elapsed() const {
    if (!run_started_) return elapsed_before_;
    return elapsed_before_ + seconds_between(*run_started_, std::chrono::steady_clock::now());
  }

  bool is_visited(ClassRank v) const noexcept {
    return (visited_[v / 64] >> (v % 64)) & 1U;
  }

  static std::uint64_t mix(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t tie_key(ClassRank v) const noexcept {
    if (tie_break_ == TieBreak::rank_order) return v;
    return mix(current_seed_ ^ mix(v));
  }

  void reset(std::uint64_t seed, TieBreak tie) {
    current_seed_ = seed;
    tie_break_ = tie;
    since_restart_ = 0;
    visited_.assign((count_ + 63) / 64, 0);
    degree_.assign(count_, 0);
    for (ClassRank v = 0; v < count_; ++v) {
      degree_[v] = static_cast<std::uint8_t>(view_.neighbors_ranked(v).size());
    }
    path_.clear();
    cursor_.clear();
    if (cfg_.strategy == Strategy::rotation) position_.assign(count_, kNotOnPath);
    visit(start_);
  }

  void visit(ClassRank v) {
    visited_[v / 64] |= std::uint64_t{1} << (v % 64);
    for (ClassRank u : view_.neighbors_ranked(v)) {
      if (!is_visited(u)) --degree_[u];
    }
    if (!position_.empty()) position_[v] = static_cast<std::uint32_t>(path_.size());
    path_.push_back(v);
    cursor_.push_back(0);
  }

  void unvisit() {
    const ClassRank v = path_.back();
    path_.pop_back();
    cursor_.pop_back();
    for (ClassRank u : view_.neighbors_ranked(v)) {
      if (!is_visited(u)) ++degree_[u];
    }
    visited_[v / 64] &= ~(std::uint64_t{1} << (v % 64));
  }

  enum class Move { extended, rotated, stuck };

  Move extend_or_rotate() {
    const ClassRank head = path_.back();
    const auto nbrs = view_.neighbors_ranked(head);
    const bool last = path_.size() + 1 == count_;
    std::optional<ClassRank> best;
    for (ClassRank u : nbrs) {
      if (is_visited(u) || (u == end_) != last) continue;
      if (!best || degree_[u] < degree_[*best] ||
          (degree_[u] == degree_[*best] && tie_key(u) < tie_key(*best))) {
        best = u;
      }
    }
    if (best) {
      visit(*best);
      return Move::extended;
    }
    // Pivots are path neighbors of the head other than its predecessor.
    NeighborList<ClassRank> pivots;
    for (ClassRank u : nbrs) {
      if (is_visited(u) && position_[u] + 2 < path_.size()) pivots.push_back(u);
    }
    if (pivots.size() == 0) return Move::stuck;
    const ClassRank y = pivots[mix(current_seed_ ^ mix(backtracks_)) % pivots.size()];
    const std::uint32_t from = position_[y] + 1;
    std::reverse(path_.begin() + from, path_.end());
    for (std::uint32_t i = from; i < path_.size(); ++i) position_[path_[i]] = i;
    return Move::rotated;
  }

  /// Ordered moves from the head; a pure function of the current state.
  NeighborList<ClassRank> candidates(ClassRank head) const {
    NeighborList<ClassRank> out;
    const std::size_t unvisited = count_ - path_.size();
    const auto nbrs = view_.neighbors_ranked(head);
    if (cfg_.prune_level == PruneLevel::local_degree && unvisited > 1) {
      if (!is_visited(end_) && degree_[end_] == 0 && !nbrs.contains(end_)) return out;
      std::optional<ClassRank> forced;
      for (ClassRank u : nbrs) {
        if (is_visited(u)) continue;
        if (u == end_) {
          if (degree_[u] == 0) return out;
          continue;
        }
        if (degree_[u] == 0) return out;
        if (degree_[u] == 1) {
          if (forced) return out;
          forced = u;
        }
      }
      if (forced) {
        out.push_back(*forced);
        return out;
      }
    }
    for (ClassRank u : nbrs) {
      if (is_visited(u)) continue;
      if (u == end_ && unvisited > 1) continue;
      out.push_back(u);
    }
    std::sort(out.begin(), out.end(), [this](ClassRank a, ClassRank b) {
      if (degree_[a] != degree_[b]) return degree_[a] < degree_[b];
      const std::uint64_t ka = tie_key(a);
      const std::uint64_t kb = tie_key(b);
      if (ka != kb) return ka < kb;
      return a < b;
    });
    return out;
  }

  SearchOutcome outcome(SearchStatus status) const {
    SearchOutcome out;
    out.status = status;
    out.best_depth = best_depth_;
    out.backtracks = backtracks_;
    out.restarts = restarts_;
    out.steps = steps_;
    out.elapsed_seconds = elapsed();
    return out;
  }

  SearchOutcome finish_found() const {
    SearchOutcome out = outcome(SearchStatus::found);
    out.path.k = view_.k();
    out.path.part = view_.tag();
    out.path.scope = view_.scope();
    out.path.ranks = path_;
    out.path.seed = current_seed_;
    out.path.wall_seconds = out.elapsed_seconds;
    out.path.backtracks = backtracks_;
    const Violation v = verify_reduced(out.path, view_);
    if (!v.ok()) {
      throw std::logic_error("search produced an invalid path at index " +
                             std::to_string(v.index) + ": " + v.message);
    }
    return out;
  }

  ReducedGraphView view_;
  SearchConfig cfg_;
  ClassRank count_ = 0;
  ClassRank start_ = 0;
  ClassRank end_ = 0;

  std::uint64_t current_seed_ = 0;
  TieBreak tie_break_ = TieBreak::rank_order;
  std::vector<std::uint64_t> visited_;
  std::vector<std::uint8_t> degree_;
  std::vector<ClassRank> path_;
  std::vector<std::uint8_t> cursor_;
  std::vector<std::uint32_t> position_;  // rotation only

  std::uint32_t restarts_ = 0;
  std::uint64_t backtracks_ = 0;
  std::uint64_t since_restart_ = 0;
  std::uint64_t steps_ = 0;
  std::size_t best_depth_ = 1;
  double elapsed_before_ = 0.0;
  std::optional<std::chrono::steady_clock::time_point> run_started_;
};

/// Convenience wrapper: one full run with the given hooks.
inline SearchOutcome search(const ReducedGraphView& view, const SearchConfig& cfg,
                            const SearchHooks& hooks = {}) {
  HamiltonianSearch s(view, cfg);
  return s.run(hooks);
}

}  // namespace midlevels

#endif  // MIDLEVELS_HAM_SEARCH_HPP
