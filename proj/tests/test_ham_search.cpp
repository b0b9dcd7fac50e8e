#include <catch_amalgamated.hpp>

#include <vector>

#include "midlevels/ham_search.hpp"

using namespace midlevels;

namespace {

SearchConfig default_config(std::uint64_t seed = 1) {
  SearchConfig cfg;
  cfg.seed = seed;
  return cfg;
}

ReducedPath found_path(const ReducedGraphView& view, const SearchConfig& cfg) {
  const SearchOutcome out = search(view, cfg);
  REQUIRE(out.status == SearchStatus::found);
  return out.path;
}

}  // namespace

TEST_CASE("R_5 path is its single edge", "[search]") {
  const ReducedGraphView view(2, PartTag::whole);
  const ReducedPath p = found_path(view, default_config());
  REQUIRE(p.ranks.size() == 2);
  CHECK(view.unrank(p.ranks[0]).str() == "00011");
  CHECK(view.unrank(p.ranks[1]).str() == "00101");
}

TEST_CASE("R_3 path is a single vertex", "[search]") {
  const ReducedGraphView view(1, PartTag::whole);
  const ReducedPath p = found_path(view, default_config());
  CHECK(p.ranks == std::vector<ClassRank>{0});
  CHECK(verify_reduced(p, view).ok());
}

TEST_CASE("whole graphs up to k = 10 have terminal-to-terminal paths", "[search]") {
  for (int k = 2; k <= 10; ++k) {
    const ReducedGraphView view(k, PartTag::whole);
    const ReducedPath p = found_path(view, default_config());
    INFO("k = " << k);
    CHECK(p.ranks.size() == catalan(k));
    CHECK(view.unrank(p.ranks.front()) == hc(k, 1));
    CHECK(view.unrank(p.ranks.back()) == hc(k, k));
    CHECK(verify_reduced(p, view).ok());
  }
}

TEST_CASE("parts for k = 8..10 have paths between their terminals", "[search]") {
  for (int k = 8; k <= 10; ++k) {
    auto tables = std::make_shared<const RankTables>(k);
    for (PartTag tag : kDecomposedParts) {
      const ReducedGraphView view(tables, make_part(k, tag));
      const ReducedPath p = found_path(view, default_config());
      INFO("k = " << k << " part " << to_string(tag));
      CHECK(p.scope == RankScope::part_local);
      CHECK(view.unrank(p.ranks.front()) == view.part().start_terminal);
      CHECK(view.unrank(p.ranks.back()) == view.part().end_terminal);
      CHECK(verify_reduced(p, view).ok());
    }
  }
}

TEST_CASE("backtracking strategy solves small whole graphs", "[search]") {
  for (int k = 2; k <= 8; ++k) {
    const ReducedGraphView view(k, PartTag::whole);
    SearchConfig cfg = default_config();
    cfg.strategy = Strategy::backtracking;
    cfg.max_backtracks_before_restart = 20'000;
    const ReducedPath p = found_path(view, cfg);
    INFO("k = " << k);
    CHECK(verify_reduced(p, view).ok());
  }
  // Unpruned search is exact on tiny graphs.
  const ReducedGraphView r9(4, PartTag::whole);
  SearchConfig cfg = default_config();
  cfg.strategy = Strategy::backtracking;
  cfg.prune_level = PruneLevel::none;
  CHECK(verify_reduced(found_path(r9, cfg), r9).ok());
}

TEST_CASE("verify_reduced reports the first violation", "[search][verify]") {
  const ReducedGraphView view(6, PartTag::whole);
  const ReducedPath good = found_path(view, default_config());
  REQUIRE(verify_reduced(good, view).ok());

  SECTION("swapped interior ranks break adjacency") {
    ReducedPath bad = good;
    // Find a swap that is not accidentally still a path.
    std::size_t i = 5;
    for (; i + 6 < bad.ranks.size(); ++i) {
      ReducedPath trial = good;
      std::swap(trial.ranks[i], trial.ranks[i + 5]);
      if (!verify_reduced(trial, view).ok()) {
        bad = trial;
        break;
      }
    }
    const Violation v = verify_reduced(bad, view);
    CHECK(v.kind == Violation::Kind::not_adjacent);
    CHECK(v.index >= i);
    CHECK(v.index <= i + 1);
  }
  SECTION("truncation is a completeness violation") {
    ReducedPath bad = good;
    bad.ranks.resize(bad.ranks.size() - 3);
    const Violation v = verify_reduced(bad, view);
    CHECK(v.kind == Violation::Kind::incomplete);
    CHECK(v.index == bad.ranks.size());
  }
  SECTION("repeated vertex") {
    ReducedPath bad = good;
    bad.ranks.push_back(bad.ranks[bad.ranks.size() - 2]);
    CHECK(verify_reduced(bad, view).kind == Violation::Kind::duplicate);
  }
  SECTION("wrong start") {
    ReducedPath bad = good;
    std::reverse(bad.ranks.begin(), bad.ranks.end());
    const Violation v = verify_reduced(bad, view);
    CHECK(v.kind == Violation::Kind::start_terminal);
    CHECK(v.index == 0);
  }
  SECTION("rank out of range") {
    ReducedPath bad = good;
    bad.ranks[3] = static_cast<ClassRank>(catalan(6));
    CHECK(verify_reduced(bad, view).kind == Violation::Kind::out_of_range);
  }
  SECTION("scope mismatch") {
    ReducedPath bad = good;
    bad.k = 7;
    CHECK(verify_reduced(bad, view).kind == Violation::Kind::scope);
  }
}

TEST_CASE("search is deterministic", "[search]") {
  SearchConfig cfg = default_config(7);
  cfg.tie_break = TieBreak::seeded_random;
  cfg.strategy = GENERATE(Strategy::rotation, Strategy::backtracking);
  const ReducedGraphView view(cfg.strategy == Strategy::rotation ? 9 : 7, PartTag::whole);
  const SearchOutcome a = search(view, cfg);
  const SearchOutcome b = search(view, cfg);
  REQUIRE(a.status == SearchStatus::found);
  CHECK(a.path.ranks == b.path.ranks);
  CHECK(a.backtracks == b.backtracks);
  CHECK(a.steps == b.steps);
}

TEST_CASE("fuzzed configurations only ever return verified paths", "[search]") {
  for (int k = 3; k <= 10; ++k) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const ReducedGraphView view(k, PartTag::whole);
      SearchConfig cfg = default_config(seed * 1000 + static_cast<std::uint64_t>(k));
      cfg.tie_break = seed % 2 ? TieBreak::seeded_random : TieBreak::rank_order;
      cfg.max_backtracks_before_restart = 5000 * seed;
      cfg.strategy = seed == 2 ? Strategy::backtracking : Strategy::rotation;
      cfg.prune_level = seed == 3 ? PruneLevel::none : PruneLevel::local_degree;
      const SearchOutcome out = search(view, cfg);
      INFO("k = " << k << ", seed = " << seed);
      if (out.status == SearchStatus::found) {
        CHECK(verify_reduced(out.path, view).ok());
      }
    }
  }
}

TEST_CASE("restart budget is honored", "[search]") {
  const ReducedGraphView view(10, PartTag::whole);
  SearchConfig cfg = default_config(3);
  cfg.strategy = GENERATE(Strategy::rotation, Strategy::backtracking);
  cfg.max_backtracks_before_restart = 50;
  cfg.max_restarts = 4;
  HamiltonianSearch s(view, cfg);
  std::uint64_t worst = 0;
  SearchHooks hooks;
  hooks.progress_interval_seconds = 0.0;
  hooks.on_progress = [&](const SearchProgress&) {
    worst = std::max(worst, s.backtracks_since_restart());
  };
  const SearchOutcome out = s.run(hooks);
  CHECK(worst <= cfg.max_backtracks_before_restart);
  CHECK(out.restarts <= cfg.max_restarts);
  if (out.status == SearchStatus::exhausted) {
    CHECK(out.restarts == cfg.max_restarts);
    CHECK(out.best_depth < catalan(10));
    CHECK_FALSE(out.detail.empty());
  }
}

TEST_CASE("checkpoint round trip and resume reproduce the uninterrupted run", "[search][checkpoint]") {
  SearchConfig cfg = default_config(11);
  cfg.strategy = GENERATE(Strategy::rotation, Strategy::backtracking);
  const ReducedGraphView view(cfg.strategy == Strategy::rotation ? 10 : 8, PartTag::whole);
  // Small budgets so that restarts happen along the way.
  cfg.max_backtracks_before_restart = cfg.strategy == Strategy::rotation ? 2000 : 200;
  cfg.max_restarts = 1000;
  cfg.tie_break = TieBreak::seeded_random;

  const SearchOutcome full = search(view, cfg);
  REQUIRE(full.status == SearchStatus::found);

  for (std::uint64_t stop : std::vector<std::uint64_t>{1, 500, 5000, full.steps / 2}) {
    HamiltonianSearch first(view, cfg);
    SearchHooks hooks;
    hooks.stop_after_steps = stop;
    const SearchOutcome part = first.run(hooks);
    REQUIRE(part.status == SearchStatus::interrupted);
    const auto bytes = first.checkpoint().serialize();
    const SearchCheckpoint loaded = SearchCheckpoint::deserialize(bytes);
    CHECK(loaded.serialize() == bytes);

    HamiltonianSearch resumed = HamiltonianSearch::resume(view, cfg, loaded);
    const SearchOutcome rest = resumed.run();
    INFO("stopped after " << stop << " steps");
    REQUIRE(rest.status == SearchStatus::found);
    CHECK(rest.path.ranks == full.path.ranks);
    CHECK(rest.backtracks == full.backtracks);
    CHECK(rest.restarts == full.restarts);
    CHECK(rest.steps == full.steps);
  }
}

TEST_CASE("checkpoints are written periodically", "[search][checkpoint]") {
  const ReducedGraphView view(10, PartTag::whole);
  SearchConfig cfg = default_config(5);
  cfg.checkpoint_interval_seconds = 0.0;
  std::size_t written = 0;
  SearchHooks hooks;
  hooks.on_checkpoint = [&](const SearchCheckpoint& c) {
    ++written;
    CHECK(c.k == 10);
    CHECK(!c.stack.empty());
  };
  const SearchOutcome out = search(view, cfg, hooks);
  REQUIRE(out.status == SearchStatus::found);
  CHECK(written > 0);
}

TEST_CASE("resume rejects mismatched or corrupted checkpoints", "[search][checkpoint]") {
  const ReducedGraphView view(8, PartTag::whole);
  const SearchConfig cfg = default_config(2);
  HamiltonianSearch s(view, cfg);
  SearchHooks hooks;
  hooks.stop_after_steps = 100;
  REQUIRE(s.run(hooks).status == SearchStatus::interrupted);
  const SearchCheckpoint ckpt = s.checkpoint();

  const ReducedGraphView other_k(9, PartTag::whole);
  CHECK_THROWS_AS(HamiltonianSearch::resume(other_k, cfg, ckpt), FormatError);
  const ReducedGraphView other_part(8, PartTag::front);
  CHECK_THROWS_AS(HamiltonianSearch::resume(other_part, cfg, ckpt), FormatError);
  CHECK_THROWS_AS(HamiltonianSearch::resume(view, default_config(3), ckpt), FormatError);
  SearchConfig other_strategy = cfg;
  other_strategy.strategy = Strategy::backtracking;
  CHECK_THROWS_AS(HamiltonianSearch::resume(view, other_strategy, ckpt), FormatError);

  auto bytes = ckpt.serialize();
  bytes[bytes.size() / 2] ^= 0x10;
  CHECK_THROWS_AS(SearchCheckpoint::deserialize(bytes), FormatError);
  auto truncated = ckpt.serialize();
  truncated.resize(truncated.size() - 9);
  CHECK_THROWS_AS(SearchCheckpoint::deserialize(truncated), FormatError);
  auto bad_magic = ckpt.serialize();
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(SearchCheckpoint::deserialize(bad_magic), FormatError);

  SearchCheckpoint tampered = ckpt;
  tampered.stack[2] = tampered.stack[0];
  CHECK_THROWS_AS(HamiltonianSearch::resume(view, cfg, tampered), FormatError);
}

TEST_CASE("views beyond 32-bit ranks are rejected", "[search]") {
  const ReducedGraphView view(20, PartTag::whole);
  CHECK_THROWS_AS(HamiltonianSearch(view, default_config()), std::overflow_error);
}

TEST_CASE("search state for k = 12 stays small", "[search]") {
  const ReducedGraphView view(12, PartTag::whole);
  HamiltonianSearch s(view, default_config());
  SearchHooks hooks;
  hooks.stop_after_steps = 150'000;
  REQUIRE(s.run(hooks).status == SearchStatus::interrupted);
  // Per vertex: one visited bit, a degree byte, path and position words and
  // a cursor byte.
  CHECK(s.memory_bytes() < 10'000'000);
  CHECK(s.checkpoint().serialize().size() < 10'000'000);
}
