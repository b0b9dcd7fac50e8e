// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Reference values come from the brute-force oracles in oracles.hpp or from
// binomial arithmetic done here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli_process.hpp"
#include "midlevels/midlevels.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace midlevels;

namespace {

// Pinned limits.
constexpr double kWorkedExampleSeconds = 1e-3;
constexpr double kCountSeconds = 1.0;
constexpr double kOracleSeconds = 60.0;
constexpr double kNwSeconds = 60.0;
constexpr double kWholeSearchSeconds = 600.0;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

/// Collects failures of one criterion; the first few are printed.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  bool ok() const { return failures.empty(); }
};

int g_failed = 0;

void report(int id, const std::string& title, const Check& c, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", c.ok() ? "PASS" : "FAIL", id, title.c_str(),
              detail.c_str());
  for (std::size_t i = 0; i < c.failures.size() && i < 5; ++i) {
    std::printf("    %s\n", c.failures[i].c_str());
  }
  if (!c.ok()) ++g_failed;
  std::fflush(stdout);
}

std::string seconds(double s) {
  std::ostringstream os;
  os.precision(3);
  os << s << " s";
  return os.str();
}

/// Exact binomial by Pascal's rule, independent of the library.
std::uint64_t pascal(int n, int r) {
  if (r < 0 || r > n) return 0;
  std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j > 0; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j) - 1];
  }
  return row[static_cast<std::size_t>(r)];
}

/// Rounds to three significant digits.
double sig3(double v) {
  const double scale = std::pow(10.0, std::floor(std::log10(v)) - 2);
  return std::round(v / scale) * scale;
}

void criterion1() {
  Check c;
  const auto t0 = Clock::now();
  const RankTables t(3);
  const std::uint64_t r = t.rank_catalan(CanonicalString::parse("0010101"));
  const double dt = since(t0);
  c.expect(r == 4, "rank(0010101) = " + std::to_string(r));
  c.expect(cw(3, 2) == 3 && cw(2, 2) == 1 && cw(1, 2) == 0, "C_w terms are not 3, 1, 0");
  c.expect(r == cw(3, 2) + cw(2, 2) + cw(1, 2), "rank is not the sum of its C_w terms");
  c.expect(dt < kWorkedExampleSeconds, "took " + seconds(dt));
  report(1, "worked example rank(0010101) = 3 + 1 + 0 = 4", c,
         "rank " + std::to_string(r) + " in " + seconds(dt));
}

void criterion2(const std::string& cli_path) {
  Check c;
  const auto t0 = Clock::now();
  c.expect(catalan(18) == 477'638'700, "C(18) = " + std::to_string(catalan(18)));
  c.expect(pascal(36, 18) / 19 == 477'638'700, "C(18) by Pascal's rule");
  const RankTables t18(18);
  const std::uint64_t f18 = t18.part_size(make_part(18, PartTag::front));
  const std::uint64_t m18 = t18.part_size(make_part(18, PartTag::middle));
  const std::uint64_t r18 = t18.part_size(make_part(18, PartTag::rear));
  c.expect(f18 == 120'624'130, "k=18 front = " + std::to_string(f18));
  c.expect(m18 == 236'390'440, "k=18 middle = " + std::to_string(m18));
  c.expect(r18 == 120'624'130, "k=18 rear = " + std::to_string(r18));

  const RankTables t19(19);
  const std::uint64_t f19 = t19.part_size(make_part(19, PartTag::front));
  const std::uint64_t m19 = t19.part_size(make_part(19, PartTag::middle));
  const std::uint64_t r19 = t19.part_size(make_part(19, PartTag::rear));
  c.expect(sig3(static_cast<double>(f19)) == 2.92e8, "k=19 front = " + std::to_string(f19));
  c.expect(sig3(static_cast<double>(m19)) == 1.18e9, "k=19 middle = " + std::to_string(m19));
  c.expect(sig3(static_cast<double>(r19)) == 2.92e8, "k=19 rear = " + std::to_string(r19));
  c.expect(f19 + m19 + r19 == catalan(19), "k=19 parts do not sum to C(19)");
  const double dt = since(t0);
  c.expect(dt < kCountSeconds, "took " + seconds(dt));

  // Same numbers through the command line.
  c.expect(cli::run(cli_path, {"count", "--k", "18"}).out == "477638700\n", "cli count --k 18");
  c.expect(cli::run(cli_path, {"count", "--k", "18", "--part", "middle"}).out == "236390440\n",
           "cli count --k 18 --part middle");
  report(2, "vertex counts for k = 18 and k = 19", c,
         "k=19 parts " + std::to_string(f19) + " / " + std::to_string(m19) + " / " +
             std::to_string(r19) + ", " + seconds(dt));
}

void criterion3() {
  Check c;
  const auto t0 = Clock::now();
  for (int k = 1; k <= 6; ++k) {
    std::set<std::pair<std::uint64_t, std::uint64_t>> implicit;
    for (const CanonicalString& s : oracle::canonical_strings(k)) {
      for (const CanonicalString& t : whole_neighbors(s)) {
        const auto a = s.bits().bits();
        const auto b = t.bits().bits();
        implicit.insert({std::min(a, b), std::max(a, b)});
      }
    }
    c.expect(implicit == oracle::projected_edges(k), "adjacency differs for k = " + std::to_string(k));
  }
  std::size_t checked = 0;
  for (int k = 1; k <= 12; ++k) {
    const RankTables t(k);
    const auto all = oracle::canonical_strings(k);
    std::map<int, std::uint64_t> next_in_brun;
    for (std::size_t i = 0; i < all.size(); ++i) {
      const int b = brun(all[i]);
      const std::uint64_t j = next_in_brun[b]++;
      if (t.rank_catalan(all[i]) != i || t.unrank_catalan(i) != all[i] ||
          t.rank_narayana(all[i]) != j || t.unrank_narayana(b, j) != all[i]) {
        c.expect(false, "rank mismatch at k = " + std::to_string(k) + " for " + all[i].str());
        break;
      }
      ++checked;
    }
    c.expect(all.size() == catalan(k), "enumeration size for k = " + std::to_string(k));
  }
  const double dt = since(t0);
  c.expect(dt < kOracleSeconds, "took " + seconds(dt));
  report(3, "implicit adjacency equals projected edges (k <= 6); rank/unrank bijections (k <= 12)",
         c, std::to_string(checked) + " strings ranked, " + seconds(dt));
}

void criterion4() {
  Check c;
  const auto t0 = Clock::now();
  std::size_t cells = 0;
  for (int k = 0; k <= 8; ++k) {
    for (int p = 0; p <= k + 1; ++p) {
      const auto counts = oracle::completion_counts_by_01(k, p);
      for (int r = 0; r <= k + 2; ++r) {
        const auto it = counts.find(r);
        const std::uint64_t want = it == counts.end() ? 0 : it->second;
        c.expect(nw(k, p, r) == want, "N_w(" + std::to_string(k) + "," + std::to_string(p) + "," +
                                          std::to_string(r) + ") = " + std::to_string(nw(k, p, r)) +
                                          ", brute force " + std::to_string(want));
        ++cells;
      }
    }
  }
  for (int k = 1; k <= 12; ++k) {
    // Narayana numbers by enumeration of canonical strings per brun.
    std::map<int, std::uint64_t> by_brun;
    for (const CanonicalString& s : oracle::canonical_strings(k)) ++by_brun[oracle::count_runs(s.bits()) / 2];
    for (int r = 1; r <= k; ++r) {
      c.expect(nw(k, 0, r) == by_brun[r] && narayana(k, r) == by_brun[r],
               "N(" + std::to_string(k) + "," + std::to_string(r) + ")");
    }
  }
  const double dt = since(t0);
  c.expect(dt < kNwSeconds, "took " + seconds(dt));
  report(4, "N_w matches brute-force completion counts (k <= 8); N_w(k,0,r) = N(k,r) (k <= 12)", c,
         std::to_string(cells) + " cells, " + seconds(dt));
}

struct PipelineRun {
  bool ok = false;
  std::string note;
};

/// Runs the pipeline through the command line and re-verifies its artifacts.
PipelineRun pipeline(const std::string& cli_path, const fs::path& dir, int k, bool whole) {
  PipelineRun pr;
  std::vector<std::string> args = {"pipeline", "--k", std::to_string(k), "--lift", "--fresh",
                                   "--out-dir", dir.string()};
  if (whole) {
    args.push_back("--mode");
    args.push_back("whole");
  }
  const cli::Result r = cli::run(cli_path, args);
  if (r.code != 0) {
    pr.note = "pipeline exited with " + std::to_string(r.code);
    return pr;
  }
  const LiftedCycle cycle = read_cycle_file(dir / "cycle.txt");
  const std::uint64_t want = 2 * pascal(2 * k + 1, k);
  if (cycle.size() != want) {
    pr.note = "cycle has " + std::to_string(cycle.size()) + " vertices, want " + std::to_string(want);
    return pr;
  }
  // Independent check: distinct, on the middle levels, single-bit steps.
  std::set<std::uint64_t> seen(cycle.vertices.begin(), cycle.vertices.end());
  bool steps = true;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const std::uint64_t a = cycle.vertices[i];
    const std::uint64_t b = cycle.vertices[(i + 1) % cycle.size()];
    const int pa = std::popcount(a);
    steps = steps && std::popcount(a ^ b) == 1 && (pa == k || pa == k + 1);
  }
  if (seen.size() != want || !steps || !verify_cycle(cycle).ok()) {
    pr.note = "cycle for k = " + std::to_string(k) + " is not Hamiltonian";
    return pr;
  }
  pr.ok = true;
  return pr;
}

void criterion5(const std::string& cli_path, const fs::path& work) {
  Check c;
  const auto t0 = Clock::now();
  for (int k = 8; k <= 10; ++k) {
    const PipelineRun r = pipeline(cli_path, work / ("decomposed" + std::to_string(k)), k, false);
    c.expect(r.ok, "decomposed k = " + std::to_string(k) + ": " + r.note);
  }
  for (int k = 2; k <= 10; ++k) {
    const PipelineRun r = pipeline(cli_path, work / ("whole" + std::to_string(k)), k, true);
    c.expect(r.ok, "whole k = " + std::to_string(k) + ": " + r.note);
  }
  const double lifted = since(t0);

  // Whole-graph search alone for k <= 12 under one time limit.
  const auto t1 = Clock::now();
  for (int k = 2; k <= 12; ++k) {
    const ReducedGraphView view(k, PartTag::whole);
    const SearchOutcome out = search(view, SearchConfig{});
    c.expect(out.status == SearchStatus::found && verify_reduced(out.path, view).ok(),
             "whole search failed for k = " + std::to_string(k));
  }
  const double searched = since(t1);
  c.expect(searched < kWholeSearchSeconds, "whole searches k <= 12 took " + seconds(searched));
  report(5, "lifted cycles verified (decomposed k = 8..10, whole k = 2..10); whole search k <= 12",
         c, "pipelines " + seconds(lifted) + ", whole searches " + seconds(searched));
}

void criterion6(const fs::path& work) {
  Check c;
  for (int k = 8; k <= 10; ++k) {
    const ReducedPath p = read_path_file(work / ("decomposed" + std::to_string(k)) / "stitched.mlpath");
    const RankTables t(k);
    c.expect(!p.ranks.empty() && t.unrank_catalan(p.ranks.front()).bits() == oracle::canon_by_scan(BitString::parse(std::string(k + 1, '0') + std::string(k, '1'))),
             "stitched k = " + std::to_string(k) + " does not start at rho(0^{k+1}1^k)");
    std::string alt = "0";
    for (int i = 0; i < k; ++i) alt += "01";
    c.expect(!p.ranks.empty() && t.unrank_catalan(p.ranks.back()).bits() == oracle::canon_by_scan(BitString::parse(alt)),
             "stitched k = " + std::to_string(k) + " does not end at rho(0(01)^k)");
  }
  std::size_t junctions = 0;
  for (int k = 8; k <= 18; ++k) {
    const PartSpec f = make_part(k, PartTag::front);
    const PartSpec m = make_part(k, PartTag::middle);
    const PartSpec r = make_part(k, PartTag::rear);
    // P_F ends at hc(k, f_hi), Rev(P_M) runs from Rev(hc(k, m_lo)) to
    // Rev(hc(k, m_hi)), P_R starts at hc(k, r_lo).
    const BitString a = f.end_terminal.bits();
    const BitString b = reverse(m.start_terminal.bits());
    const BitString d = reverse(m.end_terminal.bits());
    const BitString e = r.start_terminal.bits();
    c.expect(classes_adjacent_by_scan(a, b), "front/middle junction k = " + std::to_string(k));
    c.expect(classes_adjacent_by_scan(d, e), "middle/rear junction k = " + std::to_string(k));
    c.expect(adjacent(f.end_terminal, canon(b)) && adjacent(canon(d), r.start_terminal),
             "library adjacency disagrees at k = " + std::to_string(k));
    junctions += 2;
  }
  report(6, "stitched endpoints and hc/Rev junction adjacency (8 <= k <= 18)", c,
         std::to_string(junctions) + " junctions");
}

void criterion7() {
  Check c;
  const auto t0 = Clock::now();
  // Canon class invariance against the class scan.
  for (int k = 1; k <= 6; ++k) {
    const int n = 2 * k + 1;
    for (const BitString& x : oracle::middle_level_strings(k)) {
      const CanonicalString cx = canon(x);
      bool ok = cx.bits() == oracle::canon_by_scan(x) && canon(complement(x)) == cx;
      for (int i = 0; i < n && ok; ++i) ok = canon(rotate(x, i)) == cx;
      if (!ok) {
        c.expect(false, "canon not class invariant at " + x.str());
        break;
      }
    }
  }
  // Reversal is an involution on strings and on classes.
  for (int k = 1; k <= 7; ++k) {
    const int n = 2 * k + 1;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
      const BitString x(b, n);
      if (reverse(reverse(x)) != x) {
        c.expect(false, "reverse twice changes " + x.str());
        break;
      }
    }
    for (const CanonicalString& s : oracle::canonical_strings(k)) {
      if (canon(reverse(canon(reverse(s.bits())).bits())) != s) {
        c.expect(false, "class reversal is not an involution at " + s.str());
        break;
      }
    }
  }
  // Narayana symmetry and summation.
  for (int k = 1; k <= 31; ++k) {
    std::uint64_t sum = 0;
    for (int r = 1; r <= k; ++r) {
      sum += narayana(k, r);
      c.expect(narayana(k, r) == narayana(k, k + 1 - r), "N(k,r) asymmetric at k = " + std::to_string(k));
    }
    c.expect(sum == pascal(2 * k, k) / static_cast<std::uint64_t>(k + 1),
             "sum of N(k, r) differs from C(k) at k = " + std::to_string(k));
  }
  // Adjacency symmetry and the degree bound.
  std::size_t max_degree_seen = 0;
  for (int k = 2; k <= 10; ++k) {
    const ReducedGraphView g(k, PartTag::whole);
    const auto count = static_cast<ClassRank>(g.vertex_count());
    for (ClassRank v = 0; v < count; ++v) {
      const auto nb = g.neighbors_ranked(v);
      max_degree_seen = std::max(max_degree_seen, nb.size());
      c.expect(nb.size() <= static_cast<std::size_t>(k + 1), "degree above k + 1 at k = " + std::to_string(k));
      for (ClassRank u : nb) {
        if (!g.neighbors_ranked(u).contains(v)) {
          c.expect(false, "asymmetric edge at k = " + std::to_string(k));
        }
      }
    }
  }
  const double dt = since(t0);
  report(7, "canon invariance, reversal involution, Narayana symmetry/sum, adjacency symmetry, degree <= k+1",
         c, seconds(dt));
}

}  // namespace

int main() {
  const std::string cli_path = MIDLEVELS_CLI;
  const fs::path work = fs::temp_directory_path() / "midlevels_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  const std::vector<std::function<void()>> criteria = {
      criterion1,
      [&] { criterion2(cli_path); },
      criterion3,
      criterion4,
      [&] { criterion5(cli_path, work); },
      [&] { criterion6(work); },
      criterion7,
  };
  for (const auto& run : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      std::printf("FAIL criterion: unexpected exception: %s\n", e.what());
      ++g_failed;
    }
  }
  std::printf("%d of 7 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
