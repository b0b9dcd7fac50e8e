// midlevels: command-line front end for the reduced middle-levels graph.
//
// Exit codes: 0 ok, 1 verification failure, 2 search budget exhausted,
// 3 bad input or unreadable file, 130 interrupted.

#include <algorithm>
#include <atomic>
#include <csignal>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "midlevels/midlevels.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace midlevels;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitExhausted = 2;
constexpr int kExitInput = 3;
constexpr int kExitInterrupted = 130;
constexpr int kMaxLiftK = 11;

volatile std::sig_atomic_t g_stop = 0;

extern "C" void on_signal(int) { g_stop = 1; }

/// Bad arguments or unreadable input; maps to exit code 3.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::mutex g_err_mutex;

void log_line(const std::string& line) {
  const std::lock_guard lock(g_err_mutex);
  std::cerr << line << '\n';
}

PartTag part_arg(const std::string& s) {
  const auto tag = parse_part_tag(s);
  if (!tag) throw InputError("unknown part '" + s + "' (whole, front, middle, rear)");
  return *tag;
}

PartSpec part_for(int k, PartTag tag) {
  try {
    return make_part(k, tag);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

BitString string_arg(const std::string& s, std::optional<int> k) {
  BitString x;
  try {
    x = BitString::parse(s);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  if (k && x.size() != 2 * *k + 1) {
    throw InputError("string has length " + std::to_string(x.size()) + ", expected " +
                     std::to_string(2 * *k + 1) + " for k = " + std::to_string(*k));
  }
  if (x.size() % 2 == 0 || x.size() > 63) throw InputError("string length must be odd and < 64");
  return x;
}

CanonicalString class_of(const BitString& x) {
  try {
    return canon(x);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

std::string fixed(double v, int digits = 3) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// Run statistics

struct RunStats {
  int k = 0;
  PartTag part = PartTag::whole;
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::rotation;
  std::uint64_t vertices = 0;
  double elapsed_seconds = 0.0;
  std::uint64_t backtracks = 0;
  std::uint32_t restarts = 0;
  std::uint64_t best_depth = 0;
  std::size_t peak_memory_bytes = 0;
  SearchStatus status = SearchStatus::exhausted;
  bool reused = false;
  std::string detail;

  json to_json() const {
    return {{"k", k},
            {"part", std::string(to_string(part))},
            {"seed", seed},
            {"strategy", std::string(to_string(strategy))},
            {"vertices", vertices},
            {"elapsed_seconds", elapsed_seconds},
            {"backtracks", backtracks},
            {"restarts", restarts},
            {"best_depth", best_depth},
            {"peak_memory_bytes", peak_memory_bytes},
            {"status", std::string(to_string(status))},
            {"reused", reused}};
  }

  void print_text(std::ostream& out) const {
    out << "k: " << k << '\n'
        << "part: " << to_string(part) << '\n'
        << "seed: " << seed << '\n'
        << "strategy: " << to_string(strategy) << '\n'
        << "vertices: " << vertices << '\n'
        << "elapsed_seconds: " << fixed(elapsed_seconds) << '\n'
        << "backtracks: " << backtracks << '\n'
        << "restarts: " << restarts << '\n'
        << "best_depth: " << best_depth << '\n'
        << "peak_memory_bytes: " << peak_memory_bytes << '\n'
        << "status: " << to_string(status) << '\n';
    if (!detail.empty()) out << "detail: " << detail << '\n';
  }
};

// ---------------------------------------------------------------------------
// Search driver shared by `search` and `pipeline`

struct SearchJob {
  std::shared_ptr<const RankTables> tables;
  PartTag part = PartTag::whole;
  SearchConfig cfg;
  std::optional<fs::path> checkpoint;
  std::optional<fs::path> resume;
  double progress_interval = 5.0;
  std::string label;
};

struct SearchResult {
  RunStats stats;
  std::optional<ReducedPath> path;
};

SearchResult run_search(const SearchJob& job) {
  const int k = job.tables->k();
  const ReducedGraphView view(job.tables, part_for(k, job.part));
  if (view.vertex_count() > 0xffffffffULL) {
    throw InputError("k = " + std::to_string(k) + " part " + std::string(to_string(job.part)) +
                     " has more vertices than 32-bit ranks allow");
  }

  std::optional<HamiltonianSearch> s;
  if (job.resume) {
    SearchCheckpoint ckpt;
    try {
      ckpt = SearchCheckpoint::deserialize(read_file_bytes(*job.resume));
    } catch (const std::exception& e) {
      throw InputError("cannot resume from " + job.resume->string() + ": " + e.what());
    }
    try {
      s.emplace(HamiltonianSearch::resume(view, job.cfg, ckpt));
    } catch (const FormatError& e) {
      throw InputError("cannot resume from " + job.resume->string() + ": " + e.what());
    }
    log_line(job.label + "resumed at depth " + std::to_string(ckpt.stack.size()));
  } else {
    s.emplace(view, job.cfg);
  }

  SearchHooks hooks;
  hooks.progress_interval_seconds = job.progress_interval;
  hooks.on_progress = [&](const SearchProgress& p) {
    log_line(job.label + "depth " + std::to_string(p.depth) + " backtracks " +
             std::to_string(p.backtracks) + " restarts " + std::to_string(p.restarts) +
             " elapsed " + fixed(p.elapsed_seconds, 1));
  };
  if (job.checkpoint) {
    hooks.on_checkpoint = [&](const SearchCheckpoint& c) {
      write_file_atomic(*job.checkpoint, c.serialize());
    };
  }
  hooks.should_stop = [] { return g_stop != 0; };

  const SearchOutcome out = s->run(hooks);

  SearchResult r;
  RunStats& st = r.stats;
  st.k = k;
  st.part = job.part;
  st.seed = job.cfg.seed;
  st.strategy = job.cfg.strategy;
  st.vertices = view.vertex_count();
  st.elapsed_seconds = out.elapsed_seconds;
  st.backtracks = out.backtracks;
  st.restarts = out.restarts;
  st.best_depth = out.best_depth;
  st.peak_memory_bytes = s->memory_bytes();
  st.status = out.status;
  st.detail = out.detail;

  if (out.status == SearchStatus::interrupted && job.checkpoint) {
    write_file_atomic(*job.checkpoint, s->checkpoint().serialize());
    log_line(job.label + "checkpoint written to " + job.checkpoint->string());
  }
  if (out.status == SearchStatus::found) {
    r.path = out.path;
    if (job.checkpoint) {
      std::error_code ec;
      fs::remove(*job.checkpoint, ec);
    }
  }
  return r;
}

int exit_code_for(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return kExitOk;
    case SearchStatus::exhausted: return kExitExhausted;
    case SearchStatus::interrupted: return kExitInterrupted;
  }
  return kExitInput;
}

// ---------------------------------------------------------------------------
// verify

int verify_file(const fs::path& file) {
  std::vector<std::uint8_t> bytes;
  try {
    bytes = read_file_bytes(file);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  const std::string head(bytes.begin(), bytes.begin() + static_cast<long>(std::min<std::size_t>(7, bytes.size())));

  if (head == kPathMagic) {
    ReducedPath p;
    try {
      p = decode_path(bytes);
    } catch (const FormatError& e) {
      throw InputError(file.string() + ": " + e.what());
    }
    if ((p.part != PartTag::whole && p.k < kMinDecomposedK)) {
      throw InputError(file.string() + ": part path with k < " + std::to_string(kMinDecomposedK));
    }
    const ReducedGraphView view(p.k, p.part);
    const Violation v = verify_reduced(p, view);
    if (!v.ok()) {
      std::cout << "FAIL path k=" << p.k << " part=" << to_string(p.part) << " index " << v.index
                << ": " << v.message << '\n';
      return kExitVerify;
    }
    std::cout << "OK path k=" << p.k << " part=" << to_string(p.part)
              << " vertices=" << p.ranks.size() << '\n';
    return kExitOk;
  }
  if (head == SearchCheckpoint::kMagic) {
    SearchCheckpoint c;
    try {
      c = SearchCheckpoint::deserialize(bytes);
    } catch (const FormatError& e) {
      throw InputError(file.string() + ": " + e.what());
    }
    std::cout << "OK checkpoint k=" << c.k << " part=" << to_string(c.part)
              << " depth=" << c.stack.size() << " backtracks=" << c.backtracks << '\n';
    return kExitOk;
  }
  if (head == "MLCYCLE") {
    LiftedCycle c;
    try {
      std::istringstream in(std::string(bytes.begin(), bytes.end()));
      c = read_cycle_text(in);
    } catch (const FormatError& e) {
      throw InputError(file.string() + ": " + e.what());
    }
    const Violation v = verify_cycle(c);
    if (!v.ok()) {
      std::cout << "FAIL cycle k=" << c.k << " index " << v.index << ": " << v.message << '\n';
      return kExitVerify;
    }
    std::cout << "OK cycle k=" << c.k << " vertices=" << c.size() << '\n';
    return kExitOk;
  }
  throw InputError(file.string() + ": unrecognized file format");
}

// ---------------------------------------------------------------------------
// pipeline

struct PipelineOptions {
  int k = 0;
  std::string mode = "decomposed";
  bool lift = false;
  fs::path out_dir = "midlevels_out";
  bool fresh = false;
  SearchConfig cfg;
  double progress_interval = 5.0;
};

unsigned worker_limit() {
  unsigned n = 3;
  if (const char* env = std::getenv("MIDLEVELS_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
    } catch (const std::exception&) {
      throw InputError(std::string("MIDLEVELS_THREADS must be a positive integer, got '") + env +
                       "'");
    }
  }
  return n;
}

/// A stored part path is reused when it decodes and verifies for this part.
std::optional<ReducedPath> reusable_path(const fs::path& file, const ReducedGraphView& view) {
  if (!fs::exists(file)) return std::nullopt;
  try {
    ReducedPath p = read_path_file(file);
    if (verify_reduced(p, view).ok()) return p;
  } catch (const std::exception&) {
  }
  log_line("ignoring unusable " + file.string());
  return std::nullopt;
}

int run_pipeline(const PipelineOptions& o) {
  const bool whole_mode = o.mode == "whole";
  if (!whole_mode && o.k < kMinDecomposedK) {
    throw InputError("decomposed mode needs k >= " + std::to_string(kMinDecomposedK) +
                     "; use --mode whole");
  }
  fs::create_directories(o.out_dir);
  auto tables = std::make_shared<const RankTables>(o.k);

  std::vector<PartTag> parts;
  if (whole_mode) {
    parts = {PartTag::whole};
  } else {
    parts.assign(kDecomposedParts.begin(), kDecomposedParts.end());
  }

  std::vector<SearchResult> results(parts.size());
  std::vector<std::exception_ptr> errors(parts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < parts.size(); i = next++) {
      try {
        const PartTag tag = parts[i];
        const std::string name(to_string(tag));
        const fs::path path_file = o.out_dir / (name + ".mlpath");
        const fs::path ckpt_file = o.out_dir / (name + ".mlckpt");
        const ReducedGraphView view(tables, part_for(o.k, tag));
        if (!o.fresh) {
          if (auto p = reusable_path(path_file, view)) {
            SearchResult r;
            r.stats.k = o.k;
            r.stats.part = tag;
            r.stats.seed = o.cfg.seed;
            r.stats.strategy = o.cfg.strategy;
            r.stats.vertices = view.vertex_count();
            r.stats.best_depth = p->ranks.size();
            r.stats.status = SearchStatus::found;
            r.stats.reused = true;
            r.path = std::move(*p);
            results[i] = std::move(r);
            log_line("[" + name + "] reusing " + path_file.string());
            continue;
          }
        }
        SearchJob job;
        job.tables = tables;
        job.part = tag;
        job.cfg = o.cfg;
        job.checkpoint = ckpt_file;
        if (!o.fresh && fs::exists(ckpt_file)) job.resume = ckpt_file;
        job.progress_interval = o.progress_interval;
        job.label = "[" + name + "] ";
        results[i] = run_search(job);
        if (results[i].path) write_path_file(path_file, *results[i].path);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned nthreads = std::min<unsigned>(worker_limit(), static_cast<unsigned>(parts.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Summary in part order.
  std::cout << std::left << std::setw(8) << "part" << std::right << std::setw(12) << "vertices"
            << std::setw(12) << "elapsed_s" << std::setw(12) << "backtracks" << std::setw(10)
            << "restarts" << "  result\n";
  int code = kExitOk;
  json summary;
  summary["k"] = o.k;
  summary["mode"] = o.mode;
  summary["parts"] = json::array();
  for (const SearchResult& r : results) {
    const RunStats& s = r.stats;
    std::cout << std::left << std::setw(8) << to_string(s.part) << std::right << std::setw(12)
              << s.vertices << std::setw(12) << fixed(s.elapsed_seconds) << std::setw(12)
              << s.backtracks << std::setw(10) << s.restarts << "  "
              << (s.reused ? "reused" : std::string(to_string(s.status))) << '\n';
    summary["parts"].push_back(s.to_json());
    if (s.status != SearchStatus::found) code = std::max(code, exit_code_for(s.status));
  }
  if (code != kExitOk) {
    summary["status"] = code == kExitInterrupted ? "interrupted" : "exhausted";
    std::cout << summary.dump() << '\n';
    return code;
  }

  ReducedPath whole;
  if (whole_mode) {
    whole = *results[0].path;
  } else {
    try {
      whole = stitch(*results[0].path, *results[1].path, *results[2].path, tables);
    } catch (const AssemblyError& e) {
      std::cout << "stitch failed: " << e.what() << '\n';
      summary["status"] = "verification_failed";
      std::cout << summary.dump() << '\n';
      return kExitVerify;
    }
    write_path_file(o.out_dir / "stitched.mlpath", whole);
  }
  const ReducedGraphView whole_view(tables, make_part(o.k, PartTag::whole));
  const Violation wv = verify_reduced(whole, whole_view);
  std::cout << std::left << std::setw(8) << "path" << std::right << std::setw(12)
            << whole.ranks.size() << std::setw(34) << "" << "  "
            << (wv.ok() ? "verified" : "FAILED: " + wv.message) << '\n';
  summary["path_vertices"] = whole.ranks.size();
  summary["path_verified"] = wv.ok();
  if (!wv.ok()) {
    summary["status"] = "verification_failed";
    std::cout << summary.dump() << '\n';
    return kExitVerify;
  }

  if (o.lift) {
    if (o.k > kMaxLiftK) {
      std::cout << "lift skipped: k = " << o.k << " exceeds the lift limit " << kMaxLiftK << '\n';
      summary["lift"] = "skipped";
    } else {
      LiftedCycle cycle;
      try {
        cycle = lift(whole, tables);
      } catch (const AssemblyError& e) {
        std::cout << "lift failed: " << e.what() << '\n';
        summary["status"] = "verification_failed";
        std::cout << summary.dump() << '\n';
        return kExitVerify;
      }
      const fs::path cycle_file = o.out_dir / "cycle.txt";
      write_cycle_file(cycle_file, cycle);
      // Re-read what was written so the check covers the artifact itself.
      const LiftedCycle stored = read_cycle_file(cycle_file);
      const Violation cv = verify_cycle(stored);
      std::cout << std::left << std::setw(8) << "cycle" << std::right << std::setw(12)
                << stored.size() << std::setw(34) << "" << "  "
                << (cv.ok() ? "verified" : "FAILED: " + cv.message) << '\n';
      summary["cycle_vertices"] = stored.size();
      summary["cycle_verified"] = cv.ok();
      if (!cv.ok()) {
        summary["status"] = "verification_failed";
        std::cout << summary.dump() << '\n';
        return kExitVerify;
      }
    }
  }
  summary["status"] = "ok";
  std::cout << summary.dump() << '\n';
  return kExitOk;
}

void add_search_flags(CLI::App* cmd, SearchConfig& cfg, std::string& strategy,
                      std::string& tie_break, std::string& prune, double& progress) {
  cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  cmd->add_option("--restarts", cfg.max_restarts, "Maximum number of restarts")
      ->capture_default_str();
  cmd->add_option("--backtrack-budget", cfg.max_backtracks_before_restart,
                  "Backtracks before a restart (0 = never restart)")
      ->capture_default_str();
  cmd->add_option("--strategy", strategy, "rotation or backtracking")
      ->check(CLI::IsMember({"rotation", "backtracking"}))
      ->capture_default_str();
  cmd->add_option("--tie-break", tie_break, "rank or random")
      ->check(CLI::IsMember({"rank", "random"}))
      ->capture_default_str();
  cmd->add_option("--prune", prune, "local-degree or none (backtracking only)")
      ->check(CLI::IsMember({"local-degree", "none"}))
      ->capture_default_str();
  cmd->add_option("--checkpoint-interval", cfg.checkpoint_interval_seconds,
                  "Seconds between checkpoints")
      ->capture_default_str();
  cmd->add_option("--progress-interval", progress, "Seconds between progress lines")
      ->capture_default_str();
}

void apply_search_flags(SearchConfig& cfg, const std::string& strategy,
                        const std::string& tie_break, const std::string& prune) {
  cfg.strategy = strategy == "backtracking" ? Strategy::backtracking : Strategy::rotation;
  cfg.tie_break = tie_break == "random" ? TieBreak::seeded_random : TieBreak::rank_order;
  cfg.prune_level = prune == "none" ? PruneLevel::none : PruneLevel::local_degree;
}

int run(int argc, char** argv) {
  CLI::App app{"Reduced middle-levels graph: ranking, Hamiltonian path search, stitching, "
               "lifting and verification"};
  app.require_subcommand(1);

  int k = 0;
  std::string part_name = "whole";
  std::string text;
  std::uint64_t number = 0;
  int brun_level = 0;

  auto* c_canon = app.add_subcommand("canon", "Canonical representative of a string's class");
  c_canon->add_option("--k", k, "Half length: strings have 2k+1 bits");
  c_canon->add_option("string", text, "Binary string on level k or k+1")->required();

  auto* c_rank = app.add_subcommand("rank", "Rank of a string's class");
  c_rank->add_option("--k", k)->required();
  c_rank->add_option("--part", part_name, "Rank within a part instead of globally");
  c_rank->add_option("string", text)->required();

  auto* c_unrank = app.add_subcommand("unrank", "Canonical string with a given rank");
  c_unrank->add_option("--k", k)->required();
  c_unrank->add_option("--part", part_name, "Interpret the rank within a part");
  c_unrank->add_option("rank", number)->required();

  auto* c_brun = app.add_subcommand("brun", "Brun (half the number of runs) of a string's class");
  c_brun->add_option("--k", k);
  c_brun->add_option("string", text)->required();

  auto* c_count = app.add_subcommand("count", "Number of classes in the graph, a part or a brun level");
  c_count->add_option("--k", k)->required()->check(CLI::Range(1, 31));
  auto* count_part = c_count->add_option("--part", part_name);
  c_count->add_option("--brun", brun_level)->excludes(count_part);

  auto* c_nbrs = app.add_subcommand("neighbors", "Neighbors of a class in the graph or a part");
  c_nbrs->add_option("--k", k)->required();
  c_nbrs->add_option("--part", part_name);
  c_nbrs->add_option("string", text)->required();

  SearchConfig cfg;
  std::string strategy = "rotation";
  std::string tie_break = "rank";
  std::string prune = "local-degree";
  double progress = 5.0;
  std::string out_file;
  std::string checkpoint_file;
  std::string resume_file;

  auto* c_search = app.add_subcommand("search", "Hamiltonian path between a part's terminals");
  c_search->add_option("--k", k)->required()->check(CLI::Range(1, 19));
  c_search->add_option("--part", part_name)->capture_default_str();
  add_search_flags(c_search, cfg, strategy, tie_break, prune, progress);
  c_search->add_option("--out", out_file, "Path file to write on success");
  c_search->add_option("--checkpoint", checkpoint_file, "Checkpoint file written periodically");
  c_search->add_option("--resume", resume_file, "Continue from a checkpoint")
      ->check(CLI::ExistingFile);

  std::string front_file;
  std::string middle_file;
  std::string rear_file;
  auto* c_stitch = app.add_subcommand("stitch", "Join front, middle and rear paths");
  c_stitch->add_option("--front", front_file)->required()->check(CLI::ExistingFile);
  c_stitch->add_option("--middle", middle_file)->required()->check(CLI::ExistingFile);
  c_stitch->add_option("--rear", rear_file)->required()->check(CLI::ExistingFile);
  c_stitch->add_option("--out", out_file)->required();

  std::string path_file;
  auto* c_lift = app.add_subcommand("lift", "Lift a whole-graph path to a cycle of M_n");
  c_lift->add_option("--path", path_file)->required()->check(CLI::ExistingFile);
  c_lift->add_option("--out", out_file)->required();

  PipelineOptions popt;
  std::string out_dir = "midlevels_out";
  auto* c_pipe = app.add_subcommand("pipeline", "Search, stitch, lift and verify");
  c_pipe->add_option("--k", popt.k)->required()->check(CLI::Range(1, 19));
  c_pipe->add_option("--mode", popt.mode)
      ->check(CLI::IsMember({"decomposed", "whole"}))
      ->capture_default_str();
  c_pipe->add_flag("--lift", popt.lift, "Lift the path and verify the cycle");
  c_pipe->add_option("--out-dir", out_dir)->capture_default_str();
  c_pipe->add_flag("--fresh", popt.fresh, "Ignore stored part paths and checkpoints");
  add_search_flags(c_pipe, cfg, strategy, tie_break, prune, progress);

  std::string verify_target;
  auto* c_verify = app.add_subcommand("verify", "Check a path, cycle or checkpoint file");
  c_verify->add_option("file", verify_target)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  const auto k_opt = [&](CLI::App* cmd) -> std::optional<int> {
    if (cmd->count("--k") == 0) return std::nullopt;
    if (k < 1 || k > 31) throw InputError("k must be in [1, 31]");
    return k;
  };

  if (c_canon->parsed()) {
    std::cout << class_of(string_arg(text, k_opt(c_canon))).str() << '\n';
    return kExitOk;
  }
  if (c_brun->parsed()) {
    std::cout << brun(class_of(string_arg(text, k_opt(c_brun)))) << '\n';
    return kExitOk;
  }
  if (c_rank->parsed() || c_unrank->parsed() || c_nbrs->parsed()) {
    CLI::App* cmd = c_rank->parsed() ? c_rank : c_unrank->parsed() ? c_unrank : c_nbrs;
    const int kk = *k_opt(cmd);
    auto tables = std::make_shared<const RankTables>(kk);
    const PartSpec part = part_for(kk, part_arg(part_name));
    if (c_unrank->parsed()) {
      if (number >= tables->part_size(part)) {
        throw InputError("rank " + std::to_string(number) + " out of range [0, " +
                         std::to_string(tables->part_size(part)) + ")");
      }
      std::cout << tables->part_unrank(part, number).str() << '\n';
      return kExitOk;
    }
    const CanonicalString s = class_of(string_arg(text, kk));
    if (!part.contains_brun(brun(s))) {
      throw InputError(s.str() + " (brun " + std::to_string(brun(s)) + ") is not in part " +
                       std::string(to_string(part.tag)));
    }
    if (c_rank->parsed()) {
      std::cout << tables->part_rank(s, part) << '\n';
      return kExitOk;
    }
    const ReducedGraphView view(tables, part);
    for (const CanonicalString& t : view.neighbors(s)) {
      std::cout << t.str() << ' ' << view.rank(t) << ' ' << brun(t) << '\n';
    }
    return kExitOk;
  }
  if (c_count->parsed()) {
    if (c_count->count("--brun") != 0) {
      if (brun_level < 1 || brun_level > k) {
        throw InputError("brun must be in [1, " + std::to_string(k) + "]");
      }
      std::cout << narayana(k, brun_level) << '\n';
    } else {
      const RankTables tables(k);
      std::cout << tables.part_size(part_for(k, part_arg(part_name))) << '\n';
    }
    return kExitOk;
  }

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  if (c_search->parsed()) {
    apply_search_flags(cfg, strategy, tie_break, prune);
    SearchJob job;
    job.tables = std::make_shared<const RankTables>(k);
    job.part = part_arg(part_name);
    if (!checkpoint_file.empty()) job.checkpoint = checkpoint_file;
    if (!resume_file.empty()) {
      job.resume = resume_file;
      // Seed and strategy default to the checkpoint's own.
      SearchCheckpoint ckpt;
      try {
        ckpt = SearchCheckpoint::deserialize(read_file_bytes(resume_file));
      } catch (const std::exception& e) {
        throw InputError("cannot resume from " + resume_file + ": " + e.what());
      }
      if (c_search->count("--seed") == 0) cfg.seed = ckpt.seed;
      if (c_search->count("--strategy") == 0) cfg.strategy = ckpt.strategy;
    }
    job.cfg = cfg;
    job.progress_interval = progress;
    const SearchResult r = run_search(job);
    if (r.path && !out_file.empty()) write_path_file(out_file, *r.path);
    r.stats.print_text(std::cout);
    std::cout << r.stats.to_json().dump() << '\n';
    return exit_code_for(r.stats.status);
  }
  if (c_stitch->parsed()) {
    ReducedPath f;
    ReducedPath m;
    ReducedPath r;
    try {
      f = read_path_file(front_file);
      m = read_path_file(middle_file);
      r = read_path_file(rear_file);
    } catch (const FormatError& e) {
      throw InputError(e.what());
    }
    ReducedPath whole;
    try {
      whole = stitch(f, m, r, nullptr);
    } catch (const AssemblyError& e) {
      std::cout << "FAIL " << e.what() << '\n';
      return kExitVerify;
    }
    write_path_file(out_file, whole);
    std::cout << "OK stitched k=" << whole.k << " vertices=" << whole.ranks.size() << '\n';
    return kExitOk;
  }
  if (c_lift->parsed()) {
    ReducedPath p;
    try {
      p = read_path_file(path_file);
    } catch (const FormatError& e) {
      throw InputError(e.what());
    }
    if (p.k > kMaxLiftK) {
      throw InputError("lifting is limited to k <= " + std::to_string(kMaxLiftK));
    }
    LiftedCycle c;
    try {
      c = lift(p);
    } catch (const AssemblyError& e) {
      std::cout << "FAIL " << e.what() << '\n';
      return kExitVerify;
    }
    write_cycle_file(out_file, c);
    std::cout << "OK cycle k=" << c.k << " vertices=" << c.size() << '\n';
    return kExitOk;
  }
  if (c_pipe->parsed()) {
    apply_search_flags(cfg, strategy, tie_break, prune);
    popt.cfg = cfg;
    popt.out_dir = out_dir;
    popt.progress_interval = progress;
    return run_pipeline(popt);
  }
  if (c_verify->parsed()) return verify_file(verify_target);
  return kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
}
