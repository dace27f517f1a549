// Command-line front end: explain one instance, benchmark a directory of
// instances over a configuration grid, or encode a Sudoku grid.

#include <ocus/report.hpp>

#include <CLI11.hpp>

#include <atomic>
#include <iostream>
#include <mutex>
#include <thread>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTimeout = 2;
constexpr int kExitInput = 3;

// Instances are either instance files or Sudoku grids (*.grid).
ocus::InstanceFile load_any(const fs::path& path) {
  if (path.extension() == ".grid")
    return ocus::encode_sudoku(ocus::load_grid(path.string()), path.stem().string());
  ocus::InstanceFile inst = ocus::load_instance(path.string());
  if (inst.name.empty()) inst.name = path.stem().string();
  return inst;
}

struct RunOutcome {
  ocus::ExplanationSequence sequence;
  ocus::RunReport report;
};

RunOutcome run_one(const ocus::InstanceFile& inst, const ocus::RunConfig& cfg) {
  auto constraints = inst.constraints();
  RunOutcome out;
  out.sequence = ocus::explain_sequence(constraints, inst.init, cfg.explain_config());
  out.report = ocus::make_report(inst.name, cfg, out.sequence);
  return out;
}

void write_outputs(const fs::path& dir, const RunOutcome& r) {
  fs::create_directories(dir);
  ocus::write_text(dir / "sequence.txt", ocus::format_sequence(r.sequence));
  ocus::write_report(dir / "report.json", r.report);
}

// Warns about (but does not fail on) mismatches with expectations recorded in
// the instance file.
void check_expectations(const ocus::InstanceFile& inst, const RunOutcome& r) {
  if (!r.sequence.complete) return;
  if (inst.expect_end && *inst.expect_end != r.sequence.end)
    std::cerr << "warning: end interpretation differs from expect-end\n";
  if (inst.expect_costs) {
    std::vector<std::int64_t> got;
    for (const auto& s : r.report.steps) got.push_back(s.cost);
    if (got != *inst.expect_costs) std::cerr << "warning: step costs differ from expect-costs\n";
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string safe_name(std::string s) {
  for (char& ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-optimal step-wise explanations of satisfiable CNF problems"};
  app.require_subcommand(1);

  // explain
  std::string instance_path, strategy = "ocus", grow = "sat", incremental_mode = "persistent",
                             out_dir;
  bool incremental = false, pair_mus = false;
  std::uint64_t seed = 0;
  double time_limit = 60;
  auto* explain = app.add_subcommand("explain", "Explain one instance");
  explain->add_option("--instance", instance_path, "Instance file (or .grid Sudoku)")->required();
  explain->add_option("--strategy", strategy, "mus | ocus | ocus-bound | ocus-split")
      ->capture_default_str();
  explain->add_option("--grow", grow,
                      "sat | subsetmax | maxsat-domain | maxsat-full | multi-sat | "
                      "multi-maxsat | multi-subsetmax | none")
      ->capture_default_str();
  explain->add_flag("--incremental", incremental, "Reuse hitting-set state across steps");
  explain->add_option("--incremental-mode", incremental_mode, "persistent | bootstrap")
      ->capture_default_str();
  explain->add_option("--seed", seed, "SAT solver seed")->capture_default_str();
  explain->add_option("--time-limit", time_limit, "Seconds for the whole sequence")
      ->capture_default_str();
  explain->add_flag("--pair-mus", pair_mus, "Also record the deletion-MUS cost of every step");
  explain->add_option("--out", out_dir, "Output directory")->required();

  // bench
  std::string instances_dir, grid_list, bench_out;
  unsigned jobs = 1;
  double bench_limit = 60;
  bool bench_pair = false;
  auto* bench = app.add_subcommand("bench", "Run a configuration grid over a directory of instances");
  bench->add_option("--instances", instances_dir, "Directory of instance / .grid files")->required();
  bench->add_option("--grid", grid_list,
                    "Comma-separated configurations strategy:grow[:none|bootstrap|persistent]")
      ->required();
  bench->add_option("--out", bench_out, "Output directory")->required();
  bench->add_option("--time-limit", bench_limit, "Seconds per run")->capture_default_str();
  bench->add_option("--jobs", jobs, "Parallel workers")->capture_default_str();
  bench->add_flag("--pair-mus", bench_pair, "Record paired deletion-MUS costs");

  // encode-sudoku
  std::string grid_path, encoded_out;
  auto* encode = app.add_subcommand("encode-sudoku", "Encode a Sudoku grid as an instance file");
  encode->add_option("--grid", grid_path, "Grid file (16 or 81 cells, 0 or . for empty)")->required();
  encode->add_option("--out", encoded_out, "Instance file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*explain) {
      ocus::RunConfig cfg;
      auto s = ocus::parse_strategy(strategy);
      if (!s) throw ocus::InvalidInputError("unknown strategy '" + strategy + "'");
      auto g = ocus::GrowStrategy::parse(grow);
      if (!g) throw ocus::InvalidInputError("unknown grow strategy '" + grow + "'");
      cfg.strategy = *s;
      cfg.grow = *g;
      if (incremental) {
        auto m = ocus::parse_incrementality(incremental_mode);
        if (!m || *m == ocus::Incrementality::None)
          throw ocus::InvalidInputError("unknown incremental mode '" + incremental_mode + "'");
        cfg.incrementality = *m;
      }
      cfg.seed = seed;
      cfg.time_limit = time_limit;
      cfg.pair_mus = pair_mus;
      ocus::InstanceFile inst = load_any(instance_path);
      RunOutcome r = run_one(inst, cfg);
      write_outputs(out_dir, r);
      check_expectations(inst, r);
      std::cout << inst.name << ": " << r.sequence.steps.size() << " steps, costs";
      for (const auto& st : r.report.steps) std::cout << ' ' << st.cost;
      std::cout << ", " << r.report.wall << " s"
                << (r.sequence.complete ? "" : " (time limit reached, partial)") << '\n';
      return r.sequence.complete ? kExitOk : kExitTimeout;
    }

    if (*bench) {
      std::vector<ocus::RunConfig> configs;
      for (const auto& spec : split_list(grid_list)) {
        ocus::RunConfig c = ocus::RunConfig::parse(spec);
        c.time_limit = bench_limit;
        c.pair_mus = bench_pair;
        configs.push_back(c);
      }
      if (configs.empty()) throw ocus::InvalidInputError("empty configuration grid");
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(instances_dir))
        if (e.is_regular_file() && (e.path().extension() == ".inst" || e.path().extension() == ".grid"))
          files.push_back(e.path());
      std::sort(files.begin(), files.end());
      if (files.empty()) throw ocus::InvalidInputError("no .inst or .grid files in '" + instances_dir + "'");
      std::vector<ocus::InstanceFile> insts;
      for (const auto& f : files) insts.push_back(load_any(f));

      struct Job {
        std::size_t inst, cfg;
      };
      std::vector<Job> todo;
      for (std::size_t i = 0; i < insts.size(); ++i)
        for (std::size_t c = 0; c < configs.size(); ++c) todo.push_back({i, c});
      std::vector<ocus::RunReport> reports(todo.size());
      std::atomic<std::size_t> next{0};
      std::atomic<bool> any_timeout{false};
      std::mutex log_mutex;
      std::exception_ptr failure;
      auto worker = [&] {
        for (std::size_t k; (k = next++) < todo.size();) {
          try {
            const auto& job = todo[k];
            RunOutcome r = run_one(insts[job.inst], configs[job.cfg]);
            write_outputs(fs::path(bench_out) / "runs" / safe_name(insts[job.inst].name) /
                              safe_name(configs[job.cfg].label()),
                          r);
            if (!r.sequence.complete) any_timeout = true;
            std::lock_guard lock(log_mutex);
            std::cout << insts[job.inst].name << " [" << configs[job.cfg].label() << "] "
                      << r.sequence.steps.size() << " steps, " << r.report.wall << " s"
                      << (r.sequence.complete ? "" : " (partial)") << '\n';
            reports[k] = std::move(r.report);
          } catch (...) {
            std::lock_guard lock(log_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      };
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < std::max(1u, jobs); ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
      if (failure) std::rethrow_exception(failure);
      ocus::report_suite(reports, bench_out);
      return any_timeout ? kExitTimeout : kExitOk;
    }

    if (*encode) {
      ocus::SudokuGrid g = ocus::load_grid(grid_path);
      ocus::InstanceFile inst = ocus::encode_sudoku(g, fs::path(grid_path).stem().string());
      ocus::save_instance(inst, encoded_out);
      std::cout << "wrote " << encoded_out << ": " << inst.vars << " variables, "
                << inst.clauses.size() << " clauses, " << inst.init.size() << " givens\n";
      return kExitOk;
    }
  } catch (const ocus::InvalidInputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ocus::ContradictionError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}
