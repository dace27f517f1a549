#pragma once

// Run reports (JSON), sequence files and suite-level CSV tables.

#include <ocus/instance.hpp>

#include <json.hpp>

#include <filesystem>
#include <iomanip>

namespace ocus {

struct RunConfig {
  Strategy strategy = Strategy::Ocus;
  GrowStrategy grow{GrowKind::Sat, false};
  Incrementality incrementality = Incrementality::None;
  std::uint64_t seed = 0;
  double time_limit = 60;
  bool pair_mus = false;

  std::string label() const {
    return std::string(to_string(strategy)) + "/" + grow.name() + "/" + to_string(incrementality);
  }

  ExplainConfig explain_config() const {
    ExplainConfig c;
    c.strategy = strategy;
    c.grow = grow;
    c.incrementality = incrementality;
    c.seed = seed;
    c.time_limit = time_limit;
    c.pair_mus = pair_mus;
    return c;
  }

  // "strategy:grow[:incrementality]", e.g. "ocus-split:multi-subsetmax:persistent".
  static RunConfig parse(std::string_view spec) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : spec) {
      if (ch == ':') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    parts.push_back(cur);
    if (parts.size() < 2 || parts.size() > 3)
      throw InvalidInputError("configuration '" + std::string(spec) +
                              "' must look like strategy:grow[:incrementality]");
    RunConfig rc;
    auto s = parse_strategy(parts[0]);
    if (!s) throw InvalidInputError("unknown strategy '" + parts[0] + "'");
    auto g = GrowStrategy::parse(parts[1]);
    if (!g) throw InvalidInputError("unknown grow strategy '" + parts[1] + "'");
    rc.strategy = *s;
    rc.grow = *g;
    if (parts.size() == 3) {
      auto inc = parse_incrementality(parts[2]);
      if (!inc) throw InvalidInputError("unknown incrementality '" + parts[2] + "'");
      rc.incrementality = *inc;
    }
    return rc;
  }
};

struct StepRecord {
  std::vector<int> targets, derived, facts;
  std::vector<std::size_t> constraints;
  std::int64_t cost = 0;
  std::optional<std::int64_t> mus_cost;
  std::uint64_t iterations = 0, sets_added = 0;
  double t_hs = 0, t_sat = 0, t_corr = 0, t_total = 0;
};

struct RunReport {
  std::string instance;
  std::string config;
  bool complete = false;
  double explained = 0;  // fraction of Iend \ I0 explained
  double wall = 0;
  double t_opt = 0, t_sat = 0, t_corr = 0;
  std::uint64_t n_sth = 0;  // sets-to-hit added over the whole run
  double t1 = 0;            // time to the first step
  double mean_step = 0;
  std::array<double, 4> quantiles{};  // q25, q50, q75, q100 of step times
  std::vector<StepRecord> steps;

  double pct_opt() const { return pct(t_opt); }
  double pct_sat() const { return pct(t_sat); }
  double pct_corr() const { return pct(t_corr); }

 private:
  double pct(double t) const { return wall > 0 ? std::clamp(100.0 * t / wall, 0.0, 100.0) : 0.0; }
};

namespace detail {

inline std::vector<int> dimacs(std::span<const Literal> lits) {
  std::vector<int> out;
  for (Literal l : lits) out.push_back(l.dimacs());
  return out;
}

// Linear-interpolated quantile of sorted data.
inline double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0;
  double pos = q * static_cast<double>(sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace detail

inline RunReport make_report(const std::string& instance, const RunConfig& cfg,
                             const ExplanationSequence& seq) {
  RunReport r;
  r.instance = instance;
  r.config = cfg.label();
  r.complete = seq.complete;
  r.explained = seq.explained_fraction();
  r.wall = seq.t_total;
  r.t_opt = seq.t_hs();
  r.t_sat = seq.t_sat();
  r.t_corr = seq.t_corr();
  r.n_sth = seq.sets_added();
  std::vector<double> times;
  for (const auto& s : seq.steps) {
    StepRecord rec;
    rec.targets = detail::dimacs(s.targets);
    rec.derived = detail::dimacs(s.derived);
    rec.facts = detail::dimacs(s.used_facts.literals());
    rec.constraints = s.used_constraints;
    rec.cost = s.cost.value();
    if (s.mus_cost) rec.mus_cost = s.mus_cost->value();
    rec.iterations = s.stats.iterations;
    rec.sets_added = s.stats.sets_added;
    rec.t_hs = s.stats.t_hs;
    rec.t_sat = s.stats.t_sat;
    rec.t_corr = s.stats.t_corr;
    rec.t_total = s.stats.t_total;
    times.push_back(s.stats.t_total);
    r.steps.push_back(std::move(rec));
  }
  r.t1 = times.empty() ? 0 : times.front();
  if (!times.empty()) {
    double sum = 0;
    for (double t : times) sum += t;
    r.mean_step = sum / static_cast<double>(times.size());
    std::sort(times.begin(), times.end());
    r.quantiles = {detail::quantile(times, 0.25), detail::quantile(times, 0.5),
                   detail::quantile(times, 0.75), times.back()};
  }
  return r;
}

inline void to_json(nlohmann::json& j, const StepRecord& s) {
  j = {{"targets", s.targets},       {"derived", s.derived},
       {"facts", s.facts},           {"constraints", s.constraints},
       {"cost", s.cost},             {"iterations", s.iterations},
       {"sets_added", s.sets_added}, {"t_hs", s.t_hs},
       {"t_sat", s.t_sat},           {"t_corr", s.t_corr},
       {"t_total", s.t_total}};
  j["mus_cost"] = s.mus_cost ? nlohmann::json(*s.mus_cost) : nlohmann::json(nullptr);
}

inline void from_json(const nlohmann::json& j, StepRecord& s) {
  j.at("targets").get_to(s.targets);
  j.at("derived").get_to(s.derived);
  j.at("facts").get_to(s.facts);
  j.at("constraints").get_to(s.constraints);
  j.at("cost").get_to(s.cost);
  j.at("iterations").get_to(s.iterations);
  j.at("sets_added").get_to(s.sets_added);
  j.at("t_hs").get_to(s.t_hs);
  j.at("t_sat").get_to(s.t_sat);
  j.at("t_corr").get_to(s.t_corr);
  j.at("t_total").get_to(s.t_total);
  if (j.contains("mus_cost") && !j["mus_cost"].is_null()) s.mus_cost = j["mus_cost"].get<std::int64_t>();
}

inline void to_json(nlohmann::json& j, const RunReport& r) {
  j = {{"instance", r.instance},
       {"config", r.config},
       {"complete", r.complete},
       {"explained", r.explained},
       {"wall", r.wall},
       {"t_opt", r.t_opt},
       {"t_sat", r.t_sat},
       {"t_corr", r.t_corr},
       {"pct_opt", r.pct_opt()},
       {"pct_sat", r.pct_sat()},
       {"pct_corr", r.pct_corr()},
       {"n_sth", r.n_sth},
       {"t1", r.t1},
       {"mean_step", r.mean_step},
       {"quantiles", r.quantiles},
       {"steps", r.steps}};
}

inline void from_json(const nlohmann::json& j, RunReport& r) {
  j.at("instance").get_to(r.instance);
  j.at("config").get_to(r.config);
  j.at("complete").get_to(r.complete);
  j.at("explained").get_to(r.explained);
  j.at("wall").get_to(r.wall);
  j.at("t_opt").get_to(r.t_opt);
  j.at("t_sat").get_to(r.t_sat);
  j.at("t_corr").get_to(r.t_corr);
  j.at("n_sth").get_to(r.n_sth);
  j.at("t1").get_to(r.t1);
  j.at("mean_step").get_to(r.mean_step);
  j.at("quantiles").get_to(r.quantiles);
  j.at("steps").get_to(r.steps);
}

// Sequence file: a header, then one block per step.
//
//   initial <lits> 0
//   end <lits> 0
//   complete <true|false>
//   explained <fraction>
//   step <k>
//   facts <lits> 0
//   constraints <indices>
//   derived <lits> 0
//   targets <lits> 0
//   cost <cost>
inline std::string format_sequence(const ExplanationSequence& seq) {
  std::ostringstream os;
  auto lits = [&](auto&& range) {
    for (Literal l : range) os << ' ' << l.dimacs();
    os << " 0\n";
  };
  os << "initial";
  lits(seq.initial);
  os << "end";
  lits(seq.end);
  os << "complete " << (seq.complete ? "true" : "false") << '\n';
  os << "explained " << std::setprecision(6) << seq.explained_fraction() << '\n';
  for (std::size_t k = 0; k < seq.steps.size(); ++k) {
    const auto& s = seq.steps[k];
    os << "step " << k + 1 << '\n' << "facts";
    lits(s.used_facts);
    os << "constraints";
    for (auto c : s.used_constraints) os << ' ' << c;
    os << '\n' << "derived";
    lits(s.derived);
    os << "targets";
    lits(s.targets);
    os << "cost " << s.cost << '\n';
  }
  return os.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write '" + path.string() + "'");
  out << text;
}

inline void write_report(const std::filesystem::path& path, const RunReport& r) {
  write_text(path, nlohmann::json(r).dump(2) + "\n");
}

inline RunReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open report '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in).get<RunReport>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError("malformed report '" + path.string() + "': " + e.what());
  }
}

// All report.json files below `dir`, in path order.
inline std::vector<RunReport> collect_reports(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> paths;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().filename() == "report.json") paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());
  std::vector<RunReport> out;
  for (const auto& p : paths) out.push_back(read_report(p));
  return out;
}

// Writes cactus.csv (per configuration: k-th fastest completed run),
// decomposition.csv (mean time shares per configuration) and quality.csv
// (per-step MUS vs optimal cost, where paired costs are available).
inline void report_suite(const std::vector<RunReport>& reports, const std::filesystem::path& out) {
  if (reports.empty()) throw InvalidInputError("report_suite needs at least one report");
  std::filesystem::create_directories(out);
  std::map<std::string, std::vector<const RunReport*>> by_config;
  for (const auto& r : reports) by_config[r.config].push_back(&r);

  std::ostringstream cactus;
  cactus << "config,solved,time\n";
  for (const auto& [cfg, rs] : by_config) {
    std::vector<double> times;
    for (const auto* r : rs)
      if (r->complete) times.push_back(r->wall);
    std::sort(times.begin(), times.end());
    for (std::size_t k = 0; k < times.size(); ++k)
      cactus << cfg << ',' << k + 1 << ',' << times[k] << '\n';
  }
  write_text(out / "cactus.csv", cactus.str());

  std::ostringstream dec;
  dec << "config,instances,explained,%OPT,%SAT,%CorrSS,N_sth,t1,mean_step\n";
  for (const auto& [cfg, rs] : by_config) {
    double explained = 0, opt = 0, sat = 0, corr = 0, sth = 0, t1 = 0, mean = 0;
    for (const auto* r : rs) {
      explained += r->explained;
      opt += r->pct_opt();
      sat += r->pct_sat();
      corr += r->pct_corr();
      sth += static_cast<double>(r->n_sth);
      t1 += r->t1;
      mean += r->mean_step;
    }
    const double n = static_cast<double>(rs.size());
    dec << cfg << ',' << rs.size() << ',' << 100.0 * explained / n << ',' << opt / n << ','
        << sat / n << ',' << corr / n << ',' << sth / n << ',' << t1 / n << ',' << mean / n << '\n';
  }
  write_text(out / "decomposition.csv", dec.str());

  std::ostringstream q;
  q << "instance,config,step,mus_cost,ocus_cost\n";
  for (const auto& r : reports)
    for (std::size_t k = 0; k < r.steps.size(); ++k)
      if (r.steps[k].mus_cost)
        q << r.instance << ',' << r.config << ',' << k + 1 << ',' << *r.steps[k].mus_cost << ','
          << r.steps[k].cost << '\n';
  write_text(out / "quality.csv", q.str());
}

}  // namespace ocus
