// Command-line front end: summary statistics, MSA studies (whole sample,
// date range, yearly, turmoil windows), root-sector specificity, and
// synthetic dataset generation.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sectorflow/sectorflow.hpp"

namespace fs = std::filesystem;
using namespace sectorflow;

namespace {

struct RunConfig {
  std::string input;
  std::string names;
  std::string index;
  int q = kDefaultBins;
  std::string mode = "whole";
  std::string from;
  std::string to;
  std::string crash_start;
  std::string crash_end;
  std::string orientation = "both";
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t samples = 1;
  std::string out_dir = ".";
  std::vector<std::string> formats{"csv", "json", "dot"};
  std::string partition = "window";
  std::string denominators = "consistent";
  unsigned threads = 1;
  bool report = false;

  bool wants(const std::string& f) const {
    return std::find(formats.begin(), formats.end(), f) != formats.end();
  }
  std::vector<Orientation> orientations() const {
    if (orientation == "out") return {Orientation::kOutgoing};
    if (orientation == "in") return {Orientation::kIncoming};
    return {Orientation::kOutgoing, Orientation::kIncoming};
  }
  PipelineConfig pipeline() const {
    PipelineConfig p;
    p.q = q;
    p.scope = partition == "global" ? PartitionScope::kGlobal : PartitionScope::kWindow;
    p.te.denominators =
        denominators == "mixed" ? Denominators::kMixedSampleCounts : Denominators::kConsistent;
    p.te.threads = threads;
    return p;
  }
};

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::kConfig, msg); }

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--input", cfg.input, "Wide-format price CSV (date,<code1>,...)")->required();
  cmd->add_option("--names", cfg.names, "Optional sector metadata CSV (code,name)");
  cmd->add_option("--out-dir", cfg.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--format", cfg.formats, "Output formats: csv,json,dot")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "json", "dot"}))
      ->capture_default_str();
  cmd->add_flag("--report", cfg.report, "Round tables to display precision");
}

void add_pipeline(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--q", cfg.q, "Number of equal-width bins")->capture_default_str();
  cmd->add_option("--partition", cfg.partition, "Bin bounds per window or from the full sample")
      ->check(CLI::IsMember({"window", "global"}))
      ->capture_default_str();
  cmd->add_option("--te-denominators", cfg.denominators,
                  "Probability normalization: consistent or mixed")
      ->check(CLI::IsMember({"consistent", "mixed"}))
      ->capture_default_str();
  cmd->add_option("--threads", cfg.threads, "Worker threads for the TE matrix (0 = all cores)")
      ->capture_default_str();
}

void validate(const RunConfig& cfg) {
  if (cfg.q < 2) config_error("--q must be >= 2");
  if (!fs::exists(cfg.input)) throw Error(ErrorCode::kInputNotFound, "input not found: " + cfg.input);
  if (!cfg.names.empty() && !fs::exists(cfg.names))
    throw Error(ErrorCode::kInputNotFound, "input not found: " + cfg.names);
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (!fs::is_directory(cfg.out_dir)) config_error("output directory not writable: " + cfg.out_dir);
}

Dataset load(const RunConfig& cfg) { return load_dataset(cfg.input, cfg.names); }

void emit(const RunConfig& cfg, const std::string& name, const std::string& content) {
  io::write_file_atomic(fs::path(cfg.out_dir) / name, content);
}

void warn_dropped(const Dataset& ds) {
  if (ds.dropped_rows > 0)
    std::cerr << "warning: dropped " << ds.dropped_rows
              << " rows with missing prices (row-drop alignment)\n";
}

// ---------------------------------------------------------------------------

int cmd_stats(const RunConfig& cfg) {
  validate(cfg);
  const auto ds = load(cfg);
  warn_dropped(ds);
  std::vector<io::SectorStats> rows;
  for (const auto& r : log_returns(ds)) rows.push_back({r.sector, summary_stats(r)});
  if (cfg.wants("csv")) emit(cfg, "stats.csv", io::stats_csv(rows, cfg.report));
  if (cfg.wants("json")) {
    io::Json j = io::Json::array();
    for (const auto& r : rows)
      j.push_back({{"sector", io::sector_json(r.sector)},
                   {"mean", r.stats.mean},
                   {"max", r.stats.max},
                   {"min", r.stats.min},
                   {"std", r.stats.std},
                   {"skewness", r.stats.skewness},
                   {"kurtosis", r.stats.kurtosis},
                   {"jb_statistic", r.stats.jb_statistic},
                   {"jb_reject_at_1pct", r.stats.jb_reject_at_1pct}});
    emit(cfg, "stats.json", io::dump(j));
  }
  return 0;
}

void emit_window(const RunConfig& cfg, const WindowResult& w, const std::string& prefix) {
  for (auto o : cfg.orientations()) {
    const std::string stem = prefix + to_string(o);
    if (cfg.wants("json")) emit(cfg, stem + ".json", io::dump(io::to_json(w.tree(o), w.path(o))));
    if (cfg.wants("dot")) emit(cfg, stem + ".dot", io::to_dot(w.tree(o), w.path(o)));
  }
}

void emit_network(const RunConfig& cfg, const WindowResult& w) {
  if (cfg.wants("csv")) {
    emit(cfg, "te_matrix.csv", io::matrix_csv(w.te.sectors, w.te.te));
    emit(cfg, "dai_matrix.csv", io::matrix_csv(w.dai.sectors, w.dai.dai));
  }
  if (cfg.wants("json")) emit(cfg, "network.json", io::dump(io::to_json(w.network)));
  if (cfg.wants("dot")) emit(cfg, "network.dot", io::to_dot(w.network));
  for (const auto& msg : w.network.warnings) std::cerr << "warning: " << msg << '\n';
}

int cmd_msa(const RunConfig& cfg) {
  if (cfg.mode == "turmoil" && (cfg.crash_start.empty() || cfg.crash_end.empty()))
    config_error("turmoil mode requires --crash-start and --crash-end");
  if (cfg.mode != "turmoil" && (!cfg.crash_start.empty() || !cfg.crash_end.empty()))
    config_error("--crash-start/--crash-end are only valid in turmoil mode");
  if (cfg.mode == "range" && (cfg.from.empty() || cfg.to.empty()))
    config_error("range mode requires --from and --to");
  validate(cfg);
  const auto ds = load(cfg);
  warn_dropped(ds);
  const auto returns = log_returns(ds);
  const auto pipe = cfg.pipeline();

  if (cfg.mode == "whole" || cfg.mode == "range") {
    const auto w = cfg.mode == "whole"
                       ? whole_sample_msas(returns, pipe)
                       : range_msas(returns, {Date::parse(cfg.from), Date::parse(cfg.to)}, pipe);
    emit_network(cfg, w);
    emit_window(cfg, w, "msa_");
    return 0;
  }

  if (cfg.mode == "yearly") {
    const auto study = yearly_reports(returns, pipe);
    for (const auto& msg : study.warnings) std::cerr << "warning: " << msg << '\n';
    for (auto o : cfg.orientations()) {
      const auto& reports = study.reports(o);
      const std::string tag = to_string(o);
      if (cfg.wants("csv")) {
        emit(cfg, "yearly_" + tag + ".csv", io::yearly_csv(reports, cfg.report));
        emit(cfg, "heatmap_" + tag + ".csv", io::heatmap_csv(degree_heatmap(reports)));
      }
      for (const auto& r : reports) {
        const std::string stem = "msa_" + std::to_string(r.year) + "_" + tag;
        if (cfg.wants("json")) emit(cfg, stem + ".json", io::dump(io::report_json(r)));
        if (cfg.wants("dot")) emit(cfg, stem + ".dot", io::to_dot(r.arborescence));
      }
    }
    if (cfg.wants("csv")) emit(cfg, "root_occurrences.csv", io::root_occurrences_csv(study));
    if (cfg.wants("json")) emit(cfg, "yearly.json", io::dump(io::to_json(study)));
    return 0;
  }

  // turmoil
  const auto st =
      turmoil_study(returns, pipe, Date::parse(cfg.crash_start), Date::parse(cfg.crash_end));
  if (cfg.wants("csv")) emit(cfg, "turmoil.csv", io::turmoil_csv(st));
  if (cfg.wants("json")) emit(cfg, "turmoil.json", io::dump(io::to_json(st)));
  for (std::size_t k = 0; k < 3; ++k)
    emit_window(cfg, st.results[k], std::string("msa_") + kTurmoilWindowNames[k] + "_");
  return 0;
}

int cmd_specificity(const RunConfig& cfg) {
  if (cfg.index.empty()) config_error("specificity requires --index");
  if (!cfg.seed_given) config_error("specificity requires --seed");
  validate(cfg);
  if (!fs::exists(cfg.index)) throw Error(ErrorCode::kInputNotFound, "input not found: " + cfg.index);
  const auto ds = load(cfg);
  warn_dropped(ds);
  const auto returns = log_returns(ds);
  const auto index_ds = load_dataset(cfg.index);
  if (index_ds.sector_count() != 1) config_error("index file must contain exactly one price column");
  const auto index = log_returns(index_ds.series.front());

  const auto study = yearly_reports(returns, cfg.pipeline());
  for (const auto& msg : study.warnings) std::cerr << "warning: " << msg << '\n';
  const auto res = specificity_study(returns, study, index, cfg.seed, cfg.samples);
  if (cfg.wants("csv")) emit(cfg, "specificity.csv", io::specificity_csv(res));
  if (cfg.wants("json")) emit(cfg, "specificity.json", io::dump(io::to_json(res)));
  return 0;
}

struct SynthConfig {
  std::string preset = "demo28";
  std::string output;
  std::size_t sectors = 6;
  std::size_t length = 5000;
  std::size_t hub = 0;
  double coupling = 0.8;
  std::uint64_t seed = 1;
};

int cmd_synth(const SynthConfig& sc) {
  synth::SyntheticDataset spec;
  if (sc.preset == "demo28") {
    spec = synth::demo28(sc.seed);
  } else if (sc.preset == "star") {
    if (sc.hub >= sc.sectors) config_error("--hub out of range");
    spec = synth::star_dataset(sc.sectors, sc.hub, sc.coupling, sc.length, sc.seed);
  } else if (sc.preset == "independent") {
    spec = synth::independent_dataset(sc.sectors, sc.length, sc.seed);
  } else {
    if (sc.hub >= sc.sectors) config_error("--hub out of range");
    spec = synth::turmoil_dataset(sc.sectors, sc.hub, sc.coupling, sc.length, sc.seed);
  }
  std::ostringstream out;
  write_dataset(out, synth::generate_dataset(spec));
  if (sc.output.empty() || sc.output == "-") {
    std::cout << out.str();
  } else {
    io::write_file_atomic(sc.output, out.str());
  }
  return 0;
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInputNotFound:
    case ErrorCode::kConfig:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information-flow networks from symbolic transfer entropy"};
  app.set_config("--config", "", "TOML/INI configuration file; flags override its values");
  app.require_subcommand(1);

  RunConfig cfg;
  SynthConfig sc;

  auto* stats = app.add_subcommand("stats", "Summary statistics of the log-return series");
  add_common(stats, cfg);

  auto* msa = app.add_subcommand("msa", "Maximum spanning arborescences and maximal paths");
  add_common(msa, cfg);
  add_pipeline(msa, cfg);
  msa->add_option("--mode", cfg.mode, "whole | yearly | range | turmoil")
      ->check(CLI::IsMember({"whole", "yearly", "range", "turmoil"}))
      ->capture_default_str();
  msa->add_option("--from", cfg.from, "Range start (YYYY-MM-DD)");
  msa->add_option("--to", cfg.to, "Range end (YYYY-MM-DD)");
  msa->add_option("--crash-start", cfg.crash_start, "Crash start date (turmoil mode)");
  msa->add_option("--crash-end", cfg.crash_end, "Crash end date (turmoil mode)");
  msa->add_option("--orientation", cfg.orientation, "out | in | both")
      ->check(CLI::IsMember({"out", "in", "both"}))
      ->capture_default_str();

  auto* spec = app.add_subcommand("specificity", "Root-sector correlation with a market index");
  add_common(spec, cfg);
  add_pipeline(spec, cfg);
  spec->add_option("--index", cfg.index, "Index price CSV (date,<code>)");
  spec->add_option("--seed", cfg.seed, "Seed for control-group sampling")
      ->each([&](const std::string&) { cfg.seed_given = true; });
  spec->add_option("--samples", cfg.samples, "Control sectors drawn per year")->capture_default_str();

  auto* gen = app.add_subcommand("synth", "Write a synthetic price dataset");
  gen->add_option("--preset", sc.preset, "demo28 | star | independent | turmoil")
      ->check(CLI::IsMember({"demo28", "star", "independent", "turmoil"}))
      ->capture_default_str();
  gen->add_option("--output", sc.output, "Output CSV path (default stdout)");
  gen->add_option("--sectors", sc.sectors, "Number of sectors")->capture_default_str();
  gen->add_option("--length", sc.length,
                  "Returns (star/independent) or crash length T (turmoil)")
      ->capture_default_str();
  gen->add_option("--hub", sc.hub, "Hub sector index")->capture_default_str();
  gen->add_option("--coupling", sc.coupling, "Copy probability")->capture_default_str();
  gen->add_option("--seed", sc.seed, "Generator seed (mt19937_64)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*stats) return cmd_stats(cfg);
    if (*msa) return cmd_msa(cfg);
    if (*spec) return cmd_specificity(cfg);
    return cmd_synth(sc);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_status(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
