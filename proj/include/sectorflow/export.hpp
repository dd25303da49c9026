#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sectorflow/analysis.hpp"
#include "sectorflow/csv.hpp"

namespace sectorflow::io {

using Json = nlohmann::ordered_json;

/// Writes `content` to a sibling temporary file and renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kConfig, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::kConfig, "cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kConfig, "cannot rename onto " + path.string());
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// JSON

inline Json sector_json(const SectorMeta& s) {
  return Json{{"code", s.code}, {"short_code", s.short_code}, {"name", s.name}};
}

inline Json to_json(const InfoFlowNetwork& g) {
  Json j;
  j["nodes"] = Json::array();
  for (const auto& n : g.nodes) j["nodes"].push_back(sector_json(n));
  j["edges"] = Json::array();
  for (const auto& e : g.edges)
    j["edges"].push_back(
        {{"source", g.nodes[e.source].code}, {"target", g.nodes[e.target].code}, {"weight", e.weight}});
  j["warnings"] = g.warnings;
  return j;
}

inline Json path_json(const Arborescence& a, const InfoFlowPath& p) {
  Json nodes = Json::array();
  for (auto v : p.nodes) nodes.push_back(a.nodes[v].code);
  return Json{{"nodes", nodes}, {"length", p.length()}, {"total_weight", p.total_weight}};
}

inline Json to_json(const Arborescence& a, const InfoFlowPath& p) {
  Json j;
  j["orientation"] = to_string(a.orientation);
  j["root"] = sector_json(a.nodes[a.root]);
  j["total_weight"] = a.total_weight;
  j["edges"] = Json::array();
  for (const auto& e : a.edges)
    j["edges"].push_back(
        {{"source", a.nodes[e.source].code}, {"target", a.nodes[e.target].code}, {"weight", e.weight}});
  j["path"] = path_json(a, p);
  const auto deg = degrees(a);
  j["degrees"] = Json::object();
  for (std::size_t v = 0; v < a.size(); ++v)
    j["degrees"][a.nodes[v].code] = {{"in", deg[v].in}, {"out", deg[v].out}, {"total", deg[v].total()}};
  return j;
}

inline Json to_json(const Arborescence& a) { return to_json(a, maximal_information_flow_path(a)); }

inline Json window_json(const WindowResult& w) {
  return Json{{"first_date", w.span.first.iso()},
              {"last_date", w.span.last.iso()},
              {"trading_days", w.trading_days},
              {"outgoing", to_json(w.outgoing, w.outgoing_path)},
              {"incoming", to_json(w.incoming, w.incoming_path)},
              {"network_warnings", w.network.warnings}};
}

inline Json report_json(const YearlyMsaReport& r) {
  Json path = Json::array();
  for (const auto& s : r.path) path.push_back(s.code);
  return Json{{"year", r.year},
              {"orientation", to_string(r.orientation)},
              {"trading_days", r.trading_days},
              {"root", r.root.code},
              {"path", path},
              {"path_sector_count", r.path_sector_count()},
              {"path_dai_bits", r.path_dai},
              {"path_dai_1e-2", r.path_dai_centi()},
              {"arborescence", to_json(r.arborescence)}};
}

inline Json to_json(const YearlyStudy& s) {
  Json j;
  j["outgoing"] = Json::array();
  for (const auto& r : s.outgoing) j["outgoing"].push_back(report_json(r));
  j["incoming"] = Json::array();
  for (const auto& r : s.incoming) j["incoming"].push_back(report_json(r));
  Json occ;
  occ["outgoing"] = root_occurrences(s.outgoing);
  occ["incoming"] = root_occurrences(s.incoming);
  j["root_occurrences"] = occ;
  j["warnings"] = s.warnings;
  return j;
}

inline Json to_json(const TurmoilStudy& st) {
  const auto& tw = st.windows;
  Json j;
  j["crash_start"] = tw.crash_start.iso();
  j["crash_end"] = tw.crash_end.iso();
  j["crash_length_trading_days"] = tw.crash_length;
  j["window_rule"] = "during = [start - T, start + T) trading days; before/after adjacent, same length";
  j["windows"] = Json::array();
  for (std::size_t k = 0; k < 3; ++k) {
    Json w = window_json(st.results[k]);
    w["name"] = kTurmoilWindowNames[k];
    w["outgoing_root_degree"] = st.root_degree(k, Orientation::kOutgoing);
    w["incoming_root_degree"] = st.root_degree(k, Orientation::kIncoming);
    j["windows"].push_back(std::move(w));
  }
  return j;
}

inline Json correlations_json(const std::vector<SectorCorrelation>& v) {
  Json a = Json::array();
  for (const auto& c : v) a.push_back({{"year", c.year}, {"sector", c.sector.code}, {"rho", c.rho}});
  return a;
}

inline Json to_json(const SpecificityResult& r) {
  auto mean = [](double m) { return std::isnan(m) ? Json(nullptr) : Json(m); };
  return Json{{"seed", r.seed},
              {"samples_per_year", r.samples_per_year},
              {"source_mean", mean(r.source_mean())},
              {"sink_mean", mean(r.sink_mean())},
              {"control_mean", mean(r.control_mean())},
              {"sources", correlations_json(r.sources)},
              {"sinks", correlations_json(r.sinks)},
              {"controls", correlations_json(r.controls)}};
}

// ---------------------------------------------------------------------------
// DOT

inline std::string dot_id(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

inline std::string to_dot(const InfoFlowNetwork& g) {
  std::ostringstream o;
  o << "digraph information_flow {\n";
  for (const auto& n : g.nodes)
    o << "  " << dot_id(n.code) << " [label=" << dot_id(n.short_code) << "];\n";
  for (const auto& e : g.edges)
    o << "  " << dot_id(g.nodes[e.source].code) << " -> " << dot_id(g.nodes[e.target].code)
      << " [label=\"" << csv::format_fixed(e.weight, 4) << "\"];\n";
  o << "}\n";
  return o.str();
}

/// Arborescence with the maximal path drawn in red.
inline std::string to_dot(const Arborescence& a, const InfoFlowPath& p) {
  std::vector<std::pair<std::size_t, std::size_t>> on_path;
  for (std::size_t k = 0; k + 1 < p.nodes.size(); ++k) on_path.emplace_back(p.nodes[k], p.nodes[k + 1]);
  auto is_path_edge = [&](const WeightedEdge& e) {
    return std::find(on_path.begin(), on_path.end(), std::pair{e.source, e.target}) != on_path.end();
  };
  auto is_path_node = [&](std::size_t v) {
    return std::find(p.nodes.begin(), p.nodes.end(), v) != p.nodes.end();
  };

  std::ostringstream o;
  o << "digraph " << (a.orientation == Orientation::kOutgoing ? "outgoing_msa" : "incoming_msa")
    << " {\n";
  for (std::size_t v = 0; v < a.size(); ++v) {
    o << "  " << dot_id(a.nodes[v].code) << " [label=" << dot_id(a.nodes[v].short_code);
    if (v == a.root) o << ", shape=doublecircle";
    if (is_path_node(v)) o << ", style=filled, fillcolor=yellow";
    o << "];\n";
  }
  for (const auto& e : a.edges) {
    o << "  " << dot_id(a.nodes[e.source].code) << " -> " << dot_id(a.nodes[e.target].code)
      << " [label=\"" << csv::format_fixed(e.weight, 4) << "\"";
    if (is_path_edge(e)) o << ", color=red, penwidth=2.5";
    o << "];\n";
  }
  o << "}\n";
  return o.str();
}

inline std::string to_dot(const Arborescence& a) {
  return to_dot(a, maximal_information_flow_path(a));
}

// ---------------------------------------------------------------------------
// CSV tables

struct SectorStats {
  SectorMeta sector;
  SummaryStats stats;
};

/// Summary statistics table. Report mode rounds to the published display
/// precision (mean in 1e-3 with 3 decimals, JB with 1 decimal).
inline std::string stats_csv(const std::vector<SectorStats>& rows, bool report) {
  std::ostringstream o;
  o << "Symbol,Sector,Mean (1e-3),Max,Min,Std,Skewness,Kurtosis,JB,JB reject 1%\n";
  auto num = [&](double v, int decimals) {
    return report ? csv::format_fixed(v, decimals) : csv::format_double(v);
  };
  for (const auto& r : rows) {
    const auto& s = r.stats;
    o << csv::quote(r.sector.short_code) << ',' << csv::quote(r.sector.name) << ','
      << num(s.mean * 1e3, 3) << ',' << num(s.max, 3) << ',' << num(s.min, 3) << ','
      << num(s.std, 3) << ',' << num(s.skewness, 3) << ',' << num(s.kurtosis, 3) << ','
      << num(s.jb_statistic, 1) << ',' << (s.jb_reject_at_1pct ? "true" : "false") << '\n';
  }
  return o.str();
}

inline std::string path_string(const std::vector<SectorMeta>& path) {
  std::string s;
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (k) s += "->";
    s += path[k].short_code;
  }
  return s;
}

/// Yearly table: Year, Root sector, Maximal information flow path,
/// No. of sectors, DAI (1e-2).
inline std::string yearly_csv(const std::vector<YearlyMsaReport>& reports, bool report) {
  std::ostringstream o;
  o << "Year,Root sector,Maximal information flow path,No. of sectors,DAI (1e-2)\n";
  for (const auto& r : reports)
    o << r.year << ',' << csv::quote(r.root.short_code) << ',' << path_string(r.path) << ','
      << r.path_sector_count() << ','
      << (report ? csv::format_fixed(r.path_dai_centi(), 2) : csv::format_double(r.path_dai_centi()))
      << '\n';
  return o.str();
}

inline std::string heatmap_csv(const DegreeTable& t, DegreeKind kind = DegreeKind::kTotal) {
  std::ostringstream o;
  o << "Year";
  for (const auto& s : t.sectors) o << ',' << csv::quote(s.short_code);
  o << '\n';
  for (std::size_t row = 0; row < t.years.size(); ++row) {
    o << t.years[row];
    for (std::size_t v = 0; v < t.sectors.size(); ++v) o << ',' << t.value(row, v, kind);
    o << '\n';
  }
  return o.str();
}

inline std::string root_occurrences_csv(const YearlyStudy& s) {
  const auto out = root_occurrences(s.outgoing);
  const auto in = root_occurrences(s.incoming);
  std::map<std::string, std::pair<int, int>> merged;
  for (const auto& [code, n] : out) merged[code].first = n;
  for (const auto& [code, n] : in) merged[code].second = n;
  std::ostringstream o;
  o << "Sector,Outgoing root count,Incoming root count\n";
  for (const auto& [code, c] : merged) o << csv::quote(code) << ',' << c.first << ',' << c.second << '\n';
  return o.str();
}

inline std::string turmoil_csv(const TurmoilStudy& st) {
  std::ostringstream o;
  o << "Window,First date,Last date,Trading days,Orientation,Root sector,Root degree,Path weight\n";
  for (std::size_t k = 0; k < 3; ++k)
    for (auto orient : {Orientation::kOutgoing, Orientation::kIncoming}) {
      const auto& w = st.windows.windows[k];
      const auto& tree = st.results[k].tree(orient);
      o << kTurmoilWindowNames[k] << ',' << w.dates.first.iso() << ',' << w.dates.last.iso() << ','
        << w.days() << ',' << to_string(orient) << ',' << csv::quote(tree.nodes[tree.root].short_code)
        << ',' << st.root_degree(k, orient) << ','
        << csv::format_double(st.path_weight(k, orient)) << '\n';
    }
  return o.str();
}

inline std::string specificity_csv(const SpecificityResult& r) {
  std::ostringstream o;
  o << "Group,Year,Sector,Correlation\n";
  auto rows = [&](const char* group, const std::vector<SectorCorrelation>& v) {
    for (const auto& c : v)
      o << group << ',' << c.year << ',' << csv::quote(c.sector.short_code) << ','
        << csv::format_double(c.rho) << '\n';
  };
  rows("source", r.sources);
  rows("sink", r.sinks);
  rows("control", r.controls);
  return o.str();
}

inline std::string matrix_csv(const std::vector<SectorMeta>& sectors, const SquareMatrix& m) {
  std::ostringstream o;
  write_matrix_csv(o, sectors, m);
  return o.str();
}

}  // namespace sectorflow::io
