#pragma once

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fpa/depgraph.hpp"
#include "fpa/farm.hpp"

// Output formats: the JSONL trace and results files, the plain-text and
// machine-readable reports, and the `analyze` renderings. All key orders are
// fixed so identical runs produce byte-identical files.

namespace fpa {

using ojson = nlohmann::ordered_json;

// {"tick":T,"event":"...","fn":"...","fid":"...","fpu":"..."} — fpu omitted
// where inapplicable.
inline std::string trace_line(const SimEvent& e) {
  ojson j{{"tick", e.tick}, {"event", to_string(e.kind)}, {"fn", e.fn}, {"fid", e.fid}};
  if (e.fpu) j["fpu"] = *e.fpu;
  return j.dump();
}

inline std::string render_trace(const std::vector<SimEvent>& trace) {
  std::string out;
  for (const SimEvent& e : trace) {
    out += trace_line(e);
    out += '\n';
  }
  return out;
}

// One packet per line, ascending address.
inline std::string render_results(const IntegrationBuffer::Summary& s) {
  std::string out;
  for (const ResultPacket& p : s.results) {
    ojson j{{"address", p.address.index},
            {"fid", p.fid.str()},
            {"fn", p.producer},
            {"completion_tick", p.completion_tick}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::string fixed(double v, int places) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", places, v);
  return buf;
}

inline std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

inline void render_table(std::ostringstream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (widths.size() <= c) widths.resize(c + 1, 0);
      widths[c] = std::max(widths[c], row[c].size());
    }
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c == 0 ? "" : "  ") << pad(row[c], c + 1 == row.size() ? 0 : widths[c]);
    }
    out << '\n';
  }
}

}  // namespace detail

inline double utilization_pct(std::uint64_t busy, std::uint64_t makespan) {
  return makespan == 0 ? 0.0 : 100.0 * static_cast<double>(busy) / static_cast<double>(makespan);
}

inline std::string render_report_text(const Report& r) {
  std::ostringstream out;
  std::vector<std::vector<std::string>> fpu_rows{{"FPU", "DOMAIN", "BUSY", "UTIL%"}};
  for (const FpuReport& u : r.fpus)
    fpu_rows.push_back({u.id, std::string(1, u.domain), std::to_string(u.busy_ticks),
                        detail::fixed(utilization_pct(u.busy_ticks, r.makespan), 2)});
  detail::render_table(out, fpu_rows);
  out << '\n';

  std::vector<std::vector<std::string>> fn_rows{
      {"FUNCTION", "FID", "ADDRESS", "RUN", "READY", "SLEEP", "STOPPED", "EXIT"}};
  for (const FunctionReport& f : r.functions)
    fn_rows.push_back({f.name, f.fid, std::to_string(f.address), std::to_string(f.run_ticks),
                       std::to_string(f.ready_ticks), std::to_string(f.sleep_ticks),
                       std::to_string(f.stopped_ticks),
                       f.exit_tick ? std::to_string(*f.exit_tick) : "-"});
  detail::render_table(out, fn_rows);

  if (!r.deadlock_cycle.empty()) {
    out << "\ndeadlock cycle: ";
    for (std::size_t i = 0; i < r.deadlock_cycle.size(); ++i)
      out << (i ? " -> " : "") << r.deadlock_cycle[i];
    out << '\n';
  }
  if (!r.integration.missing.empty()) {
    out << "missing integration addresses:";
    for (std::size_t a : r.integration.missing) out << ' ' << a;
    out << '\n';
  }
  for (const std::string& n : r.notes) out << "note: " << n << '\n';

  out << "\nmakespan=" << r.makespan << '\n';
  out << "fairness=" << detail::fixed(r.fairness, 4) << '\n';
  return out.str();
}

inline ojson report_json(const Report& r) {
  ojson j;
  j["status"] = to_string(r.status);
  j["makespan"] = r.makespan;
  if (std::isinf(r.fairness))
    j["fairness"] = "inf";
  else
    j["fairness"] = r.fairness;
  j["fpus"] = ojson::array();
  for (const FpuReport& u : r.fpus)
    j["fpus"].push_back(ojson{{"id", u.id},
                              {"domain", std::string(1, u.domain)},
                              {"busy_ticks", u.busy_ticks},
                              {"utilization", utilization_pct(u.busy_ticks, r.makespan)}});
  j["functions"] = ojson::array();
  for (const FunctionReport& f : r.functions) {
    ojson fj{{"name", f.name},         {"fid", f.fid},
             {"address", f.address},   {"run", f.run_ticks},
             {"ready", f.ready_ticks}, {"sleep", f.sleep_ticks},
             {"stopped", f.stopped_ticks}, {"state", to_string(f.final_state)}};
    if (f.exit_tick)
      fj["exit_tick"] = *f.exit_tick;
    else
      fj["exit_tick"] = nullptr;
    j["functions"].push_back(std::move(fj));
  }
  j["deadlock_cycle"] = r.deadlock_cycle;
  j["notes"] = r.notes;
  j["results"] = ojson::array();
  for (const ResultPacket& p : r.integration.results)
    j["results"].push_back(ojson{{"address", p.address.index},
                                 {"fid", p.fid.str()},
                                 {"fn", p.producer},
                                 {"completion_tick", p.completion_tick}});
  j["missing"] = r.integration.missing;
  return j;
}

// Everything the `analyze` subcommand reports.
struct Analysis {
  std::vector<std::string> names;
  AdjacencyMatrix adjacency;
  DependencyMatrix dependency;
  std::uint64_t pair_combinations = 0;                  // C(n, 2), 0 when n < 2
  std::uint64_t edges = 0;                              // n(n-1)/2
  std::optional<std::uint64_t> relationships;           // 4*C(n,2) when n >= 2
  std::vector<std::vector<std::string>> sync_cycles;
};

inline Analysis analyze(const Workload& w) {
  Analysis a;
  for (const FunctionSpec& f : w.functions) a.names.push_back(f.name);
  auto [adj, dep] = build_matrices(w);
  a.adjacency = std::move(adj);
  a.dependency = std::move(dep);
  const std::size_t n = w.functions.size();
  a.edges = edge_count(n);
  if (n >= 2) {
    a.pair_combinations = combinations(n, 2);
    a.relationships = relationship_space(n);
  }
  a.sync_cycles = find_sync_cycles(w);
  return a;
}

inline std::string render_analysis_text(const Analysis& a) {
  std::ostringstream out;
  const std::size_t n = a.names.size();
  out << "functions: " << n << '\n';

  std::vector<std::vector<std::string>> adj_rows{{""}};
  for (const std::string& name : a.names) adj_rows[0].push_back(name);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> row{a.names[i]};
    for (std::size_t j = 0; j < n; ++j) row.push_back(a.adjacency.at(i, j) ? "1" : "0");
    adj_rows.push_back(std::move(row));
  }
  out << "\nadjacency matrix:\n";
  detail::render_table(out, adj_rows);

  std::vector<std::vector<std::string>> dep_rows{{""}};
  for (const std::string& name : a.names) dep_rows[0].push_back(name);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> row{a.names[i]};
    for (std::size_t j = 0; j < n; ++j) {
      std::string l = a.dependency.label_at(i, j);
      row.push_back(l.empty() ? "." : l);
    }
    dep_rows.push_back(std::move(row));
  }
  out << "\ndependency matrix:\n";
  detail::render_table(out, dep_rows);

  if (n >= 2) {
    out << "\npair relations:\n";
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        out << "  (" << i + 1 << ',' << j + 1 << ") " << a.names[i] << ',' << a.names[j] << ": "
            << to_string(classify_pair(a.adjacency, i, j)) << '\n';
  }

  out << "\ncombinations C(" << n << ",2) = " << a.pair_combinations << '\n';
  out << "edge count = " << a.edges << '\n';
  if (a.relationships) out << "relationship space = " << *a.relationships << '\n';

  if (!a.sync_cycles.empty()) {
    out << "\nsynchronized-dependency cycles:\n";
    for (const auto& cycle : a.sync_cycles) {
      out << "  ";
      for (const std::string& name : cycle) out << name << " -> ";
      out << cycle.front() << '\n';
    }
  }
  return out.str();
}

inline ojson analysis_json(const Analysis& a) {
  const std::size_t n = a.names.size();
  ojson j;
  j["n"] = n;
  j["functions"] = a.names;
  ojson adj = ojson::array();
  for (std::size_t i = 0; i < n; ++i) {
    ojson row = ojson::array();
    for (std::size_t jx = 0; jx < n; ++jx) row.push_back(a.adjacency.at(i, jx) ? 1 : 0);
    adj.push_back(std::move(row));
  }
  j["adjacency"] = std::move(adj);
  ojson dep = ojson::array();
  for (std::size_t i = 0; i < n; ++i) {
    ojson row = ojson::array();
    for (std::size_t jx = 0; jx < n; ++jx) row.push_back(a.dependency.label_at(i, jx));
    dep.push_back(std::move(row));
  }
  j["dependency"] = std::move(dep);
  ojson pairs = ojson::array();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t jx = i + 1; jx < n; ++jx)
      pairs.push_back(ojson{{"row", i + 1},
                            {"col", jx + 1},
                            {"relation", to_string(classify_pair(a.adjacency, i, jx))}});
  j["pairs"] = std::move(pairs);
  j["pair_combinations"] = a.pair_combinations;
  j["edge_count"] = a.edges;
  if (a.relationships)
    j["relationship_space"] = *a.relationships;
  else
    j["relationship_space"] = nullptr;
  j["sync_cycles"] = a.sync_cycles;
  return j;
}

}  // namespace fpa
