#pragma once

#include <set>
#include <string>
#include <vector>

#include "fpa/depgraph.hpp"
#include "fpa/funpiler.hpp"
#include "fpa/workload.hpp"

namespace fpa {

// Checks every workload type invariant plus domain resolution against the
// config. Errors are fatal for downstream stages; warnings are not. A cycle
// among synchronized dependencies is a warning here (the analysis modules
// accept it) and surfaces as a runtime deadlock if it manifests in the farm.
inline std::vector<Diagnostic> validate(const Workload& w, const DomainConfig& cfg) {
  std::vector<Diagnostic> out;
  auto err = [&](std::string m) { out.push_back({Severity::Error, std::move(m)}); };
  auto warn = [&](std::string m) { out.push_back({Severity::Warning, std::move(m)}); };

  std::set<std::string> seen;
  for (const FunctionSpec& f : w.functions)
    if (!seen.insert(f.name).second) err("duplicate function name '" + f.name + "'");

  for (const FunctionSpec& f : w.functions) {
    if (f.cost == 0) err("function '" + f.name + "': cost must be >= 1");
    if (f.ls_units == 0) err("function '" + f.name + "': ls must be >= 1");
    if (!cfg.has(f.domain))
      err("function '" + f.name + "': unknown domain '" + std::string(1, f.domain) + "'");
    for (std::size_t i = 0; i < f.wait_points.size(); ++i) {
      const WaitPoint& wp = f.wait_points[i];
      if (i > 0 && f.wait_points[i - 1].at_cycle >= wp.at_cycle)
        err("function '" + f.name + "': wait points must be strictly ascending by cycle");
      if (f.cost > 0 && wp.at_cycle >= f.cost)
        err("function '" + f.name + "': wait at cycle " + std::to_string(wp.at_cycle) +
            " is not before cost " + std::to_string(f.cost));
      if (const auto* p = std::get_if<PeerWait>(&wp.target)) {
        if (p->target == f.name)
          err("function '" + f.name + "': wait targets itself");
        else if (!w.index_of(p->target))
          err("function '" + f.name + "': wait targets unknown function '" + p->target + "'");
      } else if (std::get<IoWait>(wp.target).duration == 0) {
        err("function '" + f.name + "': io wait duration must be >= 1");
      }
    }
  }

  std::set<std::pair<std::string, std::string>> dep_pairs;
  for (const DependencyDecl& d : w.dependencies) {
    if (!w.index_of(d.from)) err("dependency references unknown function '" + d.from + "'");
    if (!w.index_of(d.to)) err("dependency references unknown function '" + d.to + "'");
    if (d.from == d.to) err("dependency from '" + d.from + "' to itself");
    if (!dep_pairs.insert({d.from, d.to}).second)
      err("duplicate dependency declaration '" + d.from + "' -> '" + d.to + "'");
  }

  for (const SignalDecl& s : w.signals)
    if (!w.index_of(s.target)) err("signal targets unknown function '" + s.target + "'");
  for (const FunctionSpec& f : w.functions) {
    std::vector<const SignalDecl*> sigs;
    for (const SignalDecl& s : w.signals)
      if (s.target == f.name) sigs.push_back(&s);
    std::stable_sort(sigs.begin(), sigs.end(),
                     [](const SignalDecl* a, const SignalDecl* b) { return a->at_tick < b->at_tick; });
    SignalKind expect = SignalKind::Stop;
    for (const SignalDecl* s : sigs) {
      if (s->kind != expect) {
        err("signals for '" + f.name + "' must alternate stop/continue starting with stop");
        break;
      }
      expect = expect == SignalKind::Stop ? SignalKind::Continue : SignalKind::Stop;
    }
  }

  if (!has_errors(out)) {
    for (const auto& cycle : find_sync_cycles(w)) {
      std::string msg = "cycle among synchronized dependencies: ";
      for (const std::string& name : cycle) msg += name + " -> ";
      msg += cycle.front();
      warn(std::move(msg));
    }
  }
  return out;
}

}  // namespace fpa
