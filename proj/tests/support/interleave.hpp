#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fpa/bakery.hpp"

// Interleaving drivers for the bakery protocol. Each participant performs
// one acquire/release episode; the driver chooses who acts next. Checked
// properties: mutual exclusion, first-come-first-served (doorway completion
// order is entry order), deadlock freedom, determinism.

namespace interleave {

struct Tracking {
  // global event sequence numbers; 0 = not yet happened
  std::vector<std::uint64_t> doorway_begin;
  std::vector<std::uint64_t> doorway_complete;
  std::vector<std::uint64_t> critical_enter;
  std::vector<bool> released;
  std::uint64_t next_seq = 1;

  explicit Tracking(std::size_t n)
      : doorway_begin(n, 0), doorway_complete(n, 0), critical_enter(n, 0), released(n, false) {}

  bool all_released() const {
    for (bool r : released)
      if (!r) return false;
    return true;
  }
};

struct Node {
  fpa::BakeryState state;
  Tracking track;
};

// Acts on participant i: release when critical, protocol step otherwise.
// Returns false when the action was a no-op (blocked scan).
inline bool act(Node& node, std::size_t i, std::string* violation) {
  auto& s = node.state;
  auto& t = node.track;
  if (s.phase(i) == fpa::BakeryPhase::Critical) {
    s.release(i);
    t.released[i] = true;
    return true;
  }
  const fpa::BakeryPhase before = s.phase(i);
  const fpa::StepOutcome out = s.step(i);
  if (out == fpa::StepOutcome::Blocked) return false;
  if (before == fpa::BakeryPhase::Idle) t.doorway_begin[i] = t.next_seq++;
  if (before == fpa::BakeryPhase::Doorway) t.doorway_complete[i] = t.next_seq++;
  if (out == fpa::StepOutcome::EnteredCritical) {
    t.critical_enter[i] = t.next_seq++;
    // mutual exclusion
    for (std::size_t j = 0; j < s.size(); ++j)
      if (j != i && s.phase(j) == fpa::BakeryPhase::Critical && violation)
        *violation = "two participants in the critical section";
    // FCFS: nobody who finished the doorway before i began may still be waiting
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (j == i || t.critical_enter[j] != 0) continue;
      if (t.doorway_complete[j] != 0 && t.doorway_complete[j] < t.doorway_begin[i] && violation)
        *violation = "FCFS violated: participant " + std::to_string(j) +
                     " completed its doorway first but " + std::to_string(i) + " entered";
    }
  }
  return true;
}

inline std::string encode(const Node& node) {
  std::ostringstream key;
  const auto& s = node.state;
  for (std::size_t i = 0; i < s.size(); ++i)
    key << static_cast<int>(s.phase(i)) << ':' << s.choosing(i) << ':' << s.number(i) << ':'
        << s.scan_cursor(i) << ':' << node.track.doorway_begin[i] << ':'
        << node.track.doorway_complete[i] << ':' << node.track.critical_enter[i] << ':'
        << node.track.released[i] << ';';
  return key.str();
}

struct ExploreStats {
  std::size_t states = 0;
  std::size_t terminal_states = 0;
};

// Exhaustive search over every interleaving of n one-shot participants.
// Returns a violation description, or nullopt if all properties hold.
inline std::optional<std::string> explore_exhaustive(std::size_t n, ExploreStats* stats = nullptr) {
  Node initial{fpa::BakeryState(n), Tracking(n)};
  std::set<std::string> visited{encode(initial)};
  std::vector<Node> frontier{initial};
  ExploreStats local;

  while (!frontier.empty()) {
    Node node = std::move(frontier.back());
    frontier.pop_back();
    ++local.states;

    if (node.track.all_released()) {
      ++local.terminal_states;
      continue;
    }

    bool progress = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (node.track.released[i]) continue;
      Node next = node;
      std::string violation;
      if (!act(next, i, &violation)) continue;  // blocked: no state change
      progress = true;
      if (!violation.empty()) return violation;
      if (visited.insert(encode(next)).second) frontier.push_back(std::move(next));
    }
    if (!progress) return std::string("deadlock: no participant can make progress");
  }
  if (stats) *stats = local;
  return std::nullopt;
}

// One random interleaving; scheduler choices drawn from rng.
inline std::optional<std::string> run_random(std::size_t n, std::mt19937& rng,
                                             std::vector<std::size_t>* entry_order = nullptr) {
  Node node{fpa::BakeryState(n), Tracking(n)};
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::size_t guard = 0;
  while (!node.track.all_released()) {
    if (++guard > 200000) return std::string("interleaving did not terminate");
    std::size_t i = pick(rng);
    if (node.track.released[i]) continue;
    const bool entering = node.state.phase(i) == fpa::BakeryPhase::Scanning;
    std::string violation;
    const bool acted = act(node, i, &violation);
    if (!violation.empty()) return violation;
    if (acted && entering && node.state.phase(i) == fpa::BakeryPhase::Critical && entry_order)
      entry_order->push_back(i);
  }
  return std::nullopt;
}

}  // namespace interleave
