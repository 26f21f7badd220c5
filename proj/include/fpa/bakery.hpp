#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

// Lamport's bakery algorithm as an explicitly steppable protocol state
// machine. Each participant advances by one atomic action per step; an
// external driver chooses the interleaving, which makes the protocol
// exhaustively checkable. Used by the farm to issue FIFO tickets at
// feed-queue admission.

namespace fpa {

enum class BakeryPhase { Idle, Doorway, Scanning, Critical };

enum class StepOutcome { Advanced, EnteredCritical, Blocked, AlreadyCritical };

struct Ticket {
  std::uint64_t number = 0;
  std::size_t id = 0;
  // lexicographic (number, id): earlier number wins, lower id breaks ties
  auto operator<=>(const Ticket&) const = default;
};

class BakeryState {
 public:
  explicit BakeryState(std::size_t n) : cells_(n) {
    if (n == 0) throw std::invalid_argument("bakery: participant count must be >= 1");
  }

  std::size_t size() const { return cells_.size(); }
  BakeryPhase phase(std::size_t i) const { return cell(i).phase; }
  bool choosing(std::size_t i) const { return cell(i).choosing; }
  std::uint64_t number(std::size_t i) const { return cell(i).number; }

  // Next index to examine; meaningful only in Scanning.
  std::size_t scan_cursor(std::size_t i) const { return cell(i).scan; }

  std::optional<std::size_t> critical_holder() const {
    for (std::size_t i = 0; i < cells_.size(); ++i)
      if (cells_[i].phase == BakeryPhase::Critical) return i;
    return std::nullopt;
  }

  // One atomic protocol action for participant i:
  //   Idle -> Doorway         raise the choosing flag
  //   Doorway -> Scanning     take number = 1 + max of all numbers, drop flag
  //   Scanning                examine one index; pass it only if it is not
  //                           choosing and holds no earlier ticket; after the
  //                           last index, enter Critical
  // A participant already in Critical is not advanced.
  StepOutcome step(std::size_t i) {
    Cell& c = cell(i);
    switch (c.phase) {
      case BakeryPhase::Idle:
        c.choosing = true;
        c.phase = BakeryPhase::Doorway;
        return StepOutcome::Advanced;
      case BakeryPhase::Doorway: {
        std::uint64_t mx = 0;
        for (const Cell& o : cells_) mx = std::max(mx, o.number);
        c.number = mx + 1;
        c.choosing = false;
        c.scan = 0;
        c.phase = BakeryPhase::Scanning;
        return StepOutcome::Advanced;
      }
      case BakeryPhase::Scanning: {
        const std::size_t j = c.scan;
        const Cell& o = cells_[j];
        const bool pass = !o.choosing && (o.number == 0 ||
                                          std::pair(o.number, j) >= std::pair(c.number, i));
        if (!pass) return StepOutcome::Blocked;
        ++c.scan;
        if (c.scan == cells_.size()) {
          c.phase = BakeryPhase::Critical;
          return StepOutcome::EnteredCritical;
        }
        return StepOutcome::Advanced;
      }
      case BakeryPhase::Critical:
        return StepOutcome::AlreadyCritical;
    }
    throw std::logic_error("bakery: unreachable phase");
  }

  void release(std::size_t i) {
    Cell& c = cell(i);
    if (c.phase != BakeryPhase::Critical)
      throw std::logic_error("bakery: release of participant " + std::to_string(i) +
                             " which is not in the critical section");
    c.number = 0;
    c.scan = 0;
    c.phase = BakeryPhase::Idle;
  }

  bool operator==(const BakeryState&) const = default;

 private:
  struct Cell {
    bool choosing = false;
    std::uint64_t number = 0;
    std::size_t scan = 0;
    BakeryPhase phase = BakeryPhase::Idle;
    bool operator==(const Cell&) const = default;
  };

  Cell& cell(std::size_t i) {
    if (i >= cells_.size()) throw std::out_of_range("bakery: participant index out of range");
    return cells_[i];
  }
  const Cell& cell(std::size_t i) const {
    if (i >= cells_.size()) throw std::out_of_range("bakery: participant index out of range");
    return cells_[i];
  }

  std::vector<Cell> cells_;
};

}  // namespace fpa
