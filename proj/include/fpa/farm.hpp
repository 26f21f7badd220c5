#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include "fpa/bakery.hpp"
#include "fpa/depgraph.hpp"
#include "fpa/funpiler.hpp"
#include "fpa/integrator.hpp"
#include "fpa/validate.hpp"

// The FPU-farm engine: a deterministic discrete-event simulation of fed
// functions executing under the function state machine, priority-decay
// scheduling, round robin, preemption, blocking and stop/continue signals.
// Concurrency is modeled time; the engine itself is single threaded.

namespace fpa {

enum class FunctionState { Ready, Running, Sleeping, Stopped, Exited };

enum class TransitionKind { Dispatch, TimerRunout, Preempt, Block, Unblock, Stop, Continue, Exit };

inline std::string_view to_string(FunctionState s) {
  switch (s) {
    case FunctionState::Ready: return "READY";
    case FunctionState::Running: return "RUNNING";
    case FunctionState::Sleeping: return "SLEEPING";
    case FunctionState::Stopped: return "STOPPED";
    case FunctionState::Exited: return "EXITED";
  }
  return "?";
}

inline std::string_view to_string(TransitionKind k) {
  switch (k) {
    case TransitionKind::Dispatch: return "DISPATCH";
    case TransitionKind::TimerRunout: return "TIMER_RUNOUT";
    case TransitionKind::Preempt: return "PREEMPT";
    case TransitionKind::Block: return "BLOCK";
    case TransitionKind::Unblock: return "UNBLOCK";
    case TransitionKind::Stop: return "STOP";
    case TransitionKind::Continue: return "CONTINUE";
    case TransitionKind::Exit: return "EXIT";
  }
  return "?";
}

// The state transition table. Exactly eight edges are legal; anything else
// throws and leaves the caller's state untouched.
inline FunctionState transition_target(FunctionState from, TransitionKind kind) {
  switch (kind) {
    case TransitionKind::Dispatch:
      if (from == FunctionState::Ready) return FunctionState::Running;
      break;
    case TransitionKind::TimerRunout:
    case TransitionKind::Preempt:
      if (from == FunctionState::Running) return FunctionState::Ready;
      break;
    case TransitionKind::Block:
      if (from == FunctionState::Running) return FunctionState::Sleeping;
      break;
    case TransitionKind::Unblock:
      if (from == FunctionState::Sleeping) return FunctionState::Ready;
      break;
    case TransitionKind::Stop:
      if (from == FunctionState::Running) return FunctionState::Stopped;
      break;
    case TransitionKind::Continue:
      if (from == FunctionState::Stopped) return FunctionState::Ready;
      break;
    case TransitionKind::Exit:
      if (from == FunctionState::Running) return FunctionState::Exited;
      break;
  }
  throw std::logic_error("illegal transition: " + std::string(to_string(from)) + " -> " +
                         std::string(to_string(kind)));
}

struct SimConfig {
  std::uint64_t quantum = 10;      // time slice in ticks
  std::int64_t penalty0 = 10;      // recency value set on every deschedule
  std::int64_t decay = 1;          // penalty decrease per idle tick
  std::uint64_t msg_latency = 1;   // result-message delivery delay
  std::uint64_t ls_capacity = 256; // local-store units per FPU
  std::uint64_t tick_cap = 1'000'000;
};

inline void check_config(const SimConfig& c) {
  if (c.quantum == 0) throw std::invalid_argument("quantum must be >= 1");
  if (c.decay < 1) throw std::invalid_argument("decay must be >= 1");
  if (c.penalty0 < 0) throw std::invalid_argument("penalty0 must be >= 0");
  if (c.ls_capacity == 0) throw std::invalid_argument("ls capacity must be >= 1");
}

struct ActivePeerWait {
  std::string target;
  bool operator==(const ActivePeerWait&) const = default;
};
struct ActiveIoWait {
  std::uint64_t wake_tick = 0;
  bool operator==(const ActiveIoWait&) const = default;
};

struct RuntimeFunction {
  AssignedFunction assigned;
  FunctionState state = FunctionState::Ready;
  std::uint64_t cycles_done = 0;

  // recency value: set to penalty0 on every deschedule, decays linearly
  std::int64_t penalty = 0;
  std::uint64_t penalty_tick = 0;

  std::optional<Ticket> ticket;                 // issued at feed-queue admission
  std::deque<WaitPoint> pending_waits;          // effective waits, ascending at_cycle
  std::optional<std::variant<ActivePeerWait, ActiveIoWait>> active_wait;
  std::set<std::string> inbox;                  // senders whose results arrived
  bool pending_stop = false;
  std::uint64_t stop_signal_tick = 0;
  bool resident = false;                        // occupies ls_units on its FPU
  std::uint64_t quantum_used = 0;

  std::uint64_t run_ticks = 0;
  std::uint64_t ready_ticks = 0;
  std::uint64_t sleep_ticks = 0;
  std::uint64_t stopped_ticks = 0;
  std::uint64_t exit_tick = 0;

  bool operator==(const RuntimeFunction&) const = default;
};

inline RuntimeFunction transition(RuntimeFunction f, TransitionKind kind) {
  f.state = transition_target(f.state, kind);
  return f;
}

// Programmed priority minus the decayed recency value.
inline std::int64_t effective_priority(const RuntimeFunction& f, std::uint64_t now,
                                       const SimConfig& cfg) {
  const std::int64_t idle = static_cast<std::int64_t>(now - f.penalty_tick);
  const std::int64_t current = std::max<std::int64_t>(0, f.penalty - cfg.decay * idle);
  return f.assigned.spec.base_priority - current;
}

// Scheduler pick: highest effective priority, then earliest Ticket
// (number, id), then lowest program address. Returns nothing when the queue
// is empty or the winner does not fit in free local store.
inline const RuntimeFunction* select_next(const std::vector<const RuntimeFunction*>& ready,
                                          std::uint64_t now, const SimConfig& cfg,
                                          std::uint64_t free_ls) {
  const RuntimeFunction* best = nullptr;
  std::tuple<std::int64_t, std::uint64_t, std::size_t, std::size_t> best_key;
  for (const RuntimeFunction* f : ready) {
    if (!f || f->state != FunctionState::Ready) continue;
    const Ticket t = f->ticket.value_or(
        Ticket{std::numeric_limits<std::uint64_t>::max(), std::numeric_limits<std::size_t>::max()});
    std::tuple key{-effective_priority(*f, now, cfg), t.number, t.id, f->assigned.address.index};
    if (!best || key < best_key) {
      best = f;
      best_key = key;
    }
  }
  if (!best) return nullptr;
  if (!best->resident && best->assigned.spec.ls_units > free_ls) return nullptr;
  return best;
}

enum class EventKind {
  Dispatch,
  TimerRunout,
  Preempt,
  Block,
  Unblock,
  Stop,
  Continue,
  Exit,
  Msg,
  Integrate,
  Deadlock
};

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Dispatch: return "DISPATCH";
    case EventKind::TimerRunout: return "TIMER_RUNOUT";
    case EventKind::Preempt: return "PREEMPT";
    case EventKind::Block: return "BLOCK";
    case EventKind::Unblock: return "UNBLOCK";
    case EventKind::Stop: return "STOP";
    case EventKind::Continue: return "CONTINUE";
    case EventKind::Exit: return "EXIT";
    case EventKind::Msg: return "MSG";
    case EventKind::Integrate: return "INTEGRATE";
    case EventKind::Deadlock: return "DEADLOCK";
  }
  return "?";
}

inline EventKind event_kind(TransitionKind k) {
  switch (k) {
    case TransitionKind::Dispatch: return EventKind::Dispatch;
    case TransitionKind::TimerRunout: return EventKind::TimerRunout;
    case TransitionKind::Preempt: return EventKind::Preempt;
    case TransitionKind::Block: return EventKind::Block;
    case TransitionKind::Unblock: return EventKind::Unblock;
    case TransitionKind::Stop: return EventKind::Stop;
    case TransitionKind::Continue: return EventKind::Continue;
    case TransitionKind::Exit: return EventKind::Exit;
  }
  throw std::logic_error("unreachable transition kind");
}

struct SimEvent {
  std::uint64_t tick = 0;
  EventKind kind = EventKind::Dispatch;
  std::string fn;
  std::string fid;
  std::optional<std::string> fpu;  // absent where inapplicable
  bool operator==(const SimEvent&) const = default;
};

struct FpuReport {
  std::string id;
  char domain = 'G';
  std::uint64_t busy_ticks = 0;
  bool operator==(const FpuReport&) const = default;
};

struct FunctionReport {
  std::string name;
  std::string fid;
  std::size_t address = 0;
  std::uint64_t run_ticks = 0;
  std::uint64_t ready_ticks = 0;
  std::uint64_t sleep_ticks = 0;
  std::uint64_t stopped_ticks = 0;
  std::optional<std::uint64_t> exit_tick;
  FunctionState final_state = FunctionState::Ready;
  bool operator==(const FunctionReport&) const = default;
};

enum class RunStatus { Completed, Deadlock, TickCapExceeded };

inline std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::Deadlock: return "deadlock";
    case RunStatus::TickCapExceeded: return "tick_cap_exceeded";
  }
  return "?";
}

struct Report {
  RunStatus status = RunStatus::Completed;
  std::vector<FpuReport> fpus;
  std::vector<FunctionReport> functions;  // program order
  std::uint64_t makespan = 0;             // last EXIT tick (stop tick if aborted)
  double fairness = 1.0;                  // max/min run ticks; +inf if min is 0
  std::vector<std::string> deadlock_cycle;
  std::vector<std::string> notes;
  IntegrationBuffer::Summary integration;
};

struct RunResult {
  RunStatus status = RunStatus::Completed;
  std::vector<SimEvent> trace;
  Report report;
};

class Simulation {
 public:
  Simulation(const Workload& w, const DomainConfig& dc, const SimConfig& sc)
      : cfg_(sc), integrator_(w.functions.size()) {
    check_config(sc);
    auto diags = validate(w, dc);
    if (has_errors(diags)) {
      for (const Diagnostic& d : diags)
        if (d.severity == Severity::Error)
          throw std::invalid_argument("invalid workload: " + d.message);
    }

    auto assigned = assign(w, dc);
    fns_.reserve(assigned.size());
    for (auto& a : assigned) {
      RuntimeFunction f;
      f.assigned = a;
      fns_.push_back(std::move(f));
    }
    for (std::size_t i = 0; i < fns_.size(); ++i)
      addr_of_[fns_[i].assigned.spec.name] = i;

    // Effective wait list: auto-inserted cycle-0 peer waits for synchronized
    // dependencies (unless an explicit wait on the same peer exists), then
    // the authored waits; stably ordered by cycle.
    for (RuntimeFunction& f : fns_) {
      std::vector<WaitPoint> waits;
      for (const DependencyDecl& d : w.dependencies) {
        if (!d.sync || d.from != f.assigned.spec.name) continue;
        bool explicit_wait = false;
        for (const WaitPoint& wp : f.assigned.spec.wait_points)
          if (const auto* p = std::get_if<PeerWait>(&wp.target); p && p->target == d.to)
            explicit_wait = true;
        if (!explicit_wait) waits.push_back(WaitPoint{0, PeerWait{d.to}});
      }
      waits.insert(waits.end(), f.assigned.spec.wait_points.begin(),
                   f.assigned.spec.wait_points.end());
      std::stable_sort(waits.begin(), waits.end(),
                       [](const WaitPoint& a, const WaitPoint& b) { return a.at_cycle < b.at_cycle; });
      f.pending_waits.assign(waits.begin(), waits.end());
    }

    // Result recipients: every function holding a peer wait on the producer.
    for (std::size_t i = 0; i < fns_.size(); ++i)
      for (const WaitPoint& wp : fns_[i].pending_waits)
        if (const auto* p = std::get_if<PeerWait>(&wp.target)) {
          std::size_t producer = addr_of_.at(p->target);
          auto& list = dependents_[producer];
          if (std::find(list.begin(), list.end(), i) == list.end()) list.push_back(i);
        }

    for (const FpuId& id : dc.fpu_list()) {
      Fpu u;
      u.id = id;
      u.ls_capacity = sc.ls_capacity;
      fpus_.push_back(std::move(u));
    }
    std::map<FpuId, std::size_t> fpu_index;
    for (std::size_t i = 0; i < fpus_.size(); ++i) fpu_index[fpus_[i].id] = i;
    for (const auto& [id, queue] : feed_queues(assigned, dc))
      for (const AssignedFunction& a : queue)
        fpus_[fpu_index.at(id)].members.push_back(a.address.index);
    for (std::size_t i = 0; i < fns_.size(); ++i)
      fpu_of_.push_back(fpu_index.at(fns_[i].assigned.target_fpu));

    for (const RuntimeFunction& f : fns_)
      if (f.assigned.spec.ls_units > sc.ls_capacity)
        throw std::invalid_argument("function '" + f.assigned.spec.name + "' needs " +
                                    std::to_string(f.assigned.spec.ls_units) +
                                    " local-store units but FPU capacity is " +
                                    std::to_string(sc.ls_capacity));

    // One bakery ticket per function at feed-queue admission: each queue runs
    // the doorway in feed order, so (number, id) reproduces FIFO admission.
    for (Fpu& u : fpus_) {
      if (u.members.empty()) continue;
      BakeryState lock(u.members.size());
      for (std::size_t q = 0; q < u.members.size(); ++q) {
        lock.step(q);  // Idle -> Doorway
        lock.step(q);  // Doorway -> Scanning: number taken
        fns_[u.members[q]].ticket = Ticket{lock.number(q), q};
      }
    }

    for (const SignalDecl& s : w.signals)
      signals_.push_back(TimedSignal{s.at_tick, s.kind, addr_of_.at(s.target)});
    std::stable_sort(signals_.begin(), signals_.end(),
                     [](const TimedSignal& a, const TimedSignal& b) { return a.at < b.at; });
  }

  std::uint64_t now() const { return tick_; }
  bool finished() const { return exited_ == fns_.size() && deliveries_.empty(); }
  bool deadlocked() const { return deadlocked_; }
  const std::vector<SimEvent>& trace() const { return trace_; }
  const std::vector<RuntimeFunction>& functions() const { return fns_; }
  const SimConfig& config() const { return cfg_; }

  // Advance one tick. Intra-tick rule order is fixed: deliver messages, apply
  // signals, wake sleepers, resolve running functions, dispatch idle FPUs;
  // within a rule, functions are handled in program-address order.
  std::vector<SimEvent> step() {
    const std::uint64_t now = tick_;
    std::vector<SimEvent> ev;
    std::vector<FunctionState> before(fns_.size());
    std::vector<bool> ran(fns_.size(), false);
    for (std::size_t i = 0; i < fns_.size(); ++i) before[i] = fns_[i].state;

    // 1. deliver due result messages
    while (!deliveries_.empty() && deliveries_.front().due <= now) {
      Delivery d = deliveries_.front();
      deliveries_.pop_front();
      const RuntimeFunction& sender = fns_[d.sender];
      if (!d.recipient) {
        ResultPacket p{sender.assigned.address, sender.assigned.fid, sender.assigned.spec.name,
                       sender.exit_tick};
        for (const ResultPacket& out : integrator_.submit(std::move(p)))
          ev.push_back({now, EventKind::Integrate, out.producer, out.fid.str(), std::nullopt});
      } else {
        RuntimeFunction& r = fns_[*d.recipient];
        if (r.state != FunctionState::Exited) {
          r.inbox.insert(sender.assigned.spec.name);
          ev.push_back({now, EventKind::Msg, r.assigned.spec.name, r.assigned.fid.str(),
                        std::nullopt});
        }
      }
    }

    // 2. apply due stop/continue signals
    while (signal_cursor_ < signals_.size() && signals_[signal_cursor_].at <= now) {
      const TimedSignal s = signals_[signal_cursor_++];
      RuntimeFunction& f = fns_[s.target];
      if (f.state == FunctionState::Exited) continue;
      if (s.kind == SignalKind::Stop) {
        f.pending_stop = true;
        f.stop_signal_tick = now;
      } else if (f.state == FunctionState::Stopped) {
        apply_transition(f, TransitionKind::Continue, ev, now);
      } else if (f.pending_stop) {
        f.pending_stop = false;
        notes_.push_back("continue signal for '" + f.assigned.spec.name + "' at tick " +
                         std::to_string(now) + " cancelled a stop still pending delivery");
      }
    }

    // 3. wake sleepers whose wait is satisfied
    for (RuntimeFunction& f : fns_) {
      if (f.state != FunctionState::Sleeping || !f.active_wait) continue;
      if (wait_satisfied(f, now)) {
        f.active_wait.reset();
        apply_transition(f, TransitionKind::Unblock, ev, now);
      }
    }

    // 4. resolve running functions
    for (std::size_t i = 0; i < fns_.size(); ++i) {
      RuntimeFunction& f = fns_[i];
      if (f.state != FunctionState::Running) continue;
      Fpu& u = fpus_[fpu_of_[i]];

      // a wait due at the current cycle count fires before the cycle runs
      if (wait_fires(f)) {
        begin_wait(f, now);
        apply_transition(f, TransitionKind::Block, ev, now);
        deschedule(f, u, now);
        continue;
      }

      ++f.cycles_done;
      ++f.run_ticks;
      ++f.quantum_used;
      ++u.busy_ticks;
      ran[i] = true;

      if (f.cycles_done == f.assigned.spec.cost) {
        apply_transition(f, TransitionKind::Exit, ev, now);
        f.exit_tick = now;
        ++exited_;
        u.running.reset();
        if (f.resident) {
          u.ls_used -= f.assigned.spec.ls_units;
          f.resident = false;
        }
        deliveries_.push_back({now + cfg_.msg_latency, i, std::nullopt});
        if (auto it = dependents_.find(i); it != dependents_.end())
          for (std::size_t r : it->second)
            deliveries_.push_back({now + cfg_.msg_latency, i, r});
      } else if (wait_fires(f)) {
        begin_wait(f, now);
        apply_transition(f, TransitionKind::Block, ev, now);
        deschedule(f, u, now);
      } else if (f.pending_stop) {
        apply_transition(f, TransitionKind::Stop, ev, now);
        f.pending_stop = false;
        if (f.stop_signal_tick < now)
          notes_.push_back("stop for '" + f.assigned.spec.name + "' signalled at tick " +
                           std::to_string(f.stop_signal_tick) + " applied at tick " +
                           std::to_string(now) + " (deferred while not running)");
        deschedule(f, u, now);
      } else if (higher_priority_ready(u, effective_priority(f, now, cfg_), now)) {
        apply_transition(f, TransitionKind::Preempt, ev, now);
        deschedule(f, u, now);
      } else if (f.quantum_used >= cfg_.quantum) {
        apply_transition(f, TransitionKind::TimerRunout, ev, now);
        deschedule(f, u, now);
      }
    }

    // 5. dispatch idle FPUs
    for (Fpu& u : fpus_) {
      if (u.running) continue;
      std::vector<const RuntimeFunction*> ready;
      for (std::size_t m : u.members)
        if (fns_[m].state == FunctionState::Ready) ready.push_back(&fns_[m]);
      const RuntimeFunction* pick = select_next(ready, now, cfg_, u.ls_capacity - u.ls_used);
      if (!pick) continue;
      RuntimeFunction& f = fns_[pick->assigned.address.index];
      apply_transition(f, TransitionKind::Dispatch, ev, now);
      u.running = pick->assigned.address.index;
      f.quantum_used = 0;
      if (!f.resident) {
        f.resident = true;
        u.ls_used += f.assigned.spec.ls_units;
      }
    }

    // time accounting: tick `now` covers the interval (now-1, now]
    if (now >= 1) {
      for (std::size_t i = 0; i < fns_.size(); ++i) {
        RuntimeFunction& f = fns_[i];
        if (ran[i]) continue;  // counted as a run tick already
        if (f.state == FunctionState::Exited && f.exit_tick < now) continue;
        switch (before[i]) {
          case FunctionState::Ready: ++f.ready_ticks; break;
          case FunctionState::Sleeping: ++f.sleep_ticks; break;
          case FunctionState::Stopped: ++f.stopped_ticks; break;
          // running without executing a cycle = blocked at the wait before
          // its first cycle of the slice; that interval is wait time
          case FunctionState::Running: ++f.sleep_ticks; break;
          case FunctionState::Exited: break;
        }
      }
    }

    check_deadlock(ev, now);

    trace_.insert(trace_.end(), ev.begin(), ev.end());
    ++tick_;
    return ev;
  }

  RunResult run() {
    RunStatus status = RunStatus::Completed;
    while (!finished() && !deadlocked_) {
      if (tick_ > cfg_.tick_cap) {
        status = RunStatus::TickCapExceeded;
        break;
      }
      step();
    }
    if (deadlocked_) status = RunStatus::Deadlock;
    RunResult result;
    result.status = status;
    result.trace = trace_;
    result.report = make_report(status);
    return result;
  }

  Report make_report(RunStatus status) const {
    Report rep;
    rep.status = status;
    for (const Fpu& u : fpus_)
      rep.fpus.push_back(FpuReport{u.id.str(), u.id.domain, u.busy_ticks});
    std::uint64_t last_exit = 0;
    for (const RuntimeFunction& f : fns_) {
      FunctionReport fr;
      fr.name = f.assigned.spec.name;
      fr.fid = f.assigned.fid.str();
      fr.address = f.assigned.address.index;
      fr.run_ticks = f.run_ticks;
      fr.ready_ticks = f.ready_ticks;
      fr.sleep_ticks = f.sleep_ticks;
      fr.stopped_ticks = f.stopped_ticks;
      fr.final_state = f.state;
      if (f.state == FunctionState::Exited) {
        fr.exit_tick = f.exit_tick;
        last_exit = std::max(last_exit, f.exit_tick);
      }
      rep.functions.push_back(std::move(fr));
    }
    rep.makespan = status == RunStatus::Completed ? last_exit : (tick_ == 0 ? 0 : tick_ - 1);
    rep.fairness = 1.0;
    if (!fns_.empty()) {
      std::uint64_t mx = 0, mn = std::numeric_limits<std::uint64_t>::max();
      for (const RuntimeFunction& f : fns_) {
        mx = std::max(mx, f.run_ticks);
        mn = std::min(mn, f.run_ticks);
      }
      rep.fairness = mn == 0 ? std::numeric_limits<double>::infinity()
                             : static_cast<double>(mx) / static_cast<double>(mn);
    }
    rep.deadlock_cycle = deadlock_cycle_;
    rep.notes = notes_;
    rep.integration = integrator_.finalize();
    return rep;
  }

 private:
  struct Fpu {
    FpuId id;
    std::uint64_t ls_capacity = 0;
    std::uint64_t ls_used = 0;
    std::uint64_t busy_ticks = 0;
    std::optional<std::size_t> running;
    std::vector<std::size_t> members;  // routed addresses, feed order
  };

  struct Delivery {
    std::uint64_t due = 0;
    std::size_t sender = 0;
    std::optional<std::size_t> recipient;  // nullopt = integration unit
  };

  struct TimedSignal {
    std::uint64_t at = 0;
    SignalKind kind = SignalKind::Stop;
    std::size_t target = 0;
  };

  void apply_transition(RuntimeFunction& f, TransitionKind kind, std::vector<SimEvent>& ev,
                        std::uint64_t now) {
    f.state = transition_target(f.state, kind);
    ev.push_back({now, event_kind(kind), f.assigned.spec.name, f.assigned.fid.str(),
                  f.assigned.target_fpu.str()});
  }

  bool wait_fires(const RuntimeFunction& f) const {
    return !f.pending_waits.empty() && f.pending_waits.front().at_cycle == f.cycles_done;
  }

  void begin_wait(RuntimeFunction& f, std::uint64_t now) {
    WaitPoint wp = f.pending_waits.front();
    f.pending_waits.pop_front();
    if (const auto* p = std::get_if<PeerWait>(&wp.target))
      f.active_wait = ActivePeerWait{p->target};
    else
      f.active_wait = ActiveIoWait{now + std::get<IoWait>(wp.target).duration};
  }

  bool wait_satisfied(const RuntimeFunction& f, std::uint64_t now) const {
    if (const auto* p = std::get_if<ActivePeerWait>(&*f.active_wait))
      return f.inbox.count(p->target) != 0;
    return now >= std::get<ActiveIoWait>(*f.active_wait).wake_tick;
  }

  void deschedule(RuntimeFunction& f, Fpu& u, std::uint64_t now) {
    if (u.running && *u.running == f.assigned.address.index) u.running.reset();
    f.penalty = cfg_.penalty0;
    f.penalty_tick = now;
    f.quantum_used = 0;
  }

  bool higher_priority_ready(const Fpu& u, std::int64_t running_priority,
                             std::uint64_t now) const {
    for (std::size_t m : u.members) {
      const RuntimeFunction& g = fns_[m];
      if (g.state == FunctionState::Ready &&
          effective_priority(g, now, cfg_) > running_priority)
        return true;
    }
    return false;
  }

  // Deadlock: nothing runs, nothing is ready, no message, signal or I/O
  // expiry is pending, and sleeping functions remain. Only peer waits can be
  // stuck like that; the reported cycle comes from the runtime wait-for graph.
  void check_deadlock(std::vector<SimEvent>& ev, std::uint64_t now) {
    if (deadlocked_ || finished()) return;
    if (!deliveries_.empty() || signal_cursor_ < signals_.size()) return;
    bool any_sleeping = false;
    for (const RuntimeFunction& f : fns_) {
      switch (f.state) {
        case FunctionState::Running:
        case FunctionState::Ready:
          return;
        case FunctionState::Sleeping:
          if (f.active_wait && std::holds_alternative<ActiveIoWait>(*f.active_wait))
            return;  // an expiry is pending
          if (f.active_wait && wait_satisfied(f, now))
            return;  // the result already arrived; a wake is pending
          any_sleeping = true;
          break;
        default:
          break;
      }
    }
    if (!any_sleeping) return;

    std::vector<std::vector<std::size_t>> wait_for(fns_.size());
    for (std::size_t i = 0; i < fns_.size(); ++i) {
      const RuntimeFunction& f = fns_[i];
      if (f.state != FunctionState::Sleeping || !f.active_wait) continue;
      if (const auto* p = std::get_if<ActivePeerWait>(&*f.active_wait))
        wait_for[i].push_back(addr_of_.at(p->target));
    }
    auto cycles = detail::elementary_cycles(wait_for);
    if (!cycles.empty()) {
      for (std::size_t v : cycles.front())
        deadlock_cycle_.push_back(fns_[v].assigned.spec.name);
    } else {
      for (const RuntimeFunction& f : fns_)
        if (f.state == FunctionState::Sleeping)
          deadlock_cycle_.push_back(f.assigned.spec.name);
    }
    for (const std::string& name : deadlock_cycle_) {
      const RuntimeFunction& f = fns_[addr_of_.at(name)];
      ev.push_back({now, EventKind::Deadlock, name, f.assigned.fid.str(), std::nullopt});
    }
    deadlocked_ = true;
  }

  SimConfig cfg_;
  std::vector<RuntimeFunction> fns_;  // address order
  std::vector<std::size_t> fpu_of_;   // address -> fpu index
  std::map<std::string, std::size_t> addr_of_;
  std::map<std::size_t, std::vector<std::size_t>> dependents_;
  std::vector<Fpu> fpus_;             // sorted by id
  std::deque<Delivery> deliveries_;
  std::vector<TimedSignal> signals_;
  std::size_t signal_cursor_ = 0;
  IntegrationBuffer integrator_;
  std::vector<SimEvent> trace_;
  std::uint64_t tick_ = 0;
  std::size_t exited_ = 0;
  bool deadlocked_ = false;
  std::vector<std::string> deadlock_cycle_;
  std::vector<std::string> notes_;
};

inline RunResult run(const Workload& w, const DomainConfig& dc, const SimConfig& sc) {
  Simulation sim(w, dc, sc);
  return sim.run();
}

}  // namespace fpa
