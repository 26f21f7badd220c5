#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// Workload description: an ordered array of opaque cost-in-cycles functions
// plus the dependency, wait and signal declarations that drive a simulation.
// Program order is the declaration order and is significant everywhere
// downstream (FID ordinals, integration addresses, tie breaking).

namespace fpa {

struct PeerWait {
  std::string target;  // function whose result is awaited
  bool operator==(const PeerWait&) const = default;
};

struct IoWait {
  std::uint64_t duration = 1;  // ticks, >= 1
  bool operator==(const IoWait&) const = default;
};

struct WaitPoint {
  std::uint64_t at_cycle = 0;  // cycles completed before blocking
  std::variant<PeerWait, IoWait> target;
  bool operator==(const WaitPoint&) const = default;
};

struct FunctionSpec {
  std::string name;
  char domain = 'G';  // single uppercase letter
  std::uint64_t cost = 1;
  std::int64_t base_priority = 0;  // higher = more urgent
  std::uint64_t ls_units = 1;      // local-store occupancy
  std::vector<WaitPoint> wait_points;  // strictly ascending by at_cycle
  bool operator==(const FunctionSpec&) const = default;
};

enum class DependencyKind { Communication, Cooperation };

struct DependencyDecl {
  std::string from;  // `from` depends on `to`
  std::string to;
  DependencyKind kind = DependencyKind::Communication;
  bool sync = false;
  bool operator==(const DependencyDecl&) const = default;
};

enum class SignalKind { Stop, Continue };

struct SignalDecl {
  SignalKind kind = SignalKind::Stop;
  std::string target;
  std::uint64_t at_tick = 0;  // global simulation tick
  bool operator==(const SignalDecl&) const = default;
};

struct Workload {
  std::vector<FunctionSpec> functions;  // program order
  std::vector<DependencyDecl> dependencies;
  std::vector<SignalDecl> signals;

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < functions.size(); ++i)
      if (functions[i].name == name) return i;
    return std::nullopt;
  }
  bool operator==(const Workload&) const = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  bool operator==(const Diagnostic&) const = default;
};

inline bool has_errors(const std::vector<Diagnostic>& ds) {
  return std::any_of(ds.begin(), ds.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

inline std::string to_string(const Diagnostic& d) {
  return (d.severity == Severity::Error ? "error: " : "warning: ") + d.message;
}

class parse_error : public std::runtime_error {
 public:
  parse_error(std::size_t line, const std::string& reason)
      : std::runtime_error("line " + std::to_string(line) + ": " + reason), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

inline bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = static_cast<unsigned char>(s.front());
  if (!std::isalnum(head) && head != '_') return false;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && c != '_' && c != '-' && c != '.') return false;
  }
  return true;
}

inline std::uint64_t parse_u64(std::string_view s, std::size_t line, std::string_view what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw parse_error(line, std::string(what) + " expects a non-negative integer, got '" +
                                std::string(s) + "'");
  return v;
}

inline std::int64_t parse_i64(std::string_view s, std::size_t line, std::string_view what) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw parse_error(line, std::string(what) + " expects an integer, got '" + std::string(s) + "'");
  return v;
}

// key=value arguments after the positional tokens
inline std::map<std::string, std::string> parse_kv(const std::vector<std::string>& tokens,
                                                   std::size_t first, std::size_t line) {
  std::map<std::string, std::string> kv;
  for (std::size_t i = first; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= t.size())
      throw parse_error(line, "expected key=value, got '" + t + "'");
    std::string key = t.substr(0, eq);
    if (!kv.emplace(key, t.substr(eq + 1)).second)
      throw parse_error(line, "duplicate key '" + key + "'");
  }
  return kv;
}

inline std::string take(std::map<std::string, std::string>& kv, const std::string& key,
                        std::size_t line, bool required, const std::string& directive) {
  auto it = kv.find(key);
  if (it == kv.end()) {
    if (required)
      throw parse_error(line, directive + " directive requires " + key + "=<value>");
    return {};
  }
  std::string v = it->second;
  kv.erase(it);
  return v;
}

inline void reject_leftovers(const std::map<std::string, std::string>& kv, std::size_t line,
                             const std::string& directive) {
  if (!kv.empty())
    throw parse_error(line, "unknown key '" + kv.begin()->first + "' in " + directive +
                                " directive");
}

}  // namespace detail

// Grammar (one directive per line, `#` starts a comment):
//   function <name> domain=<LETTER> cost=<int> [priority=<int>] [ls=<int>]
//   wait <name> at=<int> for=<name> | wait <name> at=<int> io=<int>
//   dep <from> <to> type=<C|Co> sync=<yes|no>
//   signal <stop|continue> <name> at=<int>
inline Workload parse_workload(std::string_view text) {
  Workload w;
  std::set<std::string, std::less<>> names;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    auto tokens = detail::tokenize(raw);
    if (tokens.empty()) continue;
    const std::string& head = tokens[0];

    if (head == "function") {
      if (tokens.size() < 2)
        throw parse_error(line_no, "function directive requires a name");
      const std::string& name = tokens[1];
      if (!detail::valid_identifier(name))
        throw parse_error(line_no, "invalid function name '" + name + "'");
      if (!names.insert(name).second)
        throw parse_error(line_no, "duplicate function name '" + name + "'");
      auto kv = detail::parse_kv(tokens, 2, line_no);
      FunctionSpec f;
      f.name = name;
      std::string domain = detail::take(kv, "domain", line_no, true, "function");
      if (domain.size() != 1 || domain[0] < 'A' || domain[0] > 'Z')
        throw parse_error(line_no, "domain must be a single uppercase letter, got '" + domain + "'");
      f.domain = domain[0];
      f.cost = detail::parse_u64(detail::take(kv, "cost", line_no, true, "function"), line_no,
                                 "cost");
      if (f.cost == 0) throw parse_error(line_no, "cost must be >= 1");
      if (std::string p = detail::take(kv, "priority", line_no, false, "function"); !p.empty())
        f.base_priority = detail::parse_i64(p, line_no, "priority");
      if (std::string ls = detail::take(kv, "ls", line_no, false, "function"); !ls.empty()) {
        f.ls_units = detail::parse_u64(ls, line_no, "ls");
        if (f.ls_units == 0) throw parse_error(line_no, "ls must be >= 1");
      }
      detail::reject_leftovers(kv, line_no, "function");
      w.functions.push_back(std::move(f));
    } else if (head == "wait") {
      if (tokens.size() < 2) throw parse_error(line_no, "wait directive requires a function name");
      const std::string& owner = tokens[1];
      auto idx = w.index_of(owner);
      if (!idx) throw parse_error(line_no, "wait references undeclared function '" + owner + "'");
      auto kv = detail::parse_kv(tokens, 2, line_no);
      WaitPoint wp;
      wp.at_cycle = detail::parse_u64(detail::take(kv, "at", line_no, true, "wait"), line_no, "at");
      std::string peer = detail::take(kv, "for", line_no, false, "wait");
      std::string io = detail::take(kv, "io", line_no, false, "wait");
      detail::reject_leftovers(kv, line_no, "wait");
      if (peer.empty() == io.empty())
        throw parse_error(line_no, "wait directive requires exactly one of for=<name> or io=<int>");
      if (!peer.empty()) {
        if (!detail::valid_identifier(peer))
          throw parse_error(line_no, "invalid function name '" + peer + "'");
        wp.target = PeerWait{peer};
      } else {
        std::uint64_t d = detail::parse_u64(io, line_no, "io");
        if (d == 0) throw parse_error(line_no, "io duration must be >= 1");
        wp.target = IoWait{d};
      }
      w.functions[*idx].wait_points.push_back(std::move(wp));
    } else if (head == "dep") {
      if (tokens.size() < 3 || tokens[1].find('=') != std::string::npos ||
          tokens[2].find('=') != std::string::npos)
        throw parse_error(line_no, "dep directive requires two function names");
      DependencyDecl d;
      d.from = tokens[1];
      d.to = tokens[2];
      auto kv = detail::parse_kv(tokens, 3, line_no);
      std::string type = detail::take(kv, "type", line_no, true, "dep");
      if (type == "C")
        d.kind = DependencyKind::Communication;
      else if (type == "Co")
        d.kind = DependencyKind::Cooperation;
      else
        throw parse_error(line_no, "dep type must be C or Co, got '" + type + "'");
      std::string sync = detail::take(kv, "sync", line_no, true, "dep");
      if (sync == "yes")
        d.sync = true;
      else if (sync == "no")
        d.sync = false;
      else
        throw parse_error(line_no, "dep sync must be yes or no, got '" + sync + "'");
      detail::reject_leftovers(kv, line_no, "dep");
      w.dependencies.push_back(std::move(d));
    } else if (head == "signal") {
      if (tokens.size() < 3)
        throw parse_error(line_no, "signal directive requires <stop|continue> <name>");
      SignalDecl s;
      if (tokens[1] == "stop")
        s.kind = SignalKind::Stop;
      else if (tokens[1] == "continue")
        s.kind = SignalKind::Continue;
      else
        throw parse_error(line_no, "signal kind must be stop or continue, got '" + tokens[1] + "'");
      s.target = tokens[2];
      auto kv = detail::parse_kv(tokens, 3, line_no);
      s.at_tick = detail::parse_u64(detail::take(kv, "at", line_no, true, "signal"), line_no, "at");
      detail::reject_leftovers(kv, line_no, "signal");
      w.signals.push_back(std::move(s));
    } else {
      throw parse_error(line_no, "unknown directive '" + head + "'");
    }
  }
  return w;
}

// Inverse of parse_workload for valid workloads: parse(serialize(w)) == w.
inline std::string serialize_workload(const Workload& w) {
  std::ostringstream out;
  for (const auto& f : w.functions) {
    out << "function " << f.name << " domain=" << f.domain << " cost=" << f.cost;
    if (f.base_priority != 0) out << " priority=" << f.base_priority;
    if (f.ls_units != 1) out << " ls=" << f.ls_units;
    out << '\n';
    for (const auto& wp : f.wait_points) {
      out << "wait " << f.name << " at=" << wp.at_cycle;
      if (const auto* p = std::get_if<PeerWait>(&wp.target))
        out << " for=" << p->target;
      else
        out << " io=" << std::get<IoWait>(wp.target).duration;
      out << '\n';
    }
  }
  for (const auto& d : w.dependencies)
    out << "dep " << d.from << ' ' << d.to
        << " type=" << (d.kind == DependencyKind::Cooperation ? "Co" : "C")
        << " sync=" << (d.sync ? "yes" : "no") << '\n';
  for (const auto& s : w.signals)
    out << "signal " << (s.kind == SignalKind::Stop ? "stop" : "continue") << ' ' << s.target
        << " at=" << s.at_tick << '\n';
  return out.str();
}

}  // namespace fpa
