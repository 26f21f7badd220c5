#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fpa/farm.hpp"
#include "fpa/render.hpp"
#include "fpa/validate.hpp"

// Exit codes: 0 success, 1 invalid workload, 2 unreadable file or bad
// option, 3 deadlock, 4 tick cap exceeded.

namespace {

constexpr int kOk = 0;
constexpr int kInvalidWorkload = 1;
constexpr int kUsage = 2;
constexpr int kDeadlock = 3;
constexpr int kTickCap = 4;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  out.flush();
  return static_cast<bool>(out);
}

// "G=2,A=1" overrides applied on top of the standard eight-domain map.
fpa::DomainConfig make_domain_config(const std::string& overrides) {
  fpa::DomainConfig cfg = fpa::DomainConfig::standard();
  if (overrides.empty()) return cfg;
  std::stringstream ss(overrides);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq != 1)
      throw std::invalid_argument("--domains expects LETTER=COUNT pairs, got '" + item + "'");
    char letter = item[0];
    std::size_t count = 0;
    try {
      count = std::stoull(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("--domains count must be an integer, got '" + item + "'");
    }
    cfg.set(letter, count);  // rejects counts of 0 and bad letters
  }
  return cfg;
}

struct LoadedWorkload {
  fpa::Workload workload;
  fpa::DomainConfig domains;
  std::vector<fpa::Diagnostic> diagnostics;
};

// Reads, parses and validates; on failure prints and returns the exit code.
int load(const std::string& path, const std::string& domain_overrides, LoadedWorkload& out) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read '" << path << "'\n";
    return kUsage;
  }
  try {
    out.domains = make_domain_config(domain_overrides);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  try {
    out.workload = fpa::parse_workload(*text);
  } catch (const fpa::parse_error& e) {
    std::cerr << "error: " << path << ": " << e.what() << '\n';
    return kInvalidWorkload;
  }
  out.diagnostics = fpa::validate(out.workload, out.domains);
  return kOk;
}

int print_diagnostics(const std::vector<fpa::Diagnostic>& ds, std::ostream& os) {
  for (const fpa::Diagnostic& d : ds) os << fpa::to_string(d) << '\n';
  return fpa::has_errors(ds) ? kInvalidWorkload : kOk;
}

int cmd_validate(const std::string& path, const std::string& domains) {
  LoadedWorkload loaded;
  if (int rc = load(path, domains, loaded); rc != kOk) return rc;
  return print_diagnostics(loaded.diagnostics, std::cout);
}

int cmd_analyze(const std::string& path, const std::string& domains, bool machine) {
  LoadedWorkload loaded;
  if (int rc = load(path, domains, loaded); rc != kOk) return rc;
  if (fpa::has_errors(loaded.diagnostics)) return print_diagnostics(loaded.diagnostics, std::cerr);
  fpa::Analysis analysis = fpa::analyze(loaded.workload);
  if (machine)
    std::cout << fpa::analysis_json(analysis).dump(2) << '\n';
  else
    std::cout << fpa::render_analysis_text(analysis);
  return kOk;
}

int cmd_run(const std::string& path, const std::string& domains, const fpa::SimConfig& sim,
            const std::string& trace_path, const std::string& out_path, bool machine) {
  LoadedWorkload loaded;
  if (int rc = load(path, domains, loaded); rc != kOk) return rc;
  if (fpa::has_errors(loaded.diagnostics)) return print_diagnostics(loaded.diagnostics, std::cerr);
  for (const fpa::Diagnostic& d : loaded.diagnostics) std::cerr << fpa::to_string(d) << '\n';

  fpa::RunResult result;
  try {
    result = fpa::run(loaded.workload, loaded.domains, sim);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  if (!trace_path.empty() && !write_file(trace_path, fpa::render_trace(result.trace))) {
    std::cerr << "error: cannot write '" << trace_path << "'\n";
    return kUsage;
  }
  if (!out_path.empty() && !write_file(out_path, fpa::render_results(result.report.integration))) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return kUsage;
  }

  if (machine)
    std::cout << fpa::report_json(result.report).dump(2) << '\n';
  else
    std::cout << fpa::render_report_text(result.report);

  switch (result.status) {
    case fpa::RunStatus::Completed:
      return kOk;
    case fpa::RunStatus::Deadlock: {
      std::cerr << "deadlock: ";
      for (std::size_t i = 0; i < result.report.deadlock_cycle.size(); ++i)
        std::cerr << (i ? " -> " : "") << result.report.deadlock_cycle[i];
      std::cerr << '\n';
      return kDeadlock;
    }
    case fpa::RunStatus::TickCapExceeded:
      std::cerr << "error: tick cap " << sim.tick_cap << " exceeded\n";
      return kTickCap;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fpa: functional processor farm simulator"};
  app.require_subcommand(1);

  std::string path;
  std::string domains;
  bool machine = false;

  auto* validate_cmd = app.add_subcommand("validate", "parse and check a workload file");
  validate_cmd->add_option("workload", path, "workload file")->required();
  validate_cmd->add_option("--domains", domains, "domain overrides, LETTER=COUNT[,...]");

  auto* analyze_cmd = app.add_subcommand("analyze", "dependency matrices and combinatorics");
  analyze_cmd->add_option("workload", path, "workload file")->required();
  analyze_cmd->add_option("--domains", domains, "domain overrides, LETTER=COUNT[,...]");
  analyze_cmd->add_flag("--machine", machine, "machine-readable JSON output");

  fpa::SimConfig sim;
  std::string trace_path;
  std::string out_path;
  auto* run_cmd = app.add_subcommand("run", "simulate a workload on the FPU farm");
  run_cmd->add_option("workload", path, "workload file")->required();
  run_cmd->add_option("--domains", domains, "domain overrides, LETTER=COUNT[,...]");
  run_cmd->add_option("--quantum", sim.quantum, "time slice in ticks")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--penalty0", sim.penalty0, "recency penalty set on deschedule")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--decay", sim.decay, "penalty decrease per idle tick")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--msg-latency", sim.msg_latency, "result-message delivery delay");
  run_cmd->add_option("--ls-capacity", sim.ls_capacity, "local-store units per FPU")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--tick-cap", sim.tick_cap, "abort after this many ticks");
  run_cmd->add_option("--trace", trace_path, "write the JSONL event trace here");
  run_cmd->add_option("--out", out_path, "write integrated results (JSONL) here");
  run_cmd->add_flag("--machine", machine, "machine-readable JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(path, domains);
    if (analyze_cmd->parsed()) return cmd_analyze(path, domains, machine);
    return cmd_run(path, domains, sim, trace_path, out_path, machine);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
