#pragma once

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpa/workload.hpp"

// Fine decoding: recognize each function's domain, assign its Function ID
// and integration address, and build the per-FPU feed queues. Functions are
// fed to the units up front; the units never fetch.

namespace fpa {

struct Fid {
  char domain = 'G';
  std::uint64_t ordinal = 1;  // 1-based position within the domain, program order

  std::string str() const { return "FID-" + std::string(1, domain) + std::to_string(ordinal); }
  auto operator<=>(const Fid&) const = default;
};

struct IntegrationAddress {
  std::size_t index = 0;  // 0-based program-order position
  auto operator<=>(const IntegrationAddress&) const = default;
};

struct FpuId {
  char domain = 'G';
  std::size_t index = 0;  // 0-based within the domain

  std::string str() const { return std::string(1, domain) + std::to_string(index); }
  auto operator<=>(const FpuId&) const = default;
};

// How many FPUs host each domain letter.
class DomainConfig {
 public:
  DomainConfig() = default;

  explicit DomainConfig(std::map<char, std::size_t> counts) {
    for (auto [letter, n] : counts) set(letter, n);
  }

  // One FPU per architecture workload domain: graphics, lighting, physics,
  // FFT, matrix, cryptography, scientific, business.
  static DomainConfig standard() {
    DomainConfig cfg;
    for (char letter : {'G', 'L', 'P', 'F', 'M', 'C', 'S', 'B'}) cfg.set(letter, 1);
    return cfg;
  }

  void set(char domain, std::size_t count) {
    if (domain < 'A' || domain > 'Z')
      throw std::invalid_argument("domain must be a single uppercase letter");
    if (count == 0) throw std::invalid_argument("every domain must map to >= 1 FPU");
    counts_[domain] = count;
  }

  bool has(char domain) const { return counts_.count(domain) != 0; }

  std::size_t count(char domain) const {
    auto it = counts_.find(domain);
    return it == counts_.end() ? 0 : it->second;
  }

  const std::map<char, std::size_t>& counts() const { return counts_; }

  std::size_t total_fpus() const {
    std::size_t n = 0;
    for (auto [letter, k] : counts_) n += k;
    return n;
  }

  // All FPU ids, sorted by (domain, index); this is the canonical unit order.
  std::vector<FpuId> fpu_list() const {
    std::vector<FpuId> out;
    for (auto [letter, k] : counts_)
      for (std::size_t i = 0; i < k; ++i) out.push_back(FpuId{letter, i});
    return out;
  }

  bool operator==(const DomainConfig&) const = default;

 private:
  std::map<char, std::size_t> counts_;
};

struct AssignedFunction {
  FunctionSpec spec;
  Fid fid;
  IntegrationAddress address;
  FpuId target_fpu;
  bool operator==(const AssignedFunction&) const = default;
};

// Assign FIDs and integration addresses in program order; route each function
// to an FPU hosting its domain, round-robin by domain ordinal when the domain
// has several units.
inline std::vector<AssignedFunction> assign(const Workload& w, const DomainConfig& cfg) {
  std::vector<AssignedFunction> out;
  out.reserve(w.functions.size());
  std::map<char, std::uint64_t> per_domain;
  for (std::size_t i = 0; i < w.functions.size(); ++i) {
    const FunctionSpec& f = w.functions[i];
    std::size_t k = cfg.count(f.domain);
    if (k == 0)
      throw std::invalid_argument("unknown domain '" + std::string(1, f.domain) +
                                  "' for function '" + f.name + "'");
    std::uint64_t ordinal = ++per_domain[f.domain];
    AssignedFunction a;
    a.spec = f;
    a.fid = Fid{f.domain, ordinal};
    a.address = IntegrationAddress{i};
    a.target_fpu = FpuId{f.domain, static_cast<std::size_t>((ordinal - 1) % k)};
    out.push_back(std::move(a));
  }
  return out;
}

// Per-FPU feed queues in program order. Every FPU in the config gets a queue,
// possibly empty; every assigned function lands in exactly one queue.
inline std::map<FpuId, std::vector<AssignedFunction>> feed_queues(
    const std::vector<AssignedFunction>& assigned, const DomainConfig& cfg) {
  std::map<FpuId, std::vector<AssignedFunction>> queues;
  for (const FpuId& id : cfg.fpu_list()) queues[id];
  for (const AssignedFunction& a : assigned) queues.at(a.target_fpu).push_back(a);
  return queues;
}

}  // namespace fpa
