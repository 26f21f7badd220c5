#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>

#include "fpa/funpiler.hpp"
#include "support/gen.hpp"

using namespace fpa;

namespace {

Workload functions_of(const std::vector<std::pair<std::string, char>>& fns) {
  Workload w;
  for (const auto& [name, domain] : fns) {
    FunctionSpec f;
    f.name = name;
    f.domain = domain;
    f.cost = 1;
    w.functions.push_back(std::move(f));
  }
  return w;
}

}  // namespace

TEST_CASE("assign: per-domain fid ordinals and program-order addresses") {
  DomainConfig cfg = DomainConfig::standard();

  SECTION("two graphics functions") {
    auto assigned = assign(functions_of({{"g1", 'G'}, {"g2", 'G'}}), cfg);
    REQUIRE(assigned.size() == 2);
    CHECK(assigned[0].fid.str() == "FID-G1");
    CHECK(assigned[1].fid.str() == "FID-G2");
    CHECK(assigned[0].address.index == 0);
    CHECK(assigned[1].address.index == 1);
  }
  SECTION("single arithmetic function") {
    cfg.set('A', 1);
    auto assigned = assign(functions_of({{"a", 'A'}}), cfg);
    REQUIRE(assigned.size() == 1);
    CHECK(assigned[0].fid.str() == "FID-A1");
    CHECK(assigned[0].address.index == 0);
  }
  SECTION("interleaved domains count independently") {
    cfg.set('A', 1);
    auto assigned = assign(functions_of({{"g", 'G'}, {"a", 'A'}, {"g2", 'G'}}), cfg);
    // oracle: independent per-domain counter walked by hand over program order
    std::map<char, int> counter;
    std::vector<std::string> expect;
    for (char d : {'G', 'A', 'G'})
      expect.push_back("FID-" + std::string(1, d) + std::to_string(++counter[d]));
    REQUIRE(expect == std::vector<std::string>{"FID-G1", "FID-A1", "FID-G2"});
    for (std::size_t i = 0; i < assigned.size(); ++i) {
      CHECK(assigned[i].fid.str() == expect[i]);
      CHECK(assigned[i].address.index == i);
    }
  }
  SECTION("unknown domain is rejected") {
    REQUIRE_THROWS_AS(assign(functions_of({{"z", 'Z'}}), cfg), std::invalid_argument);
  }
}

TEST_CASE("feed queues") {
  SECTION("single queue preserves order") {
    DomainConfig cfg = DomainConfig::standard();
    auto assigned = assign(functions_of({{"g1", 'G'}, {"g2", 'G'}}), cfg);
    auto queues = feed_queues(assigned, cfg);
    const auto& q = queues.at(FpuId{'G', 0});
    REQUIRE(q.size() == 2);
    CHECK(q[0].fid.str() == "FID-G1");
    CHECK(q[1].fid.str() == "FID-G2");
  }
  SECTION("round robin over two units: ordinals 1,3 vs 2") {
    DomainConfig cfg = DomainConfig::standard();
    cfg.set('G', 2);
    auto assigned = assign(functions_of({{"a", 'G'}, {"b", 'G'}, {"c", 'G'}}), cfg);
    auto queues = feed_queues(assigned, cfg);
    const auto& q0 = queues.at(FpuId{'G', 0});
    const auto& q1 = queues.at(FpuId{'G', 1});
    REQUIRE(q0.size() == 2);
    REQUIRE(q1.size() == 1);
    CHECK(q0[0].fid.ordinal == 1);
    CHECK(q0[1].fid.ordinal == 3);
    CHECK(q1[0].fid.ordinal == 2);
  }
  SECTION("empty workload yields empty queues for every FPU") {
    DomainConfig cfg = DomainConfig::standard();
    auto queues = feed_queues(assign(Workload{}, cfg), cfg);
    REQUIRE(queues.size() == cfg.total_fpus());
    for (const auto& [id, q] : queues) CHECK(q.empty());
  }
}

TEST_CASE("domain config") {
  DomainConfig cfg = DomainConfig::standard();
  CHECK(cfg.total_fpus() == 8);
  for (char d : {'G', 'L', 'P', 'F', 'M', 'C', 'S', 'B'}) CHECK(cfg.count(d) == 1);
  CHECK(!cfg.has('A'));
  CHECK_THROWS_AS(cfg.set('G', 0), std::invalid_argument);
  CHECK_THROWS_AS(cfg.set('g', 1), std::invalid_argument);
}

TEST_CASE("property: assignment invariants over random workloads") {
  std::mt19937 rng(99);
  gen::Options opt;
  for (int iter = 0; iter < 100; ++iter) {
    Workload w = gen::random_workload(rng, opt);
    DomainConfig cfg = gen::random_domains(rng, opt);
    auto assigned = assign(w, cfg);

    // addresses are exactly 0..m-1 in program order
    REQUIRE(assigned.size() == w.functions.size());
    for (std::size_t i = 0; i < assigned.size(); ++i) {
      CHECK(assigned[i].address.index == i);
      CHECK(assigned[i].spec == w.functions[i]);
    }

    // no two functions share (domain, ordinal)
    std::set<std::pair<char, std::uint64_t>> fids;
    for (const auto& a : assigned) {
      CHECK(fids.insert({a.fid.domain, a.fid.ordinal}).second);
      // routing soundness: the target FPU hosts the function's domain
      CHECK(a.target_fpu.domain == a.spec.domain);
      CHECK(a.target_fpu.index < cfg.count(a.spec.domain));
      CHECK(a.fid.domain == a.spec.domain);
    }

    // queues partition the assignment
    auto queues = feed_queues(assigned, cfg);
    std::size_t total = 0;
    std::set<std::size_t> seen_addresses;
    for (const auto& [id, q] : queues) {
      std::size_t prev_pos = 0;
      bool first = true;
      for (const auto& a : q) {
        ++total;
        CHECK(seen_addresses.insert(a.address.index).second);
        CHECK(a.target_fpu == id);
        // program order within each queue
        if (!first) CHECK(prev_pos < a.address.index);
        prev_pos = a.address.index;
        first = false;
      }
    }
    CHECK(total == assigned.size());
  }
}
