#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpa/funpiler.hpp"

// Integration unit: results arrive in completion order and are committed in
// assigned-address order, reorder-buffer style. Buffering is unbounded.

namespace fpa {

struct ResultPacket {
  IntegrationAddress address;
  Fid fid;
  std::string producer;
  std::uint64_t completion_tick = 0;
  bool operator==(const ResultPacket&) const = default;
};

class IntegrationBuffer {
 public:
  explicit IntegrationBuffer(std::size_t program_size)
      : m_(program_size), seen_(program_size, false) {}

  std::size_t program_size() const { return m_; }
  std::size_t next_expected() const { return next_; }
  const std::vector<ResultPacket>& emitted() const { return emitted_; }
  std::size_t pending_count() const { return pending_.size(); }

  // Buffers p, then commits the maximal consecutive run starting at
  // next_expected. Returns the packets emitted by this call, in address order.
  std::vector<ResultPacket> submit(ResultPacket p) {
    const std::size_t addr = p.address.index;
    if (addr >= m_)
      throw std::out_of_range("integration address " + std::to_string(addr) +
                              " out of range (program size " + std::to_string(m_) + ")");
    if (seen_[addr])
      throw std::invalid_argument("duplicate integration address " + std::to_string(addr));
    seen_[addr] = true;
    pending_.emplace(addr, std::move(p));

    std::vector<ResultPacket> released;
    for (auto it = pending_.find(next_); it != pending_.end(); it = pending_.find(next_)) {
      released.push_back(std::move(it->second));
      pending_.erase(it);
      ++next_;
    }
    emitted_.insert(emitted_.end(), released.begin(), released.end());
    return released;
  }

  struct Summary {
    std::vector<ResultPacket> results;       // committed, ascending addresses
    std::vector<std::size_t> missing;        // addresses never submitted
    bool complete() const { return missing.empty(); }
  };

  // Success iff every address 0..m-1 was emitted; otherwise the summary names
  // the missing addresses (e.g. after a deadlock).
  Summary finalize() const {
    Summary s;
    s.results = emitted_;
    for (std::size_t a = 0; a < m_; ++a)
      if (!seen_[a]) s.missing.push_back(a);
    return s;
  }

 private:
  std::size_t m_;
  std::size_t next_ = 0;
  std::map<std::size_t, ResultPacket> pending_;  // address > next_ - 1
  std::vector<ResultPacket> emitted_;
  std::vector<bool> seen_;
};

}  // namespace fpa
