#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <vector>

#include "roadjoin/graph.hpp"

namespace roadjoin {

// Shared pruning bound. Only ever decreases; reads are wait-free and may
// be stale, which only loosens pruning.
class GlobalThreshold {
 public:
  explicit GlobalThreshold(double initial = kInfinity) : value_(initial) {}
  GlobalThreshold(const GlobalThreshold&) = delete;
  GlobalThreshold& operator=(const GlobalThreshold&) = delete;

  double read() const noexcept { return value_.load(std::memory_order_acquire); }

  // value = min(value, candidate). Returns the value after the update.
  double tighten(double candidate) {
    double current = value_.load(std::memory_order_acquire);
    while (candidate < current) {
      if (value_.compare_exchange_weak(current, candidate, std::memory_order_acq_rel,
                                       std::memory_order_acquire)) {
        updates_.fetch_add(1, std::memory_order_relaxed);
        if (tracing_) {
          std::lock_guard lock(traceMutex_);
          trace_.push_back(read());
        }
        return candidate;
      }
    }
    return current;
  }

  std::uint64_t updates() const noexcept { return updates_.load(std::memory_order_relaxed); }

  // Records the value after every successful update, in modification order.
  void enableTrace() { tracing_ = true; }
  std::vector<double> trace() const {
    std::lock_guard lock(traceMutex_);
    return trace_;
  }

 private:
  std::atomic<double> value_;
  std::atomic<std::uint64_t> updates_{0};
  bool tracing_ = false;
  mutable std::mutex traceMutex_;
  std::vector<double> trace_;
};

inline double threshold_tighten(GlobalThreshold& t, double candidate) {
  if (!(candidate >= 0.0)) throw DomainError("threshold candidate must be non-negative");
  return t.tighten(candidate);
}

}  // namespace roadjoin
