#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "roadjoin/graph.hpp"

namespace roadjoin {

// A pair (r in R, s in S) and their network distance. Orientation is fixed.
struct MatchPair {
  VertexId r = 0;
  VertexId s = 0;
  double dist = 0.0;

  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

// Canonical order: distance, then r, then s.
struct PairOrder {
  bool operator()(const MatchPair& a, const MatchPair& b) const noexcept {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.r != b.r) return a.r < b.r;
    return a.s < b.s;
  }
};

inline constexpr std::size_t kUnboundedK = std::numeric_limits<std::size_t>::max();

// Bounded worst-out collection of the best pairs seen so far. Each (r, s)
// is held at most once, at its smallest offered distance. Pairs farther
// than theta are rejected.
class ResultHeap {
 public:
  explicit ResultHeap(std::size_t capacity = kUnboundedK, double theta = kInfinity)
      : capacity_(capacity), theta_(theta) {}

  // Returns true when the collection changed.
  bool insert(const MatchPair& pair);
  void absorb(const ResultHeap& other);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t capacity() const noexcept { return capacity_; }
  double theta() const noexcept { return theta_; }
  bool full() const noexcept { return entries_.size() >= capacity_; }

  // Distance of the worst kept pair; infinity when empty.
  double worstDistance() const noexcept {
    return entries_.empty() ? kInfinity : entries_.rbegin()->dist;
  }
  // Any pair farther than this cannot enter the collection.
  double admissionBound() const noexcept {
    return full() ? std::min(theta_, worstDistance()) : theta_;
  }

  std::vector<MatchPair> sorted() const { return {entries_.begin(), entries_.end()}; }

 private:
  static std::uint64_t key(const MatchPair& p) noexcept {
    return (static_cast<std::uint64_t>(p.r) << 32) | p.s;
  }

  std::size_t capacity_;
  double theta_;
  std::set<MatchPair, PairOrder> entries_;
  std::unordered_map<std::uint64_t, double> held_;
};

// `%.9g` rendering used by every result writer.
std::string format_distance(double d);

// One line per pair, `r_id s_id distance`, external ids, canonical order.
void write_pairs(std::ostream& out, const RoadNetwork& net, std::vector<MatchPair> pairs);

// FNV-1a over the canonical text rendering.
std::uint64_t result_checksum(const RoadNetwork& net, std::vector<MatchPair> pairs);

}  // namespace roadjoin
