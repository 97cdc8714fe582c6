#include "roadjoin/result.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace roadjoin {

bool ResultHeap::insert(const MatchPair& pair) {
  if (capacity_ == 0 || pair.dist > theta_) return false;
  const auto k = key(pair);
  if (auto it = held_.find(k); it != held_.end()) {
    if (it->second <= pair.dist) return false;
    entries_.erase(MatchPair{pair.r, pair.s, it->second});
    held_.erase(it);
  }
  if (full()) {
    const MatchPair& worst = *entries_.rbegin();
    if (!PairOrder{}(pair, worst)) return false;
    held_.erase(key(worst));
    entries_.erase(std::prev(entries_.end()));
  }
  entries_.insert(pair);
  held_.emplace(k, pair.dist);
  return true;
}

void ResultHeap::absorb(const ResultHeap& other) {
  for (const MatchPair& p : other.entries_) insert(p);
}

std::string format_distance(double d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", d);
  return buf;
}

void write_pairs(std::ostream& out, const RoadNetwork& net, std::vector<MatchPair> pairs) {
  std::sort(pairs.begin(), pairs.end(), PairOrder{});
  for (const MatchPair& p : pairs) {
    out << net.externalId(p.r) << ' ' << net.externalId(p.s) << ' ' << format_distance(p.dist)
        << '\n';
  }
}

std::uint64_t result_checksum(const RoadNetwork& net, std::vector<MatchPair> pairs) {
  std::ostringstream text;
  write_pairs(text, net, std::move(pairs));
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text.str()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace roadjoin
