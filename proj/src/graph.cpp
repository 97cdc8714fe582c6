#include "roadjoin/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <string_view>

namespace roadjoin {

RoadNetwork::RoadNetwork(std::vector<VertexRecord> vertices, std::span<const RawEdge> edges)
    : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  byExternal_.reserve(n);
  for (VertexId v = 0; v < n; ++v) {
    if (!byExternal_.emplace(vertices_[v].external, v).second) {
      throw IntegrityError("duplicate vertex id " + std::to_string(vertices_[v].external));
    }
  }

  edges_.reserve(edges.size());
  std::vector<std::size_t> degree(n + 1, 0);
  for (const RawEdge& raw : edges) {
    if (raw.a >= n || raw.b >= n) {
      throw IntegrityError("edge references unknown vertex index " +
                           std::to_string(std::max(raw.a, raw.b)));
    }
    if (!(raw.weight >= 0.0) || !std::isfinite(raw.weight)) {
      throw DomainError("edge weight must be finite and non-negative");
    }
    if (raw.a == raw.b) continue;
    edges_.push_back({static_cast<EdgeId>(edges_.size()), raw.a, raw.b, raw.weight});
    ++degree[raw.a];
    ++degree[raw.b];
  }

  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  arcs_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    arcs_[fill[e.a]++] = {e.b, e.eid, e.weight};
    arcs_[fill[e.b]++] = {e.a, e.eid, e.weight};
  }
}

RoadNetwork RoadNetwork::fromEdges(std::size_t vertexCount, std::span<const RawEdge> edges) {
  std::vector<VertexRecord> vertices(vertexCount);
  for (std::size_t v = 0; v < vertexCount; ++v) {
    vertices[v] = {static_cast<ExternalId>(v), 0.0, 0.0};
  }
  return RoadNetwork(std::move(vertices), edges);
}

std::optional<VertexId> RoadNetwork::findVertex(ExternalId external) const {
  const auto it = byExternal_.find(external);
  if (it == byExternal_.end()) return std::nullopt;
  return it->second;
}

namespace {

// Splits on blanks and tabs. Returns false for blank or comment lines.
bool tokenize(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    if (out.empty() && line[i] == '#') return false;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return !out.empty();
}

template <class T>
T parseNumber(std::string_view token, const std::string& file, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(file, line, "cannot parse '" + std::string(token) + "'");
  }
  return value;
}

std::ifstream openInput(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

}  // namespace

RoadNetwork load_network(const std::filesystem::path& nodeFile,
                         const std::filesystem::path& edgeFile) {
  const std::string nodeName = nodeFile.string();
  const std::string edgeName = edgeFile.string();
  std::ifstream nodes = openInput(nodeFile);
  std::ifstream edges = openInput(edgeFile);

  std::vector<VertexRecord> records;
  std::vector<std::string_view> tokens;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(nodes, line)) {
    ++lineNo;
    if (!tokenize(line, tokens)) continue;
    if (tokens.size() != 3) throw ParseError(nodeName, lineNo, "expected '<id> <x> <y>'");
    records.push_back({parseNumber<ExternalId>(tokens[0], nodeName, lineNo),
                       parseNumber<double>(tokens[1], nodeName, lineNo),
                       parseNumber<double>(tokens[2], nodeName, lineNo)});
  }
  std::sort(records.begin(), records.end(),
            [](const VertexRecord& a, const VertexRecord& b) { return a.external < b.external; });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].external == records[i - 1].external) {
      throw IntegrityError(nodeName + ": duplicate vertex id " +
                           std::to_string(records[i].external));
    }
  }

  std::unordered_map<ExternalId, VertexId> dense;
  dense.reserve(records.size());
  for (VertexId v = 0; v < records.size(); ++v) dense.emplace(records[v].external, v);

  std::vector<RawEdge> raw;
  lineNo = 0;
  while (std::getline(edges, line)) {
    ++lineNo;
    if (!tokenize(line, tokens)) continue;
    if (tokens.size() != 4) {
      throw ParseError(edgeName, lineNo, "expected '<eid> <a> <b> <weight>'");
    }
    parseNumber<std::int64_t>(tokens[0], edgeName, lineNo);
    const auto a = parseNumber<ExternalId>(tokens[1], edgeName, lineNo);
    const auto b = parseNumber<ExternalId>(tokens[2], edgeName, lineNo);
    const auto w = parseNumber<double>(tokens[3], edgeName, lineNo);
    const auto ia = dense.find(a);
    const auto ib = dense.find(b);
    if (ia == dense.end() || ib == dense.end()) {
      throw IntegrityError(edgeName + ":" + std::to_string(lineNo) + ": unknown vertex " +
                           std::to_string(ia == dense.end() ? a : b));
    }
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw DomainError(edgeName + ":" + std::to_string(lineNo) + ": negative edge weight");
    }
    raw.push_back({ia->second, ib->second, w});
  }
  return RoadNetwork(std::move(records), raw);
}

Region Region::of(std::size_t vertexCount, std::span<const VertexId> members) {
  auto mask = std::make_shared<std::vector<std::uint32_t>>(vertexCount, 0);
  for (VertexId v : members) (*mask)[v] = 1;
  return Region(std::move(mask), 1, 2);
}

DistanceMap bounded_dijkstra(const RoadNetwork& net, VertexId source, double radius,
                             const EdgeSet* forbidden, const Region* region) {
  if (source >= net.vertexCount()) {
    throw DomainError("source vertex " + std::to_string(source) + " not in network");
  }
  if (!(radius >= 0.0)) throw DomainError("radius must be non-negative");
  DistanceMap out;
  ShortestPathSearch search(net);
  search.run(source, 0.0, {radius, forbidden, region}, [&](VertexId v, double d) {
    out.emplace(v, d);
    return true;
  });
  return out;
}

QuerySets::QuerySets(std::size_t vertexCount, std::vector<VertexId> r, std::vector<VertexId> s)
    : r_(std::move(r)), s_(std::move(s)), role_(vertexCount, 0) {
  std::sort(r_.begin(), r_.end());
  r_.erase(std::unique(r_.begin(), r_.end()), r_.end());
  std::sort(s_.begin(), s_.end());
  s_.erase(std::unique(s_.begin(), s_.end()), s_.end());
  for (VertexId v : r_) {
    if (v >= vertexCount) throw DomainError("R member " + std::to_string(v) + " out of range");
    role_[v] = kRoleR;
  }
  for (VertexId v : s_) {
    if (v >= vertexCount) throw DomainError("S member " + std::to_string(v) + " out of range");
    if (role_[v] == kRoleR) {
      throw DomainError("R and S must be disjoint; vertex " + std::to_string(v) + " in both");
    }
    role_[v] = kRoleS;
  }
}

namespace {

// Unbiased draw in [0, bound) by rejection; independent of the standard
// library's distribution implementation so the sample is portable.
std::uint64_t drawBelow(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

QuerySets sample_sets(const RoadNetwork& net, double rPct, double sPct, std::uint64_t seed) {
  if (!(rPct >= 0.0 && rPct <= 100.0) || !(sPct >= 0.0 && sPct <= 100.0) ||
      rPct + sPct > 100.0) {
    throw DomainError("percentages must lie in [0,100] and sum to at most 100");
  }
  const std::size_t n = net.vertexCount();
  const auto rCount = static_cast<std::size_t>(std::llround(rPct * static_cast<double>(n) / 100.0));
  const auto sCount = static_cast<std::size_t>(std::llround(sPct * static_cast<double>(n) / 100.0));
  if (rCount + sCount > n) throw DomainError("requested sets exceed vertex count");

  std::vector<VertexId> pool(n);
  for (VertexId v = 0; v < n; ++v) pool[v] = v;
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first rCount + sCount slots become the sample.
  for (std::size_t i = 0; i < rCount + sCount; ++i) {
    const std::size_t j = i + drawBelow(rng, n - i);
    std::swap(pool[i], pool[j]);
  }
  std::vector<VertexId> r(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(rCount));
  std::vector<VertexId> s(pool.begin() + static_cast<std::ptrdiff_t>(rCount),
                          pool.begin() + static_cast<std::ptrdiff_t>(rCount + sCount));
  return QuerySets(n, std::move(r), std::move(s));
}

}  // namespace roadjoin
