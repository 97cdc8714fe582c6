#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "json.hpp"
#include "roadjoin/partition.hpp"

namespace roadjoin {

namespace {

using nlohmann::json;

json nodeLink(NodeId id) { return id == kNoNode ? json(nullptr) : json(id); }

NodeId readLink(const json& j) { return j.is_null() ? kNoNode : j.get<NodeId>(); }

}  // namespace

void save_hierarchy(const PartitionHierarchy& h, const std::filesystem::path& path) {
  json doc;
  doc["version"] = kHierarchyFormatVersion;
  doc["vertexCount"] = h.vertexCount();
  doc["leafSizeLimit"] = h.leafSizeLimit();
  doc["alpha"] = h.alpha();
  if (h.source()) doc["network"] = {{"nodes", h.source()->nodes}, {"edges", h.source()->edges}};

  json nodes = json::array();
  for (const PartitionNode& node : h.nodes()) {
    json entry;
    entry["id"] = node.id;
    entry["parent"] = nodeLink(node.parent);
    entry["left"] = nodeLink(node.left);
    entry["right"] = nodeLink(node.right);
    entry["separationDegree"] =
        std::isinf(node.separationDegree) ? json(nullptr) : json(node.separationDegree);
    if (node.isLeaf()) entry["vertices"] = node.vertices;
    json cross = json::array();
    for (const CrossEdge& ce : node.crossEdges) {
      cross.push_back({{"eid", ce.eid}, {"back", ce.back}, {"front", ce.front}, {"weight", ce.weight}});
    }
    entry["crossEdges"] = std::move(cross);
    nodes.push_back(std::move(entry));
  }
  doc["nodes"] = std::move(nodes);

  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump() << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

PartitionHierarchy load_hierarchy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());

  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": not a hierarchy file (" + e.what() + ")");
  }

  try {
    if (!doc.is_object() || !doc.contains("version")) {
      throw FormatError(path.string() + ": missing version");
    }
    if (doc.at("version").get<int>() != kHierarchyFormatVersion) {
      throw FormatError(path.string() + ": unsupported hierarchy version " +
                        doc.at("version").dump());
    }
    const auto vertexCount = doc.at("vertexCount").get<std::size_t>();
    const auto leafSizeLimit = doc.at("leafSizeLimit").get<std::size_t>();
    const auto alpha = doc.at("alpha").get<double>();

    const json& entries = doc.at("nodes");
    std::vector<PartitionNode> nodes(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const json& entry = entries[i];
      PartitionNode& node = nodes[i];
      node.id = entry.at("id").get<NodeId>();
      node.parent = readLink(entry.at("parent"));
      node.left = readLink(entry.at("left"));
      node.right = readLink(entry.at("right"));
      const json& sep = entry.at("separationDegree");
      node.separationDegree = sep.is_null() ? kInfinity : sep.get<double>();
      if (node.isLeaf()) {
        node.vertices = entry.at("vertices").get<std::vector<VertexId>>();
        std::sort(node.vertices.begin(), node.vertices.end());
      }
      for (const json& ce : entry.at("crossEdges")) {
        node.crossEdges.push_back({ce.at("eid").get<EdgeId>(), ce.at("back").get<VertexId>(),
                                   ce.at("front").get<VertexId>(), ce.at("weight").get<double>()});
      }
      std::sort(node.crossEdges.begin(), node.crossEdges.end(), CrossEdgeOrder{});
      for (const CrossEdge& ce : node.crossEdges) node.borderNodes.push_back(ce.back);
      std::sort(node.borderNodes.begin(), node.borderNodes.end());
      node.borderNodes.erase(std::unique(node.borderNodes.begin(), node.borderNodes.end()),
                             node.borderNodes.end());
    }

    // Internal vertex sets are the union of their children, children first.
    for (std::size_t i = nodes.size(); i-- > 0;) {
      PartitionNode& node = nodes[i];
      if (node.isLeaf()) continue;
      if (node.left >= nodes.size() || node.right >= nodes.size() || node.left <= i ||
          node.right <= i) {
        throw FormatError(path.string() + ": node " + std::to_string(i) + " has bad child links");
      }
      const auto& l = nodes[node.left].vertices;
      const auto& r = nodes[node.right].vertices;
      node.vertices.clear();
      std::merge(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(node.vertices));
    }

    PartitionHierarchy h(std::move(nodes), vertexCount, leafSizeLimit, alpha);
    if (doc.contains("network")) {
      h.setSource({doc["network"].at("nodes").get<std::string>(),
                   doc["network"].at("edges").get<std::string>()});
    }
    return h;
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": corrupted hierarchy (" + e.what() + ")");
  }
}

}  // namespace roadjoin
