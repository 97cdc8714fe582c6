#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "roadjoin/graph.hpp"
#include "roadjoin/oracle.hpp"
#include "roadjoin/partition.hpp"
#include "roadjoin/scheduler.hpp"

namespace py = pybind11;
using namespace roadjoin;

namespace {

using PairTuple = std::tuple<VertexId, VertexId, double>;

std::vector<PairTuple> toTuples(const std::vector<MatchPair>& pairs) {
  std::vector<PairTuple> out;
  out.reserve(pairs.size());
  for (const MatchPair& p : pairs) out.emplace_back(p.r, p.s, p.dist);
  return out;
}

std::size_t kFromPython(const py::object& k) {
  return k.is_none() ? kUnboundedK : k.cast<std::size_t>();
}

}  // namespace

PYBIND11_MODULE(_roadjoin, m) {
  m.doc() = "k-closest-pairs and distance joins over partitioned road networks";

  py::register_exception<Error>(m, "RoadJoinError");
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  py::class_<RoadNetwork>(m, "RoadNetwork")
      .def_static(
          "from_edges",
          [](std::size_t n, const std::vector<std::tuple<VertexId, VertexId, double>>& edges) {
            std::vector<RawEdge> raw;
            raw.reserve(edges.size());
            for (const auto& [a, b, w] : edges) raw.push_back({a, b, w});
            return RoadNetwork::fromEdges(n, raw);
          },
          py::arg("vertex_count"), py::arg("edges"))
      .def_property_readonly("vertex_count", &RoadNetwork::vertexCount)
      .def_property_readonly("edge_count", &RoadNetwork::edgeCount)
      .def("external_id", &RoadNetwork::externalId)
      .def("find_vertex", &RoadNetwork::findVertex);

  m.def("load_network", &load_network, py::arg("node_file"), py::arg("edge_file"));

  m.def(
      "bounded_dijkstra",
      [](const RoadNetwork& net, VertexId source, double radius) {
        return bounded_dijkstra(net, source, radius);
      },
      py::arg("net"), py::arg("source"), py::arg("radius") = kInfinity);

  py::class_<QuerySets>(m, "QuerySets")
      .def(py::init<std::size_t, std::vector<VertexId>, std::vector<VertexId>>(),
           py::arg("vertex_count"), py::arg("r"), py::arg("s"))
      .def_property_readonly("r", [](const QuerySets& q) {
        return std::vector<VertexId>(q.r().begin(), q.r().end());
      })
      .def_property_readonly("s", [](const QuerySets& q) {
        return std::vector<VertexId>(q.s().begin(), q.s().end());
      });

  m.def("sample_sets", &sample_sets, py::arg("net"), py::arg("r_pct"), py::arg("s_pct"),
        py::arg("seed"));

  m.def("smoothed_weights", &smoothed_weights, py::arg("w1"), py::arg("w2"), py::arg("pop1"),
        py::arg("pop2"), py::arg("alpha"));

  py::class_<PartitionHierarchy>(m, "PartitionHierarchy")
      .def_property_readonly("size", &PartitionHierarchy::size)
      .def_property_readonly("leaf_count", &PartitionHierarchy::leafCount)
      .def_property_readonly("leaf_size_limit", &PartitionHierarchy::leafSizeLimit)
      .def_property_readonly("alpha", &PartitionHierarchy::alpha)
      .def("vertices", [](const PartitionHierarchy& h, NodeId id) { return h.node(id).vertices; })
      .def("children",
           [](const PartitionHierarchy& h, NodeId id) -> std::optional<std::pair<NodeId, NodeId>> {
             const auto& n = h.node(id);
             if (n.isLeaf()) return std::nullopt;
             return std::make_pair(n.left, n.right);
           })
      .def("separation_degree",
           [](const PartitionHierarchy& h, NodeId id) { return h.node(id).separationDegree; })
      .def("__eq__", [](const PartitionHierarchy& a, const PartitionHierarchy& b) { return a == b; });

  m.def(
      "build_hierarchy",
      [](const RoadNetwork& net, std::size_t leafSizeLimit, double alpha) {
        return build_hierarchy(net, leafSizeLimit, SmoothingConfig{alpha});
      },
      py::arg("net"), py::arg("leaf_size_limit") = 4096, py::arg("alpha") = 0.0);
  m.def("save_hierarchy", &save_hierarchy, py::arg("hierarchy"), py::arg("path"));
  m.def("load_hierarchy", &load_hierarchy, py::arg("path"));

  m.def(
      "closest_pairs",
      [](const RoadNetwork& net, const PartitionHierarchy& h, const QuerySets& q,
         const py::object& k, double theta, std::size_t threads, const std::string& mode) {
        if (mode != "global" && mode != "local") throw DomainError("mode must be global or local");
        const SchedulerConfig cfg{threads, 2,
                                  mode == "local" ? ThresholdMode::kLocal : ThresholdMode::kGlobal};
        std::vector<MatchPair> pairs;
        {
          py::gil_scoped_release release;
          pairs = closest_pairs_parallel(net, h, q, {kFromPython(k), theta}, cfg).sorted();
        }
        return toTuples(pairs);
      },
      py::arg("net"), py::arg("hierarchy"), py::arg("sets"), py::arg("k") = 80,
      py::arg("theta") = kInfinity, py::arg("threads") = 8, py::arg("threshold_mode") = "global");

  m.def(
      "distance_join",
      [](const RoadNetwork& net, const PartitionHierarchy& h, const QuerySets& q, double theta,
         std::size_t threads) {
        std::vector<MatchPair> pairs;
        {
          py::gil_scoped_release release;
          pairs = distance_join(net, h, q, theta, SchedulerConfig{threads});
        }
        return toTuples(pairs);
      },
      py::arg("net"), py::arg("hierarchy"), py::arg("sets"), py::arg("theta"),
      py::arg("threads") = 8);

  m.def(
      "oracle_closest_pairs",
      [](const RoadNetwork& net, const QuerySets& q, const py::object& k, double theta) {
        return toTuples(oracle_closest_pairs(net, q, kFromPython(k), theta));
      },
      py::arg("net"), py::arg("sets"), py::arg("k") = 80, py::arg("theta") = kInfinity);
}
