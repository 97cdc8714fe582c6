#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "roadjoin/bench.hpp"
#include "roadjoin/graph.hpp"
#include "roadjoin/oracle.hpp"
#include "roadjoin/partition.hpp"
#include "roadjoin/result.hpp"
#include "roadjoin/scheduler.hpp"
#include "roadjoin/synthetic.hpp"

namespace roadjoin::cli {

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

// Invalid flag values detected after parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct NetworkFlags {
  std::string nodes;
  std::string edges;
};

struct QueryFlags {
  std::string hier;
  std::string rSet;
  std::string sSet;
  std::optional<std::size_t> k;
  bool join = false;
  std::string theta = "inf";
  std::optional<std::size_t> threads;
  std::string thresholdMode = "global";
  std::string out;
};

double parseTheta(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0' || std::isnan(v)) {
    throw UsageError("--theta: cannot parse '" + text + "'");
  }
  return v;
}

std::vector<VertexId> readVertexSet(const std::string& path, const RoadNetwork& net) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<VertexId> out;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    char* end = nullptr;
    const long long id = std::strtoll(token.c_str(), &end, 10);
    if (*end != '\0') throw ParseError(path, lineNo, "expected a vertex id, got '" + token + "'");
    const auto v = net.findVertex(id);
    if (!v) throw IntegrityError(path + ":" + std::to_string(lineNo) + ": unknown vertex id " + token);
    out.push_back(*v);
  }
  return out;
}

QuerySets readQuerySets(const QueryFlags& f, const RoadNetwork& net) {
  auto r = readVertexSet(f.rSet, net);
  auto s = readVertexSet(f.sSet, net);
  try {
    return QuerySets(net.vertexCount(), std::move(r), std::move(s));
  } catch (const DomainError& e) {
    throw UsageError(std::string("--r-set/--s-set: ") + e.what());
  }
}

QueryParams readParams(const QueryFlags& f) {
  QueryParams p;
  p.theta = parseTheta(f.theta);
  if (f.join) {
    p.k = kUnboundedK;
  } else {
    p.k = f.k.value_or(80);
  }
  return p;
}

std::size_t resolveThreads(const QueryFlags& f) {
  if (f.threads) return *f.threads;
  if (const char* env = std::getenv("ROADJOIN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw UsageError("ROADJOIN_THREADS: expected a positive integer");
    return static_cast<std::size_t>(v);
  }
  return 8;
}

RoadNetwork loadFor(const NetworkFlags& nf, const PartitionHierarchy* h) {
  if (!nf.nodes.empty() || !nf.edges.empty()) {
    if (nf.nodes.empty() || nf.edges.empty()) {
      throw UsageError("--nodes and --edges must be given together");
    }
    return load_network(nf.nodes, nf.edges);
  }
  if (h && h->source()) return load_network(h->source()->nodes, h->source()->edges);
  throw UsageError("--nodes/--edges: required (the hierarchy does not name its network)");
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error("cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

void addQueryFlags(CLI::App* cmd, QueryFlags& f) {
  cmd->add_option("--r-set", f.rSet, "File of R vertex ids, one per line")->required();
  cmd->add_option("--s-set", f.sSet, "File of S vertex ids, one per line")->required();
  auto* k = cmd->add_option("--k", f.k, "Number of closest pairs (default 80)");
  auto* join = cmd->add_flag("--join", f.join, "Distance join: every pair within --theta");
  k->excludes(join);
  cmd->add_option("--theta", f.theta, "Distance bound (default inf)");
  cmd->add_option("--out", f.out, "Write result lines here instead of stdout");
}

int cmdPartition(const NetworkFlags& nf, double alpha, std::size_t leafSize,
                 const std::string& outPath, std::ostream& out) {
  if (nf.nodes.empty() || nf.edges.empty()) throw UsageError("--nodes and --edges are required");
  const RoadNetwork net = load_network(nf.nodes, nf.edges);
  PartitionHierarchy h = build_hierarchy(net, leafSize, SmoothingConfig{alpha});
  h.setSource({std::filesystem::absolute(nf.nodes).string(),
               std::filesystem::absolute(nf.edges).string()});
  save_hierarchy(h, outPath);

  double minSeparation = kInfinity;
  std::size_t worstImbalance = 0;
  double imbalanceSum = 0.0;
  std::size_t internal = 0;
  for (const PartitionNode& node : h.nodes()) {
    if (node.id != 0) minSeparation = std::min(minSeparation, node.separationDegree);
    if (node.isLeaf()) continue;
    const auto a = h.node(node.left).population();
    const auto b = h.node(node.right).population();
    const std::size_t gap = a > b ? a - b : b - a;
    worstImbalance = std::max(worstImbalance, gap);
    imbalanceSum += static_cast<double>(gap) / static_cast<double>(node.population());
    ++internal;
  }
  out << "nodes " << h.size() << "\n"
      << "leaves " << h.leafCount() << "\n"
      << "min-separation " << format_distance(minSeparation) << "\n"
      << "max-imbalance " << worstImbalance << "\n"
      << "mean-relative-imbalance "
      << format_distance(internal ? imbalanceSum / static_cast<double>(internal) : 0.0) << "\n";
  return 0;
}

int cmdQuery(const NetworkFlags& nf, const QueryFlags& f, std::ostream& out, std::ostream& err) {
  const QueryParams params = readParams(f);
  if (f.thresholdMode != "global" && f.thresholdMode != "local") {
    throw UsageError("--threshold-mode: expected 'global' or 'local'");
  }
  const std::size_t threads = resolveThreads(f);
  const PartitionHierarchy h = load_hierarchy(f.hier);
  const RoadNetwork net = loadFor(nf, &h);
  if (h.vertexCount() != net.vertexCount()) {
    throw IntegrityError(f.hier + ": hierarchy covers " + std::to_string(h.vertexCount()) +
                         " vertices, network has " + std::to_string(net.vertexCount()));
  }
  const QuerySets q = readQuerySets(f, net);
  Output sink(f.out, out);

  if (params.theta <= 0.0) {
    err << "expanded=0 settled=0 updates=0 peak=0 wall_ms=0\n";
    return 0;
  }
  const SchedulerConfig cfg{threads, 2,
                            f.thresholdMode == "local" ? ThresholdMode::kLocal
                                                       : ThresholdMode::kGlobal};
  QueryProbe probe;
  const auto start = std::chrono::steady_clock::now();
  const ResultHeap result = closest_pairs_parallel(net, h, q, params, cfg, &probe);
  const auto stop = std::chrono::steady_clock::now();
  write_pairs(sink.get(), net, result.sorted());
  err << "expanded=" << probe.expandedCrossEdges.load() << " settled=" << probe.settledVertices.load()
      << " updates=" << probe.thresholdUpdates.load() << " peak=" << probe.peakConcurrency.load()
      << " wall_ms=" << std::chrono::duration<double, std::milli>(stop - start).count() << "\n";
  return 0;
}

int cmdOracle(const NetworkFlags& nf, const QueryFlags& f, std::ostream& out) {
  const QueryParams params = readParams(f);
  std::optional<PartitionHierarchy> h;
  if (nf.nodes.empty() && nf.edges.empty() && !f.hier.empty()) h = load_hierarchy(f.hier);
  const RoadNetwork net = loadFor(nf, h ? &*h : nullptr);
  const QuerySets q = readQuerySets(f, net);
  Output sink(f.out, out);
  if (params.theta <= 0.0) return 0;
  write_pairs(sink.get(), net, oracle_closest_pairs(net, q, params.k, params.theta));
  return 0;
}

int cmdSampleSets(const NetworkFlags& nf, double rPct, double sPct, std::uint64_t seed,
                  const std::string& rOut, const std::string& sOut) {
  if (nf.nodes.empty() || nf.edges.empty()) throw UsageError("--nodes and --edges are required");
  const RoadNetwork net = load_network(nf.nodes, nf.edges);
  QuerySets q;
  try {
    q = sample_sets(net, rPct, sPct, seed);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--r-pct/--s-pct: ") + e.what());
  }
  const auto write = [&](const std::string& path, std::span<const VertexId> ids) {
    std::ofstream file(path);
    if (!file) throw Error("cannot write " + path);
    for (VertexId v : ids) file << net.externalId(v) << '\n';
  };
  write(rOut, q.r());
  write(sOut, q.s());
  return 0;
}

struct BenchFlags {
  std::string dataset;
  std::string spec;
  std::string grid;
  std::string out;
  std::optional<std::size_t> repetitions;
  std::optional<std::size_t> leafSize;
  std::optional<std::uint64_t> seed;
};

int cmdBench(const NetworkFlags& nf, const BenchFlags& f, std::ostream& out, std::ostream& err) {
  BenchSpec spec = f.spec.empty() ? BenchSpec{} : load_bench_spec(f.spec);
  if (f.repetitions) spec.repetitions = *f.repetitions;
  if (f.leafSize) spec.leafSizeLimit = *f.leafSize;
  if (f.seed) spec.seed = *f.seed;

  RoadNetwork net;
  std::string dataset = f.dataset;
  if (!f.grid.empty()) {
    std::size_t w = 0;
    std::size_t hgt = 0;
    char x = 0;
    std::istringstream in(f.grid);
    if (!(in >> w >> x >> hgt) || x != 'x' || w == 0 || hgt == 0) {
      throw UsageError("--grid: expected WIDTHxHEIGHT, got '" + f.grid + "'");
    }
    net = make_grid_network(w, hgt, spec.seed);
    if (dataset.empty()) dataset = "grid" + f.grid;
  } else {
    net = loadFor(nf, nullptr);
    if (dataset.empty()) dataset = std::filesystem::path(nf.nodes).stem().string();
  }

  std::unique_ptr<std::ofstream> file;
  std::ostream* csv = &out;
  if (!f.out.empty()) {
    bool needHeader = true;
    if (std::ifstream existing(f.out); existing && existing.peek() != EOF) {
      std::string header;
      std::getline(existing, header);
      if (header != kBenchCsvHeader) throw Error(f.out + ": existing CSV has a different header");
      needHeader = false;
    }
    file = std::make_unique<std::ofstream>(f.out, std::ios::app);
    if (!*file) throw Error("cannot write " + f.out);
    csv = file.get();
    if (needHeader) *csv << kBenchCsvHeader << '\n';
  } else {
    *csv << kBenchCsvHeader << '\n';
  }

  run_bench(net, dataset, spec, [&](const BenchRecord& r) {
    *csv << bench_csv_row(r) << '\n';
    csv->flush();
  });
  err << "bench: " << spec.configurationCount() << " configurations x " << spec.repetitions
      << " repetitions on " << dataset << " (" << net.vertexCount() << " vertices)\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parallel k-closest-pairs and distance joins on road networks", "roadjoin"};
  app.require_subcommand(1);

  NetworkFlags nf;
  const auto addNetwork = [&](CLI::App* cmd) {
    cmd->add_option("--nodes", nf.nodes, "Node file: <id> <x> <y> per line");
    cmd->add_option("--edges", nf.edges, "Edge file: <eid> <a> <b> <weight> per line");
  };

  double alpha = 0.0;
  std::size_t leafSize = 4096;
  std::string hierOut;
  auto* partition = app.add_subcommand("partition", "Build and save the partition hierarchy");
  addNetwork(partition);
  partition->add_option("--alpha", alpha, "Smoothing factor in [0,1]")->check(CLI::Range(0.0, 1.0));
  partition->add_option("--max-leaf-size", leafSize, "Largest leaf population")
      ->check(CLI::PositiveNumber);
  partition->add_option("--out", hierOut, "Hierarchy file to write")->required();

  QueryFlags qf;
  auto* query = app.add_subcommand("query", "Answer a closest-pairs or distance-join query");
  addNetwork(query);
  query->add_option("--hier", qf.hier, "Hierarchy file from 'partition'")->required();
  addQueryFlags(query, qf);
  query->add_option("--threads", qf.threads, "Parallelism P (default $ROADJOIN_THREADS or 8)")
      ->check(CLI::PositiveNumber);
  query->add_option("--threshold-mode", qf.thresholdMode, "global or local")
      ->check(CLI::IsMember({"global", "local"}));

  QueryFlags of;
  auto* oracle = app.add_subcommand("oracle", "Brute-force answer in the query output format");
  addNetwork(oracle);
  oracle->add_option("--hier", of.hier, "Take the network location from this hierarchy");
  addQueryFlags(oracle, of);

  double rPct = 8.0;
  double sPct = 8.0;
  std::uint64_t seed = 42;
  std::string rOut;
  std::string sOut;
  auto* sample = app.add_subcommand("sample-sets", "Sample disjoint R and S vertex sets");
  addNetwork(sample);
  sample->add_option("--r-pct", rPct, "Size of R in percent of |V|")->check(CLI::Range(0.0, 100.0));
  sample->add_option("--s-pct", sPct, "Size of S in percent of |V|")->check(CLI::Range(0.0, 100.0));
  sample->add_option("--seed", seed, "Random seed");
  sample->add_option("--r-out", rOut, "Where to write R")->required();
  sample->add_option("--s-out", sOut, "Where to write S")->required();

  BenchFlags bf;
  auto* bench = app.add_subcommand("bench", "Parameter sweep; CSV on stdout or --out");
  addNetwork(bench);
  bench->add_option("--grid", bf.grid, "Use a synthetic WIDTHxHEIGHT grid instead of files");
  bench->add_option("--dataset", bf.dataset, "Dataset name for the CSV");
  bench->add_option("--spec", bf.spec, "JSON sweep specification");
  bench->add_option("--repetitions", bf.repetitions, "Runs per configuration")
      ->check(CLI::PositiveNumber);
  bench->add_option("--max-leaf-size", bf.leafSize, "Largest leaf population")
      ->check(CLI::PositiveNumber);
  bench->add_option("--seed", bf.seed, "Seed for set sampling and synthetic weights");
  bench->add_option("--out", bf.out, "Append CSV rows to this file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "roadjoin: " << msg << "\n";
    return kExitUsage;
  }

  try {
    if (*partition) return cmdPartition(nf, alpha, leafSize, hierOut, out);
    if (*query) return cmdQuery(nf, qf, out, err);
    if (*oracle) return cmdOracle(nf, of, out);
    if (*sample) return cmdSampleSets(nf, rPct, sPct, seed, rOut, sOut);
    if (*bench) return cmdBench(nf, bf, out, err);
  } catch (const UsageError& e) {
    err << "roadjoin: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "roadjoin: " << msg << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace roadjoin::cli
