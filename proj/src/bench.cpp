#include "roadjoin/bench.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>

#include "json.hpp"
#include "roadjoin/partition.hpp"

namespace roadjoin {

BenchSpec load_bench_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  BenchSpec spec;
  try {
    const auto doc = nlohmann::json::parse(in);
    if (doc.contains("alpha")) spec.alphaValues = doc["alpha"].get<std::vector<double>>();
    if (doc.contains("parallelism")) {
      spec.parallelismValues = doc["parallelism"].get<std::vector<std::size_t>>();
    }
    if (doc.contains("k")) spec.kValues = doc["k"].get<std::vector<std::size_t>>();
    if (doc.contains("rPct")) spec.rPcts = doc["rPct"].get<std::vector<double>>();
    if (doc.contains("sPct")) spec.sPcts = doc["sPct"].get<std::vector<double>>();
    if (doc.contains("repetitions")) spec.repetitions = doc["repetitions"].get<std::size_t>();
    if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("leafSizeLimit")) spec.leafSizeLimit = doc["leafSizeLimit"].get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": invalid bench spec (" + e.what() + ")");
  }
  return spec;
}

std::string bench_csv_row(const BenchRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, ",%zu,%.3f,%llu,%llu,%llu,%016llx", r.rep, r.wallTimeMs,
                static_cast<unsigned long long>(r.expandedCrossEdges),
                static_cast<unsigned long long>(r.settledVertices),
                static_cast<unsigned long long>(r.thresholdUpdates),
                static_cast<unsigned long long>(r.resultChecksum));
  return r.dataset + "," + r.param + "," + r.value + buf;
}

namespace {

std::string formatValue(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct Config {
  std::string param;
  std::string value;
  double alpha;
  std::size_t parallelism;
  std::size_t k;
  double rPct;
  double sPct;
};

std::vector<Config> expand(const BenchSpec& spec) {
  const Config base{"", "", spec.defaultAlpha, spec.defaultParallelism, spec.defaultK,
                    spec.defaultRPct, spec.defaultSPct};
  std::vector<Config> out;
  for (double a : spec.alphaValues) {
    Config c = base;
    c.param = "alpha";
    c.value = formatValue(a);
    c.alpha = a;
    out.push_back(c);
  }
  for (std::size_t p : spec.parallelismValues) {
    Config c = base;
    c.param = "parallelism";
    c.value = std::to_string(p);
    c.parallelism = p;
    out.push_back(c);
  }
  for (std::size_t k : spec.kValues) {
    Config c = base;
    c.param = "k";
    c.value = std::to_string(k);
    c.k = k;
    out.push_back(c);
  }
  for (double r : spec.rPcts) {
    Config c = base;
    c.param = "r_pct";
    c.value = formatValue(r);
    c.rPct = r;
    out.push_back(c);
  }
  for (double s : spec.sPcts) {
    Config c = base;
    c.param = "s_pct";
    c.value = formatValue(s);
    c.sPct = s;
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<BenchRecord> run_bench(const RoadNetwork& net, const std::string& dataset,
                                   const BenchSpec& spec,
                                   const std::function<void(const BenchRecord&)>& sink) {
  std::map<double, std::unique_ptr<PartitionHierarchy>> hierarchies;
  std::map<std::pair<double, double>, std::unique_ptr<QuerySets>> sets;
  std::vector<BenchRecord> records;

  for (const Config& c : expand(spec)) {
    auto& h = hierarchies[c.alpha];
    if (!h) {
      h = std::make_unique<PartitionHierarchy>(
          build_hierarchy(net, spec.leafSizeLimit, SmoothingConfig{c.alpha}));
    }
    auto& q = sets[{c.rPct, c.sPct}];
    if (!q) q = std::make_unique<QuerySets>(sample_sets(net, c.rPct, c.sPct, spec.seed));

    for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
      QueryProbe probe;
      const SchedulerConfig cfg{c.parallelism, 2, spec.thresholdMode};
      const auto start = std::chrono::steady_clock::now();
      const ResultHeap result = closest_pairs_parallel(net, *h, *q, {c.k, kInfinity}, cfg, &probe);
      const auto stop = std::chrono::steady_clock::now();

      BenchRecord record{dataset,
                         c.param,
                         c.value,
                         rep,
                         std::chrono::duration<double, std::milli>(stop - start).count(),
                         probe.expandedCrossEdges.load(),
                         probe.settledVertices.load(),
                         probe.thresholdUpdates.load(),
                         result_checksum(net, result.sorted())};
      if (sink) sink(record);
      records.push_back(std::move(record));
    }
  }
  return records;
}

}  // namespace roadjoin
