#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "roadjoin/graph.hpp"
#include "roadjoin/scheduler.hpp"

namespace roadjoin {

// Parameter sweep. Each list is swept while the others sit at their
// defaults.
struct BenchSpec {
  std::vector<double> alphaValues{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<std::size_t> parallelismValues{2, 4, 6, 8, 10, 12, 14};
  std::vector<std::size_t> kValues{20, 40, 60, 80, 100, 120, 140};
  std::vector<double> rPcts{2, 4, 6, 8, 10, 12, 14};
  std::vector<double> sPcts{2, 4, 6, 8, 10, 12, 14};

  double defaultAlpha = 0.0;
  std::size_t defaultParallelism = 8;
  std::size_t defaultK = 80;
  double defaultRPct = 8.0;
  double defaultSPct = 8.0;

  std::size_t repetitions = 1;
  std::uint64_t seed = 42;
  std::size_t leafSizeLimit = 4096;
  ThresholdMode thresholdMode = ThresholdMode::kGlobal;

  std::size_t configurationCount() const noexcept {
    return alphaValues.size() + parallelismValues.size() + kValues.size() + rPcts.size() +
           sPcts.size();
  }
};

// Reads a JSON object whose keys override the defaults: alpha, parallelism,
// k, rPct, sPct (lists), repetitions, seed, leafSizeLimit.
BenchSpec load_bench_spec(const std::filesystem::path& path);

struct BenchRecord {
  std::string dataset;
  std::string param;
  std::string value;
  std::size_t rep = 0;
  double wallTimeMs = 0.0;
  std::uint64_t expandedCrossEdges = 0;
  std::uint64_t settledVertices = 0;
  std::uint64_t thresholdUpdates = 0;
  std::uint64_t resultChecksum = 0;
};

inline constexpr const char* kBenchCsvHeader =
    "dataset,param,value,rep,wall_ms,expanded,settled,updates,checksum";

std::string bench_csv_row(const BenchRecord& r);

// Runs every configuration sequentially. `sink` sees each record as soon as
// it is produced; an exception from any run propagates after the records
// before it were delivered.
std::vector<BenchRecord> run_bench(const RoadNetwork& net, const std::string& dataset,
                                   const BenchSpec& spec,
                                   const std::function<void(const BenchRecord&)>& sink = {});

}  // namespace roadjoin
