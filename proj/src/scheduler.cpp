#include "roadjoin/scheduler.hpp"

#include <algorithm>
#include <condition_variable>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <thread>
#include <tuple>

namespace roadjoin {

std::vector<NodeId> choose_granularity(const PartitionHierarchy& h, const SchedulerConfig& cfg) {
  if (cfg.parallelism < 1) throw DomainError("parallelism must be at least 1");
  if (cfg.granularityFactor < 1) throw DomainError("granularity factor must be at least 1");
  const std::size_t target = cfg.parallelism * cfg.granularityFactor;

  // Splittable frontier nodes ordered by population, then lower id first.
  const auto before = [&](NodeId a, NodeId b) {
    const auto pa = h.node(a).population();
    const auto pb = h.node(b).population();
    return pa != pb ? pa < pb : a > b;
  };
  std::priority_queue<NodeId, std::vector<NodeId>, decltype(before)> splittable(before);
  std::vector<NodeId> frontier;
  const auto add = [&](NodeId id) {
    if (h.node(id).isLeaf()) {
      frontier.push_back(id);
    } else {
      splittable.push(id);
    }
  };
  add(0);
  while (!splittable.empty() && frontier.size() + splittable.size() < target) {
    const NodeId id = splittable.top();
    splittable.pop();
    add(h.node(id).left);
    add(h.node(id).right);
  }
  while (!splittable.empty()) {
    frontier.push_back(splittable.top());
    splittable.pop();
  }
  std::sort(frontier.begin(), frontier.end());
  return frontier;
}

namespace {

class TaskGraph {
 public:
  TaskGraph(const RoadNetwork& net, const PartitionHierarchy& h, const QuerySets& q,
            const QueryParams& params, const SchedulerConfig& cfg, QueryProbe* probe)
      : h_(h),
        ctx_{net, q, params, probe},
        cfg_(cfg),
        global_(params.theta),
        isTask_(h.size(), 0),
        isLocal_(h.size(), 0),
        pending_(h.size(), 0),
        height_(h.size(), 0),
        results_(h.size()) {
    if (probe && probe->recordThreshold) global_.enableTrace();
    for (NodeId id : choose_granularity(h, cfg)) {
      isTask_[id] = 1;
      isLocal_[id] = 1;
    }
    // Ancestors of the frontier become merge tasks. Children have larger
    // ids, so a reverse sweep sees both children before their parent.
    for (NodeId id = static_cast<NodeId>(h.size()); id-- > 0;) {
      if (!isTask_[id] || id == 0) continue;
      const NodeId parent = h.node(id).parent;
      if (!isTask_[parent]) {
        isTask_[parent] = 1;
        height_[parent] = height_[id] + 1;
      } else {
        height_[parent] = std::min(height_[parent], height_[id] + 1);
      }
      ++pending_[parent];
    }
    for (NodeId id = 0; id < h.size(); ++id) {
      if (isLocal_[id]) ready_.push({height_[id], id});
    }
  }

  ResultHeap run() {
    std::vector<std::thread> workers;
    workers.reserve(cfg_.parallelism);
    for (std::size_t i = 0; i < cfg_.parallelism; ++i) workers.emplace_back([this] { work(); });
    for (auto& w : workers) w.join();
    if (failure_) std::rethrow_exception(failure_);
    if (ctx_.probe) {
      ctx_.probe->peakConcurrency.store(peak_);
      if (ctx_.probe->recordThreshold) ctx_.probe->thresholdTrace = global_.trace();
    }
    return std::move(results_[0]->pairs);
  }

 private:
  using ReadyEntry = std::pair<std::size_t, NodeId>;  // (height, node)

  void work() {
    std::unique_lock lock(mutex_);
    while (true) {
      wake_.wait(lock, [&] { return done_ || failure_ || !ready_.empty(); });
      if (done_ || failure_) return;
      const NodeId id = ready_.top().second;
      ready_.pop();
      ++running_;
      peak_ = std::max(peak_, running_);
      std::optional<PartialResult> left;
      std::optional<PartialResult> right;
      if (!isLocal_[id]) {
        left = std::move(results_[h_.node(id).left]);
        right = std::move(results_[h_.node(id).right]);
        results_[h_.node(id).left].reset();
        results_[h_.node(id).right].reset();
      }
      lock.unlock();

      std::optional<PartialResult> result;
      std::exception_ptr error;
      try {
        result = execute(id, std::move(left), std::move(right));
      } catch (...) {
        error = std::current_exception();
      }

      lock.lock();
      --running_;
      if (error) {
        if (!failure_) failure_ = error;
      } else {
        results_[id] = std::move(result);
        if (id == 0) {
          done_ = true;
        } else if (--pending_[h_.node(id).parent] == 0) {
          const NodeId parent = h_.node(id).parent;
          ready_.push({height_[parent], parent});
        }
      }
      wake_.notify_all();
    }
  }

  PartialResult execute(NodeId id, std::optional<PartialResult> left,
                        std::optional<PartialResult> right) {
    const bool merge = !isLocal_[id];
    if (ctx_.probe) ctx_.probe->event({id, merge, false});
    std::unique_ptr<GlobalThreshold> own;
    GlobalThreshold* threshold = &global_;
    if (cfg_.thresholdMode == ThresholdMode::kLocal) {
      own = std::make_unique<GlobalThreshold>(ctx_.params.theta);
      threshold = own.get();
    }
    PartialResult out = merge ? combine_pairs(ctx_, h_, id, std::move(*left), std::move(*right),
                                              *threshold)
                              : local_pairs(ctx_, h_.node(id), h_.region(id), *threshold);
    if (ctx_.probe) ctx_.probe->event({id, merge, true});
    return out;
  }

  const PartitionHierarchy& h_;
  QueryContext ctx_;
  SchedulerConfig cfg_;
  GlobalThreshold global_;
  std::vector<char> isTask_;
  std::vector<char> isLocal_;
  std::vector<int> pending_;
  std::vector<std::size_t> height_;
  std::vector<std::optional<PartialResult>> results_;

  std::mutex mutex_;
  std::condition_variable wake_;
  std::priority_queue<ReadyEntry, std::vector<ReadyEntry>, std::greater<>> ready_;
  std::size_t running_ = 0;
  std::size_t peak_ = 0;
  bool done_ = false;
  std::exception_ptr failure_;
};

}  // namespace

ResultHeap closest_pairs_parallel(const RoadNetwork& net, const PartitionHierarchy& h,
                                  const QuerySets& q, const QueryParams& params,
                                  const SchedulerConfig& cfg, QueryProbe* probe) {
  if (h.vertexCount() != net.vertexCount()) {
    throw DomainError("hierarchy was built for a different network");
  }
  if (!(params.theta >= 0.0)) throw DomainError("theta must be non-negative");
  if (cfg.parallelism < 1) throw DomainError("parallelism must be at least 1");
  TaskGraph graph(net, h, q, params, cfg, probe);
  return graph.run();
}

std::vector<MatchPair> distance_join(const RoadNetwork& net, const PartitionHierarchy& h,
                                     const QuerySets& q, double theta,
                                     const SchedulerConfig& cfg, QueryProbe* probe) {
  if (!(theta > 0.0)) throw DomainError("distance join needs a positive theta");
  return closest_pairs_parallel(net, h, q, {kUnboundedK, theta}, cfg, probe).sorted();
}

}  // namespace roadjoin
