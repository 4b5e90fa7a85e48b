#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "gperiods/periods.hpp"

namespace gp::service {

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Query parameters; the first value wins for repeated keys.
using Query = std::map<std::string, std::string, std::less<>>;

struct Config {
  std::size_t cache_bytes = std::size_t{1} << 30;
  unsigned workers = 0;             ///< compute pool size, 0 = hardware concurrency
  std::size_t max_pending = 64;     ///< queued computations allowed beyond busy workers
  std::size_t bin_threshold = 200000;
  std::uint32_t bin_grid = 1024;
  std::chrono::milliseconds long_job{30000};
  std::size_t max_fillout_samples = 1000000;
  std::uint64_t max_fillout_d = 1000;
  /// Orbit computation; empty means gp::compute_orbits. Replaceable for tests.
  std::function<OrbitTable(std::uint64_t n, std::int64_t omega)> compute;

  /// Defaults with GP_CACHE_BYTES applied.
  static Config from_env();
};

struct Stats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t computations = 0;
  std::uint64_t coalesced = 0;
  std::uint64_t evictions = 0;
  std::uint64_t rejected = 0;
  std::size_t entries = 0;
  std::size_t bytes = 0;
};

class WorkerPool;

/// HTTP-independent request handlers. Thread-safe.
class Service {
 public:
  explicit Service(Config config = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// GET /api/periods?n&omega&c&mode
  Response periods(const Query& q);
  /// GET /api/render?n&omega&c&mode&width&height&radius&margin&palette&background&layer_order
  Response render(const Query& q);
  /// GET /api/fillout?d&samples&seed&strategy
  Response fillout(const Query& q);
  /// GET /api/stats
  Response stats() const;
  /// GET /api/jobs/<token>
  Response job(std::string_view token);

  Stats stats_snapshot() const;
  const Config& config() const noexcept { return config_; }

 private:
  struct Key {
    std::uint64_t n;
    std::uint64_t omega;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept { return std::hash<std::uint64_t>{}(k.n * 0x9e3779b97f4a7c15ULL ^ k.omega); }
  };
  struct Job;
  struct CacheEntry {
    Key key;
    std::shared_ptr<const OrbitTable> table;
    std::size_t bytes;
    std::chrono::steady_clock::time_point created;
  };
  using TablePtr = std::shared_ptr<const OrbitTable>;

  /// Cached table, or the (possibly shared) job computing it.
  struct Lookup {
    TablePtr table;
    std::shared_ptr<Job> job;
  };

  Lookup acquire(const PeriodParams& params);
  void finish(const std::shared_ptr<Job>& job, TablePtr table, std::exception_ptr error);
  void insert_locked(const Key& key, TablePtr table);
  /// Waits up to the long-job limit. Empty result means "still running".
  TablePtr await(const Lookup& lookup, Response& pending);

  Config config_;
  std::unique_ptr<WorkerPool> pool_;

  mutable std::mutex mutex_;
  std::list<CacheEntry> lru_;  // front = most recent
  std::unordered_map<Key, std::list<CacheEntry>::iterator, KeyHash> index_;
  std::unordered_map<Key, std::shared_ptr<Job>, KeyHash> in_flight_;
  std::map<std::string, std::shared_ptr<Job>, std::less<>> jobs_;
  std::uint64_t next_token_ = 1;
  Stats stats_;
};

}  // namespace gp::service
