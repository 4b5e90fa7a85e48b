#include "service.hpp"

#include <algorithm>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <future>
#include <stop_token>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gperiods/error.hpp"
#include "gperiods/fillout.hpp"
#include "gperiods/io.hpp"
#include "gperiods/png_io.hpp"
#include "gperiods/render.hpp"
#include "options.hpp"

namespace gp::service {

using nlohmann::json;

/// Fixed set of threads draining a bounded queue.
class WorkerPool {
 public:
  WorkerPool(unsigned threads, std::size_t max_pending) : max_pending_(max_pending) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    idle_ = threads;
    for (unsigned i = 0; i < threads; ++i) {
      threads_.emplace_back([this](std::stop_token st) { loop(st); });
    }
  }

  ~WorkerPool() {
    for (auto& t : threads_) t.request_stop();
    cv_.notify_all();
  }

  /// False when every worker is busy and the queue is full.
  bool try_submit(std::function<void()> task) {
    {
      std::lock_guard lock(mutex_);
      if (queue_.size() >= idle_ + max_pending_) return false;
      queue_.push_back(std::move(task));
    }
    cv_.notify_one();
    return true;
  }

 private:
  void loop(std::stop_token st) {
    for (;;) {
      std::function<void()> task;
      {
        std::unique_lock lock(mutex_);
        if (!cv_.wait(lock, st, [&] { return !queue_.empty(); })) return;
        task = std::move(queue_.front());
        queue_.pop_front();
        --idle_;
      }
      task();
      std::lock_guard lock(mutex_);
      ++idle_;
    }
  }

  std::size_t max_pending_;
  std::size_t idle_ = 0;
  std::mutex mutex_;
  std::condition_variable_any cv_;
  std::deque<std::function<void()>> queue_;
  std::vector<std::jthread> threads_;  // last, so workers stop before the queue goes away
};

struct Service::Job {
  Key key;
  std::string token;
  std::promise<TablePtr> promise;
  std::shared_future<TablePtr> future;
};

namespace {

struct Overloaded {};

Response json_response(int status, const json& body) { return {status, "application/json", body.dump() + "\n"}; }

Response error_response(int status, std::string_view code, std::string_view message) {
  return json_response(status, {{"error", code}, {"message", message}});
}

int status_for(Errc code) {
  switch (code) {
    case Errc::io_error:
    case Errc::overflow: return 500;
    default: return 400;
  }
}

template <typename F>
Response guarded(F&& handler) {
  try {
    return handler();
  } catch (const Error& e) {
    return error_response(status_for(e.code()), to_string(e.code()), e.what());
  } catch (const Overloaded&) {
    return error_response(503, "over_capacity", "too many computations queued; retry later");
  } catch (const std::bad_alloc&) {
    return error_response(503, "out_of_memory", "not enough memory for this request");
  } catch (const std::exception& e) {
    return error_response(500, "internal", e.what());
  }
}

const std::string* find(const Query& q, std::string_view key) {
  const auto it = q.find(key);
  return it == q.end() ? nullptr : &it->second;
}

std::string required(const Query& q, std::string_view key) {
  const auto* v = find(q, key);
  if (v == nullptr) throw Error(Errc::invalid_argument, "missing query parameter '" + std::string(key) + "'");
  return *v;
}

template <typename T, typename Parse>
T optional(const Query& q, std::string_view key, T fallback, Parse parse) {
  const auto* v = find(q, key);
  return v == nullptr ? fallback : static_cast<T>(parse(*v));
}

std::uint64_t query_u64(const Query& q, std::string_view key, std::uint64_t fallback) {
  return optional<std::uint64_t>(q, key, fallback, [](const std::string& s) { return tools::parse_u64(s); });
}

struct Coloring {
  std::uint64_t c = 1;
  ColorMode mode = ColorMode::standard;
};

PeriodParams parse_params(const Query& q) {
  const std::uint64_t n = tools::parse_u64(required(q, "n"));
  const std::int64_t omega = tools::parse_i64(required(q, "omega"));
  return PeriodParams::make(n, omega);
}

Coloring parse_coloring(const Query& q, const PeriodParams& p) {
  Coloring out;
  out.c = query_u64(q, "c", 1);
  if (out.c == 0 || p.n % out.c != 0) {
    throw Error(Errc::not_divisor, "c = " + std::to_string(out.c) + " does not divide n = " + std::to_string(p.n));
  }
  if (const auto* m = find(q, "mode")) out.mode = parse_color_mode(*m);
  return out;
}

RenderSpec parse_spec(const Query& q) {
  RenderSpec spec;
  const auto dim = [&](std::string_view key, std::uint32_t fallback) {
    const std::uint64_t v = query_u64(q, key, fallback);
    if (v == 0 || v > kMaxCanvasSide) {
      throw Error(Errc::invalid_dimension,
                  std::string(key) + " must lie in [1, " + std::to_string(kMaxCanvasSide) + "]");
    }
    return static_cast<std::uint32_t>(v);
  };
  spec.width = dim("width", spec.width);
  spec.height = dim("height", spec.height);
  const auto real = [](const std::string& s) { return tools::parse_double(s); };
  spec.point_radius = optional<double>(q, "radius", spec.point_radius, real);
  spec.margin = optional<double>(q, "margin", spec.margin, real);
  if (const auto* v = find(q, "palette")) spec.palette = tools::parse_palette(*v);
  if (const auto* v = find(q, "background")) spec.background = tools::parse_rgba(*v);
  if (const auto* v = find(q, "layer_order")) spec.layer_order = tools::parse_id_list(*v);
  spec.validate();
  return spec;
}

json params_json(const PeriodSet& set) {
  return {{"n", set.params.n}, {"omega", set.params.omega}, {"c", set.c}, {"mode", to_string(set.mode)}};
}

/// Square grid over [-extent, extent]^2; each occupied bin reports its center,
/// orbit count, summed orbit size and most frequent class (smallest id on ties).
json binned_points(const PeriodSet& set, std::uint32_t grid, double extent) {
  const auto bin_of = [&](double v) {
    const double t = (v + extent) / (2.0 * extent) * grid;
    return static_cast<std::uint64_t>(std::clamp(t, 0.0, grid - 1.0));
  };
  struct Item {
    std::uint64_t bin;
    std::uint32_t cls;
    std::uint64_t size;
  };
  std::vector<Item> items;
  items.reserve(set.orbits.size());
  for (const OrbitRecord& rec : set.orbits) {
    const std::uint64_t bx = bin_of(rec.value.real());
    const std::uint64_t by = bin_of(rec.value.imag());
    items.push_back({by * grid + bx, rec.color_class, rec.size});
  }
  std::sort(items.begin(), items.end(),
            [](const Item& a, const Item& b) { return a.bin != b.bin ? a.bin < b.bin : a.cls < b.cls; });

  json points = json::array();
  const double cell = 2.0 * extent / grid;
  for (std::size_t i = 0; i < items.size();) {
    const std::uint64_t bin = items[i].bin;
    std::uint64_t count = 0, size = 0, best_count = 0;
    std::uint32_t best_cls = 0;
    while (i < items.size() && items[i].bin == bin) {
      const std::uint32_t cls = items[i].cls;
      std::uint64_t run = 0;
      for (; i < items.size() && items[i].bin == bin && items[i].cls == cls; ++i) {
        ++run;
        size += items[i].size;
      }
      count += run;
      if (run > best_count) {
        best_count = run;
        best_cls = cls;
      }
    }
    const std::uint64_t bx = bin % grid, by = bin / grid;
    points.push_back({{"re", -extent + (static_cast<double>(bx) + 0.5) * cell},
                      {"im", -extent + (static_cast<double>(by) + 0.5) * cell},
                      {"bx", bx},
                      {"by", by},
                      {"count", count},
                      {"size", size},
                      {"color_class", best_cls}});
  }
  return points;
}

}  // namespace

Config Config::from_env() {
  Config config;
  if (const char* v = std::getenv("GP_CACHE_BYTES"); v != nullptr && *v != '\0') {
    config.cache_bytes = tools::parse_u64(v);
  }
  return config;
}

Service::Service(Config config) : config_(std::move(config)) {
  if (!config_.compute) {
    config_.compute = [](std::uint64_t n, std::int64_t omega) { return compute_orbits(n, omega); };
  }
  pool_ = std::make_unique<WorkerPool>(config_.workers, config_.max_pending);
}

// Workers call back into the cache, so they must stop first.
Service::~Service() { pool_.reset(); }

Service::Lookup Service::acquire(const PeriodParams& params) {
  const Key key{params.n, params.omega};
  std::lock_guard lock(mutex_);
  if (const auto it = index_.find(key); it != index_.end()) {
    ++stats_.hits;
    lru_.splice(lru_.begin(), lru_, it->second);
    return {it->second->table, nullptr};
  }
  ++stats_.misses;
  if (const auto it = in_flight_.find(key); it != in_flight_.end()) {
    ++stats_.coalesced;
    return {nullptr, it->second};
  }

  auto job = std::make_shared<Job>();
  job->key = key;
  job->token = "job-" + std::to_string(next_token_++);
  job->future = job->promise.get_future().share();
  const bool accepted = pool_->try_submit([this, job] {
    try {
      auto table = std::make_shared<const OrbitTable>(
          config_.compute(job->key.n, static_cast<std::int64_t>(job->key.omega)));
      finish(job, std::move(table), nullptr);
    } catch (...) {
      finish(job, nullptr, std::current_exception());
    }
  });
  if (!accepted) {
    ++stats_.rejected;
    throw Overloaded{};
  }
  ++stats_.computations;
  in_flight_.emplace(key, job);
  return {nullptr, job};
}

void Service::finish(const std::shared_ptr<Job>& job, TablePtr table, std::exception_ptr error) {
  {
    std::lock_guard lock(mutex_);
    if (table) insert_locked(job->key, table);
    in_flight_.erase(job->key);
  }
  if (error) {
    job->promise.set_exception(error);
  } else {
    job->promise.set_value(std::move(table));
  }
}

void Service::insert_locked(const Key& key, TablePtr table) {
  const std::size_t bytes = table->byte_size();
  if (bytes > config_.cache_bytes) return;
  while (!lru_.empty() && stats_.bytes + bytes > config_.cache_bytes) {
    stats_.bytes -= lru_.back().bytes;
    index_.erase(lru_.back().key);
    lru_.pop_back();
    ++stats_.evictions;
  }
  lru_.push_front({key, std::move(table), bytes, std::chrono::steady_clock::now()});
  index_[key] = lru_.begin();
  stats_.bytes += bytes;
}

Service::TablePtr Service::await(const Lookup& lookup, Response& pending) {
  if (lookup.table) return lookup.table;
  if (lookup.job->future.wait_for(config_.long_job) == std::future_status::ready) return lookup.job->future.get();

  {
    std::lock_guard lock(mutex_);
    if (jobs_.size() >= 1024) {
      std::erase_if(jobs_, [](const auto& kv) {
        return kv.second->future.wait_for(std::chrono::seconds(0)) == std::future_status::ready;
      });
    }
    jobs_.emplace(lookup.job->token, lookup.job);
  }
  pending = json_response(202, {{"status", "running"},
                                {"token", lookup.job->token},
                                {"poll", "/api/jobs/" + lookup.job->token}});
  return nullptr;
}

Response Service::periods(const Query& q) {
  return guarded([&] {
    const PeriodParams params = parse_params(q);
    const Coloring coloring = parse_coloring(q, params);
    Response pending;
    const TablePtr table = await(acquire(params), pending);
    if (!table) return pending;

    const PeriodSet set = apply_coloring(*table, coloring.c, coloring.mode);
    json body;
    body["params"] = params_json(set);
    body["d"] = params.d;
    body["dihedral_order"] = dihedral_order(params.n, static_cast<std::int64_t>(params.omega));
    body["class_count"] = set.class_count;
    body["orbit_count"] = set.orbits.size();
    if (set.orbits.size() > config_.bin_threshold) {
      const double extent = plot_extent(set);
      body["binned"] = true;
      body["bins"] = {{"grid", config_.bin_grid}, {"extent", extent}};
      body["points"] = binned_points(set, config_.bin_grid, extent);
    } else {
      json points = json::array();
      for (const OrbitRecord& rec : set.orbits) {
        points.push_back(
            {{"re", rec.value.real()}, {"im", rec.value.imag()}, {"size", rec.size}, {"color_class", rec.color_class}});
      }
      body["binned"] = false;
      body["points"] = std::move(points);
    }
    return json_response(200, body);
  });
}

Response Service::render(const Query& q) {
  return guarded([&] {
    const PeriodParams params = parse_params(q);
    const Coloring coloring = parse_coloring(q, params);
    const RenderSpec spec = parse_spec(q);
    Response pending;
    const TablePtr table = await(acquire(params), pending);
    if (!table) return pending;

    const PeriodSet set = apply_coloring(*table, coloring.c, coloring.mode);
    const auto png = encode_png(rasterize(set, spec));
    return Response{200, "image/png", std::string(png.begin(), png.end())};
  });
}

Response Service::fillout(const Query& q) {
  return guarded([&] {
    std::uint64_t d = 0;
    try {
      d = tools::parse_u64(required(q, "d"));
    } catch (const Error& e) {
      return error_response(400, "invalid_d", e.what());
    }
    if (d == 0) return error_response(400, "invalid_d", "d must be a positive integer");
    if (d > config_.max_fillout_d) {
      throw Error(Errc::too_large, "d = " + std::to_string(d) + " exceeds " + std::to_string(config_.max_fillout_d));
    }
    const std::uint64_t samples = query_u64(q, "samples", 10000);
    if (samples == 0) throw Error(Errc::invalid_argument, "samples must be positive");
    if (samples > config_.max_fillout_samples) {
      throw Error(Errc::too_large, "samples = " + std::to_string(samples) + " exceeds " +
                                       std::to_string(config_.max_fillout_samples));
    }
    SampleOptions opts;
    opts.seed = query_u64(q, "seed", kDefaultSampleSeed);
    if (const auto* s = find(q, "strategy")) {
      if (*s == "grid") {
        opts.strategy = SampleStrategy::grid;
      } else if (*s == "random") {
        opts.strategy = SampleStrategy::random;
      } else {
        throw Error(Errc::invalid_argument, "strategy must be grid or random");
      }
    }

    const LaurentMap map(d);
    const auto samples_out = sample_image(map, samples, opts);
    json points = json::array();
    double max_modulus = 0.0;
    for (const auto& z : samples_out) {
      points.push_back({z.real(), z.imag()});
      max_modulus = std::max(max_modulus, std::abs(z));
    }
    return json_response(200, {{"d", d},
                               {"arity", map.arity()},
                               {"strategy", to_string(opts.strategy)},
                               {"seed", opts.seed},
                               {"sample_count", samples_out.size()},
                               {"max_modulus", max_modulus},
                               {"points", std::move(points)}});
  });
}

Stats Service::stats_snapshot() const {
  std::lock_guard lock(mutex_);
  Stats s = stats_;
  s.entries = lru_.size();
  return s;
}

Response Service::stats() const {
  const Stats s = stats_snapshot();
  std::size_t in_flight = 0;
  {
    std::lock_guard lock(mutex_);
    in_flight = in_flight_.size();
  }
  return json_response(200, {{"hits", s.hits},
                             {"misses", s.misses},
                             {"computations", s.computations},
                             {"coalesced", s.coalesced},
                             {"evictions", s.evictions},
                             {"rejected", s.rejected},
                             {"entries", s.entries},
                             {"bytes", s.bytes},
                             {"budget_bytes", config_.cache_bytes},
                             {"in_flight", in_flight}});
}

Response Service::job(std::string_view token) {
  std::shared_ptr<Job> found;
  {
    std::lock_guard lock(mutex_);
    const auto it = jobs_.find(token);
    if (it == jobs_.end()) return error_response(404, "unknown_job", "no such job");
    found = it->second;
  }
  if (found->future.wait_for(std::chrono::seconds(0)) != std::future_status::ready) {
    return json_response(202, {{"status", "running"}, {"token", found->token}});
  }
  {
    std::lock_guard lock(mutex_);
    jobs_.erase(found->token);
  }
  return guarded([&] {
    const TablePtr table = found->future.get();
    return json_response(200, {{"status", "done"},
                               {"token", found->token},
                               {"params", {{"n", table->params.n}, {"omega", table->params.omega}}},
                               {"d", table->params.d},
                               {"orbit_count", table->orbits.size()}});
  });
}

}  // namespace gp::service
