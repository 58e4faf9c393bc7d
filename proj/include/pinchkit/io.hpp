#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "pinchkit/point_data.hpp"

namespace pinchkit::io {

// ==== JSON schema ====
//
// Document keys: "n", "m", "c" (number or "p/q" string),
// "shape_operators" (m matrices, nested rows or flat row-major), optional
// "label", optional "exact". In exact mode every numeric may be a "p/q"
// string and serialization emits strings, so round-trips are lossless.

PointData point_data_from_json(const nlohmann::json& doc);
nlohmann::json point_data_to_json(const PointData& p);

// also accepts a model-command document, reading its "point" member
PointData load_point_data(const std::string& path);
void save_point_data(const PointData& p, const std::string& path);

// fixed-format double rendering shared by every report writer; part of
// the byte-identical determinism contract
std::string format_double(double value);

// ==== deterministic parallel batch running ====

struct RunConfig {
  std::uint64_t seed = 42;
  int workers = 1;
  std::string format = "csv";  // csv | markdown (batch reports)
};

// Fan indices over a bounded worker pool. The callback owns slot i of a
// pre-sized result vector and must not throw; results are reduced by the
// caller in index order, which keeps every report byte-identical
// regardless of worker count.
template <typename Fn>
void parallel_for_ordered(int count, int workers, Fn&& fn) {
  if (count <= 0) return;
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&next, count, &fn] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  for (auto& t : pool) t.join();
}

struct BatchResult {
  std::string report;
  int exit_code = 0;  // 1 when any row failed
};

// per-point verdict rows in input order; per-file errors become rows,
// never fatal
BatchResult batch_classify(const std::vector<std::string>& paths, int k, const RunConfig& cfg);

}  // namespace pinchkit::io
