/*
 * Copyright 2026 the abr-lab authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "abrlab/grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "abrlab/json_io.hpp"
#include "abrlab/metrics.hpp"
#include "abrlab/sim.hpp"
#include "abrlab/trace.hpp"

namespace abrlab::grid {

namespace {

struct Cell {
  size_t content = 0, trace = 0, abr = 0;
  std::optional<sim::SessionLog> log;
  std::string error;
};

trace::NetworkTrace load_trace(const std::filesystem::path& file) {
  if (file.extension() == ".csv")
    return trace::parse_csv(io::read_file(file), file.stem().string());
  return trace::load_hsdpa_log(file);
}

std::string indicators_csv_header() {
  return "content,trace,abr,n_switches,mean_bitrate_kbps,n_rebuffers,"
         "rebuffer_time_s,mean_chunk_quality,mean_chunk_quality_diff";
}

std::string indicators_csv_row(const sim::SessionLog& log) {
  const metrics::SessionIndicators ind = metrics::indicators(log);
  std::ostringstream out;
  out << log.content_id << "," << log.trace_id << "," << log.abr_name << ","
      << ind.n_switches << "," << io::format_double(ind.mean_bitrate) << ","
      << ind.n_rebuffers << "," << io::format_double(ind.rebuffer_time) << ","
      << io::format_double(ind.mean_chunk_quality) << ","
      << io::format_double(ind.mean_chunk_quality_diff);
  return out.str();
}

// Mean and 95% normal-approximation confidence half-width (1.96 s/sqrt n,
// sample standard deviation).
std::pair<double, double> mean_ci(const std::vector<double>& v) {
  const double n = double(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  if (v.size() < 2) return {mean, 0.0};
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= (n - 1.0);
  return {mean, 1.96 * std::sqrt(var) / std::sqrt(n)};
}

}  // namespace

GridResult run_grid(const ExperimentSpec& spec) {
  namespace fs = std::filesystem;
  if (spec.chunk_map_files.empty() || spec.trace_files.empty() ||
      spec.abrs.empty())
    throw std::runtime_error("grid needs chunk maps, traces, and adaptors");
  if (spec.parallelism < 1)
    throw std::runtime_error("parallelism must be >= 1");
  if (spec.out_dir.empty()) throw std::runtime_error("missing output dir");

  std::vector<ladder::ChunkMap> maps;
  for (const auto& f : spec.chunk_map_files)
    maps.push_back(io::load_chunk_map(f));
  std::vector<trace::NetworkTrace> traces;
  for (const auto& f : spec.trace_files) traces.push_back(load_trace(f));

  std::vector<Cell> cells;
  for (size_t c = 0; c < maps.size(); ++c)
    for (size_t t = 0; t < traces.size(); ++t)
      for (size_t a = 0; a < spec.abrs.size(); ++a)
        cells.push_back({c, t, a, std::nullopt, ""});

  const auto run_cell = [&](Cell& cell) {
    try {
      sim::SessionConfig cfg;
      cfg.prefetch_chunks = spec.prefetch_chunks;
      cfg.policy = spec.abrs[cell.abr];
      cfg.policy_config = spec.policy_config;
      cfg.trace = traces[cell.trace];
      cfg.chunk_map = maps[cell.content];
      cell.log = sim::simulate(cfg);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  };

  const size_t workers =
      std::min<size_t>(std::max(spec.parallelism, 1), cells.size());
  if (workers <= 1) {
    for (Cell& cell : cells) run_cell(cell);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const size_t i = next.fetch_add(1);
          if (i >= cells.size()) return;
          run_cell(cells[i]);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // All writes happen after the join, in a deterministic cell order.
  std::vector<size_t> order(cells.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    const auto key = [&](const Cell& cell) {
      return std::make_tuple(maps[cell.content].content_id,
                             traces[cell.trace].trace_id,
                             abr::policy_name(spec.abrs[cell.abr]));
    };
    return key(cells[x]) < key(cells[y]);
  });

  GridResult result;
  result.out_dir = spec.out_dir;
  result.n_cells = cells.size();
  fs::create_directories(spec.out_dir / "aggregate");

  std::ostringstream ind_csv, feat_csv;
  ind_csv << indicators_csv_header() << "\n";
  feat_csv << metrics::features_csv_header() << "\n";
  for (size_t i : order) {
    const Cell& cell = cells[i];
    const std::string content = maps[cell.content].content_id;
    const std::string trace_id = traces[cell.trace].trace_id;
    const std::string abr_name = abr::policy_name(spec.abrs[cell.abr]);
    const std::string key = content + "/" + trace_id + "/" + abr_name;
    if (!cell.log) {
      ++result.n_failed;
      result.failures.push_back(key + ": " + cell.error);
      continue;
    }
    const fs::path dir = spec.out_dir / content / trace_id / abr_name;
    fs::create_directories(dir);
    io::write_file(dir / "session.json", io::session_log_to_json(*cell.log));
    ind_csv << indicators_csv_row(*cell.log) << "\n";
    feat_csv << metrics::features_csv_row(*cell.log) << "\n";
  }
  io::write_file(spec.out_dir / "indicators.csv", ind_csv.str());
  io::write_file(spec.out_dir / "features.csv", feat_csv.str());

  // Aggregates per adaptor, in the spec's adaptor order.
  std::ostringstream means_csv, bitrate_csv, buffer_csv, ratio_csv;
  means_csv << "abr,n_switches,mean_bitrate_kbps,n_rebuffers,rebuffer_time_s,"
               "mean_chunk_quality,mean_chunk_quality_diff\n";
  bitrate_csv << "abr,t,mean_kbps,ci95_halfwidth\n";
  buffer_csv << "abr,t,mean_s,ci95_halfwidth\n";
  ratio_csv << "abr,t,ratio\n";
  for (size_t a = 0; a < spec.abrs.size(); ++a) {
    std::vector<const sim::SessionLog*> logs;
    for (size_t i : order)
      if (cells[i].abr == a && cells[i].log) logs.push_back(&*cells[i].log);
    if (logs.empty()) continue;
    const std::string abr_name = abr::policy_name(spec.abrs[a]);

    double sw = 0, br = 0, nr = 0, rt = 0, mq = 0, md = 0;
    for (const auto* log : logs) {
      const metrics::SessionIndicators ind = metrics::indicators(*log);
      sw += ind.n_switches;
      br += ind.mean_bitrate;
      nr += ind.n_rebuffers;
      rt += ind.rebuffer_time;
      mq += ind.mean_chunk_quality;
      md += ind.mean_chunk_quality_diff;
    }
    const double n = double(logs.size());
    means_csv << abr_name << "," << io::format_double(sw / n) << ","
              << io::format_double(br / n) << "," << io::format_double(nr / n)
              << "," << io::format_double(rt / n) << ","
              << io::format_double(mq / n) << "," << io::format_double(md / n)
              << "\n";

    size_t max_len = 0;
    for (const auto* log : logs)
      max_len = std::max(max_len, log->bitrate_series.size());
    for (size_t t = 0; t < max_len; ++t) {
      std::vector<double> bits, bufs;
      for (const auto* log : logs) {
        if (t < log->bitrate_series.size()) {
          bits.push_back(log->bitrate_series[t]);
          bufs.push_back(log->buffer_series[t]);
        }
      }
      const auto [bm, bc] = mean_ci(bits);
      const auto [fm, fc] = mean_ci(bufs);
      bitrate_csv << abr_name << "," << t << "," << io::format_double(bm)
                  << "," << io::format_double(bc) << "\n";
      buffer_csv << abr_name << "," << t << "," << io::format_double(fm)
                 << "," << io::format_double(fc) << "\n";
    }

    std::vector<sim::SessionLog> copies;
    copies.reserve(logs.size());
    for (const auto* log : logs) copies.push_back(*log);
    const std::vector<double> ratio = sim::rebuffer_ratio(copies, 1.0);
    for (size_t t = 0; t < ratio.size(); ++t)
      ratio_csv << abr_name << "," << t << "," << io::format_double(ratio[t])
               << "\n";
  }
  io::write_file(spec.out_dir / "aggregate" / "per_adaptor_means.csv",
                 means_csv.str());
  io::write_file(spec.out_dir / "aggregate" / "bitrate_timeline.csv",
                 bitrate_csv.str());
  io::write_file(spec.out_dir / "aggregate" / "buffer_timeline.csv",
                 buffer_csv.str());
  io::write_file(spec.out_dir / "aggregate" / "rebuffer_ratio.csv",
                 ratio_csv.str());

  nlohmann::json manifest;
  manifest["tool"] = "abrlab";
  manifest["version"] = "1.0.0";
  manifest["schema"] = 1;
  manifest["seeds"] = nlohmann::json::array();
  nlohmann::json cfg;
  cfg["prefetch_chunks"] = spec.prefetch_chunks;
  cfg["policy"] = {{"r", spec.policy_config.r},    {"c", spec.policy_config.c},
                   {"w", spec.policy_config.w},    {"h", spec.policy_config.h},
                   {"b_l", spec.policy_config.b_l},
                   {"b_h", spec.policy_config.b_h},
                   {"b_t", spec.policy_config.b_t}};
  nlohmann::json abrs = nlohmann::json::array();
  for (auto a : spec.abrs) abrs.push_back(abr::policy_name(a));
  cfg["abrs"] = abrs;
  manifest["config"] = cfg;
  nlohmann::json inputs;
  inputs["chunk_maps"] = nlohmann::json::array();
  for (const auto& f : spec.chunk_map_files)
    inputs["chunk_maps"].push_back(f.string());
  inputs["traces"] = nlohmann::json::array();
  for (const auto& f : spec.trace_files) inputs["traces"].push_back(f.string());
  manifest["inputs"] = inputs;
  manifest["n_cells"] = result.n_cells;
  manifest["failures"] = result.failures;
  io::write_file(spec.out_dir / "manifest.json", manifest.dump(2) + "\n");
  return result;
}

}  // namespace abrlab::grid
