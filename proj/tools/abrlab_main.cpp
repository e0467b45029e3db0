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

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abrlab/fixtures.hpp"
#include "abrlab/grid.hpp"
#include "abrlab/json_io.hpp"
#include "abrlab/metrics.hpp"
#include "abrlab/sim.hpp"
#include "abrlab/trace.hpp"

namespace {

namespace fs = std::filesystem;
using namespace abrlab;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

trace::NetworkTrace load_trace_file(const fs::path& file) {
  if (file.extension() == ".csv")
    return trace::parse_csv(io::read_file(file), file.stem().string());
  return trace::load_hsdpa_log(file);
}

// Numeric CSV columns; a non-numeric first row is treated as a header.
std::vector<std::vector<double>> load_numeric_csv(const fs::path& file) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(io::read_file(file));
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used == 0) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (rows.empty()) continue;
      throw std::runtime_error("malformed csv line " + std::to_string(line_no) +
                               " in " + file.string());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ladder::ShotRQCurve> load_rq_csv(const fs::path& file) {
  std::istringstream in(io::read_file(file));
  std::string line;
  size_t line_no = 0;
  std::vector<ladder::ShotRQCurve> shots;
  const auto shot_for = [&](int id, double duration) -> ladder::ShotRQCurve& {
    for (auto& s : shots)
      if (s.shot_id == id) {
        if (std::abs(s.duration - duration) > 1e-9)
          throw std::runtime_error("inconsistent duration for shot " +
                                   std::to_string(id));
        return s;
      }
    shots.push_back({id, duration, {}});
    return shots.back();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line.rfind("shot_id", 0) == 0) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6)
      throw std::runtime_error("rq csv line " + std::to_string(line_no) +
                               ": expected 6 columns");
    try {
      ladder::RQPoint p;
      const int shot_id = std::stoi(cells[0]);
      const double duration = std::stod(cells[1]);
      p.resolution_height = std::stoi(cells[2]);
      p.qp = std::stoi(cells[3]);
      p.bits = std::stoll(cells[4]);
      p.quality = std::stod(cells[5]);
      shot_for(shot_id, duration).points.push_back(p);
    } catch (const std::exception&) {
      throw std::runtime_error("rq csv line " + std::to_string(line_no) +
                               ": malformed value");
    }
  }
  std::sort(shots.begin(), shots.end(),
            [](const auto& a, const auto& b) { return a.shot_id < b.shot_id; });
  if (shots.empty()) throw std::runtime_error("no rq points");
  return shots;
}

struct PolicyFlags {
  abr::PolicyConfig config;
  void attach(CLI::App* cmd) {
    cmd->add_option("--reservoir", config.r, "BB reservoir, seconds");
    cmd->add_option("--cushion", config.c, "BB cushion, seconds");
    cmd->add_option("--window", config.w,
                    "throughput estimation window, chunks");
    cmd->add_option("--horizon", config.h, "QB/OQB horizon, seconds");
    cmd->add_option("--bmin", config.b_l, "QB/OQB min buffer, seconds");
    cmd->add_option("--bmax", config.b_h, "QB/OQB max buffer, seconds");
    cmd->add_option("--btarget", config.b_t, "QB/OQB target buffer, seconds");
  }
};

std::optional<std::pair<double, double>> parse_window(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const auto parts = split_list(s);
  if (parts.size() != 2) throw std::runtime_error("--window expects t0,t1");
  return std::make_pair(std::stod(parts[0]), std::stod(parts[1]));
}

void print_indicators(const sim::SessionLog& log) {
  const metrics::SessionIndicators ind = metrics::indicators(log);
  std::cout << "content " << log.content_id << "\n"
            << "trace " << log.trace_id << "\n"
            << "abr " << log.abr_name << "\n"
            << "n_switches " << ind.n_switches << "\n"
            << "mean_bitrate_kbps " << io::format_double(ind.mean_bitrate)
            << "\n"
            << "n_rebuffers " << ind.n_rebuffers << "\n"
            << "rebuffer_time_s " << io::format_double(ind.rebuffer_time)
            << "\n"
            << "mean_chunk_quality "
            << io::format_double(ind.mean_chunk_quality) << "\n"
            << "mean_chunk_quality_diff "
            << io::format_double(ind.mean_chunk_quality_diff) << "\n"
            << "startup_delay_s " << io::format_double(log.startup_delay)
            << "\n"
            << "wall_time_s " << io::format_double(log.wall_time) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"abrlab: deterministic adaptive-streaming laboratory"};
  app.require_subcommand(1);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "run one playout session");
  std::string sim_map, sim_trace, sim_abr = "bb", sim_out;
  int sim_prefetch = 1;
  PolicyFlags sim_policy;
  sim_cmd->add_option("--chunk-map", sim_map, "chunk map JSON")->required();
  sim_cmd->add_option("--trace", sim_trace, "trace log or CSV")->required();
  sim_cmd->add_option("--abr", sim_abr, "bb|rb|qb|oqb");
  sim_cmd->add_option("--prefetch", sim_prefetch, "prefetched chunks");
  sim_cmd->add_option("--out", sim_out, "write session.json + series.csv");
  sim_policy.attach(sim_cmd);

  // grid
  auto* grid_cmd = app.add_subcommand("grid", "contents x traces x adaptors");
  std::string grid_maps, grid_traces, grid_abrs = "bb,rb,qb,oqb", grid_out;
  int grid_par = 1, grid_prefetch = 1;
  PolicyFlags grid_policy;
  grid_cmd->add_option("--chunk-maps", grid_maps, "comma-separated JSON files")
      ->required();
  grid_cmd->add_option("--traces", grid_traces, "comma-separated trace files")
      ->required();
  grid_cmd->add_option("--abrs", grid_abrs, "comma-separated policy names");
  grid_cmd->add_option("--out", grid_out,
                       "output root (default: $ABR_LAB_OUT)");
  grid_cmd->add_option("--parallelism", grid_par, "worker threads");
  grid_cmd->add_option("--prefetch", grid_prefetch, "prefetched chunks");
  grid_policy.attach(grid_cmd);

  // ladder
  auto* ladder_cmd =
      app.add_subcommand("ladder", "hulls, budgets, chunk map from RQ points");
  std::string ladder_rq, ladder_out, ladder_content = "content";
  int ladder_rungs = 0;
  ladder_cmd->add_option("--rq", ladder_rq, "RQ points CSV")->required();
  ladder_cmd->add_option("--rungs", ladder_rungs, "ladder rungs")->required();
  ladder_cmd->add_option("--content-id", ladder_content, "chunk map name");
  ladder_cmd->add_option("--out", ladder_out, "write chunk map JSON here");

  // trace-stats
  auto* stats_cmd = app.add_subcommand("trace-stats", "trace statistics row");
  std::string stats_file, stats_window;
  stats_cmd->add_option("file", stats_file, "trace log or CSV")->required();
  stats_cmd->add_option("--window", stats_window, "crop to t0,t1 seconds");

  // features
  auto* feat_cmd =
      app.add_subcommand("features", "QoE features from a session log");
  std::string feat_session;
  bool feat_continuous = false;
  double feat_interval = 0.25;
  feat_cmd->add_option("--session", feat_session, "session.json")->required();
  feat_cmd->add_flag("--continuous", feat_continuous,
                     "continuous timelines instead of retrospective row");
  feat_cmd->add_option("--interval", feat_interval, "timeline step, seconds");

  // splits
  auto* splits_cmd =
      app.add_subcommand("splits", "all 21 train/test trace splits");
  std::string splits_traces, splits_out;
  splits_cmd->add_option("--traces", splits_traces, "7 comma-separated ids")
      ->required();
  splits_cmd->add_option("--out", splits_out, "write JSON here");

  // eval
  auto* eval_cmd =
      app.add_subcommand("eval", "SROCC, RMSE, outage rate of predictions");
  std::string eval_pred, eval_truth;
  eval_cmd->add_option("--pred", eval_pred, "predictions CSV (one column)")
      ->required();
  eval_cmd
      ->add_option("--truth", eval_truth,
                   "ground truth CSV (truth[,ci_halfwidth])")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sim_cmd) {
      sim::SessionConfig cfg;
      cfg.prefetch_chunks = sim_prefetch;
      cfg.policy = abr::policy_from_name(sim_abr);
      cfg.policy_config = sim_policy.config;
      cfg.trace = load_trace_file(sim_trace);
      cfg.chunk_map = io::load_chunk_map(sim_map);
      const sim::SessionLog log = sim::simulate(cfg);
      print_indicators(log);
      if (!sim_out.empty()) {
        fs::create_directories(sim_out);
        io::write_file(fs::path(sim_out) / "session.json",
                       io::session_log_to_json(log));
        io::write_file(fs::path(sim_out) / "series.csv", sim::series_csv(log));
      }
      return 0;
    }
    if (*grid_cmd) {
      grid::ExperimentSpec spec;
      for (const auto& f : split_list(grid_maps))
        spec.chunk_map_files.push_back(f);
      for (const auto& f : split_list(grid_traces))
        spec.trace_files.push_back(f);
      for (const auto& name : split_list(grid_abrs))
        spec.abrs.push_back(abr::policy_from_name(name));
      spec.policy_config = grid_policy.config;
      spec.prefetch_chunks = grid_prefetch;
      spec.parallelism = grid_par;
      if (grid_out.empty()) {
        const char* env = std::getenv("ABR_LAB_OUT");
        if (env != nullptr) grid_out = env;
      }
      if (grid_out.empty())
        throw std::runtime_error("grid needs --out or ABR_LAB_OUT");
      spec.out_dir = grid_out;
      const grid::GridResult res = grid::run_grid(spec);
      std::cout << "cells " << res.n_cells << "\n"
                << "failed " << res.n_failed << "\n"
                << "out " << res.out_dir.string() << "\n";
      for (const auto& f : res.failures) std::cerr << "failed " << f << "\n";
      return res.n_failed == 0 ? 0 : 1;
    }
    if (*ladder_cmd) {
      const auto shots = ladder::build_hulls(load_rq_csv(ladder_rq));
      const ladder::LadderResult lad =
          ladder::build_bitrate_ladder(shots, ladder_rungs);
      if (lad.flat_quality) std::cerr << "warning: flat quality range\n";
      double total_dur = 0.0;
      for (const auto& s : shots) total_dur += s.duration;
      std::cout << "budget_bits,mean_quality,mean_kbps\n";
      for (int64_t b : lad.budgets) {
        const ladder::SelectResult sel = ladder::do_select(shots, b);
        std::cout << b << "," << io::format_double(sel.achieved_mean_quality)
                  << ","
                  << io::format_double(double(b) / total_dur / 1000.0) << "\n";
      }
      if (!ladder_out.empty()) {
        const ladder::ChunkMap map =
            ladder::build_chunk_map(shots, lad.budgets, ladder_content);
        io::write_file(ladder_out, io::chunk_map_to_json(map));
      }
      return 0;
    }
    if (*stats_cmd) {
      trace::NetworkTrace tr = load_trace_file(stats_file);
      if (const auto win = parse_window(stats_window))
        tr = trace::crop(tr, win->first, win->second);
      const trace::TraceStats st = trace::stats(tr);
      std::cout << "trace,min_kbps,max_kbps,mean_kbps,std_kbps,cov\n"
                << tr.trace_id << "," << io::format_double(st.min_kbps) << ","
                << io::format_double(st.max_kbps) << ","
                << io::format_double(st.mean_kbps) << ","
                << io::format_double(st.std_kbps) << ","
                << io::format_double(st.cov) << "\n";
      return 0;
    }
    if (*feat_cmd) {
      const sim::SessionLog log = io::load_session_log(feat_session);
      if (feat_continuous) {
        std::cout << metrics::continuous_csv(
            metrics::continuous_features(log, feat_interval));
      } else {
        std::cout << metrics::features_csv_header() << "\n"
                  << metrics::features_csv_row(log) << "\n";
      }
      return 0;
    }
    if (*splits_cmd) {
      const auto splits = metrics::trace_splits(split_list(splits_traces));
      const std::string text = io::splits_to_json(splits);
      if (splits_out.empty())
        std::cout << text;
      else
        io::write_file(splits_out, text);
      return 0;
    }
    if (*eval_cmd) {
      const auto pred_rows = load_numeric_csv(eval_pred);
      const auto truth_rows = load_numeric_csv(eval_truth);
      std::vector<double> pred, truth, ci;
      for (const auto& r : pred_rows) {
        if (r.empty()) continue;
        pred.push_back(r[0]);
      }
      for (const auto& r : truth_rows) {
        if (r.empty()) continue;
        truth.push_back(r[0]);
        ci.push_back(r.size() > 1 ? r[1] : 0.0);
      }
      std::cout << "rmse " << io::format_double(metrics::rmse(pred, truth))
                << "\n"
                << "outage_rate "
                << io::format_double(metrics::outage_rate(pred, truth, ci))
                << "\n";
      if (pred.size() >= 2)
        std::cout << "srocc " << io::format_double(metrics::srocc(pred, truth))
                  << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
