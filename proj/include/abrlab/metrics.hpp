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

#ifndef ABRLAB_METRICS_HPP_
#define ABRLAB_METRICS_HPP_

#include <string>
#include <vector>

#include "abrlab/sim.hpp"

namespace abrlab::metrics {

struct SessionIndicators {
  int n_switches = 0;          // consecutive chunks on different streams
  double mean_bitrate = 0.0;   // Kbps, 0-imputed during stalls,
                               // time-weighted over post-startup wall clock
  int n_rebuffers = 0;
  double rebuffer_time = 0.0;  // seconds
  double mean_chunk_quality = 0.0;       // unweighted mean over chunks
  double mean_chunk_quality_diff = 0.0;  // mean |q_{i+1} - q_i|
};

struct SessionFeatures {
  double mean_quality = 0.0;           // duration-weighted, played frames
  double rebuffer_duration = 0.0;      // seconds
  double resolution_switch_mag = 0.0;  // mean |Δheight| over transitions
  double tll = 0.0;  // content seconds from the onset of the last
                     // minimum-quality chunk to the end of playback
};

// Aligned series, one value per `interval` of the post-startup wall
// clock. quality averages played instants only (a fully stalled interval
// reads 0 and is flagged by rebuffering); time_since_rebuffer is sampled
// at the interval end, 0 while stalled, and counts from playback start
// until the first stall; capped at the content duration.
struct ContinuousFeatures {
  double interval = 0.25;  // seconds
  std::vector<double> quality;
  std::vector<bool> rebuffering;       // any stalled instant in interval
  std::vector<double> time_since_rebuffer;  // seconds
};

struct TraceSplit {
  std::vector<std::string> train;  // 5 ids, input order
  std::vector<std::string> test;   // 2 ids
};

SessionIndicators indicators(const sim::SessionLog& log);
SessionFeatures features(const sim::SessionLog& log);
ContinuousFeatures continuous_features(const sim::SessionLog& log,
                                       double interval = 0.25);

// Pearson correlation of fractional (tie-averaged) ranks. Returns NaN on
// a constant input; throws on length mismatch or fewer than 2 samples.
double srocc(const std::vector<double>& x, const std::vector<double>& y);

double rmse(const std::vector<double>& pred, const std::vector<double>& truth);

// Fraction of samples with |pred - truth_mean| > 2 * truth_ci_halfwidth.
double outage_rate(const std::vector<double>& pred,
                   const std::vector<double>& truth_mean,
                   const std::vector<double>& truth_ci_halfwidth);

// All C(7,2) = 21 train/test splits of exactly 7 distinct trace ids;
// test pairs enumerated in lexicographic index order.
std::vector<TraceSplit> trace_splits(const std::vector<std::string>& trace_ids);

// CSV row (no header) matching
// `content,trace,abr,mean_quality,rebuffer_duration,resolution_switch_mag,tll`.
std::string features_csv_header();
std::string features_csv_row(const sim::SessionLog& log);

// CSV `t,quality,rebuffering,time_since_rebuffer`; t is the interval end.
std::string continuous_csv(const ContinuousFeatures& cf);

}  // namespace abrlab::metrics

#endif  // ABRLAB_METRICS_HPP_
