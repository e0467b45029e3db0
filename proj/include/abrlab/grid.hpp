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

#ifndef ABRLAB_GRID_HPP_
#define ABRLAB_GRID_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "abrlab/abr.hpp"

namespace abrlab::grid {

// One full experiment: contents x traces x adaptors.
struct ExperimentSpec {
  std::vector<std::filesystem::path> chunk_map_files;
  std::vector<std::filesystem::path> trace_files;
  std::vector<abr::PolicyKind> abrs;
  abr::PolicyConfig policy_config;
  int prefetch_chunks = 1;
  std::filesystem::path out_dir;
  int parallelism = 1;
};

struct GridResult {
  std::filesystem::path out_dir;
  size_t n_cells = 0;
  size_t n_failed = 0;
  std::vector<std::string> failures;  // "content/trace/abr: message"
};

// Runs every cell (independently, up to spec.parallelism workers) and
// writes out/<content>/<trace>/<abr>/session.json, per-cell
// indicators.csv and features.csv, aggregate CSVs (per-adaptor means,
// per-second bitrate/buffer timelines with 95% confidence half-widths,
// rebuffer-ratio curves) under out/aggregate/, and manifest.json. Cell
// failures are recorded without aborting. Outputs are byte-identical for
// any parallelism.
GridResult run_grid(const ExperimentSpec& spec);

}  // namespace abrlab::grid

#endif  // ABRLAB_GRID_HPP_
