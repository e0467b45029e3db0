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

#ifndef ABRLAB_JSON_IO_HPP_
#define ABRLAB_JSON_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "abrlab/ladder.hpp"
#include "abrlab/metrics.hpp"
#include "abrlab/sim.hpp"

namespace abrlab::io {

// Chunk-map JSON: {content_id, shot_durations:[...], streams:
// [{segments:[{shot_id,duration,bits,bitrate_kbps,resolution_height,
// quality}...]}...]}. Streams ordered low to high budget.
std::string chunk_map_to_json(const ladder::ChunkMap& map);
ladder::ChunkMap chunk_map_from_json(const std::string& text);
ladder::ChunkMap load_chunk_map(const std::filesystem::path& file);

// Session-log JSON, versioned with `schema: 1`.
std::string session_log_to_json(const sim::SessionLog& log);
sim::SessionLog session_log_from_json(const std::string& text);
sim::SessionLog load_session_log(const std::filesystem::path& file);

// JSON list of {train:[...], test:[...]}.
std::string splits_to_json(const std::vector<metrics::TraceSplit>& splits);

// Shortest round-trip decimal form shared by every CSV/JSON emitter.
std::string format_double(double value);

void write_file(const std::filesystem::path& file, const std::string& text);
std::string read_file(const std::filesystem::path& file);

}  // namespace abrlab::io

#endif  // ABRLAB_JSON_IO_HPP_
