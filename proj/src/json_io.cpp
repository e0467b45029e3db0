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

#include "abrlab/json_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace abrlab::io {

using nlohmann::json;

namespace {

json chunk_map_json(const ladder::ChunkMap& map) {
  json j;
  j["content_id"] = map.content_id;
  j["shot_durations"] = map.shot_durations;
  j["streams"] = json::array();
  for (const auto& row : map.streams) {
    json segs = json::array();
    for (const auto& s : row.segments) {
      segs.push_back({{"shot_id", s.shot_id},
                      {"duration", s.duration},
                      {"bits", s.bits},
                      {"bitrate_kbps", s.bitrate_kbps},
                      {"resolution_height", s.resolution_height},
                      {"quality", s.quality}});
    }
    j["streams"].push_back({{"segments", std::move(segs)}});
  }
  return j;
}

void validate_chunk_map(const ladder::ChunkMap& map) {
  if (map.streams.empty() || map.shot_durations.empty())
    throw std::runtime_error("invalid chunk map: empty");
  for (const auto& row : map.streams) {
    if (row.segments.size() != map.shot_durations.size())
      throw std::runtime_error("invalid chunk map: ragged streams");
    for (const auto& s : row.segments) {
      const double expect = double(s.bits) / s.duration / 1000.0;
      if (std::abs(s.bitrate_kbps - expect) >
          1e-9 * std::max(1.0, std::abs(expect)))
        throw std::runtime_error("invalid chunk map: inconsistent bitrate");
    }
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string chunk_map_to_json(const ladder::ChunkMap& map) {
  return chunk_map_json(map).dump(2) + "\n";
}

ladder::ChunkMap chunk_map_from_json(const std::string& text) {
  ladder::ChunkMap map;
  try {
    const json j = json::parse(text);
    map.content_id = j.at("content_id").get<std::string>();
    map.shot_durations = j.at("shot_durations").get<std::vector<double>>();
    for (const auto& row : j.at("streams")) {
      ladder::StreamRow r;
      for (const auto& seg : row.at("segments")) {
        ladder::SegmentRecord s;
        s.shot_id = seg.at("shot_id").get<int>();
        s.duration = seg.at("duration").get<double>();
        s.bits = seg.at("bits").get<int64_t>();
        s.bitrate_kbps = seg.at("bitrate_kbps").get<double>();
        s.resolution_height = seg.at("resolution_height").get<int>();
        s.quality = seg.at("quality").get<double>();
        r.segments.push_back(s);
      }
      map.streams.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("invalid chunk map: ") + e.what());
  }
  validate_chunk_map(map);
  return map;
}

ladder::ChunkMap load_chunk_map(const std::filesystem::path& file) {
  return chunk_map_from_json(read_file(file));
}

std::string session_log_to_json(const sim::SessionLog& log) {
  json j;
  j["schema"] = 1;
  j["content_id"] = log.content_id;
  j["trace_id"] = log.trace_id;
  j["abr"] = log.abr_name;
  j["startup_delay"] = log.startup_delay;
  j["wall_time"] = log.wall_time;
  j["downloads"] = json::array();
  for (const auto& d : log.downloads)
    j["downloads"].push_back({{"chunk_index", d.chunk_index},
                              {"stream_index", d.stream_index},
                              {"t_request", d.t_request},
                              {"t_complete", d.t_complete},
                              {"bits", d.bits}});
  j["rebuffers"] = json::array();
  for (const auto& r : log.rebuffers)
    j["rebuffers"].push_back({{"t_start", r.t_start},
                              {"duration", r.duration},
                              {"before_chunk", r.before_chunk}});
  j["playback"] = json::array();
  for (const auto& p : log.playback)
    j["playback"].push_back({{"chunk_index", p.chunk_index},
                             {"stream_index", p.stream_index},
                             {"t_play_start", p.t_play_start},
                             {"duration", p.duration},
                             {"bitrate_kbps", p.bitrate_kbps},
                             {"quality", p.quality},
                             {"resolution_height", p.resolution_height}});
  j["buffer_series"] = log.buffer_series;
  j["bitrate_series"] = log.bitrate_series;
  j["quality_series"] = log.quality_series;
  j["stalled_series"] = log.stalled_series;
  return j.dump(2) + "\n";
}

sim::SessionLog session_log_from_json(const std::string& text) {
  sim::SessionLog log;
  try {
    const json j = json::parse(text);
    if (j.at("schema").get<int>() != 1)
      throw std::runtime_error("unsupported session log schema");
    log.content_id = j.at("content_id").get<std::string>();
    log.trace_id = j.at("trace_id").get<std::string>();
    log.abr_name = j.at("abr").get<std::string>();
    log.startup_delay = j.at("startup_delay").get<double>();
    log.wall_time = j.at("wall_time").get<double>();
    for (const auto& d : j.at("downloads"))
      log.downloads.push_back({d.at("chunk_index").get<size_t>(),
                               d.at("stream_index").get<size_t>(),
                               d.at("t_request").get<double>(),
                               d.at("t_complete").get<double>(),
                               d.at("bits").get<int64_t>()});
    for (const auto& r : j.at("rebuffers"))
      log.rebuffers.push_back({r.at("t_start").get<double>(),
                               r.at("duration").get<double>(),
                               r.at("before_chunk").get<size_t>()});
    for (const auto& p : j.at("playback"))
      log.playback.push_back({p.at("chunk_index").get<size_t>(),
                              p.at("stream_index").get<size_t>(),
                              p.at("t_play_start").get<double>(),
                              p.at("duration").get<double>(),
                              p.at("bitrate_kbps").get<double>(),
                              p.at("quality").get<double>(),
                              p.at("resolution_height").get<int>()});
    log.buffer_series = j.at("buffer_series").get<std::vector<double>>();
    log.bitrate_series = j.at("bitrate_series").get<std::vector<double>>();
    log.quality_series = j.at("quality_series").get<std::vector<double>>();
    log.stalled_series = j.at("stalled_series").get<std::vector<bool>>();
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("invalid session log: ") + e.what());
  }
  return log;
}

sim::SessionLog load_session_log(const std::filesystem::path& file) {
  return session_log_from_json(read_file(file));
}

std::string splits_to_json(const std::vector<metrics::TraceSplit>& splits) {
  json j = json::array();
  for (const auto& sp : splits)
    j.push_back({{"train", sp.train}, {"test", sp.test}});
  return j.dump(2) + "\n";
}

void write_file(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + file.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace abrlab::io
