// Result serialization: records go to CSV and/or JSON next to a manifest
// that pins the effective configuration, its hash, and the files written.
//
// CSV columns are fixed: scenario, sample_index, time, entropy_nats,
// entropy_bits, trace_distance, mean_energy, extra. Absent fields stay
// empty, doubles are printed with %.17g so runs can be diffed byte for
// byte, and the extra column holds compact JSON with sorted keys, quoted
// per RFC 4180.
#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "qtherm/errors.hpp"
#include "qtherm/scenarios.hpp"

#ifndef QTHERM_VERSION
#define QTHERM_VERSION "0.0.0"
#endif

namespace qtherm {

enum class OutputFormat { csv, json, both };

inline OutputFormat output_format_from_string(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  if (name == "both") return OutputFormat::both;
  throw ConfigError("output format '" + name + "' must be csv, json, or both");
}

inline std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace detail {

inline std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string csv_quote(const std::string& field) {
  std::string out = "\"";
  for (const char c : field) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

inline nlohmann::json record_to_json(const RunRecord& rec) {
  nlohmann::json j{{"scenario", rec.scenario},
                   {"parameters", rec.parameters},
                   {"extra", rec.extra},
                   {"wall_clock_seconds", rec.wall_clock_seconds}};
  if (rec.sample_index) j["sample_index"] = *rec.sample_index;
  if (rec.time) j["time"] = *rec.time;
  if (rec.entropy_nats) {
    j["entropy_nats"] = *rec.entropy_nats;
    j["entropy_bits"] = *rec.entropy_nats / std::log(2.0);
  }
  if (rec.trace_distance) j["trace_distance"] = *rec.trace_distance;
  if (rec.mean_energy) j["mean_energy"] = *rec.mean_energy;
  return j;
}

}  // namespace detail

inline std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::string out =
      "scenario,sample_index,time,entropy_nats,entropy_bits,trace_distance,"
      "mean_energy,extra\n";
  for (const auto& rec : records) {
    out += rec.scenario;
    out += ',';
    if (rec.sample_index) out += std::to_string(*rec.sample_index);
    out += ',';
    if (rec.time) out += detail::fmt_double(*rec.time);
    out += ',';
    if (rec.entropy_nats) out += detail::fmt_double(*rec.entropy_nats);
    out += ',';
    if (rec.entropy_nats) out += detail::fmt_double(*rec.entropy_nats / std::log(2.0));
    out += ',';
    if (rec.trace_distance) out += detail::fmt_double(*rec.trace_distance);
    out += ',';
    if (rec.mean_energy) out += detail::fmt_double(*rec.mean_energy);
    out += ',';
    out += detail::csv_quote(rec.extra.dump());
    out += '\n';
  }
  return out;
}

inline nlohmann::json records_to_json(const std::vector<RunRecord>& records) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& rec : records) list.push_back(detail::record_to_json(rec));
  return {{"schema", "qtherm-results-v1"}, {"records", std::move(list)}};
}

inline std::string config_hash(const ScenarioConfig& config) {
  const nlohmann::json probe{{"scenario", to_string(config.scenario)},
                             {"parameters", config.parameters}};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(probe.dump())));
  return buf;
}

inline nlohmann::json make_manifest(const ScenarioConfig& config,
                                    const std::vector<RunRecord>& records, int workers,
                                    const std::vector<std::string>& outputs) {
  return {{"artifact", "qtherm"},
          {"version", QTHERM_VERSION},
          {"schema", "qtherm-results-v1"},
          {"scenario", to_string(config.scenario)},
          {"parameters", config.parameters},
          {"config_hash", config_hash(config)},
          {"seed", config.parameters.value("seed", nlohmann::json())},
          {"workers", workers},
          {"record_count", records.size()},
          {"wall_clock_seconds",
           records.empty() ? 0.0 : records.front().wall_clock_seconds},
          {"outputs", outputs}};
}

namespace detail {

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace detail

// Writes the selected formats plus manifest.json into the configured output
// directory and returns the file names written (relative to that directory).
inline std::vector<std::string> write_results(const ScenarioConfig& config,
                                              const std::vector<RunRecord>& records,
                                              OutputFormat format, int workers) {
  const std::filesystem::path dir = config.output_path;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + dir.string() +
                  "': " + ec.message());
  }

  std::vector<std::string> outputs;
  if (format == OutputFormat::csv || format == OutputFormat::both) {
    detail::write_text_file(dir / "results.csv", records_to_csv(records));
    outputs.push_back("results.csv");
  }
  if (format == OutputFormat::json || format == OutputFormat::both) {
    detail::write_text_file(dir / "results.json", records_to_json(records).dump(2) + "\n");
    outputs.push_back("results.json");
  }
  detail::write_text_file(dir / "manifest.json",
                          make_manifest(config, records, workers, outputs).dump(2) + "\n");
  outputs.push_back("manifest.json");
  return outputs;
}

}  // namespace qtherm
