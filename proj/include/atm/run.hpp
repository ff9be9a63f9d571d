// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "atm/evaluation.hpp"

namespace atm {

struct RunConfig {
  std::string model;  // "parametric" or "hdp"
  std::string corpus_path;
  std::string heldout_path;  // optional, empty when absent
  int topics = 0;            // K, required iff parametric
  double alpha = 1.0;
  double beta = 0.1;
  double gamma = 1.0;
  int iters = 1000;
  int burnin = 500;
  std::uint64_t seed = 0;
  std::string out_dir;
  int top_n = 10;
  int checkpoint_every = 0;  // 0 = final checkpoint only
  int initial_topics = 1;    // hdp

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct TrainResult {
  std::string checkpoint_path;
  std::string manifest_path;
  std::string trace_path;
  std::string report_json_path;
  std::string report_text_path;
  std::size_t dropped_empty_documents = 0;
};

// Trains a chain and writes manifest.json, trace.csv, checkpoint.json and
// report.{json,txt} into the output directory. Byte-deterministic for a
// fixed config.
TrainResult train_run(const RunConfig& config);

// Loads a checkpoint, evaluates held-out perplexity against its embedded
// training corpus and writes eval.json beside the checkpoint.
PerplexityResult eval_run(const std::string& checkpoint_path,
                          const std::string& heldout_path,
                          std::string* json_out_path = nullptr);

// FNV-1a 64-bit over file bytes, hex-encoded; recorded in the run manifest.
std::string file_hash(const std::string& path);

inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace atm
