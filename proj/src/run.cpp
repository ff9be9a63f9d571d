// Apache License, Version 2.0, refer to LICENSE.txt
#include "atm/run.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "atm/checkpoint.hpp"
#include "atm/corpus.hpp"
#include "atm/hdp.hpp"
#include "atm/parametric.hpp"

namespace atm {

void RunConfig::validate() const {
  if (model != "parametric" && model != "hdp")
    throw std::invalid_argument("model: must be 'parametric' or 'hdp'");
  if (corpus_path.empty()) throw std::invalid_argument("corpus: path is required");
  if (model == "parametric" && topics < 1)
    throw std::invalid_argument("topics: required (>= 1) for the parametric model");
  if (model == "hdp" && topics != 0)
    throw std::invalid_argument("topics: only valid for the parametric model");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha: must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("beta: must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma: must be positive");
  if (burnin < 0) throw std::invalid_argument("burnin: must be >= 0");
  if (iters <= burnin) throw std::invalid_argument("iters: must exceed burnin");
  if (out_dir.empty()) throw std::invalid_argument("out: output directory is required");
  if (top_n < 1) throw std::invalid_argument("top-n: must be >= 1");
  if (checkpoint_every < 0)
    throw std::invalid_argument("checkpoint-every: must be >= 0");
  if (initial_topics < 1)
    throw std::invalid_argument("initial-topics: must be >= 1");
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for hashing: " + path);
  std::uint64_t h = 1469598103934665603ULL;
  char buffer[1 << 16];
  while (in.read(buffer, sizeof buffer) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buffer[i]);
      h *= 1099511628211ULL;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016" PRIx64, h);
  return hex;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

nlohmann::json manifest_json(const RunConfig& config, std::size_t dropped) {
  nlohmann::json m;
  m["artifact_version"] = kArtifactVersion;
  m["corpus_hash_fnv1a64"] = file_hash(config.corpus_path);
  m["dropped_empty_documents"] = dropped;
  nlohmann::json c;
  c["model"] = config.model;
  c["corpus"] = config.corpus_path;
  c["heldout"] = config.heldout_path;
  c["topics"] = config.topics;
  c["alpha"] = config.alpha;
  c["beta"] = config.beta;
  c["gamma"] = config.gamma;
  c["iters"] = config.iters;
  c["burnin"] = config.burnin;
  c["seed"] = config.seed;
  c["out"] = config.out_dir;
  c["top_n"] = config.top_n;
  c["checkpoint_every"] = config.checkpoint_every;
  c["initial_topics"] = config.initial_topics;
  m["config"] = std::move(c);
  return m;
}

}  // namespace

TrainResult train_run(const RunConfig& config) {
  config.validate();
  const LoadResult loaded = load_corpus(config.corpus_path);
  const Corpus& corpus = loaded.corpus;

  Hyperparameters hp;
  hp.alpha = config.alpha;
  hp.beta = config.beta;
  hp.gamma = config.gamma;
  hp.num_topics = config.topics;
  const bool parametric = config.model == "parametric";
  hp.validate(parametric);

  std::filesystem::create_directories(config.out_dir);
  const auto out = [&](const std::string& name) {
    return (std::filesystem::path(config.out_dir) / name).string();
  };

  TrainResult result;
  result.dropped_empty_documents = loaded.dropped_empty_documents;
  result.manifest_path = out("manifest.json");
  result.trace_path = out("trace.csv");
  result.checkpoint_path = out("checkpoint.json");
  result.report_json_path = out("report.json");
  result.report_text_path = out("report.txt");

  write_file(result.manifest_path,
             manifest_json(config, loaded.dropped_empty_documents).dump(2) + "\n");

  Rng rng(config.seed);
  const TokenIndex index(corpus);
  std::string trace = "sweep,loglik,k_active\n";

  HdpState hdp_state{MarkovState{Assignments{}, CountTables(1, 1, 1)},
                     TopicPool{}, RootDistribution{}};
  MarkovState parametric_state{Assignments{}, CountTables(1, 1, 1)};
  if (parametric) {
    std::vector<int> topics(hp.num_topics);
    std::iota(topics.begin(), topics.end(), 0);
    parametric_state = init_state(corpus, topics, rng);
  } else {
    hdp_state = init_hdp_state(corpus, hp, config.initial_topics, rng);
  }

  const auto snapshot = [&](long sweeps_done) {
    Checkpoint cp{config.model,
                  hp,
                  corpus,
                  parametric ? parametric_state.assignments
                             : hdp_state.markov.assignments,
                  parametric ? TopicPool(hp.num_topics) : hdp_state.pool,
                  parametric ? RootDistribution{} : hdp_state.root,
                  rng.save(),
                  sweeps_done,
                  config.initial_topics};
    save_checkpoint(cp, result.checkpoint_path);
  };

  for (int sweep = 0; sweep < config.iters; ++sweep) {
    SweepStats stats;
    if (parametric) {
      stats = sweep_parametric(parametric_state, corpus, index, hp, rng);
    } else {
      stats = sweep_hdp(hdp_state, corpus, index, hp, rng);
      const AuxiliaryCounts aux = sample_aux_counts(
          hdp_state.markov.counts, hdp_state.pool, hdp_state.root, hp, rng);
      hdp_state.root = resample_root(hdp_state.pool, aux, hp, rng);
      stats.active_topics = hdp_state.pool.active_count();
    }
    if (sweep >= config.burnin) {
      trace += std::to_string(sweep) + "," + format_double(stats.log_likelihood) +
               ",";
      if (!parametric) trace += std::to_string(stats.active_topics);
      trace += "\n";
    }
    if (config.checkpoint_every > 0 && (sweep + 1) % config.checkpoint_every == 0)
      snapshot(sweep + 1);
  }

  write_file(result.trace_path, trace);
  snapshot(config.iters);

  const CountTables& counts =
      parametric ? parametric_state.counts : hdp_state.markov.counts;
  std::vector<int> active;
  std::vector<std::vector<double>> theta;
  if (parametric) {
    active.resize(hp.num_topics);
    std::iota(active.begin(), active.end(), 0);
    theta = estimate_theta_parametric(counts, hp);
  } else {
    active = hdp_state.pool.active();
    theta = estimate_theta_hdp(counts, hdp_state.pool, hdp_state.root, hp);
  }
  const TopicReport report =
      topic_report(counts, active, theta, hp, corpus, config.top_n);
  write_file(result.report_json_path, report.to_json() + "\n");
  write_file(result.report_text_path, report.to_text());
  return result;
}

PerplexityResult eval_run(const std::string& checkpoint_path,
                          const std::string& heldout_path,
                          std::string* json_out_path) {
  const Checkpoint cp = load_checkpoint(checkpoint_path);
  const MarkovState state = cp.rebuild_state();
  const LoadResult heldout = load_corpus(heldout_path);

  std::vector<std::vector<double>> theta;
  std::vector<int> active;
  if (cp.model == "parametric") {
    active.resize(cp.hp.num_topics);
    std::iota(active.begin(), active.end(), 0);
    theta = estimate_theta_parametric(state.counts, cp.hp);
  } else {
    active = cp.pool.active();
    theta = estimate_theta_hdp(state.counts, cp.pool, cp.root, cp.hp);
  }
  const std::vector<std::vector<double>> phi =
      estimate_phi(state.counts, cp.hp, active);
  const PerplexityResult result =
      perplexity(heldout.corpus, cp.corpus, theta, phi);

  nlohmann::json j;
  j["checkpoint"] = checkpoint_path;
  j["heldout"] = heldout_path;
  j["perplexity"] = result.perplexity;
  j["evaluated_tokens"] = result.evaluated_tokens;
  j["skipped_tokens"] = result.skipped_tokens;
  const std::string out_path =
      (std::filesystem::path(checkpoint_path).parent_path() / "eval.json")
          .string();
  write_file(out_path, j.dump(2) + "\n");
  if (json_out_path) *json_out_path = out_path;
  return result;
}

}  // namespace atm
