// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atm/corpus.hpp"
#include "atm/state.hpp"

namespace atm {

// Independent correctness checks for the samplers. Each oracle computes its
// reference side without touching the sampler code paths it validates.

// ---- Exact enumeration (parametric) ---------------------------------------
// Enumerates every joint (z, x) assignment of a tiny corpus, computes each
// state's collapsed posterior mass by direct lgamma arithmetic, and compares
// against the empirical distribution of post-burn-in Gibbs sweeps.
struct EnumerationOracleResult {
  std::size_t num_states = 0;
  double total_variation = 0.0;
  bool pass = false;  // total_variation < 0.01
};

// Two documents, two tokens each, V=2, J=2: "x x" by {a, b}, "y y" by {a}.
Corpus builtin_enumeration_corpus();

// Refuses corpora with more than 10^6 joint assignment states.
EnumerationOracleResult run_enumeration_oracle(const Corpus& corpus,
                                               const Hyperparameters& hp,
                                               int sweeps = 100000,
                                               int burnin = 1000,
                                               std::uint64_t seed = 42);

// ---- Geweke joint-distribution test (HDP) ----------------------------------
// Forward simulation draws (tau, z, x, w) from the prior over a fixed corpus
// skeleton; the successive-conditional chain alternates data resampling with
// the HDP transition operator. Both target the same joint, so the tracked
// statistics must agree.
struct GewekeStatistic {
  std::string name;
  double forward_mean = 0.0;
  double successive_mean = 0.0;
  double z_score = 0.0;
};

struct GewekeOracleResult {
  std::vector<GewekeStatistic> statistics;  // K_active, max tau_k
  bool pass = false;                        // every |z| < 4
};

GewekeOracleResult run_geweke_oracle(int samples = 10000,
                                     std::uint64_t seed = 42);

// ---- Synthetic recovery (HDP) ----------------------------------------------
// Generates a corpus from well-separated ground-truth topics and checks that
// the HDP chain recovers the topic count and the topic-term rows.
struct SyntheticOracleResult {
  int k_active_mode = 0;
  double top_token_share = 0.0;    // tokens in the top `true_topics` topics
  double mean_best_cosine = 0.0;   // best-matched phi rows vs ground truth
  bool pass = false;
};

SyntheticOracleResult run_synthetic_oracle(int true_topics = 3,
                                           std::uint64_t seed = 42);

}  // namespace atm
