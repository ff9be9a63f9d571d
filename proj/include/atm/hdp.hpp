// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "atm/corpus.hpp"
#include "atm/parametric.hpp"
#include "atm/rng.hpp"
#include "atm/state.hpp"

namespace atm {

// Stable integer topic labels with a recycle list. A label is active iff its
// token count is positive (or it was just created for the current token).
class TopicPool {
 public:
  TopicPool() = default;
  explicit TopicPool(int initial_topics);

  const std::vector<int>& active() const { return active_; }
  const std::vector<int>& retired() const { return retired_; }
  int active_count() const { return static_cast<int>(active_.size()); }
  int label_capacity() const { return next_label_; }
  bool is_active(int label) const;

  // Reuses the most recently retired label when one exists.
  int create();
  void retire(int label);

  // Checkpoint restore.
  static TopicPool restore(std::vector<int> active, std::vector<int> retired,
                           int next_label);

  bool operator==(const TopicPool&) const = default;

 private:
  std::vector<int> active_;   // insertion order
  std::vector<int> retired_;  // recycle stack
  int next_label_ = 0;
};

// Top-level weights: tau over active topic labels plus the continuous-mass
// component tau_new aggregating all unused topics. Sums to one.
struct RootDistribution {
  std::map<int, double> tau;  // keyed by topic label
  double tau_new = 1.0;

  double total() const;
  bool operator==(const RootDistribution&) const = default;
};

struct HdpState {
  MarkovState markov;
  TopicPool pool;
  RootDistribution root;
};

// Unnormalized direct-assignment block weights: existing topics
// get (n_jk + alpha tau_k)/(n_j. + alpha) * term density, the new-topic cell
// gets (alpha tau_new)/(n_j. + alpha) * 1/V. Cell layout: for author slot a,
// topics[0..K) then the new-topic cell, at a*(K+1) + {0..K}.
struct HdpBlockWeights {
  std::vector<int> authors;
  std::vector<int> topics;  // active labels, pool order
  std::vector<double> weights;

  std::size_t stride() const { return topics.size() + 1; }
  double weight(std::size_t a, std::size_t col) const { return weights[a * stride() + col]; }
  std::vector<double> normalized() const;
};

HdpBlockWeights block_weights_hdp(const CountTables& counts,
                                  const TopicPool& pool,
                                  const RootDistribution& root,
                                  const Document& doc, int t,
                                  const Hyperparameters& hp);

// One full sweep. Sampling the new-topic cell instantiates a topic (label
// recycled when possible) and splits tau_new with b ~ Beta(1, gamma); a
// decrement that empties a topic retires it and merges its tau into tau_new.
SweepStats sweep_hdp(HdpState& state, const Corpus& corpus,
                     const TokenIndex& index, const Hyperparameters& hp,
                     Rng& rng);

// Table counts m_k from per-occurrence Bernoulli draws
// m_jkr ~ Bern(alpha tau_k / (r - 1 + alpha tau_k)), r = 1..n_jk.
struct AuxiliaryCounts {
  std::map<int, long> m;  // keyed by active topic label
};

AuxiliaryCounts sample_aux_counts(const CountTables& counts,
                                  const TopicPool& pool,
                                  const RootDistribution& root,
                                  const Hyperparameters& hp, Rng& rng);

// (tau_1..tau_K, tau_new) ~ Dir(m_1,..,m_K, gamma). With no active topics
// the draw degenerates to tau_new = 1.
RootDistribution resample_root(const TopicPool& pool, const AuxiliaryCounts& aux,
                               const Hyperparameters& hp, Rng& rng);

double collapsed_log_likelihood_hdp(const CountTables& counts,
                                    const TopicPool& pool,
                                    const RootDistribution& root,
                                    const Hyperparameters& hp);

struct TauSnapshot {
  std::vector<double> tau;  // active components, pool order
  double tau_new = 0.0;
};

struct HdpChainResult {
  HdpState state;
  Rng rng;
  std::vector<double> log_likelihood_trace;  // post-burn-in
  std::vector<int> active_topics_trace;
  std::vector<TauSnapshot> tau_trace;
};

// Seeded initialization: uniform assignments over the initial topics, tau
// built by the same Beta(1, gamma) stick splits that instantiate topics
// mid-sweep. The first per-sweep root resample replaces it.
HdpState init_hdp_state(const Corpus& corpus, const Hyperparameters& hp,
                        int initial_topics, Rng& rng);

// Alternates sweep_hdp with the root update (sample_aux_counts then
// resample_root) once per sweep; traces are recorded after burn-in.
HdpChainResult run_hdp_chain(const Corpus& corpus, const Hyperparameters& hp,
                             int iters, int burnin, std::uint64_t seed,
                             int initial_topics = 1);

}  // namespace atm
