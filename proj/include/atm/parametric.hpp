// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstddef>
#include <vector>

#include "atm/corpus.hpp"
#include "atm/rng.hpp"
#include "atm/state.hpp"

namespace atm {

// Posterior density of term t under topic k given counts that exclude the
// current token: (n_kt + beta) / (n_k. + V beta).
double term_density(const CountTables& counts, int k, int t,
                    const Hyperparameters& hp);

// Unnormalized joint weights for the (author, topic) block of one token,
// restricted to the document's author set. Cell (a, k) is at
// weights[a * K + k] with a indexing into `authors`.
struct BlockWeights {
  std::vector<int> authors;
  int num_topics = 0;
  std::vector<double> weights;

  double weight(std::size_t a, int k) const { return weights[a * num_topics + k]; }
  std::vector<double> normalized() const;
};

BlockWeights block_weights(const CountTables& counts, const Document& doc,
                           int t, const Hyperparameters& hp);

struct SweepStats {
  double log_likelihood = 0.0;
  std::size_t tokens = 0;
  int active_topics = 0;
};

// One full blocked Gibbs sweep in document order: decrement, sample the
// (author, topic) pair from its exact conditional, increment.
SweepStats sweep_parametric(MarkovState& state, const Corpus& corpus,
                            const TokenIndex& index, const Hyperparameters& hp,
                            Rng& rng);

// Collapsed joint log p(w, z, x) up to an additive constant, from the count
// tables alone. Used for convergence monitoring.
double collapsed_log_likelihood(const CountTables& counts,
                                const Hyperparameters& hp);

// Posterior-mean estimators. Rows are probability distributions.
std::vector<std::vector<double>> estimate_theta_parametric(
    const CountTables& counts, const Hyperparameters& hp);
std::vector<std::vector<double>> estimate_phi(const CountTables& counts,
                                              const Hyperparameters& hp,
                                              const std::vector<int>& topics);

struct ParametricChainResult {
  MarkovState state;
  Rng rng;
  std::vector<double> log_likelihood_trace;  // post-burn-in, one per sweep
};

ParametricChainResult run_parametric_chain(const Corpus& corpus,
                                           const Hyperparameters& hp,
                                           int iters, int burnin,
                                           std::uint64_t seed);

}  // namespace atm
