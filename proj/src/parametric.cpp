// Apache License, Version 2.0, refer to LICENSE.txt
#include "atm/parametric.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace atm {

double term_density(const CountTables& counts, int k, int t,
                    const Hyperparameters& hp) {
  const double v = static_cast<double>(counts.vocab_size());
  return (counts.topic_term(k, t) + hp.beta) /
         (counts.topic_total(k) + v * hp.beta);
}

std::vector<double> BlockWeights::normalized() const {
  std::vector<double> out(weights);
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& w : out) w /= total;
  return out;
}

BlockWeights block_weights(const CountTables& counts, const Document& doc,
                           int t, const Hyperparameters& hp) {
  const int k_count = hp.num_topics;
  BlockWeights block;
  block.authors = doc.authors;
  block.num_topics = k_count;
  block.weights.resize(doc.authors.size() * k_count);
  std::size_t cell = 0;
  for (int j : doc.authors) {
    const double denom = counts.author_total(j) + k_count * hp.alpha;
    for (int k = 0; k < k_count; ++k) {
      block.weights[cell++] = (counts.author_topic(j, k) + hp.alpha) / denom *
                              term_density(counts, k, t, hp);
    }
  }
  return block;
}

SweepStats sweep_parametric(MarkovState& state, const Corpus& corpus,
                            const TokenIndex& index, const Hyperparameters& hp,
                            Rng& rng) {
  for (std::size_t d = 0; d < corpus.num_documents(); ++d) {
    const Document& doc = corpus.document(d);
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      decrement(state, corpus, index, d, i);
      const BlockWeights block =
          block_weights(state.counts, doc, doc.tokens[i], hp);
      const std::size_t cell = rng.categorical(block.weights);
      const int j = block.authors[cell / hp.num_topics];
      const int k = static_cast<int>(cell % hp.num_topics);
      increment(state, corpus, index, d, i, k, j);
    }
  }
  return SweepStats{collapsed_log_likelihood(state.counts, hp),
                    corpus.total_tokens(), hp.num_topics};
}

double collapsed_log_likelihood(const CountTables& counts,
                                const Hyperparameters& hp) {
  const int k_count = hp.num_topics;
  const double v = static_cast<double>(counts.vocab_size());
  double ll = 0.0;
  for (int j = 0; j < counts.num_authors(); ++j) {
    ll += std::lgamma(k_count * hp.alpha) -
          std::lgamma(counts.author_total(j) + k_count * hp.alpha);
    for (int k = 0; k < k_count; ++k)
      if (counts.author_topic(j, k) > 0)
        ll += std::lgamma(counts.author_topic(j, k) + hp.alpha) -
              std::lgamma(hp.alpha);
  }
  for (int k = 0; k < k_count; ++k) {
    ll += std::lgamma(v * hp.beta) -
          std::lgamma(counts.topic_total(k) + v * hp.beta);
    for (int t = 0; t < counts.vocab_size(); ++t)
      if (counts.topic_term(k, t) > 0)
        ll += std::lgamma(counts.topic_term(k, t) + hp.beta) -
              std::lgamma(hp.beta);
  }
  return ll;
}

std::vector<std::vector<double>> estimate_theta_parametric(
    const CountTables& counts, const Hyperparameters& hp) {
  const int k_count = hp.num_topics;
  std::vector<std::vector<double>> theta(counts.num_authors(),
                                         std::vector<double>(k_count));
  for (int j = 0; j < counts.num_authors(); ++j) {
    const double denom = counts.author_total(j) + k_count * hp.alpha;
    for (int k = 0; k < k_count; ++k)
      theta[j][k] = (counts.author_topic(j, k) + hp.alpha) / denom;
  }
  return theta;
}

std::vector<std::vector<double>> estimate_phi(const CountTables& counts,
                                              const Hyperparameters& hp,
                                              const std::vector<int>& topics) {
  const int v = counts.vocab_size();
  std::vector<std::vector<double>> phi(topics.size(), std::vector<double>(v));
  for (std::size_t row = 0; row < topics.size(); ++row) {
    const int k = topics[row];
    const double denom = counts.topic_total(k) + v * hp.beta;
    for (int t = 0; t < v; ++t)
      phi[row][t] = (counts.topic_term(k, t) + hp.beta) / denom;
  }
  return phi;
}

ParametricChainResult run_parametric_chain(const Corpus& corpus,
                                           const Hyperparameters& hp,
                                           int iters, int burnin,
                                           std::uint64_t seed) {
  hp.validate(true);
  if (burnin < 0 || iters < burnin)
    throw std::invalid_argument("need iters >= burnin >= 0");
  Rng rng(seed);
  std::vector<int> topics(hp.num_topics);
  std::iota(topics.begin(), topics.end(), 0);
  const TokenIndex index(corpus);
  ParametricChainResult result{init_state(corpus, topics, rng), rng, {}};
  for (int sweep = 0; sweep < iters; ++sweep) {
    const SweepStats stats =
        sweep_parametric(result.state, corpus, index, hp, result.rng);
    if (sweep >= burnin)
      result.log_likelihood_trace.push_back(stats.log_likelihood);
  }
  return result;
}

}  // namespace atm
