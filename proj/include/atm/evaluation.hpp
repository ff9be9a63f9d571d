// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "atm/corpus.hpp"
#include "atm/hdp.hpp"
#include "atm/state.hpp"

namespace atm {

struct PerplexityResult {
  double perplexity = 0.0;
  std::size_t evaluated_tokens = 0;
  std::size_t skipped_tokens = 0;  // out-of-vocabulary
};

// exp(-(sum log p(w)) / N_eval) with the per-token predictive
// p(w) = (1/|j_d|) sum_{j in j_d} sum_k theta[j][k] phi[k][w]. Held-out token
// and author strings are mapped through the training corpus; unknown terms
// are skipped and counted, unknown authors are an error, as is a held-out
// set whose tokens are all unknown.
PerplexityResult perplexity(const Corpus& heldout, const Corpus& training,
                            const std::vector<std::vector<double>>& theta,
                            const std::vector<std::vector<double>>& phi);

struct TopicEntry {
  int display_index = 0;  // dense rank by descending token count
  int label = 0;          // stable sampler label
  long token_count = 0;
  std::vector<std::pair<std::string, double>> top_terms;  // descending phi
};

struct AuthorEntry {
  std::string name;
  std::vector<std::pair<int, double>> top_topics;  // (display index, theta)
};

struct TopicReport {
  std::vector<TopicEntry> topics;
  std::vector<AuthorEntry> authors;

  std::string to_text() const;
  std::string to_json() const;
};

// Topics ordered by token count descending (label ascending on ties); term
// lists ordered by probability descending with ties broken by term index
// ascending, truncated to top_n (at most V / at most K entries).
TopicReport topic_report(const CountTables& counts,
                         const std::vector<int>& active_topics,
                         const std::vector<std::vector<double>>& theta,
                         const Hyperparameters& hp, const Corpus& corpus,
                         int top_n);

// Posterior-mean author-topic rows for the HDP state, restricted to active
// topics and renormalized: (n_jk + alpha tau_k) / (n_j. + alpha (1 - tau_new)).
std::vector<std::vector<double>> estimate_theta_hdp(const CountTables& counts,
                                                    const TopicPool& pool,
                                                    const RootDistribution& root,
                                                    const Hyperparameters& hp);

}  // namespace atm
