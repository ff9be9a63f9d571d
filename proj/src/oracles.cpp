// Apache License, Version 2.0, refer to LICENSE.txt
#include "atm/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "atm/evaluation.hpp"
#include "atm/hdp.hpp"
#include "atm/parametric.hpp"
#include "atm/rng.hpp"

namespace atm {

// ---------------------------------------------------------------------------
// Exact enumeration
// ---------------------------------------------------------------------------

Corpus builtin_enumeration_corpus() {
  return build_corpus({{"d1", {"a", "b"}, {"x", "x"}},
                       {"d2", {"a"}, {"y", "y"}}})
      .corpus;
}

namespace {

// Collapsed joint mass of one full assignment, by direct lgamma arithmetic
// over freshly tallied tables. Deliberately shares no code with the sampler.
double enumeration_log_mass(const std::vector<std::pair<int, int>>& cells,
                            const std::vector<int>& token_terms,
                            std::size_t num_authors, std::size_t vocab,
                            int num_topics, const Hyperparameters& hp) {
  std::vector<long> njk(num_authors * num_topics, 0);
  std::vector<long> nkt(static_cast<std::size_t>(num_topics) * vocab, 0);
  for (std::size_t n = 0; n < cells.size(); ++n) {
    const auto [k, j] = cells[n];
    ++njk[static_cast<std::size_t>(j) * num_topics + k];
    ++nkt[static_cast<std::size_t>(k) * vocab + token_terms[n]];
  }
  double lp = 0.0;
  for (std::size_t j = 0; j < num_authors; ++j) {
    long row = 0;
    for (int k = 0; k < num_topics; ++k) {
      const long c = njk[j * num_topics + k];
      row += c;
      lp += std::lgamma(c + hp.alpha);
    }
    lp -= std::lgamma(row + num_topics * hp.alpha);
  }
  for (int k = 0; k < num_topics; ++k) {
    long row = 0;
    for (std::size_t t = 0; t < vocab; ++t) {
      const long c = nkt[static_cast<std::size_t>(k) * vocab + t];
      row += c;
      lp += std::lgamma(c + hp.beta);
    }
    lp -= std::lgamma(row + static_cast<double>(vocab) * hp.beta);
  }
  return lp;
}

}  // namespace

EnumerationOracleResult run_enumeration_oracle(const Corpus& corpus,
                                               const Hyperparameters& hp,
                                               int sweeps, int burnin,
                                               std::uint64_t seed) {
  hp.validate(true);
  const int num_topics = hp.num_topics;

  // Per-token option lists (topic, author), document order.
  std::vector<std::vector<std::pair<int, int>>> options;
  std::vector<int> token_terms;
  for (const Document& doc : corpus.documents())
    for (int t : doc.tokens) {
      std::vector<std::pair<int, int>> cells;
      for (int k = 0; k < num_topics; ++k)
        for (int j : doc.authors) cells.emplace_back(k, j);
      options.push_back(std::move(cells));
      token_terms.push_back(t);
    }

  double state_count = 1.0;
  for (const auto& cells : options) state_count *= static_cast<double>(cells.size());
  if (state_count > 1e6)
    throw std::invalid_argument(
        "enumeration oracle: corpus has more than 10^6 assignment states");
  const std::size_t num_states = static_cast<std::size_t>(state_count);

  // Exact posterior by exhaustive enumeration, mixed-radix state indexing.
  std::vector<double> log_mass(num_states);
  std::vector<std::pair<int, int>> cells(options.size());
  for (std::size_t s = 0; s < num_states; ++s) {
    std::size_t rest = s;
    for (std::size_t n = 0; n < options.size(); ++n) {
      cells[n] = options[n][rest % options[n].size()];
      rest /= options[n].size();
    }
    log_mass[s] = enumeration_log_mass(cells, token_terms, corpus.num_authors(),
                                       corpus.vocab_size(), num_topics, hp);
  }
  const double max_log = *std::max_element(log_mass.begin(), log_mass.end());
  std::vector<double> exact(num_states);
  double total = 0.0;
  for (std::size_t s = 0; s < num_states; ++s) {
    exact[s] = std::exp(log_mass[s] - max_log);
    total += exact[s];
  }
  for (double& p : exact) p /= total;

  // Sampler side: record the visited state after every post-burn-in sweep.
  Rng rng(seed);
  std::vector<int> topics(num_topics);
  std::iota(topics.begin(), topics.end(), 0);
  MarkovState state = init_state(corpus, topics, rng);
  const TokenIndex index(corpus);
  std::vector<long> visits(num_states, 0);
  for (int sweep = 0; sweep < burnin + sweeps; ++sweep) {
    sweep_parametric(state, corpus, index, hp, rng);
    if (sweep < burnin) continue;
    std::size_t code = 0;
    for (std::size_t n = options.size(); n-- > 0;) {
      const std::pair<int, int> cell{state.assignments.topic[n],
                                     state.assignments.author[n]};
      const auto it =
          std::find(options[n].begin(), options[n].end(), cell);
      code = code * options[n].size() +
             static_cast<std::size_t>(it - options[n].begin());
    }
    ++visits[code];
  }

  EnumerationOracleResult result;
  result.num_states = num_states;
  double tv = 0.0;
  for (std::size_t s = 0; s < num_states; ++s)
    tv += std::abs(static_cast<double>(visits[s]) / sweeps - exact[s]);
  result.total_variation = 0.5 * tv;
  result.pass = result.total_variation < 0.01;
  return result;
}

// ---------------------------------------------------------------------------
// Geweke joint-distribution test
// ---------------------------------------------------------------------------

namespace {

struct GewekeSkeleton {
  int vocab = 5;
  int num_authors = 2;
  std::vector<std::vector<int>> doc_authors{{0}, {1}, {0, 1}};
  int doc_length = 4;
  Hyperparameters hp{1.0, 0.5, 1.0, 0};
};

struct ForwardDraw {
  std::vector<int> z, x, w;  // flat, document order
  std::vector<double> tau;   // per label 0..K-1
  double tau_new = 1.0;
};

// Sequential prior simulation: x uniform over the document's authors, z from
// the per-author Polya urn against lazily revealed sticks, w from the
// per-topic term urn. Independent of the sweep implementation.
ForwardDraw forward_draw(const GewekeSkeleton& sk, Rng& rng) {
  ForwardDraw draw;
  std::vector<std::vector<long>> njk(sk.num_authors);
  for (std::size_t d = 0; d < sk.doc_authors.size(); ++d) {
    const std::vector<int>& authors = sk.doc_authors[d];
    for (int i = 0; i < sk.doc_length; ++i) {
      const int j = authors[rng.uniform_int(authors.size())];
      std::vector<double> weights;
      for (std::size_t k = 0; k < draw.tau.size(); ++k)
        weights.push_back(njk[j][k] + sk.hp.alpha * draw.tau[k]);
      weights.push_back(sk.hp.alpha * draw.tau_new);
      std::size_t k = rng.categorical(weights);
      if (k == draw.tau.size()) {
        const double b = rng.beta(1.0, sk.hp.gamma);
        draw.tau.push_back(b * draw.tau_new);
        draw.tau_new *= 1.0 - b;
        for (auto& row : njk) row.push_back(0);
      }
      draw.z.push_back(static_cast<int>(k));
      draw.x.push_back(j);
      ++njk[j][k];
    }
  }
  const std::size_t num_topics = draw.tau.size();
  std::vector<std::vector<long>> nkt(num_topics, std::vector<long>(sk.vocab, 0));
  std::vector<long> nk(num_topics, 0);
  for (int z : draw.z) {
    std::vector<double> weights(sk.vocab);
    for (int t = 0; t < sk.vocab; ++t)
      weights[t] = nkt[z][t] + sk.hp.beta;
    const int t = static_cast<int>(rng.categorical(weights));
    draw.w.push_back(t);
    ++nkt[z][t];
    ++nk[z];
  }
  return draw;
}

Corpus skeleton_corpus(const GewekeSkeleton& sk, const std::vector<int>& w) {
  std::vector<std::string> terms;
  for (int t = 0; t < sk.vocab; ++t) terms.push_back("t" + std::to_string(t));
  std::vector<std::string> author_names;
  for (int j = 0; j < sk.num_authors; ++j)
    author_names.push_back("a" + std::to_string(j));
  std::vector<Document> docs;
  std::size_t pos = 0;
  for (std::size_t d = 0; d < sk.doc_authors.size(); ++d) {
    Document doc;
    doc.id = "d" + std::to_string(d);
    doc.authors = sk.doc_authors[d];
    for (int i = 0; i < sk.doc_length; ++i) doc.tokens.push_back(w[pos++]);
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(docs), std::move(terms), std::move(author_names));
}

CountTables tally_counts(const GewekeSkeleton& sk, const std::vector<int>& z,
                         const std::vector<int>& x, const std::vector<int>& w,
                         int capacity) {
  CountTables counts(sk.num_authors, sk.vocab, capacity);
  for (std::size_t n = 0; n < z.size(); ++n) counts.add(x[n], z[n], w[n], +1);
  return counts;
}

// Joint draw of all tokens given z: per-topic Polya urn, document order.
std::vector<int> resample_data(const GewekeSkeleton& sk,
                               const std::vector<int>& z, int capacity,
                               Rng& rng) {
  std::vector<std::vector<long>> nkt(capacity, std::vector<long>(sk.vocab, 0));
  std::vector<int> w(z.size());
  for (std::size_t n = 0; n < z.size(); ++n) {
    std::vector<double> weights(sk.vocab);
    for (int t = 0; t < sk.vocab; ++t)
      weights[t] = nkt[z[n]][t] + sk.hp.beta;
    w[n] = static_cast<int>(rng.categorical(weights));
    ++nkt[z[n]][w[n]];
  }
  return w;
}

double max_tau(const RootDistribution& root) {
  double best = 0.0;
  for (const auto& [label, mass] : root.tau) best = std::max(best, mass);
  return best;
}

double mean_of(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
}

double iid_se(const std::vector<double>& xs) {
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / (xs.size() - 1) / xs.size());
}

// Batch-means standard error for the autocorrelated successive chain.
double batch_se(const std::vector<double>& xs, std::size_t num_batches) {
  const std::size_t batch = xs.size() / num_batches;
  std::vector<double> means;
  for (std::size_t b = 0; b < num_batches; ++b) {
    double sum = 0.0;
    for (std::size_t i = b * batch; i < (b + 1) * batch; ++i) sum += xs[i];
    means.push_back(sum / batch);
  }
  return iid_se(means) ;
}

}  // namespace

GewekeOracleResult run_geweke_oracle(int samples, std::uint64_t seed) {
  if (samples < 100)
    throw std::invalid_argument("geweke oracle: need at least 100 samples");
  const GewekeSkeleton sk;
  Rng rng(seed);

  std::vector<double> fwd_k, fwd_tau;
  for (int s = 0; s < samples; ++s) {
    const ForwardDraw draw = forward_draw(sk, rng);
    fwd_k.push_back(static_cast<double>(draw.tau.size()));
    fwd_tau.push_back(*std::max_element(draw.tau.begin(), draw.tau.end()));
  }

  // Successive-conditional chain, seeded from one forward draw.
  ForwardDraw init = forward_draw(sk, rng);
  const int initial_topics = static_cast<int>(init.tau.size());
  std::vector<int> pool_labels(initial_topics);
  std::iota(pool_labels.begin(), pool_labels.end(), 0);
  HdpState state{MarkovState{Assignments{init.z, init.x,
                                         std::vector<char>(init.z.size(), 1)},
                             tally_counts(sk, init.z, init.x, init.w,
                                          initial_topics)},
                 TopicPool::restore(pool_labels, {}, initial_topics),
                 RootDistribution{}};
  for (int k = 0; k < initial_topics; ++k) state.root.tau[k] = init.tau[k];
  state.root.tau_new = init.tau_new;
  std::vector<int> w = init.w;

  std::vector<double> suc_k, suc_tau;
  for (int s = 0; s < samples; ++s) {
    w = resample_data(sk, state.markov.assignments.topic,
                      state.markov.counts.topic_capacity(), rng);
    const Corpus corpus = skeleton_corpus(sk, w);
    state.markov.counts =
        tally_counts(sk, state.markov.assignments.topic,
                     state.markov.assignments.author, w,
                     state.markov.counts.topic_capacity());
    const TokenIndex index(corpus);
    sweep_hdp(state, corpus, index, sk.hp, rng);
    const AuxiliaryCounts aux = sample_aux_counts(
        state.markov.counts, state.pool, state.root, sk.hp, rng);
    state.root = resample_root(state.pool, aux, sk.hp, rng);
    suc_k.push_back(static_cast<double>(state.pool.active_count()));
    suc_tau.push_back(max_tau(state.root));
  }

  const std::size_t num_batches = 100;
  GewekeOracleResult result;
  const auto add_stat = [&](const std::string& name,
                            const std::vector<double>& fwd,
                            const std::vector<double>& suc) {
    GewekeStatistic stat;
    stat.name = name;
    stat.forward_mean = mean_of(fwd);
    stat.successive_mean = mean_of(suc);
    const double se_f = iid_se(fwd);
    const double se_s = batch_se(suc, num_batches);
    stat.z_score = (stat.forward_mean - stat.successive_mean) /
                   std::sqrt(se_f * se_f + se_s * se_s);
    result.statistics.push_back(stat);
  };
  add_stat("k_active", fwd_k, suc_k);
  add_stat("max_tau", fwd_tau, suc_tau);
  result.pass = std::all_of(
      result.statistics.begin(), result.statistics.end(),
      [](const GewekeStatistic& s) { return std::abs(s.z_score) < 4.0; });
  return result;
}

// ---------------------------------------------------------------------------
// Synthetic recovery
// ---------------------------------------------------------------------------

namespace {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / std::sqrt(na * nb);
}

}  // namespace

SyntheticOracleResult run_synthetic_oracle(int true_topics, std::uint64_t seed) {
  if (true_topics < 1)
    throw std::invalid_argument("synthetic oracle: need at least one topic");
  const int vocab = 50;
  const int num_docs = 200;
  const int doc_length = 100;
  const int num_authors = 5;
  if (true_topics > vocab)
    throw std::invalid_argument("synthetic oracle: more topics than terms");

  // Ground-truth topics: uniform over disjoint vocabulary blocks.
  std::vector<std::vector<double>> true_phi(true_topics,
                                            std::vector<double>(vocab, 0.0));
  const int block = vocab / true_topics;
  for (int g = 0; g < true_topics; ++g) {
    const int lo = g * block;
    const int hi = g + 1 == true_topics ? vocab : (g + 1) * block;
    for (int t = lo; t < hi; ++t) true_phi[g][t] = 1.0 / (hi - lo);
  }

  Rng rng(seed);
  std::vector<std::vector<double>> theta(num_authors);
  std::vector<double> unit(true_topics, 1.0);
  for (int j = 0; j < num_authors; ++j) theta[j] = rng.dirichlet(unit);

  std::vector<std::tuple<std::string, std::vector<std::string>,
                         std::vector<std::string>>> records;
  for (int d = 0; d < num_docs; ++d) {
    std::vector<std::string> authors;
    const int first = static_cast<int>(rng.uniform_int(num_authors));
    authors.push_back("a" + std::to_string(first));
    if (rng.bernoulli(0.5)) {
      int second = static_cast<int>(rng.uniform_int(num_authors - 1));
      if (second >= first) ++second;
      authors.push_back("a" + std::to_string(second));
    }
    std::vector<std::string> tokens;
    for (int i = 0; i < doc_length; ++i) {
      const int j = std::stoi(authors[rng.uniform_int(authors.size())].substr(1));
      const int z = static_cast<int>(rng.categorical(theta[j]));
      const int t = static_cast<int>(rng.categorical(true_phi[z]));
      tokens.push_back("w" + std::to_string(t));
    }
    records.emplace_back("d" + std::to_string(d), authors, tokens);
  }
  const Corpus corpus = build_corpus(records).corpus;

  // Re-express the ground-truth rows over the corpus vocabulary order.
  std::vector<std::vector<double>> truth(
      true_topics, std::vector<double>(corpus.vocab_size(), 0.0));
  for (int g = 0; g < true_topics; ++g)
    for (int t = 0; t < vocab; ++t) {
      const int ci = corpus.index_of_term("w" + std::to_string(t));
      if (ci >= 0) truth[g][ci] = true_phi[g][t];
    }

  Hyperparameters hp;
  hp.alpha = 1.0;
  hp.beta = 0.1;
  // Transient low-count topics linger at larger concentrations; 0.3 keeps
  // the posterior mode identifiable at this corpus size.
  hp.gamma = 0.3;
  const HdpChainResult chain = run_hdp_chain(corpus, hp, 500, 250, seed + 1);

  SyntheticOracleResult result;
  std::map<int, int> k_counts;
  for (int k : chain.active_topics_trace) ++k_counts[k];
  int best_count = -1;
  for (const auto& [k, c] : k_counts)
    if (c > best_count) {
      best_count = c;
      result.k_active_mode = k;
    }

  // Top topics by token count in the final state.
  std::vector<int> active = chain.state.pool.active();
  std::sort(active.begin(), active.end(), [&](int a, int b) {
    return chain.state.markov.counts.topic_total(a) >
           chain.state.markov.counts.topic_total(b);
  });
  const int top = std::min<int>(true_topics, static_cast<int>(active.size()));
  long covered = 0;
  std::vector<int> top_labels(active.begin(), active.begin() + top);
  for (int k : top_labels) covered += chain.state.markov.counts.topic_total(k);
  result.top_token_share =
      static_cast<double>(covered) / static_cast<double>(corpus.total_tokens());

  const std::vector<std::vector<double>> phi =
      estimate_phi(chain.state.markov.counts, hp, top_labels);
  // Best matching over permutations of the recovered rows.
  std::vector<int> perm(top);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -1.0;
  do {
    double sum = 0.0;
    for (int g = 0; g < top; ++g) sum += cosine(phi[perm[g]], truth[g]);
    best = std::max(best, sum / top);
  } while (std::next_permutation(perm.begin(), perm.end()));
  result.mean_best_cosine = best;

  result.pass = result.k_active_mode == true_topics &&
                result.top_token_share >= 0.95 &&
                result.mean_best_cosine >= 0.9;
  return result;
}

}  // namespace atm
