// Apache License, Version 2.0, refer to LICENSE.txt
#include "atm/hdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace atm {

TopicPool::TopicPool(int initial_topics) : next_label_(initial_topics) {
  if (initial_topics < 1)
    throw std::invalid_argument("TopicPool: need at least one initial topic");
  active_.resize(initial_topics);
  std::iota(active_.begin(), active_.end(), 0);
}

bool TopicPool::is_active(int label) const {
  return std::find(active_.begin(), active_.end(), label) != active_.end();
}

int TopicPool::create() {
  int label;
  if (!retired_.empty()) {
    label = retired_.back();
    retired_.pop_back();
  } else {
    label = next_label_++;
  }
  active_.push_back(label);
  return label;
}

void TopicPool::retire(int label) {
  auto it = std::find(active_.begin(), active_.end(), label);
  if (it == active_.end())
    throw std::logic_error("TopicPool::retire: label not active");
  active_.erase(it);
  retired_.push_back(label);
}

TopicPool TopicPool::restore(std::vector<int> active, std::vector<int> retired,
                             int next_label) {
  TopicPool pool;
  pool.active_ = std::move(active);
  pool.retired_ = std::move(retired);
  pool.next_label_ = next_label;
  return pool;
}

double RootDistribution::total() const {
  double sum = tau_new;
  for (const auto& [label, mass] : tau) sum += mass;
  return sum;
}

std::vector<double> HdpBlockWeights::normalized() const {
  std::vector<double> out(weights);
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& w : out) w /= total;
  return out;
}

HdpBlockWeights block_weights_hdp(const CountTables& counts,
                                  const TopicPool& pool,
                                  const RootDistribution& root,
                                  const Document& doc, int t,
                                  const Hyperparameters& hp) {
  HdpBlockWeights block;
  block.authors = doc.authors;
  block.topics = pool.active();
  block.weights.resize(doc.authors.size() * block.stride());
  const double new_topic_density = 1.0 / counts.vocab_size();
  std::size_t cell = 0;
  for (int j : doc.authors) {
    const double denom = counts.author_total(j) + hp.alpha;
    for (int k : block.topics) {
      block.weights[cell++] =
          (counts.author_topic(j, k) + hp.alpha * root.tau.at(k)) / denom *
          term_density(counts, k, t, hp);
    }
    block.weights[cell++] = hp.alpha * root.tau_new / denom * new_topic_density;
  }
  return block;
}

namespace {

void retire_topic(HdpState& state, int label) {
  state.pool.retire(label);
  auto it = state.root.tau.find(label);
  state.root.tau_new += it->second;
  state.root.tau.erase(it);
}

int instantiate_topic(HdpState& state, const Hyperparameters& hp, Rng& rng) {
  const int label = state.pool.create();
  state.markov.counts.ensure_topic_capacity(label + 1);
  const double b = rng.beta(1.0, hp.gamma);
  state.root.tau[label] = b * state.root.tau_new;
  state.root.tau_new *= 1.0 - b;
  return label;
}

}  // namespace

SweepStats sweep_hdp(HdpState& state, const Corpus& corpus,
                     const TokenIndex& index, const Hyperparameters& hp,
                     Rng& rng) {
  for (std::size_t d = 0; d < corpus.num_documents(); ++d) {
    const Document& doc = corpus.document(d);
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      const std::size_t pos = index.flat(d, i);
      const int old_topic = state.markov.assignments.topic[pos];
      decrement(state.markov, corpus, index, d, i);
      if (state.markov.counts.topic_total(old_topic) == 0)
        retire_topic(state, old_topic);

      const HdpBlockWeights block = block_weights_hdp(
          state.markov.counts, state.pool, state.root, doc, doc.tokens[i], hp);
      const std::size_t cell = rng.categorical(block.weights);
      const std::size_t stride = block.stride();
      const int j = block.authors[cell / stride];
      const std::size_t col = cell % stride;
      const int k = col < block.topics.size()
                        ? block.topics[col]
                        : instantiate_topic(state, hp, rng);
      increment(state.markov, corpus, index, d, i, k, j);
    }
  }
  return SweepStats{
      collapsed_log_likelihood_hdp(state.markov.counts, state.pool, state.root, hp),
      corpus.total_tokens(), state.pool.active_count()};
}

AuxiliaryCounts sample_aux_counts(const CountTables& counts,
                                  const TopicPool& pool,
                                  const RootDistribution& root,
                                  const Hyperparameters& hp, Rng& rng) {
  AuxiliaryCounts aux;
  for (int k : pool.active()) {
    const double scaled_tau = hp.alpha * root.tau.at(k);
    long m_k = 0;
    bool any = false;
    for (int j = 0; j < counts.num_authors(); ++j) {
      const int n = counts.author_topic(j, k);
      if (n == 0) continue;
      any = true;
      for (int r = 1; r <= n; ++r)
        if (rng.bernoulli(scaled_tau / (r - 1 + scaled_tau))) ++m_k;
    }
    if (any) aux.m[k] = m_k;
  }
  return aux;
}

RootDistribution resample_root(const TopicPool& pool, const AuxiliaryCounts& aux,
                               const Hyperparameters& hp, Rng& rng) {
  RootDistribution root;
  if (pool.active().empty()) {
    root.tau_new = 1.0;
    return root;
  }
  std::vector<double> concentration;
  concentration.reserve(pool.active().size() + 1);
  for (int k : pool.active()) {
    auto it = aux.m.find(k);
    if (it == aux.m.end() || it->second < 1)
      throw std::logic_error("resample_root: active topic " + std::to_string(k) +
                             " has zero table count (bookkeeping bug)");
    concentration.push_back(static_cast<double>(it->second));
  }
  concentration.push_back(hp.gamma);
  const std::vector<double> draw = rng.dirichlet(concentration);
  std::size_t i = 0;
  for (int k : pool.active()) root.tau[k] = draw[i++];
  root.tau_new = draw.back();
  return root;
}

double collapsed_log_likelihood_hdp(const CountTables& counts,
                                    const TopicPool& pool,
                                    const RootDistribution& root,
                                    const Hyperparameters& hp) {
  const double v = static_cast<double>(counts.vocab_size());
  // Author-level prior restricted to active topics; the tau_new component
  // carries no counts and drops out up to a constant.
  double active_mass = 0.0;
  for (int k : pool.active()) active_mass += root.tau.at(k);
  const double prior_sum = hp.alpha * active_mass;
  double ll = 0.0;
  for (int j = 0; j < counts.num_authors(); ++j) {
    ll += std::lgamma(prior_sum) - std::lgamma(counts.author_total(j) + prior_sum);
    for (int k : pool.active()) {
      const double a = hp.alpha * root.tau.at(k);
      if (counts.author_topic(j, k) > 0)
        ll += std::lgamma(counts.author_topic(j, k) + a) - std::lgamma(a);
    }
  }
  for (int k : pool.active()) {
    ll += std::lgamma(v * hp.beta) -
          std::lgamma(counts.topic_total(k) + v * hp.beta);
    for (int t = 0; t < counts.vocab_size(); ++t)
      if (counts.topic_term(k, t) > 0)
        ll += std::lgamma(counts.topic_term(k, t) + hp.beta) -
              std::lgamma(hp.beta);
  }
  return ll;
}

HdpState init_hdp_state(const Corpus& corpus, const Hyperparameters& hp,
                        int initial_topics, Rng& rng) {
  if (initial_topics < 1)
    throw std::invalid_argument("need at least one initial topic");
  HdpState state{MarkovState{Assignments{}, CountTables(1, 1, 1)},
                 TopicPool(initial_topics), RootDistribution{}};
  const std::vector<int> topics(state.pool.active());
  state.markov = init_state(corpus, topics, rng);
  for (int k : topics) {
    const double b = rng.beta(1.0, hp.gamma);
    state.root.tau[k] = b * state.root.tau_new;
    state.root.tau_new *= 1.0 - b;
  }
  return state;
}

HdpChainResult run_hdp_chain(const Corpus& corpus, const Hyperparameters& hp,
                             int iters, int burnin, std::uint64_t seed,
                             int initial_topics) {
  hp.validate(false);
  if (burnin < 0 || iters < burnin)
    throw std::invalid_argument("need iters >= burnin >= 0");
  Rng rng(seed);
  HdpState state = init_hdp_state(corpus, hp, initial_topics, rng);
  const TokenIndex index(corpus);
  HdpChainResult result{std::move(state), rng, {}, {}, {}};
  for (int sweep = 0; sweep < iters; ++sweep) {
    const SweepStats stats =
        sweep_hdp(result.state, corpus, index, hp, result.rng);
    const AuxiliaryCounts aux = sample_aux_counts(
        result.state.markov.counts, result.state.pool, result.state.root, hp,
        result.rng);
    result.state.root = resample_root(result.state.pool, aux, hp, result.rng);
    if (sweep >= burnin) {
      result.log_likelihood_trace.push_back(stats.log_likelihood);
      result.active_topics_trace.push_back(result.state.pool.active_count());
      TauSnapshot snap;
      for (int k : result.state.pool.active())
        snap.tau.push_back(result.state.root.tau.at(k));
      snap.tau_new = result.state.root.tau_new;
      result.tau_trace.push_back(std::move(snap));
    }
  }
  return result;
}

}  // namespace atm
