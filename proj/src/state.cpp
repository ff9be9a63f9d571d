// Apache License, Version 2.0, refer to LICENSE.txt
#include "atm/state.hpp"

#include <algorithm>
#include <stdexcept>

namespace atm {

void Hyperparameters::validate(bool parametric) const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (parametric && num_topics < 1)
    throw std::invalid_argument("topics (K) must be >= 1 for the parametric model");
}

CountTables::CountTables(int num_authors, int vocab_size, int topic_capacity)
    : num_authors_(num_authors),
      vocab_size_(vocab_size),
      capacity_(topic_capacity),
      author_topic_(static_cast<std::size_t>(num_authors) * topic_capacity, 0),
      topic_term_(static_cast<std::size_t>(topic_capacity) * vocab_size, 0),
      author_total_(num_authors, 0),
      topic_total_(topic_capacity, 0) {}

void CountTables::add(int j, int k, int t, int delta) {
  if (j < 0 || j >= num_authors_ || k < 0 || k >= capacity_ || t < 0 ||
      t >= vocab_size_)
    throw std::out_of_range("CountTables::add: cell out of range");
  int& ajk = author_topic_[static_cast<std::size_t>(j) * capacity_ + k];
  int& nkt = topic_term_[static_cast<std::size_t>(k) * vocab_size_ + t];
  if (delta < 0 && (ajk + delta < 0 || nkt + delta < 0 ||
                    author_total_[j] + delta < 0 || topic_total_[k] + delta < 0))
    throw std::logic_error("count table underflow: sampler bug");
  ajk += delta;
  nkt += delta;
  author_total_[j] += delta;
  topic_total_[k] += delta;
}

void CountTables::ensure_topic_capacity(int min_capacity) {
  if (min_capacity <= capacity_) return;
  int new_capacity = std::max(capacity_ * 2, min_capacity);
  std::vector<int> grown(static_cast<std::size_t>(num_authors_) * new_capacity, 0);
  for (int j = 0; j < num_authors_; ++j)
    std::copy_n(author_topic_.begin() + static_cast<std::size_t>(j) * capacity_,
                capacity_,
                grown.begin() + static_cast<std::size_t>(j) * new_capacity);
  author_topic_ = std::move(grown);
  topic_term_.resize(static_cast<std::size_t>(new_capacity) * vocab_size_, 0);
  topic_total_.resize(new_capacity, 0);
  capacity_ = new_capacity;
}

TokenIndex::TokenIndex(const Corpus& corpus) {
  offsets_.reserve(corpus.num_documents());
  std::size_t offset = 0;
  for (const Document& doc : corpus.documents()) {
    offsets_.push_back(offset);
    offset += doc.tokens.size();
  }
  total_ = offset;
}

MarkovState init_state(const Corpus& corpus, const std::vector<int>& topic_set,
                       Rng& rng) {
  if (topic_set.empty()) throw std::invalid_argument("init_state: empty topic set");
  int capacity = 1 + *std::max_element(topic_set.begin(), topic_set.end());
  MarkovState state{
      Assignments{},
      CountTables(static_cast<int>(corpus.num_authors()),
                  static_cast<int>(corpus.vocab_size()), capacity)};
  const std::size_t n = corpus.total_tokens();
  state.assignments.topic.resize(n);
  state.assignments.author.resize(n);
  state.assignments.assigned.assign(n, 1);
  std::size_t pos = 0;
  for (const Document& doc : corpus.documents()) {
    for (int t : doc.tokens) {
      const int k = topic_set[rng.uniform_int(topic_set.size())];
      const int j = doc.authors[rng.uniform_int(doc.authors.size())];
      state.assignments.topic[pos] = k;
      state.assignments.author[pos] = j;
      state.counts.add(j, k, t, +1);
      ++pos;
    }
  }
  return state;
}

void decrement(MarkovState& state, const Corpus& corpus, const TokenIndex& index,
               std::size_t d, std::size_t i) {
  const std::size_t pos = index.flat(d, i);
  if (!state.assignments.assigned[pos])
    throw std::logic_error("decrement: token already decremented");
  const int t = corpus.document(d).tokens[i];
  state.counts.add(state.assignments.author[pos], state.assignments.topic[pos],
                   t, -1);
  state.assignments.assigned[pos] = 0;
}

void increment(MarkovState& state, const Corpus& corpus, const TokenIndex& index,
               std::size_t d, std::size_t i, int k, int j) {
  const std::size_t pos = index.flat(d, i);
  if (state.assignments.assigned[pos])
    throw std::logic_error("increment: token already assigned");
  const Document& doc = corpus.document(d);
  if (std::find(doc.authors.begin(), doc.authors.end(), j) == doc.authors.end())
    throw std::invalid_argument("increment: author " + std::to_string(j) +
                                " is not an author of document '" + doc.id + "'");
  state.counts.add(j, k, doc.tokens[i], +1);
  state.assignments.topic[pos] = k;
  state.assignments.author[pos] = j;
  state.assignments.assigned[pos] = 1;
}

AuditReport audit(const MarkovState& state, const Corpus& corpus) {
  AuditReport report;
  const int num_authors = state.counts.num_authors();
  const int vocab = state.counts.vocab_size();
  const int capacity = state.counts.topic_capacity();
  CountTables expected(num_authors, vocab, capacity);

  std::size_t pos = 0;
  for (std::size_t d = 0; d < corpus.num_documents(); ++d) {
    const Document& doc = corpus.document(d);
    for (std::size_t i = 0; i < doc.tokens.size(); ++i, ++pos) {
      if (!state.assignments.assigned[pos]) {
        report.discrepancies.push_back("token (" + std::to_string(d) + "," +
                                       std::to_string(i) + ") is unassigned");
        continue;
      }
      expected.add(state.assignments.author[pos], state.assignments.topic[pos],
                   doc.tokens[i], +1);
    }
  }

  for (int j = 0; j < num_authors; ++j) {
    for (int k = 0; k < capacity; ++k)
      if (state.counts.author_topic(j, k) != expected.author_topic(j, k))
        report.discrepancies.push_back(
            "n_jk[" + std::to_string(j) + "," + std::to_string(k) + "] = " +
            std::to_string(state.counts.author_topic(j, k)) + ", recomputed " +
            std::to_string(expected.author_topic(j, k)));
    if (state.counts.author_total(j) != expected.author_total(j))
      report.discrepancies.push_back(
          "n_j.[" + std::to_string(j) + "] = " +
          std::to_string(state.counts.author_total(j)) + ", recomputed " +
          std::to_string(expected.author_total(j)));
  }
  for (int k = 0; k < capacity; ++k) {
    for (int t = 0; t < vocab; ++t)
      if (state.counts.topic_term(k, t) != expected.topic_term(k, t))
        report.discrepancies.push_back(
            "n_kt[" + std::to_string(k) + "," + std::to_string(t) + "] = " +
            std::to_string(state.counts.topic_term(k, t)) + ", recomputed " +
            std::to_string(expected.topic_term(k, t)));
    if (state.counts.topic_total(k) != expected.topic_total(k))
      report.discrepancies.push_back(
          "n_k.[" + std::to_string(k) + "] = " +
          std::to_string(state.counts.topic_total(k)) + ", recomputed " +
          std::to_string(expected.topic_total(k)));
  }

  long author_sum = 0, topic_sum = 0;
  for (int j = 0; j < num_authors; ++j) author_sum += state.counts.author_total(j);
  for (int k = 0; k < capacity; ++k) topic_sum += state.counts.topic_total(k);
  const long n = static_cast<long>(corpus.total_tokens());
  if (author_sum != n)
    report.discrepancies.push_back("sum of n_j. is " + std::to_string(author_sum) +
                                   ", expected N = " + std::to_string(n));
  if (topic_sum != n)
    report.discrepancies.push_back("sum of n_k. is " + std::to_string(topic_sum) +
                                   ", expected N = " + std::to_string(n));
  return report;
}

}  // namespace atm
