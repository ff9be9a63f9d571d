// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "atm/corpus.hpp"
#include "atm/rng.hpp"

namespace atm {

struct Hyperparameters {
  double alpha = 1.0;  // precision / symmetric topic prior
  double beta = 0.1;   // symmetric term prior
  double gamma = 1.0;  // top-level concentration (HDP only)
  int num_topics = 0;  // K, parametric only

  void validate(bool parametric) const;
};

// Per-token topic (z) and author (x) labels, flat over token positions in
// document order. `assigned` guards against double decrement/increment.
struct Assignments {
  std::vector<int> topic;
  std::vector<int> author;
  std::vector<char> assigned;

  bool operator==(const Assignments&) const = default;
};

// Dense count tables. The topic axis is the only dynamic one: capacity grows
// on demand for the HDP sampler; retired labels keep zeroed rows.
class CountTables {
 public:
  CountTables(int num_authors, int vocab_size, int topic_capacity);

  int num_authors() const { return num_authors_; }
  int vocab_size() const { return vocab_size_; }
  int topic_capacity() const { return capacity_; }

  int author_topic(int j, int k) const { return author_topic_[static_cast<std::size_t>(j) * capacity_ + k]; }
  int topic_term(int k, int t) const { return topic_term_[static_cast<std::size_t>(k) * vocab_size_ + t]; }
  long author_total(int j) const { return author_total_[j]; }
  long topic_total(int k) const { return topic_total_[k]; }

  void add(int j, int k, int t, int delta);
  void ensure_topic_capacity(int min_capacity);

  // Fault injection for audit tests: overwrite a single cell, nothing else.
  void poke_author_topic(int j, int k, int value) { author_topic_[static_cast<std::size_t>(j) * capacity_ + k] = value; }
  void poke_topic_term(int k, int t, int value) { topic_term_[static_cast<std::size_t>(k) * vocab_size_ + t] = value; }

  bool operator==(const CountTables&) const = default;

 private:
  int num_authors_;
  int vocab_size_;
  int capacity_;
  std::vector<int> author_topic_;  // J x capacity, author-major
  std::vector<int> topic_term_;    // capacity x V, topic-major
  std::vector<long> author_total_;
  std::vector<long> topic_total_;
};

struct MarkovState {
  Assignments assignments;
  CountTables counts;

  bool operator==(const MarkovState&) const = default;
};

// Token position (d, i) -> flat index lookup, built once per corpus.
class TokenIndex {
 public:
  explicit TokenIndex(const Corpus& corpus);
  std::size_t flat(std::size_t d, std::size_t i) const { return offsets_[d] + i; }
  std::size_t total() const { return total_; }

 private:
  std::vector<std::size_t> offsets_;
  std::size_t total_;
};

// Uniform random initialization over the given topic labels and each
// document's author set; count tables tally the drawn assignments.
MarkovState init_state(const Corpus& corpus, const std::vector<int>& topic_set,
                       Rng& rng);

// The exclusion counts n^{-di} of the collapsed conditionals are realized by
// decrementing the token out of the tables before sampling and incrementing
// the new labels back in afterwards.
void decrement(MarkovState& state, const Corpus& corpus, const TokenIndex& index,
               std::size_t d, std::size_t i);
void increment(MarkovState& state, const Corpus& corpus, const TokenIndex& index,
               std::size_t d, std::size_t i, int k, int j);

struct AuditReport {
  std::vector<std::string> discrepancies;
  bool clean() const { return discrepancies.empty(); }
};

// Recomputes every count table from raw assignments and reports each cell
// that disagrees with the incremental tables, plus broken marginals.
AuditReport audit(const MarkovState& state, const Corpus& corpus);

}  // namespace atm
