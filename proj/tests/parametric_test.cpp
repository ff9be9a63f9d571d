// Apache License, Version 2.0, refer to LICENSE.txt
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "atm/parametric.hpp"
#include "test_util.hpp"

using namespace atm;

TEST_CASE("term density at zero counts is 1/V") {
  CountTables counts(1, 3, 2);
  Hyperparameters hp;
  hp.beta = 1.0;
  hp.num_topics = 2;
  CHECK(term_density(counts, 0, 0, hp) == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("term density with one observation") {
  CountTables counts(1, 3, 2);
  counts.add(0, 0, 0, +1);  // n_kt = 1, n_k. = 1
  Hyperparameters hp;
  hp.beta = 1.0;
  hp.num_topics = 2;
  CHECK(term_density(counts, 0, 0, hp) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("term density normalizes over the vocabulary") {
  Rng rng(3);
  CountTables counts(2, 7, 3);
  for (int n = 0; n < 40; ++n)
    counts.add(static_cast<int>(rng.uniform_int(2)),
               static_cast<int>(rng.uniform_int(3)),
               static_cast<int>(rng.uniform_int(7)), +1);
  Hyperparameters hp;
  hp.beta = 0.1;
  hp.num_topics = 3;
  for (int k = 0; k < 3; ++k) {
    double sum = 0.0;
    for (int t = 0; t < 7; ++t) sum += term_density(counts, k, t, hp);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("empty state gives a uniform block") {
  CountTables counts(2, 3, 2);
  Hyperparameters hp;
  hp.alpha = 1.0;
  hp.beta = 1.0;
  hp.num_topics = 2;
  Document doc{"d", {0}, {0, 1}};
  const BlockWeights block = block_weights(counts, doc, 0, hp);
  REQUIRE(block.weights.size() == 4);
  for (double w : block.weights)
    CHECK(w == doctest::Approx(block.weights[0]).epsilon(1e-12));
}

TEST_CASE("block weights match direct arithmetic") {
  // Single author, K=2, alpha=beta=1, V=3; one prior token on topic 0 at the
  // sampled term. Weights [1/3, 1/9], normalized [0.75, 0.25].
  CountTables counts(1, 3, 2);
  counts.add(0, 0, 0, +1);
  Hyperparameters hp;
  hp.alpha = 1.0;
  hp.beta = 1.0;
  hp.num_topics = 2;
  Document doc{"d", {0}, {0}};
  const BlockWeights block = block_weights(counts, doc, 0, hp);
  REQUIRE(block.weights.size() == 2);
  CHECK(block.weights[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(block.weights[1] == doctest::Approx(1.0 / 9).epsilon(1e-12));
  const std::vector<double> norm = block.normalized();
  CHECK(norm[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(norm[1] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("non-document authors never appear in the block") {
  CountTables counts(3, 3, 2);
  Hyperparameters hp;
  hp.num_topics = 2;
  Document doc{"d", {0}, {2}};  // author 2 only, out of 3
  const BlockWeights block = block_weights(counts, doc, 0, hp);
  CHECK(block.authors == std::vector<int>{2});
  CHECK(block.weights.size() == 2);
}

TEST_CASE("degenerate block: K=1 single-author sweep leaves counts unchanged") {
  const Corpus corpus =
      build_corpus({{"d1", {"a"}, {"x", "y"}}, {"d2", {"b"}, {"y"}}}).corpus;
  Rng rng(5);
  Hyperparameters hp;
  hp.num_topics = 1;
  MarkovState state = init_state(corpus, {0}, rng);
  const TokenIndex index(corpus);
  const MarkovState before = state;
  sweep_parametric(state, corpus, index, hp, rng);
  CHECK(state == before);
}

TEST_CASE("sweep trajectories are deterministic per seed") {
  Rng seed_rng(6);
  const Corpus corpus = test::random_corpus(seed_rng, 8, 6, 3);
  Hyperparameters hp;
  hp.num_topics = 3;
  const ParametricChainResult a = run_parametric_chain(corpus, hp, 20, 5, 77);
  const ParametricChainResult b = run_parametric_chain(corpus, hp, 20, 5, 77);
  CHECK(a.state.assignments.topic == b.state.assignments.topic);
  CHECK(a.state.assignments.author == b.state.assignments.author);
  CHECK(a.log_likelihood_trace == b.log_likelihood_trace);
}

TEST_CASE("audit passes after every sweep") {
  Rng rng(7);
  const Corpus corpus = test::random_corpus(rng, 10, 8, 4);
  Hyperparameters hp;
  hp.num_topics = 4;
  MarkovState state = init_state(corpus, {0, 1, 2, 3}, rng);
  const TokenIndex index(corpus);
  for (int sweep = 0; sweep < 20; ++sweep) {
    sweep_parametric(state, corpus, index, hp, rng);
    CHECK(audit(state, corpus).clean());
  }
}

TEST_CASE("frozen-state block sampling matches the normalized weights") {
  // Chi-squared test at desk scale: 10^4 categorical draws against the
  // normalized block distribution; critical value for df=5 at p=0.001.
  CountTables counts(2, 4, 3);
  Rng fill(8);
  for (int n = 0; n < 25; ++n)
    counts.add(static_cast<int>(fill.uniform_int(2)),
               static_cast<int>(fill.uniform_int(3)),
               static_cast<int>(fill.uniform_int(4)), +1);
  Hyperparameters hp;
  hp.alpha = 0.7;
  hp.beta = 0.3;
  hp.num_topics = 3;
  Document doc{"d", {1}, {0, 1}};
  const BlockWeights block = block_weights(counts, doc, 1, hp);
  const std::vector<double> p = block.normalized();
  const int draws = 10000;
  std::vector<long> hits(p.size(), 0);
  Rng rng(9);
  for (int n = 0; n < draws; ++n) ++hits[rng.categorical(block.weights)];
  double chi2 = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    const double expected = draws * p[c];
    chi2 += (hits[c] - expected) * (hits[c] - expected) / expected;
  }
  CHECK(chi2 < 20.5);  // chi2_{0.999, df=5}
}

TEST_CASE("swapping topic labels permutes block weights identically") {
  Rng rng(10);
  const Corpus corpus = test::random_corpus(rng, 6, 5, 3);
  Hyperparameters hp;
  hp.num_topics = 3;
  MarkovState state = init_state(corpus, {0, 1, 2}, rng);

  // Rebuild a state with labels 0 and 2 exchanged everywhere.
  MarkovState swapped{state.assignments,
                      CountTables(state.counts.num_authors(),
                                  state.counts.vocab_size(), 3)};
  std::size_t pos = 0;
  for (const Document& doc : corpus.documents())
    for (int t : doc.tokens) {
      int k = state.assignments.topic[pos];
      k = k == 0 ? 2 : k == 2 ? 0 : k;
      swapped.assignments.topic[pos] = k;
      swapped.counts.add(state.assignments.author[pos], k, t, +1);
      ++pos;
    }

  const Document& doc = corpus.document(0);
  const BlockWeights original = block_weights(state.counts, doc, doc.tokens[0], hp);
  const BlockWeights permuted = block_weights(swapped.counts, doc, doc.tokens[0], hp);
  for (std::size_t a = 0; a < original.authors.size(); ++a) {
    CHECK(original.weight(a, 0) == doctest::Approx(permuted.weight(a, 2)).epsilon(1e-12));
    CHECK(original.weight(a, 1) == doctest::Approx(permuted.weight(a, 1)).epsilon(1e-12));
    CHECK(original.weight(a, 2) == doctest::Approx(permuted.weight(a, 0)).epsilon(1e-12));
  }
}

TEST_CASE("theta estimator") {
  Hyperparameters hp;
  hp.alpha = 1.0;
  hp.num_topics = 2;
  CountTables counts(2, 3, 2);
  counts.add(1, 0, 0, +1);
  counts.add(1, 0, 1, +1);  // author 1: n_jk = [2, 0]
  const auto theta = estimate_theta_parametric(counts, hp);
  CHECK(theta[0][0] == doctest::Approx(0.5).epsilon(1e-12));  // prior mean
  CHECK(theta[0][1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(theta[1][0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(theta[1][1] == doctest::Approx(0.25).epsilon(1e-12));
  for (const auto& row : theta)
    CHECK(std::accumulate(row.begin(), row.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("phi estimator") {
  Hyperparameters hp;
  hp.beta = 1.0;
  hp.num_topics = 2;
  CountTables counts(1, 3, 2);
  counts.add(0, 0, 0, +1);  // topic 0: n_kt = [1, 0, 0]
  const auto phi = estimate_phi(counts, hp, {0, 1});
  CHECK(phi[0][0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(phi[0][1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(phi[0][2] == doctest::Approx(0.25).epsilon(1e-12));
  for (int t = 0; t < 3; ++t)
    CHECK(phi[1][t] == doctest::Approx(1.0 / 3).epsilon(1e-12));  // prior mean
  for (const auto& row : phi)
    CHECK(std::accumulate(row.begin(), row.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
}
