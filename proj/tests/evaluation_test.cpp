// Apache License, Version 2.0, refer to LICENSE.txt
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "atm/evaluation.hpp"
#include "atm/parametric.hpp"
#include "test_util.hpp"

using namespace atm;

namespace {

std::vector<std::vector<double>> uniform_rows(std::size_t rows, std::size_t cols) {
  return std::vector<std::vector<double>>(
      rows, std::vector<double>(cols, 1.0 / static_cast<double>(cols)));
}

}  // namespace

TEST_CASE("uniform predictive gives perplexity exactly V") {
  Rng rng(1);
  const Corpus corpus = test::random_corpus(rng, 10, 7, 3);
  const int num_topics = 4;
  const auto theta = uniform_rows(corpus.num_authors(), num_topics);
  const auto phi = uniform_rows(num_topics, corpus.vocab_size());
  const PerplexityResult result = perplexity(corpus, corpus, theta, phi);
  CHECK(result.perplexity ==
        doctest::Approx(static_cast<double>(corpus.vocab_size())).epsilon(1e-14));
  CHECK(result.skipped_tokens == 0);
  CHECK(result.evaluated_tokens == corpus.total_tokens());
}

TEST_CASE("single topic with the empirical unigram matches the entropy oracle") {
  Rng rng(2);
  const Corpus corpus = test::random_corpus(rng, 12, 5, 2);
  // Independent oracle: unigram entropy from raw token counts.
  std::map<int, long> counts;
  for (const Document& doc : corpus.documents())
    for (int t : doc.tokens) ++counts[t];
  const double n = static_cast<double>(corpus.total_tokens());
  double entropy = 0.0;
  std::vector<std::vector<double>> phi(1,
                                       std::vector<double>(corpus.vocab_size(), 0.0));
  for (const auto& [t, c] : counts) {
    const double p = c / n;
    entropy -= p * std::log(p);
    phi[0][t] = p;
  }
  const auto theta = uniform_rows(corpus.num_authors(), 1);
  const PerplexityResult result = perplexity(corpus, corpus, theta, phi);
  CHECK(result.perplexity == doctest::Approx(std::exp(entropy)).epsilon(1e-10));
}

TEST_CASE("out-of-vocabulary tokens are skipped and counted") {
  const Corpus training =
      build_corpus({{"d", {"a"}, {"x", "y"}}}).corpus;
  const Corpus heldout =
      build_corpus({{"h", {"a"}, {"x", "unseen", "y"}}}).corpus;
  const auto theta = uniform_rows(1, 1);
  const auto phi = uniform_rows(1, 2);
  const PerplexityResult result = perplexity(heldout, training, theta, phi);
  CHECK(result.skipped_tokens == 1);
  CHECK(result.evaluated_tokens == 2);
}

TEST_CASE("all tokens out-of-vocabulary is an error") {
  const Corpus training = build_corpus({{"d", {"a"}, {"x"}}}).corpus;
  const Corpus heldout = build_corpus({{"h", {"a"}, {"unseen"}}}).corpus;
  CHECK_THROWS_AS(
      perplexity(heldout, training, uniform_rows(1, 1), uniform_rows(1, 1)),
      std::invalid_argument);
}

TEST_CASE("unknown held-out author is an error") {
  const Corpus training = build_corpus({{"d", {"a"}, {"x"}}}).corpus;
  const Corpus heldout = build_corpus({{"h", {"stranger"}, {"x"}}}).corpus;
  CHECK_THROWS_AS(
      perplexity(heldout, training, uniform_rows(1, 1), uniform_rows(1, 1)),
      std::invalid_argument);
}

TEST_CASE("perplexity is invariant under document reordering") {
  Rng rng(3);
  const Corpus corpus = test::random_corpus(rng, 8, 6, 3);
  std::vector<std::tuple<std::string, std::vector<std::string>,
                         std::vector<std::string>>> reversed;
  for (std::size_t d = corpus.num_documents(); d-- > 0;) {
    const Document& doc = corpus.document(d);
    std::vector<std::string> authors, tokens;
    for (int a : doc.authors) authors.push_back(corpus.author_of(a));
    for (int t : doc.tokens) tokens.push_back(corpus.term_of(t));
    reversed.emplace_back(doc.id, authors, tokens);
  }
  const Corpus shuffled = build_corpus(reversed).corpus;
  Hyperparameters hp;
  hp.num_topics = 3;
  const ParametricChainResult chain = run_parametric_chain(corpus, hp, 10, 5, 4);
  const auto theta = estimate_theta_parametric(chain.state.counts, hp);
  const auto phi = estimate_phi(chain.state.counts, hp, {0, 1, 2});
  const PerplexityResult a = perplexity(corpus, corpus, theta, phi);
  const PerplexityResult b = perplexity(shuffled, corpus, theta, phi);
  CHECK(a.perplexity == doctest::Approx(b.perplexity).epsilon(1e-12));
}

TEST_CASE("point-mass topic reports its term first") {
  const Corpus corpus = build_corpus({{"d", {"a"}, {"x", "x", "x", "y"}}}).corpus;
  Hyperparameters hp;
  hp.beta = 0.1;
  hp.num_topics = 2;
  CountTables counts(1, 2, 2);
  counts.add(0, 0, 0, +1);
  counts.add(0, 0, 0, +1);
  counts.add(0, 0, 0, +1);  // topic 0: all mass on "x"
  counts.add(0, 1, 1, +1);
  const auto theta = estimate_theta_parametric(counts, hp);
  const TopicReport report = topic_report(counts, {0, 1}, theta, hp, corpus, 2);
  REQUIRE(report.topics.size() == 2);
  CHECK(report.topics[0].label == 0);  // 3 tokens beats 1
  CHECK(report.topics[0].top_terms[0].first == "x");
  CHECK(report.topics[0].top_terms[0].second ==
        doctest::Approx((3 + 0.1) / (3 + 2 * 0.1)).epsilon(1e-12));
}

TEST_CASE("top_n larger than V truncates at V") {
  const Corpus corpus = build_corpus({{"d", {"a"}, {"x", "y"}}}).corpus;
  Hyperparameters hp;
  hp.num_topics = 1;
  CountTables counts(1, 2, 1);
  counts.add(0, 0, 0, +1);
  counts.add(0, 0, 1, +1);
  const auto theta = estimate_theta_parametric(counts, hp);
  const TopicReport report = topic_report(counts, {0}, theta, hp, corpus, 50);
  CHECK(report.topics[0].top_terms.size() == 2);
}

TEST_CASE("equal counts break ties by ascending term index") {
  const Corpus corpus = build_corpus({{"d", {"a"}, {"b", "a", "c"}}}).corpus;
  // First-occurrence order: b=0, a=1, c=2; all counts equal.
  Hyperparameters hp;
  hp.num_topics = 1;
  CountTables counts(1, 3, 1);
  for (int t = 0; t < 3; ++t) counts.add(0, 0, t, +1);
  const auto theta = estimate_theta_parametric(counts, hp);
  const TopicReport report = topic_report(counts, {0}, theta, hp, corpus, 3);
  CHECK(report.topics[0].top_terms[0].first == "b");
  CHECK(report.topics[0].top_terms[1].first == "a");
  CHECK(report.topics[0].top_terms[2].first == "c");
}

TEST_CASE("report generation is a pure function of its inputs") {
  Rng rng(5);
  const Corpus corpus = test::random_corpus(rng, 8, 6, 3);
  Hyperparameters hp;
  hp.num_topics = 3;
  const ParametricChainResult chain = run_parametric_chain(corpus, hp, 10, 0, 6);
  const auto theta = estimate_theta_parametric(chain.state.counts, hp);
  const TopicReport a =
      topic_report(chain.state.counts, {0, 1, 2}, theta, hp, corpus, 4);
  const TopicReport b =
      topic_report(chain.state.counts, {0, 1, 2}, theta, hp, corpus, 4);
  CHECK(a.to_json() == b.to_json());
  CHECK(a.to_text() == b.to_text());
}

TEST_CASE("hdp theta rows are distributions over active topics") {
  Rng rng(7);
  const Corpus corpus = test::random_corpus(rng, 8, 6, 3);
  Hyperparameters hp;
  const HdpChainResult chain = run_hdp_chain(corpus, hp, 20, 10, 8);
  const auto theta = estimate_theta_hdp(chain.state.markov.counts,
                                        chain.state.pool, chain.state.root, hp);
  for (const auto& row : theta) {
    double sum = 0.0;
    for (double p : row) {
      CHECK(p > 0.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}
