// Apache License, Version 2.0, refer to LICENSE.txt
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atm/checkpoint.hpp"
#include "atm/run.hpp"
#include "test_util.hpp"

using namespace atm;
using atm::test::temp_dir;

namespace {

struct HdpRunEnd {
  std::vector<int> z, x;
  TopicPool pool;
  RootDistribution root;
  std::string rng_state;
};

HdpRunEnd finish(HdpState state, const Corpus& corpus, const Hyperparameters& hp,
                 Rng rng, int sweeps) {
  const TokenIndex index(corpus);
  for (int s = 0; s < sweeps; ++s) {
    sweep_hdp(state, corpus, index, hp, rng);
    const AuxiliaryCounts aux = sample_aux_counts(
        state.markov.counts, state.pool, state.root, hp, rng);
    state.root = resample_root(state.pool, aux, hp, rng);
  }
  return HdpRunEnd{state.markov.assignments.topic, state.markov.assignments.author,
                   state.pool, state.root, rng.save()};
}

}  // namespace

TEST_CASE("checkpoint save/load round trip") {
  Rng rng(1);
  const Corpus corpus = test::random_corpus(rng, 6, 5, 3);
  Hyperparameters hp;
  const HdpChainResult chain = run_hdp_chain(corpus, hp, 10, 0, 2);
  const Checkpoint original{"hdp",
                            hp,
                            corpus,
                            chain.state.markov.assignments,
                            chain.state.pool,
                            chain.state.root,
                            chain.rng.save(),
                            10,
                            1};
  const auto dir = temp_dir("checkpoint_roundtrip");
  save_checkpoint(original, (dir / "cp.json").string());
  const Checkpoint loaded = load_checkpoint((dir / "cp.json").string());
  CHECK(loaded.model == "hdp");
  CHECK(loaded.hp.alpha == hp.alpha);
  CHECK(loaded.hp.beta == hp.beta);
  CHECK(loaded.hp.gamma == hp.gamma);
  CHECK(loaded.corpus.terms() == corpus.terms());
  CHECK(loaded.corpus.author_names() == corpus.author_names());
  CHECK(loaded.assignments.topic == original.assignments.topic);
  CHECK(loaded.assignments.author == original.assignments.author);
  CHECK(loaded.pool == original.pool);
  CHECK(loaded.root == original.root);
  CHECK(loaded.rng_state == original.rng_state);
  CHECK(loaded.sweeps_completed == 10);
  CHECK(loaded.rebuild_state().counts == chain.state.markov.counts);
}

TEST_CASE("resuming an hdp checkpoint is bit-identical to an unbroken run") {
  Rng seed_rng(2);
  const Corpus corpus = test::random_corpus(seed_rng, 8, 6, 3);
  Hyperparameters hp;

  Rng rng(1234);
  const HdpState start = init_hdp_state(corpus, hp, 1, rng);
  const HdpRunEnd unbroken = finish(start, corpus, hp, rng, 10);

  // Interrupted: five sweeps, checkpoint to disk, reload, five more.
  Rng rng2(1234);
  HdpState half_state = init_hdp_state(corpus, hp, 1, rng2);
  const HdpRunEnd half = finish(half_state, corpus, hp, rng2, 5);

  const auto dir = temp_dir("checkpoint_resume");
  Assignments assignments{half.z, half.x, std::vector<char>(half.z.size(), 1)};
  save_checkpoint(Checkpoint{"hdp", hp, corpus, assignments, half.pool,
                             half.root, half.rng_state, 5, 1},
                  (dir / "cp.json").string());
  const Checkpoint loaded = load_checkpoint((dir / "cp.json").string());
  HdpState resumed{loaded.rebuild_state(), loaded.pool, loaded.root};
  Rng rng3(0);
  rng3.load(loaded.rng_state);
  const HdpRunEnd finished = finish(resumed, corpus, hp, rng3, 5);

  CHECK(finished.z == unbroken.z);
  CHECK(finished.x == unbroken.x);
  CHECK(finished.pool == unbroken.pool);
  CHECK(finished.root == unbroken.root);
  CHECK(finished.rng_state == unbroken.rng_state);
}

TEST_CASE("trained model beats the uniform baseline on its own corpus") {
  Rng seed_rng(3);
  const Corpus corpus = test::random_corpus(seed_rng, 20, 10, 4, 5, 20);
  const auto dir = temp_dir("checkpoint_eval");
  std::string jsonl;
  for (const Document& doc : corpus.documents()) {
    jsonl += "{\"id\":\"" + doc.id + "\",\"authors\":[";
    for (std::size_t a = 0; a < doc.authors.size(); ++a)
      jsonl += (a ? ",\"" : "\"") + corpus.author_of(doc.authors[a]) + "\"";
    jsonl += "],\"tokens\":[";
    for (std::size_t t = 0; t < doc.tokens.size(); ++t)
      jsonl += (t ? ",\"" : "\"") + corpus.term_of(doc.tokens[t]) + "\"";
    jsonl += "]}\n";
  }
  const std::string corpus_path = test::write_file(dir / "c.jsonl", jsonl);

  RunConfig config;
  config.model = "hdp";
  config.corpus_path = corpus_path;
  config.iters = 60;
  config.burnin = 30;
  config.seed = 7;
  config.out_dir = (dir / "run").string();
  const TrainResult train = train_run(config);
  std::string eval_path;
  const PerplexityResult ppl =
      eval_run(train.checkpoint_path, corpus_path, &eval_path);
  CHECK(ppl.perplexity < static_cast<double>(corpus.vocab_size()));
  CHECK(ppl.skipped_tokens == 0);
  CHECK(test::read_file(eval_path).find("perplexity") != std::string::npos);
}

TEST_CASE("eval with an unknown held-out author fails") {
  const auto dir = temp_dir("checkpoint_eval_bad_author");
  const std::string corpus_path = test::write_file(
      dir / "c.jsonl",
      "{\"id\":\"d\",\"authors\":[\"a\"],\"tokens\":[\"x\",\"y\",\"x\"]}\n");
  const std::string heldout_path = test::write_file(
      dir / "h.jsonl",
      "{\"id\":\"h\",\"authors\":[\"stranger\"],\"tokens\":[\"x\"]}\n");
  RunConfig config;
  config.model = "parametric";
  config.topics = 2;
  config.corpus_path = corpus_path;
  config.iters = 5;
  config.burnin = 0;
  config.out_dir = (dir / "run").string();
  const TrainResult train = train_run(config);
  CHECK_THROWS_AS(eval_run(train.checkpoint_path, heldout_path),
                  std::invalid_argument);
}

TEST_CASE("config validation names the offending field") {
  RunConfig config;
  config.model = "parametric";
  config.corpus_path = "c.jsonl";
  config.out_dir = "out";
  config.topics = 0;  // required for parametric
  CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("topics"),
                       std::invalid_argument);
  config.model = "hdp";
  config.topics = 3;
  CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("topics"),
                       std::invalid_argument);
  config.topics = 0;
  config.burnin = 10;
  config.iters = 10;
  CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("iters"),
                       std::invalid_argument);
}
