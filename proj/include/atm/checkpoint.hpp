// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <string>

#include "atm/corpus.hpp"
#include "atm/hdp.hpp"
#include "atm/state.hpp"

namespace atm {

// Self-describing run snapshot: hyperparameters, the corpus itself, all
// assignments, topic pool and root distribution (HDP), and the RNG state.
// Loading a checkpoint and continuing is bit-identical to an uninterrupted
// run. Count tables are rebuilt from assignments on load.
struct Checkpoint {
  std::string model;  // "parametric" or "hdp"
  Hyperparameters hp;
  Corpus corpus;
  Assignments assignments;
  TopicPool pool;         // parametric: labels 0..K-1
  RootDistribution root;  // hdp only; parametric keeps the default
  std::string rng_state;
  long sweeps_completed = 0;
  int initial_topics = 1;  // hdp only

  MarkovState rebuild_state() const;
};

std::string checkpoint_to_json(const Checkpoint& cp);
void save_checkpoint(const Checkpoint& cp, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace atm
