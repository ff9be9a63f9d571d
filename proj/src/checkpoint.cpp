// Apache License, Version 2.0, refer to LICENSE.txt
#include "atm/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace atm {

namespace {
constexpr int kFormatVersion = 1;
}

MarkovState Checkpoint::rebuild_state() const {
  const int capacity = std::max(pool.label_capacity(), 1);
  MarkovState state{assignments,
                    CountTables(static_cast<int>(corpus.num_authors()),
                                static_cast<int>(corpus.vocab_size()), capacity)};
  std::size_t pos = 0;
  for (const Document& doc : corpus.documents())
    for (int t : doc.tokens) {
      if (!assignments.assigned[pos])
        throw std::runtime_error("checkpoint has an unassigned token");
      state.counts.add(assignments.author[pos], assignments.topic[pos], t, +1);
      ++pos;
    }
  return state;
}

std::string checkpoint_to_json(const Checkpoint& cp) {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["model"] = cp.model;
  j["hyperparameters"] = {{"alpha", cp.hp.alpha},
                          {"beta", cp.hp.beta},
                          {"gamma", cp.hp.gamma},
                          {"topics", cp.hp.num_topics}};
  j["corpus"]["terms"] = cp.corpus.terms();
  j["corpus"]["authors"] = cp.corpus.author_names();
  j["corpus"]["documents"] = nlohmann::json::array();
  for (const Document& doc : cp.corpus.documents())
    j["corpus"]["documents"].push_back(
        {{"id", doc.id}, {"authors", doc.authors}, {"tokens", doc.tokens}});
  j["assignments"]["topic"] = cp.assignments.topic;
  j["assignments"]["author"] = cp.assignments.author;
  j["pool"] = {{"active", cp.pool.active()},
               {"retired", cp.pool.retired()},
               {"next_label", cp.pool.label_capacity()}};
  nlohmann::json tau = nlohmann::json::array();
  for (const auto& [label, mass] : cp.root.tau)
    tau.push_back({{"label", label}, {"mass", mass}});
  j["root"] = {{"tau", std::move(tau)}, {"tau_new", cp.root.tau_new}};
  j["rng_state"] = cp.rng_state;
  j["sweeps_completed"] = cp.sweeps_completed;
  j["initial_topics"] = cp.initial_topics;
  return j.dump(2);
}

void save_checkpoint(const Checkpoint& cp, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out << checkpoint_to_json(cp) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed checkpoint " + path + ": " + e.what());
  }
  if (j.at("format_version").get<int>() != kFormatVersion)
    throw std::runtime_error("unsupported checkpoint format version in " + path);

  std::vector<Document> documents;
  for (const auto& doc : j.at("corpus").at("documents")) {
    Document d;
    d.id = doc.at("id").get<std::string>();
    d.authors = doc.at("authors").get<std::vector<int>>();
    d.tokens = doc.at("tokens").get<std::vector<int>>();
    documents.push_back(std::move(d));
  }
  Corpus corpus(std::move(documents),
                j.at("corpus").at("terms").get<std::vector<std::string>>(),
                j.at("corpus").at("authors").get<std::vector<std::string>>());

  Checkpoint cp{j.at("model").get<std::string>(),
                Hyperparameters{},
                std::move(corpus),
                Assignments{},
                TopicPool{},
                RootDistribution{},
                j.at("rng_state").get<std::string>(),
                j.at("sweeps_completed").get<long>(),
                j.value("initial_topics", 1)};
  const auto& hp = j.at("hyperparameters");
  cp.hp.alpha = hp.at("alpha").get<double>();
  cp.hp.beta = hp.at("beta").get<double>();
  cp.hp.gamma = hp.at("gamma").get<double>();
  cp.hp.num_topics = hp.at("topics").get<int>();

  cp.assignments.topic = j.at("assignments").at("topic").get<std::vector<int>>();
  cp.assignments.author = j.at("assignments").at("author").get<std::vector<int>>();
  if (cp.assignments.topic.size() != cp.corpus.total_tokens() ||
      cp.assignments.author.size() != cp.corpus.total_tokens())
    throw std::runtime_error("checkpoint assignment length mismatch in " + path);
  cp.assignments.assigned.assign(cp.assignments.topic.size(), 1);

  cp.pool = TopicPool::restore(
      j.at("pool").at("active").get<std::vector<int>>(),
      j.at("pool").at("retired").get<std::vector<int>>(),
      j.at("pool").at("next_label").get<int>());
  for (const auto& entry : j.at("root").at("tau"))
    cp.root.tau[entry.at("label").get<int>()] = entry.at("mass").get<double>();
  cp.root.tau_new = j.at("root").at("tau_new").get<double>();
  return cp;
}

}  // namespace atm
