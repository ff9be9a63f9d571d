// Apache License, Version 2.0, refer to LICENSE.txt
#include "atm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace atm {

PerplexityResult perplexity(const Corpus& heldout, const Corpus& training,
                            const std::vector<std::vector<double>>& theta,
                            const std::vector<std::vector<double>>& phi) {
  const std::size_t num_topics = phi.size();
  PerplexityResult result;
  // Kahan-compensated so the uniform-predictive identity (perplexity == V)
  // holds to machine precision regardless of corpus size.
  double log_sum = 0.0;
  double compensation = 0.0;
  for (const Document& doc : heldout.documents()) {
    std::vector<int> authors;
    for (int a : doc.authors) {
      const int j = training.index_of_author(heldout.author_of(a));
      if (j < 0)
        throw std::invalid_argument("held-out document '" + doc.id +
                                    "' has unknown author '" +
                                    heldout.author_of(a) + "'");
      authors.push_back(j);
    }
    for (int tok : doc.tokens) {
      const int t = training.index_of_term(heldout.term_of(tok));
      if (t < 0) {
        ++result.skipped_tokens;
        continue;
      }
      double p = 0.0;
      for (int j : authors)
        for (std::size_t k = 0; k < num_topics; ++k)
          p += theta[j][k] * phi[k][t];
      p /= static_cast<double>(authors.size());
      const double term = std::log(p) - compensation;
      const double next = log_sum + term;
      compensation = (next - log_sum) - term;
      log_sum = next;
      ++result.evaluated_tokens;
    }
  }
  if (result.evaluated_tokens == 0)
    throw std::invalid_argument(
        "perplexity: every held-out token is out-of-vocabulary");
  result.perplexity =
      std::exp(-log_sum / static_cast<double>(result.evaluated_tokens));
  return result;
}

std::vector<std::vector<double>> estimate_theta_hdp(const CountTables& counts,
                                                    const TopicPool& pool,
                                                    const RootDistribution& root,
                                                    const Hyperparameters& hp) {
  const std::vector<int>& active = pool.active();
  std::vector<std::vector<double>> theta(counts.num_authors(),
                                         std::vector<double>(active.size()));
  const double active_mass = 1.0 - root.tau_new;
  for (int j = 0; j < counts.num_authors(); ++j) {
    const double denom = counts.author_total(j) + hp.alpha * active_mass;
    for (std::size_t col = 0; col < active.size(); ++col)
      theta[j][col] = (counts.author_topic(j, active[col]) +
                       hp.alpha * root.tau.at(active[col])) /
                      denom;
  }
  return theta;
}

TopicReport topic_report(const CountTables& counts,
                         const std::vector<int>& active_topics,
                         const std::vector<std::vector<double>>& theta,
                         const Hyperparameters& hp, const Corpus& corpus,
                         int top_n) {
  if (top_n < 1) throw std::invalid_argument("topic_report: top_n must be >= 1");
  const int v = counts.vocab_size();

  // Rank topics by token count descending, label ascending on ties; the rank
  // becomes the display index.
  std::vector<std::size_t> order(active_topics.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const long ca = counts.topic_total(active_topics[a]);
    const long cb = counts.topic_total(active_topics[b]);
    if (ca != cb) return ca > cb;
    return active_topics[a] < active_topics[b];
  });
  std::vector<int> display_of_col(active_topics.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank)
    display_of_col[order[rank]] = static_cast<int>(rank);

  TopicReport report;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const int label = active_topics[order[rank]];
    TopicEntry entry;
    entry.display_index = static_cast<int>(rank);
    entry.label = label;
    entry.token_count = counts.topic_total(label);
    const double denom = entry.token_count + v * hp.beta;
    std::vector<int> terms(v);
    for (int t = 0; t < v; ++t) terms[t] = t;
    std::sort(terms.begin(), terms.end(), [&](int a, int b) {
      const int ca = counts.topic_term(label, a);
      const int cb = counts.topic_term(label, b);
      if (ca != cb) return ca > cb;
      return a < b;
    });
    const int take = std::min(top_n, v);
    for (int i = 0; i < take; ++i)
      entry.top_terms.emplace_back(
          corpus.term_of(terms[i]),
          (counts.topic_term(label, terms[i]) + hp.beta) / denom);
    report.topics.push_back(std::move(entry));
  }

  for (int j = 0; j < counts.num_authors(); ++j) {
    AuthorEntry entry;
    entry.name = corpus.author_of(j);
    std::vector<std::size_t> cols(active_topics.size());
    for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;
    std::sort(cols.begin(), cols.end(), [&](std::size_t a, std::size_t b) {
      if (theta[j][a] != theta[j][b]) return theta[j][a] > theta[j][b];
      return display_of_col[a] < display_of_col[b];
    });
    const std::size_t take =
        std::min<std::size_t>(static_cast<std::size_t>(top_n), cols.size());
    for (std::size_t i = 0; i < take; ++i)
      entry.top_topics.emplace_back(display_of_col[cols[i]], theta[j][cols[i]]);
    report.authors.push_back(std::move(entry));
  }
  return report;
}

std::string TopicReport::to_text() const {
  std::ostringstream os;
  os << std::setprecision(6) << std::fixed;
  for (const TopicEntry& topic : topics) {
    os << "topic " << topic.display_index << " (label " << topic.label
       << ", tokens " << topic.token_count << ")\n";
    for (const auto& [term, p] : topic.top_terms)
      os << "  " << std::setw(10) << p << "  " << term << "\n";
  }
  for (const AuthorEntry& author : authors) {
    os << "author " << author.name << "\n";
    for (const auto& [topic, p] : author.top_topics)
      os << "  " << std::setw(10) << p << "  topic " << topic << "\n";
  }
  return os.str();
}

std::string TopicReport::to_json() const {
  nlohmann::json j;
  j["topics"] = nlohmann::json::array();
  for (const TopicEntry& topic : topics) {
    nlohmann::json entry;
    entry["display_index"] = topic.display_index;
    entry["label"] = topic.label;
    entry["token_count"] = topic.token_count;
    entry["top_terms"] = nlohmann::json::array();
    for (const auto& [term, p] : topic.top_terms)
      entry["top_terms"].push_back({{"term", term}, {"p", p}});
    j["topics"].push_back(std::move(entry));
  }
  j["authors"] = nlohmann::json::array();
  for (const AuthorEntry& author : authors) {
    nlohmann::json entry;
    entry["name"] = author.name;
    entry["top_topics"] = nlohmann::json::array();
    for (const auto& [topic, p] : author.top_topics)
      entry["top_topics"].push_back({{"topic", topic}, {"p", p}});
    j["authors"].push_back(std::move(entry));
  }
  return j.dump(2);
}

}  // namespace atm
