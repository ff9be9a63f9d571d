// Apache License, Version 2.0, refer to LICENSE.txt
#include "atm/corpus.hpp"

#include <fstream>
#include <set>
#include <tuple>

#include <json.hpp>

namespace atm {

Corpus::Corpus(std::vector<Document> documents, std::vector<std::string> terms,
               std::vector<std::string> authors)
    : documents_(std::move(documents)),
      terms_(std::move(terms)),
      author_names_(std::move(authors)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!term_index_.emplace(terms_[i], static_cast<int>(i)).second)
      throw CorpusError("duplicate term in vocabulary: " + terms_[i]);
  }
  for (std::size_t i = 0; i < author_names_.size(); ++i) {
    if (!author_index_.emplace(author_names_[i], static_cast<int>(i)).second)
      throw CorpusError("duplicate author name: " + author_names_[i]);
  }
  if (documents_.empty()) throw CorpusError("corpus has no documents");
  if (author_names_.empty()) throw CorpusError("corpus has no authors");
  const int v = static_cast<int>(terms_.size());
  const int j = static_cast<int>(author_names_.size());
  for (const Document& doc : documents_) {
    if (doc.authors.empty())
      throw CorpusError("document '" + doc.id + "' has no authors");
    for (int a : doc.authors)
      if (a < 0 || a >= j)
        throw CorpusError("document '" + doc.id + "' has author index out of range");
    for (int t : doc.tokens)
      if (t < 0 || t >= v)
        throw CorpusError("document '" + doc.id + "' has term index out of range");
    total_tokens_ += doc.tokens.size();
  }
}

const std::string& Corpus::term_of(int index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= terms_.size())
    throw std::out_of_range("term index " + std::to_string(index) +
                            " out of range [0," + std::to_string(terms_.size()) + ")");
  return terms_[static_cast<std::size_t>(index)];
}

const std::string& Corpus::author_of(int index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= author_names_.size())
    throw std::out_of_range("author index " + std::to_string(index) +
                            " out of range [0," + std::to_string(author_names_.size()) + ")");
  return author_names_[static_cast<std::size_t>(index)];
}

int Corpus::index_of_term(const std::string& term) const {
  auto it = term_index_.find(term);
  return it == term_index_.end() ? -1 : it->second;
}

int Corpus::index_of_author(const std::string& name) const {
  auto it = author_index_.find(name);
  return it == author_index_.end() ? -1 : it->second;
}

namespace {

using Record =
    std::tuple<std::string, std::vector<std::string>, std::vector<std::string>>;

LoadResult assemble(const std::vector<Record>& records,
                    const IngestionOptions& options) {
  std::vector<std::string> terms;
  std::vector<std::string> authors;
  std::unordered_map<std::string, int> term_index;
  std::unordered_map<std::string, int> author_index;
  std::vector<Document> documents;
  std::size_t dropped = 0;

  for (const auto& [id, author_names, token_strings] : records) {
    if (author_names.empty())
      throw CorpusError("document '" + id + "' has an empty author list");
    std::set<std::string> seen;
    for (const std::string& a : author_names)
      if (!seen.insert(a).second)
        throw CorpusError("document '" + id + "' lists author '" + a +
                          "' more than once");
    if (token_strings.empty()) {
      if (!options.drop_empty_documents)
        throw CorpusError("document '" + id + "' has no tokens");
      ++dropped;
      continue;
    }
    Document doc;
    doc.id = id;
    for (const std::string& a : author_names) {
      auto [it, inserted] =
          author_index.emplace(a, static_cast<int>(authors.size()));
      if (inserted) authors.push_back(a);
      doc.authors.push_back(it->second);
    }
    for (const std::string& t : token_strings) {
      auto [it, inserted] = term_index.emplace(t, static_cast<int>(terms.size()));
      if (inserted) terms.push_back(t);
      doc.tokens.push_back(it->second);
    }
    documents.push_back(std::move(doc));
  }
  if (documents.empty())
    throw CorpusError("corpus is empty after filtering (" +
                      std::to_string(dropped) + " empty documents dropped)");
  return LoadResult{Corpus(std::move(documents), std::move(terms),
                           std::move(authors)),
                    dropped};
}

}  // namespace

LoadResult load_corpus(const std::string& path, const IngestionOptions& options) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open corpus file: " + path);
  std::vector<Record> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw CorpusError(path + ":" + std::to_string(line_no) +
                        ": malformed JSON: " + e.what());
    }
    const std::string where = path + ":" + std::to_string(line_no);
    if (!obj.is_object()) throw CorpusError(where + ": record is not an object");
    for (const auto& [key, value] : obj.items()) {
      if (key != "id" && key != "authors" && key != "tokens")
        throw CorpusError(where + ": unknown key '" + key + "'");
    }
    if (!obj.contains("id") || !obj["id"].is_string())
      throw CorpusError(where + ": missing or non-string 'id'");
    if (!obj.contains("authors") || !obj["authors"].is_array())
      throw CorpusError(where + ": missing or non-array 'authors'");
    if (!obj.contains("tokens") || !obj["tokens"].is_array())
      throw CorpusError(where + ": missing or non-array 'tokens'");
    Record rec;
    std::get<0>(rec) = obj["id"].get<std::string>();
    for (const auto& a : obj["authors"]) {
      if (!a.is_string())
        throw CorpusError(where + ": non-string entry in 'authors'");
      std::get<1>(rec).push_back(a.get<std::string>());
    }
    for (const auto& t : obj["tokens"]) {
      if (!t.is_string())
        throw CorpusError(where + ": non-string entry in 'tokens'");
      std::get<2>(rec).push_back(t.get<std::string>());
    }
    records.push_back(std::move(rec));
  }
  return assemble(records, options);
}

LoadResult build_corpus(const std::vector<Record>& records,
                        const IngestionOptions& options) {
  return assemble(records, options);
}

}  // namespace atm
