// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace atm {

struct IngestionOptions {
  // Drop zero-token documents (reporting the count) instead of failing.
  bool drop_empty_documents = true;
};

struct Document {
  std::string id;
  std::vector<int> tokens;   // term indices in [0, V)
  std::vector<int> authors;  // author indices in [0, J), non-empty, distinct
};

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Immutable tokenized corpus. Vocabulary and author indices are assigned in
// first-occurrence order, so loading the same file twice yields identical
// contents. Safe to share across concurrently running chains.
class Corpus {
 public:
  Corpus(std::vector<Document> documents, std::vector<std::string> terms,
         std::vector<std::string> authors);

  std::size_t num_documents() const { return documents_.size(); }
  std::size_t vocab_size() const { return terms_.size(); }
  std::size_t num_authors() const { return author_names_.size(); }
  std::size_t total_tokens() const { return total_tokens_; }

  const Document& document(std::size_t d) const { return documents_.at(d); }
  const std::vector<Document>& documents() const { return documents_; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::string>& author_names() const { return author_names_; }

  const std::string& term_of(int index) const;
  const std::string& author_of(int index) const;
  int index_of_term(const std::string& term) const;    // -1 when absent
  int index_of_author(const std::string& name) const;  // -1 when absent

 private:
  std::vector<Document> documents_;
  std::vector<std::string> terms_;
  std::vector<std::string> author_names_;
  std::unordered_map<std::string, int> term_index_;
  std::unordered_map<std::string, int> author_index_;
  std::size_t total_tokens_ = 0;
};

struct LoadResult {
  Corpus corpus;
  std::size_t dropped_empty_documents = 0;
};

// Reads a JSON Lines corpus file: one object per line with exactly the keys
// "id" (string), "authors" (non-empty array of distinct strings) and
// "tokens" (array of strings). Unknown keys are a hard error.
LoadResult load_corpus(const std::string& path,
                       const IngestionOptions& options = {});

// Builds a corpus from in-memory records (id, author names, token strings),
// same index-assignment rules as load_corpus. Used by oracles and tests.
LoadResult build_corpus(
    const std::vector<std::tuple<std::string, std::vector<std::string>,
                                 std::vector<std::string>>>& records,
    const IngestionOptions& options = {});

}  // namespace atm
