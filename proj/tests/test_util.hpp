// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <tuple>
#include <vector>

#include "atm/corpus.hpp"
#include "atm/rng.hpp"

namespace atm::test {

inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("atm_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string write_file(const std::filesystem::path& path,
                              const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path.string();
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

// Random corpus over a small vocabulary/author set, for fuzz and property
// tests. Uses build_corpus so index assignment matches file loading.
inline Corpus random_corpus(Rng& rng, int num_docs, int vocab, int num_authors,
                            int min_len = 3, int max_len = 20) {
  std::vector<std::tuple<std::string, std::vector<std::string>,
                         std::vector<std::string>>> records;
  for (int d = 0; d < num_docs; ++d) {
    std::vector<std::string> authors;
    const int count = 1 + static_cast<int>(rng.uniform_int(
                              std::min(3, num_authors)));
    std::vector<int> picked;
    while (static_cast<int>(picked.size()) < count) {
      const int a = static_cast<int>(rng.uniform_int(num_authors));
      bool seen = false;
      for (int p : picked) seen |= p == a;
      if (!seen) picked.push_back(a);
    }
    for (int a : picked) authors.push_back("author" + std::to_string(a));
    const int len =
        min_len + static_cast<int>(rng.uniform_int(max_len - min_len + 1));
    std::vector<std::string> tokens;
    for (int i = 0; i < len; ++i)
      tokens.push_back("term" + std::to_string(rng.uniform_int(vocab)));
    records.emplace_back("doc" + std::to_string(d), authors, tokens);
  }
  return build_corpus(records).corpus;
}

}  // namespace atm::test
