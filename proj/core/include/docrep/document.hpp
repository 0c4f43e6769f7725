#pragma once

#include <string>
#include <vector>

namespace docrep {

/// One labeled input document as read from disk.
struct RawDocument {
  std::string id;
  std::string text;
  std::string label;
  /// "train", "test" or empty; only used by predefined splits.
  std::string split;

  bool operator==(const RawDocument&) const = default;
};

using Sentence = std::vector<std::string>;

/// A document after preprocessing: sentences of lowercase alphabetic stems.
struct ProcessedDocument {
  std::string id;
  std::string label;
  std::vector<Sentence> sentences;

  std::size_t length() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.size();
    return n;
  }

  bool operator==(const ProcessedDocument&) const = default;
};

}  // namespace docrep
