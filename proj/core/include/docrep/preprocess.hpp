#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "docrep/document.hpp"

namespace docrep {

using Stoplist = std::unordered_set<std::string>;

/// Removes <...> markup (an unterminated '<' drops the rest of the text) and
/// decodes &amp; &lt; &gt; &quot; &apos; and numeric &#NN; / &#xNN; entities.
std::string strip_tags(std::string_view text);

/// Sentences end at '.', '!' or '?'. Tokens are maximal runs of ASCII letters,
/// lowercased. Sentences without tokens are dropped.
std::vector<Sentence> segment_and_tokenize(std::string_view text);

/// Order-preserving filter.
std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const Stoplist& stoplist);

/// Porter (1980) suffix-stripping stemmer, steps 1a through 5b. Input must be
/// lowercase ASCII letters; words of one or two letters are returned unchanged.
std::string porter_stem(std::string_view word);

/// The bundled English stopword list (127 words).
const Stoplist& default_stoplist();
const std::vector<std::string>& default_stopwords();

/// One word per line; blank lines and lines starting with '#' are ignored.
Stoplist load_stoplist(const std::filesystem::path& path);

struct PreprocessConfig {
  /// Empty means the bundled list.
  std::optional<std::filesystem::path> stopword_path;
  bool strip_html = false;
  std::size_t min_token_len = 1;
};

/// Resolves the stoplist named by the config (file or bundled default).
Stoplist resolve_stoplist(const PreprocessConfig& cfg);

/// strip_tags (optional) → segment_and_tokenize → remove_stopwords → porter_stem.
ProcessedDocument preprocess_document(const RawDocument& doc, const PreprocessConfig& cfg,
                                      const Stoplist& stoplist);
ProcessedDocument preprocess_document(const RawDocument& doc, const PreprocessConfig& cfg);

}  // namespace docrep
