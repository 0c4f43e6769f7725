#include "docrep/preprocess.hpp"

#include <charconv>

namespace docrep {
namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x110000) {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Decodes the entity starting at text[pos] == '&'. Returns the number of
// characters consumed, or 0 if it is not a recognised entity.
std::size_t decode_entity(std::string_view text, std::size_t pos, std::string& out) {
  const auto semi = text.find(';', pos);
  if (semi == std::string_view::npos || semi - pos > 10) return 0;
  const auto name = text.substr(pos + 1, semi - pos - 1);
  const std::size_t consumed = semi - pos + 1;
  if (name == "amp") out += '&';
  else if (name == "lt") out += '<';
  else if (name == "gt") out += '>';
  else if (name == "quot") out += '"';
  else if (name == "apos") out += '\'';
  else if (name.size() > 1 && name[0] == '#') {
    std::uint32_t cp = 0;
    const bool hex = name[1] == 'x' || name[1] == 'X';
    const auto digits = name.substr(hex ? 2 : 1);
    if (digits.empty()) return 0;
    auto res = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
    if (res.ec != std::errc{} || res.ptr != digits.data() + digits.size()) return 0;
    append_utf8(out, cp);
  } else {
    return 0;
  }
  return consumed;
}

bool is_ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

}  // namespace

std::string strip_tags(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    const char c = text[i];
    if (c == '<') {
      const auto close = text.find('>', i);
      if (close == std::string_view::npos) break;
      i = close + 1;
    } else if (c == '&') {
      if (auto n = decode_entity(text, i, out)) {
        i += n;
      } else {
        out += c;
        ++i;
      }
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

std::vector<Sentence> segment_and_tokenize(std::string_view text) {
  std::vector<Sentence> sentences;
  Sentence current;
  std::string token;
  auto flush_token = [&] {
    if (!token.empty()) {
      current.push_back(std::move(token));
      token.clear();
    }
  };
  auto flush_sentence = [&] {
    flush_token();
    if (!current.empty()) {
      sentences.push_back(std::move(current));
      current.clear();
    }
  };
  for (char c : text) {
    if (is_ascii_letter(c)) {
      token += static_cast<char>(c | 0x20);
    } else if (c == '.' || c == '!' || c == '?') {
      flush_sentence();
    } else {
      flush_token();
    }
  }
  flush_sentence();
  return sentences;
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const Stoplist& stoplist) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!stoplist.contains(t)) out.push_back(t);
  }
  return out;
}

Stoplist resolve_stoplist(const PreprocessConfig& cfg) {
  return cfg.stopword_path ? load_stoplist(*cfg.stopword_path) : default_stoplist();
}

ProcessedDocument preprocess_document(const RawDocument& doc, const PreprocessConfig& cfg,
                                      const Stoplist& stoplist) {
  ProcessedDocument out{doc.id, doc.label, {}};
  const auto sentences =
      cfg.strip_html ? segment_and_tokenize(strip_tags(doc.text)) : segment_and_tokenize(doc.text);
  for (const auto& s : sentences) {
    Sentence stems;
    for (const auto& tok : remove_stopwords(s, stoplist)) {
      if (tok.size() < cfg.min_token_len) continue;
      stems.push_back(porter_stem(tok));
    }
    if (!stems.empty()) out.sentences.push_back(std::move(stems));
  }
  return out;
}

ProcessedDocument preprocess_document(const RawDocument& doc, const PreprocessConfig& cfg) {
  return preprocess_document(doc, cfg, resolve_stoplist(cfg));
}

}  // namespace docrep
