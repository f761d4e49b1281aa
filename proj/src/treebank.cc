#include "agreement/treebank.h"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "agreement/error.h"

namespace agreement {
namespace {

constexpr std::size_t kConlluColumns = 10;

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool ParseInt(std::string_view s, int& out) {
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool IsBlank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

std::optional<std::string> OptionalColumn(std::string_view field) {
  if (field == "_") return std::nullopt;
  return std::string(field);
}

std::string Where(const std::string& source, std::size_t line_no) {
  std::ostringstream os;
  os << (source.empty() ? "<stream>" : source) << ":" << line_no;
  return os.str();
}

// Extracts "<key> = value" from a comment body; also accepts "<key>=value".
std::optional<std::string> CommentValue(std::string_view body,
                                        std::string_view key) {
  body.remove_prefix(std::min(body.find_first_not_of(' '), body.size()));
  if (body.substr(0, key.size()) != key) return std::nullopt;
  body.remove_prefix(key.size());
  body.remove_prefix(std::min(body.find_first_not_of(' '), body.size()));
  if (body.empty() || body.front() != '=') return std::nullopt;
  body.remove_prefix(1);
  body.remove_prefix(std::min(body.find_first_not_of(' '), body.size()));
  while (!body.empty() && body.back() == ' ') body.remove_suffix(1);
  return std::string(body);
}

class SentenceBuilder {
 public:
  SentenceBuilder(Treebank& treebank, const std::string& source)
      : treebank_(treebank), source_(source) {}

  void Comment(std::string_view body) {
    if (auto id = CommentValue(body, "sent_id")) {
      current_.sent_id = *id;
    } else if (auto text = CommentValue(body, "text")) {
      current_.text = *text;
    }
  }

  void AddToken(Token token, std::size_t line_no) {
    token_lines_.push_back(line_no);
    current_.tokens.push_back(std::move(token));
  }

  void Finish() {
    if (current_.tokens.empty()) {
      current_ = Sentence{};
      return;
    }
    Validate();
    if (current_.sent_id.empty()) {
      current_.sent_id = std::to_string(treebank_.sentences.size() + 1);
    }
    treebank_.token_count += current_.tokens.size();
    treebank_.sentences.push_back(std::move(current_));
    current_ = Sentence{};
    token_lines_.clear();
  }

 private:
  void Validate() const {
    const int n = static_cast<int>(current_.tokens.size());
    for (int i = 0; i < n; ++i) {
      const Token& t = current_.tokens[static_cast<std::size_t>(i)];
      const std::size_t line_no = token_lines_[static_cast<std::size_t>(i)];
      if (t.id != i + 1) {
        throw Error(ErrorKind::kInvalidId,
                    Where(source_, line_no) + ": expected token id " +
                        std::to_string(i + 1) + ", found " +
                        std::to_string(t.id));
      }
      if (t.head < 0 || t.head > n || t.head == t.id) {
        throw Error(ErrorKind::kInvalidHead,
                    Where(source_, line_no) + ": head " +
                        std::to_string(t.head) +
                        " does not resolve within a sentence of " +
                        std::to_string(n) + " tokens");
      }
    }
  }

  Treebank& treebank_;
  const std::string& source_;
  Sentence current_;
  std::vector<std::size_t> token_lines_;
};

Token ParseTokenLine(const std::vector<std::string_view>& f,
                     const std::string& where) {
  Token t;
  if (!ParseInt(f[0], t.id) || t.id < 1) {
    throw Error(ErrorKind::kInvalidId,
                where + ": invalid token id '" + std::string(f[0]) + "'");
  }
  t.form = f[1];
  t.lemma = f[2];
  t.upos = f[3];
  t.xpos = OptionalColumn(f[4]);
  try {
    t.feats = ParseFeats(f[5]);
  } catch (const Error& e) {
    throw Error(ErrorKind::kMalformedFeats, where + ": " + e.what());
  }
  if (!ParseInt(f[6], t.head)) {
    throw Error(ErrorKind::kInvalidHead,
                where + ": invalid head '" + std::string(f[6]) + "'");
  }
  t.deprel = f[7];
  t.deps = OptionalColumn(f[8]);
  t.misc = OptionalColumn(f[9]);
  return t;
}

}  // namespace

FeatureBundle ParseFeats(std::string_view raw) {
  FeatureBundle feats;
  if (raw == "_" || raw.empty()) return feats;
  std::size_t start = 0;
  while (start <= raw.size()) {
    std::size_t bar = raw.find('|', start);
    if (bar == std::string_view::npos) bar = raw.size();
    const std::string_view pair = raw.substr(start, bar - start);
    const std::size_t eq = pair.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == pair.size()) {
      throw Error(ErrorKind::kMalformedFeats,
                  "feature entry '" + std::string(pair) +
                      "' is not of the form Name=Value");
    }
    std::string name(pair.substr(0, eq));
    if (feats.count(name) != 0) {
      throw Error(ErrorKind::kMalformedFeats,
                  "duplicate feature name '" + name + "'");
    }
    feats.emplace(std::move(name), std::string(pair.substr(eq + 1)));
    start = bar + 1;
  }
  return feats;
}

std::string FormatFeats(const FeatureBundle& feats) {
  if (feats.empty()) return "_";
  std::string out;
  for (const auto& [name, value] : feats) {
    if (!out.empty()) out += '|';
    out += name;
    out += '=';
    out += value;
  }
  return out;
}

bool IsValidUtf8(std::string_view bytes) {
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(bytes[i]);
    std::size_t len;
    std::uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(bytes[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong forms, surrogates and out-of-range code points.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
        (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += len;
  }
  return true;
}

Treebank ParseConllu(std::istream& in, std::string source_path) {
  Treebank treebank;
  treebank.source_path = std::move(source_path);
  SentenceBuilder builder(treebank, treebank.source_path);

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!IsValidUtf8(line)) {
      throw Error(ErrorKind::kEncodingError,
                  Where(treebank.source_path, line_no) + ": invalid UTF-8");
    }
    if (IsBlank(line)) {
      builder.Finish();
      continue;
    }
    if (line.front() == '#') {
      builder.Comment(std::string_view(line).substr(1));
      continue;
    }
    const auto fields = SplitTabs(line);
    const std::string where = Where(treebank.source_path, line_no);
    if (fields.size() != kConlluColumns) {
      throw Error(ErrorKind::kMalformedLine,
                  where + ": expected 10 tab-separated columns, found " +
                      std::to_string(fields.size()));
    }
    const std::string_view id = fields[0];
    if (id.find('-') != std::string_view::npos ||
        id.find('.') != std::string_view::npos) {
      continue;
    }
    builder.AddToken(ParseTokenLine(fields, where), line_no);
  }
  builder.Finish();
  treebank.sentence_count = treebank.sentences.size();
  return treebank;
}

Treebank ParseConlluFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  }
  return ParseConllu(in, path.string());
}

Treebank ParseConlluString(std::string_view text, std::string source_path) {
  std::istringstream in{std::string(text)};
  return ParseConllu(in, std::move(source_path));
}

}  // namespace agreement
