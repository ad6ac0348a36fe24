#include "toprorec/text_cleaner.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "toprorec/common.hpp"
#include "toprorec/stemmer.hpp"

namespace toprorec {
namespace {

bool is_alnum(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80;
}

bool all_digits(std::string_view s) {
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

const std::vector<std::string>& default_stop_words() {
  static const std::vector<std::string> words = {
      "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours",
      "yourself", "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself",
      "it", "its", "itself", "they", "them", "their", "theirs", "themselves", "what", "which",
      "who", "whom", "this", "that", "these", "those", "am", "is", "are", "was", "were", "be",
      "been", "being", "have", "has", "had", "having", "do", "does", "did", "doing", "a", "an",
      "the", "and", "but", "if", "or", "because", "as", "until", "while", "of", "at", "by",
      "for", "with", "about", "against", "between", "into", "through", "during", "before",
      "after", "above", "below", "to", "from", "up", "down", "in", "out", "on", "off", "over",
      "under", "again", "further", "then", "once", "here", "there", "when", "where", "why",
      "how", "all", "any", "both", "each", "few", "more", "most", "other", "some", "such", "no",
      "nor", "not", "only", "own", "same", "so", "than", "too", "very", "s", "t", "can", "will",
      "just", "don", "should", "now", "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren",
      "couldn", "didn", "doesn", "hadn", "hasn", "haven", "isn", "ma", "mightn", "mustn",
      "needn", "shan", "shouldn", "wasn", "weren", "won", "wouldn", "also", "may", "must",
      "within", "without", "upon", "including", "include", "includes", "etc"};
  return words;
}

const std::vector<std::string>& default_blacklist() {
  static const std::vector<std::string> patterns = {
      // prerequisite and enrollment clauses run to the end of the sentence
      R"(\b(?:pre|co)-?requisites?\b[^.]*\.?)",
      R"(\bconcurrent(?:ly)? enroll(?:ment|ed)\b[^.]*\.?)",
      R"(\brecommended\s*:[^.]*\.?)",
      R"(\bcross-?listed\s+(?:as|with)\b[^.]*\.?)",
      R"(\bformerly\s+[a-z]+\s*\d+[^.]*\.?)",
      // class types and counts
      R"(\b\d+\s+(?:lectures?|laborator(?:y|ies)|labs?|activit(?:y|ies)|seminars?|studios?|discussions?|units?)\b)",
      R"(\b(?:lectures?|laborator(?:y|ies)|labs?|seminars?|studios?|supervisions?|activit(?:y|ies))\b)",
      // delivery modes
      R"(\b(?:face-to-face|in-person|virtual|online|hybrid|asynchronous|synchronous|remote)\b)",
      R"(\bcredit/no credit\b|\bcr/nc\b)",
      R"(\bge\s+areas?\s+[a-z0-9]+\b)",
  };
  return patterns;
}

CleaningConfig CleaningConfig::defaults() {
  CleaningConfig c;
  c.stop_words.insert(default_stop_words().begin(), default_stop_words().end());
  c.blacklist = default_blacklist();
  return c;
}

std::vector<std::string> load_stop_words(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open stop-word list: " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::string w;
    while (ss >> w) words.push_back(to_lower_ascii(w));
  }
  return words;
}

CleaningConfig load_cleaning_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open cleaning config: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("cleaning config " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError("cleaning config must be a JSON object");

  CleaningConfig c = CleaningConfig::defaults();
  try {
    if (j.contains("stop_words_path") && !j["stop_words_path"].is_null()) {
      std::filesystem::path sw = j["stop_words_path"].get<std::string>();
      if (sw.is_relative()) sw = path.parent_path() / sw;
      const auto words = load_stop_words(sw);
      c.stop_words = {words.begin(), words.end()};
    }
    if (j.contains("blacklist")) c.blacklist = j["blacklist"].get<std::vector<std::string>>();
    if (j.contains("stemming")) c.stemming = j["stemming"].get<bool>();
    if (j.contains("ngram_max")) c.ngram_max = j["ngram_max"].get<int>();
  } catch (const nlohmann::json::type_error& e) {
    throw ParseError("cleaning config " + path.string() + ": " + e.what());
  }
  if (c.ngram_max < 1) throw ValidationError("ngram_max must be >= 1");
  return c;
}

TextCleaner::TextCleaner(CleaningConfig config) : config_(std::move(config)) {
  if (config_.ngram_max < 1) throw ValidationError("ngram_max must be >= 1");
  if (!config_.blacklist.empty()) {
    std::string joined;
    for (const auto& p : config_.blacklist) {
      if (!joined.empty()) joined += '|';
      joined += "(?:" + p + ")";
    }
    try {
      blacklist_ = std::regex(joined, std::regex::ECMAScript | std::regex::optimize);
    } catch (const std::regex_error& e) {
      throw ValidationError(std::string("invalid blacklist pattern: ") + e.what());
    }
    has_blacklist_ = true;
  }
}

std::vector<std::string> TextCleaner::extract(std::string_view raw) const {
  std::string text = to_lower_ascii(raw);
  if (has_blacklist_) text = std::regex_replace(text, blacklist_, " . ");

  // Split into phrases of retained tokens. Punctuation, numbers, stop words and
  // blacklist cuts all end the current phrase.
  std::vector<std::vector<std::string>> phrases(1);
  auto end_phrase = [&] {
    if (!phrases.back().empty()) phrases.emplace_back();
  };
  auto accept = [&](std::string token) {
    // strip hyphens left dangling at either end
    while (!token.empty() && token.front() == '-') token.erase(token.begin());
    while (!token.empty() && token.back() == '-') token.pop_back();
    if (token.size() < 2 || all_digits(token) || config_.stop_words.contains(token)) {
      end_phrase();
      return;
    }
    if (config_.stemming) token = porter_stem(token);
    phrases.back().push_back(std::move(token));
  };

  std::string token;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_alnum(c)) {
      token.push_back(static_cast<char>(c));
    } else if (c == '\'') {
      // apostrophes join ("student's" -> "students")
    } else if (c == '-' && !token.empty() && i + 1 < text.size() &&
               is_alnum(static_cast<unsigned char>(text[i + 1]))) {
      token.push_back('-');
    } else {
      if (!token.empty()) accept(std::exchange(token, {}));
      if (!(c == ' ' || c == '\t' || c == '\n' || c == '\r')) end_phrase();
    }
  }
  if (!token.empty()) accept(std::move(token));

  std::vector<std::string> out;
  for (const auto& phrase : phrases) {
    for (int n = 1; n <= config_.ngram_max; ++n) {
      const auto len = static_cast<std::size_t>(n);
      for (std::size_t i = 0; i + len <= phrase.size(); ++i) {
        std::string gram = phrase[i];
        for (std::size_t k = 1; k < len; ++k) {
          gram += ' ';
          gram += phrase[i + k];
        }
        out.push_back(std::move(gram));
      }
    }
  }
  return out;
}

std::set<std::string> TextCleaner::clean(std::string_view raw) const {
  auto words = extract(raw);
  return {std::make_move_iterator(words.begin()), std::make_move_iterator(words.end())};
}

std::set<std::string> clean_description(std::string_view raw, const CleaningConfig& config) {
  return TextCleaner(config).clean(raw);
}

}  // namespace toprorec
