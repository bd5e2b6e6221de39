#include "xdalign/sentences.hpp"

#include <algorithm>
#include <array>

#include "xdalign/similarity.hpp"
#include "xdalign/text.hpp"

namespace xdalign {

namespace {

// Lowercased, without the trailing period.
constexpr std::array kGermanAbbreviations = {
    "abs", "bd",  "bsp", "bzw", "ca",  "chr", "d.h", "dipl", "dr",   "evtl", "ff",  "fr",  "ggf", "hr",  "hrsg",
    "inkl", "ing", "jh", "jr",  "mio", "mrd", "nr",  "o.ä", "prof", "sog",  "st",  "str", "tel", "u.a", "u.u",
    "usw", "v.a", "vgl", "z.b", "z.t", "jan", "feb", "febr", "aug", "sept", "okt", "nov", "dez"};
constexpr std::array kFrenchAbbreviations = {"av",  "apr",  "bd",   "cf",   "chap", "dr",  "env",   "ex",  "janv",
                                             "févr", "juil", "m",   "me",   "mgr",  "mlle", "mlles", "mm",  "mme",
                                             "mmes", "oct",  "nov", "déc", "p.ex", "pr",   "sept",  "st",  "ste",
                                             "vol",  "resp", "c.-à-d"};
constexpr std::array kGermanMonths = {"januar", "februar", "märz",     "april",   "mai",     "juni",
                                      "juli",   "august",  "september", "oktober", "november", "dezember"};

bool ascii_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_terminal(char32_t cp) { return cp == '.' || cp == '!' || cp == '?' || cp == 0x2026; }

bool is_closing(char32_t cp) {
  return cp == '"' || cp == '\'' || cp == ')' || cp == ']' || cp == 0xBB /* » */ || cp == 0x201D /* ” */ ||
         cp == 0x2019 /* ’ */ || cp == 0x203A /* › */ || cp == 0x201C /* “ closes in German */;
}

bool is_opening(char32_t cp) {
  return cp == '"' || cp == '\'' || cp == '(' || cp == '[' || cp == 0xAB /* « */ || cp == 0x201E /* „ */ ||
         cp == 0x201C || cp == 0x2039 /* ‹ */ || cp == 0x201A;
}

bool is_alpha(char32_t cp) {
  return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= 0xC0 && cp <= 0x24F && cp != 0xD7 && cp != 0xF7);
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Word immediately before byte offset `end`, minus opening punctuation.
std::string_view word_before(std::string_view text, std::size_t begin, std::size_t end) {
  std::size_t w = end;
  while (w > begin && !ascii_space(text[w - 1])) --w;
  std::string_view word = text.substr(w, end - w);
  while (!word.empty()) {
    std::size_t pos = 0;
    const char32_t cp = text::next_code_point(word, pos);
    if (!is_opening(cp)) break;
    word.remove_prefix(pos);
  }
  return word;
}

std::string_view word_after(std::string_view text, std::size_t pos) {
  std::size_t e = pos;
  while (e < text.size() && !ascii_space(text[e])) ++e;
  return text.substr(pos, e - pos);
}

// An initial such as the "J" in "J. Smith".
bool single_capital(std::string_view word) {
  std::size_t pos = 0;
  if (word.empty()) return false;
  const char32_t cp = text::next_code_point(word, pos);
  return pos == word.size() && is_alpha(cp) && !text::is_lower_letter(cp);
}

bool is_month(std::string_view word) {
  const std::string lower = text::to_lower_utf8(word);
  return std::find(kGermanMonths.begin(), kGermanMonths.end(), lower) != kGermanMonths.end();
}

}  // namespace

bool RuleSegmenter::is_abbreviation(std::string_view token, std::string_view lang) {
  const std::string lower = text::to_lower_utf8(token);
  auto in = [&](const auto& list) { return std::find(list.begin(), list.end(), lower) != list.end(); };
  if (lang == "de") return in(kGermanAbbreviations);
  if (lang == "fr") return in(kFrenchAbbreviations);
  return in(kGermanAbbreviations) || in(kFrenchAbbreviations);
}

std::vector<std::string> RuleSegmenter::split(std::string_view s, std::string_view lang) const {
  std::vector<std::string> out;
  std::size_t start = 0;
  auto emit = [&](std::size_t end) {
    const auto piece = text::trim(s.substr(start, end - start));
    if (!piece.empty()) out.emplace_back(piece);
    start = end;
  };

  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t cp_begin = pos;
    const char32_t cp = text::next_code_point(s, pos);
    if (!is_terminal(cp)) continue;

    // Absorb the rest of the terminal run and any closing quotes/brackets.
    bool lone_period = cp == '.';
    std::size_t end = pos;
    while (end < s.size()) {
      std::size_t look = end;
      const char32_t next = text::next_code_point(s, look);
      if (is_terminal(next)) {
        lone_period = false;
      } else if (!is_closing(next)) {
        break;
      }
      end = look;
    }
    pos = end;
    if (end >= s.size()) break;

    std::size_t look = end;
    if (!text::is_space(text::next_code_point(s, look))) continue;
    std::size_t next_start = look;
    while (next_start < s.size()) {
      std::size_t p = next_start;
      if (!text::is_space(text::next_code_point(s, p))) break;
      next_start = p;
    }
    if (next_start >= s.size()) break;

    std::size_t p = next_start;
    const char32_t next_cp = text::next_code_point(s, p);
    if (text::is_lower_letter(next_cp)) continue;

    if (lone_period) {
      const auto word = word_before(s, start, cp_begin);
      if (is_abbreviation(word, lang) || single_capital(word)) continue;
      if (all_digits(word)) {
        const auto following = word_after(s, next_start);
        if (is_month(following) || (!following.empty() && following.front() >= '0' && following.front() <= '9'))
          continue;
      }
    }
    emit(end);
  }
  emit(s.size());
  return out;
}

std::vector<Sentence> segment_sentences(const Document& doc, const Segmenter& segmenter) {
  std::vector<Sentence> out;
  if (text::trim(doc.content).empty()) return out;
  auto pieces = segmenter.split(doc.content, doc.lang);
  out.reserve(pieces.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const std::size_t len = text::char_count(pieces[i]);
    out.push_back({doc.id, i, std::move(pieces[i]), len});
  }
  return out;
}

std::string sentence_unit_id(std::string_view doc_id, std::size_t idx) {
  std::string id(doc_id);
  id += '#';
  id += std::to_string(idx);
  return id;
}

std::vector<TextUnit> sentence_units(const std::vector<Document>& docs, const Segmenter& segmenter) {
  std::vector<TextUnit> units;
  for (const auto& d : docs)
    for (auto& s : segment_sentences(d, segmenter)) units.push_back({sentence_unit_id(d.id, s.idx), std::move(s.text)});
  return units;
}

std::vector<SentencePair> align_sentences(const DocPair& doc_pair, const std::vector<Sentence>& src,
                                          const std::vector<Sentence>& tgt, const EmbeddingMatrix& sentence_vectors) {
  std::vector<SentencePair> out;
  if (src.empty() || tgt.empty()) return out;
  std::vector<std::string> row_ids, col_ids;
  for (const auto& s : src) row_ids.push_back(sentence_unit_id(doc_pair.src_id, s.idx));
  for (const auto& s : tgt) col_ids.push_back(sentence_unit_id(doc_pair.tgt_id, s.idx));
  const auto matrix = similarity_matrix(row_ids, col_ids, sentence_vectors, doc_pair.date);
  for (const auto& c : align_cells(matrix, 0.0, Strategy::Intersection)) out.push_back({src[c.row], tgt[c.col], c.score});
  return out;
}

std::vector<SentencePair> filter_short_pairs(const std::vector<SentencePair>& pairs, std::size_t min_chars,
                                             MinCharsRule rule) {
  std::vector<SentencePair> out;
  for (const auto& p : pairs) {
    const bool keep = rule == MinCharsRule::EachSide ? (p.src.char_len >= min_chars && p.tgt.char_len >= min_chars)
                                                     : (p.src.char_len + p.tgt.char_len >= min_chars);
    if (keep) out.push_back(p);
  }
  return out;
}

}  // namespace xdalign
