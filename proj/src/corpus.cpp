#include "xdalign/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>

#include "xdalign/error.hpp"
#include "xdalign/text.hpp"

namespace xdalign {

namespace {

constexpr const char* kFields[] = {"id", "lang", "publish_date", "title", "lead", "content"};

std::pair<std::string, std::string> unordered_key(std::string_view a, std::string_view b) {
  return a <= b ? std::pair{std::string(a), std::string(b)} : std::pair{std::string(b), std::string(a)};
}

}  // namespace

LanguagePair LanguagePair::parse(std::string_view s) {
  const auto comma = s.find(',');
  if (comma == std::string_view::npos) throw ValidationError("language pair must be two comma-separated tags: " + std::string(s));
  LanguagePair p{std::string(text::trim(s.substr(0, comma))), std::string(text::trim(s.substr(comma + 1)))};
  if (p.source.empty() || p.target.empty() || p.source == p.target)
    throw ValidationError("language pair needs two distinct tags: " + std::string(s));
  return p;
}

GoldSet::GoldSet(std::vector<std::pair<std::string, std::string>> pairs) : pairs_(std::move(pairs)) {
  keys_.reserve(pairs_.size());
  for (const auto& [a, b] : pairs_) keys_.push_back(unordered_key(a, b));
  std::sort(keys_.begin(), keys_.end());
  const auto dup = std::adjacent_find(keys_.begin(), keys_.end());
  if (dup != keys_.end()) throw ValidationError("duplicate gold pair: " + dup->first + "\t" + dup->second);
}

bool GoldSet::contains(std::string_view a, std::string_view b) const {
  return std::binary_search(keys_.begin(), keys_.end(), unordered_key(a, b));
}

nlohmann::json CorpusSummary::to_json() const {
  nlohmann::json j;
  j["languages"] = per_language;
  j["dates"] = per_date.size();
  j["per_date"] = per_date;
  j["warnings"] = warnings;
  return j;
}

bool is_valid_iso_date(std::string_view d) {
  if (d.size() != 10 || d[4] != '-' || d[7] != '-') return false;
  int y = 0;
  unsigned m = 0, day = 0;
  auto num = [&](std::size_t off, std::size_t len, auto& out) {
    const auto* first = d.data() + off;
    const auto [ptr, ec] = std::from_chars(first, first + len, out);
    return ec == std::errc{} && ptr == first + len;
  };
  if (!num(0, 4, y) || !num(5, 2, m) || !num(8, 2, day)) return false;
  return std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{day}}.ok();
}

Document parse_document_record(std::string_view line, std::size_t line_no, const LanguagePair& langs) {
  const std::string where = "line " + std::to_string(line_no);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(where + ": malformed JSON record: " + e.what());
  }
  if (!j.is_object()) throw ParseError(where + ": record is not a JSON object");
  for (const char* field : kFields) {
    if (!j.contains(field)) throw ParseError(where + ": missing field \"" + field + "\"");
    if (!j[field].is_string()) throw ParseError(where + ": field \"" + field + "\" is not a string");
  }
  Document doc;
  doc.id = j["id"].get<std::string>();
  doc.lang = j["lang"].get<std::string>();
  doc.publish_date = j["publish_date"].get<std::string>();
  doc.title = std::string(text::trim(j["title"].get<std::string>()));
  doc.lead = std::string(text::trim(j["lead"].get<std::string>()));
  doc.content = j["content"].get<std::string>();
  if (j.contains("meta")) {
    if (!j["meta"].is_object()) throw ParseError(where + ": field \"meta\" must be an object");
    doc.meta = j["meta"];
  }
  if (doc.id.empty()) throw ValidationError(where + ": empty id");
  if (!langs.contains(doc.lang))
    throw ValidationError(where + ": language \"" + doc.lang + "\" not in configured pair " + langs.to_string());
  if (!is_valid_iso_date(doc.publish_date))
    throw ValidationError(where + ": invalid publish_date \"" + doc.publish_date + "\"");
  return doc;
}

std::string serialize_document(const Document& doc) {
  nlohmann::ordered_json j;
  j["id"] = doc.id;
  j["lang"] = doc.lang;
  j["publish_date"] = doc.publish_date;
  j["title"] = doc.title;
  j["lead"] = doc.lead;
  j["content"] = doc.content;
  if (!doc.meta.is_null()) j["meta"] = doc.meta;
  return j.dump();
}

CorpusSummary validate_corpus(const std::vector<Document>& docs, const LanguagePair& langs) {
  if (docs.empty()) throw ValidationError("corpus is empty");
  CorpusSummary summary;
  summary.per_language[langs.source] = 0;
  summary.per_language[langs.target] = 0;

  std::vector<std::string> bad_lang;
  std::vector<std::string> ids;
  ids.reserve(docs.size());
  for (const auto& d : docs) {
    ids.push_back(d.id);
    if (!langs.contains(d.lang)) {
      bad_lang.push_back(d.id + " (" + d.lang + ")");
      continue;
    }
    ++summary.per_language[d.lang];
    ++summary.per_date[d.publish_date][d.lang];
    if (d.title.empty()) summary.warnings.push_back(d.id + ": empty title");
    if (d.lead.empty()) summary.warnings.push_back(d.id + ": empty lead");
  }
  if (!bad_lang.empty()) {
    std::string msg = "documents outside language pair " + langs.to_string() + ":";
    for (const auto& b : bad_lang) msg += " " + b;
    throw ValidationError(msg);
  }
  std::sort(ids.begin(), ids.end());
  std::vector<std::string> dups;
  for (std::size_t i = 1; i < ids.size(); ++i)
    if (ids[i] == ids[i - 1] && (dups.empty() || dups.back() != ids[i])) dups.push_back(ids[i]);
  if (!dups.empty()) {
    std::string msg = "duplicate document ids:";
    for (const auto& d : dups) msg += " " + d;
    throw ValidationError(msg);
  }
  return summary;
}

std::vector<Document> load_documents(const std::filesystem::path& path, const LanguagePair& langs) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    docs.push_back(parse_document_record(line, line_no, langs));
  }
  return docs;
}

GoldSet parse_gold(std::string_view tsv) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::istringstream in{std::string(tsv)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto tab = t.find('\t');
    if (tab == std::string_view::npos || t.find('\t', tab + 1) != std::string_view::npos)
      throw ParseError("gold line " + std::to_string(line_no) + ": expected two tab-separated ids");
    pairs.emplace_back(std::string(text::trim(t.substr(0, tab))), std::string(text::trim(t.substr(tab + 1))));
  }
  return GoldSet(std::move(pairs));
}

GoldSet load_gold(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_gold(ss.str());
}

void check_gold_against(const GoldSet& gold, const std::vector<Document>& docs) {
  DocumentIndex index(docs);
  for (const auto& [a, b] : gold.pairs()) {
    for (const auto* id : {&a, &b})
      if (!index.find(*id)) throw ValidationError("gold id not in corpus: " + *id);
  }
}

DocumentIndex::DocumentIndex(const std::vector<Document>& docs) {
  by_id_.reserve(docs.size());
  for (const auto& d : docs) by_id_.emplace(d.id, &d);
}

const Document* DocumentIndex::find(const std::string& id) const {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : it->second;
}

const Document& DocumentIndex::at(const std::string& id) const {
  if (const auto* d = find(id)) return *d;
  throw ValidationError("unknown document id: " + id);
}

}  // namespace xdalign
