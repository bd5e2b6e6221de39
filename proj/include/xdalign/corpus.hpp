#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

namespace xdalign {

// The two languages of a corpus. `source` indexes matrix rows, `target`
// indexes columns. Defaults to the German/French profile.
struct LanguagePair {
  std::string source = "de";
  std::string target = "fr";

  bool contains(std::string_view lang) const { return lang == source || lang == target; }
  static LanguagePair parse(std::string_view comma_separated);
  std::string to_string() const { return source + "," + target; }
};

struct Document {
  std::string id;
  std::string lang;
  std::string publish_date;  // YYYY-MM-DD, kept verbatim
  std::string title;
  std::string lead;
  std::string content;
  nlohmann::json meta;  // optional extension object; null when absent

  bool operator==(const Document&) const = default;
};

// One document-level alignment. `score` is the cosine similarity scaled by
// 100, so it lies in [-100, 100].
struct DocPair {
  std::string src_id;
  std::string tgt_id;
  double score = 0.0;
  std::string date;

  bool operator==(const DocPair&) const = default;
};

// Human-verified pairs. Matching is on the unordered id tuple.
class GoldSet {
 public:
  GoldSet() = default;
  explicit GoldSet(std::vector<std::pair<std::string, std::string>> pairs);

  const std::vector<std::pair<std::string, std::string>>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  bool contains(std::string_view a, std::string_view b) const;

 private:
  std::vector<std::pair<std::string, std::string>> pairs_;
  std::vector<std::pair<std::string, std::string>> keys_;  // sorted, unordered-normalized
};

struct CorpusSummary {
  std::map<std::string, std::size_t> per_language;
  std::map<std::string, std::map<std::string, std::size_t>> per_date;  // date -> lang -> count
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

bool is_valid_iso_date(std::string_view date);

// Parses one JSONL record. `line_no` is 1-based and appears in every error.
Document parse_document_record(std::string_view line, std::size_t line_no, const LanguagePair& langs);
std::string serialize_document(const Document& doc);

CorpusSummary validate_corpus(const std::vector<Document>& docs, const LanguagePair& langs);

std::vector<Document> load_documents(const std::filesystem::path& path, const LanguagePair& langs);

// gold.tsv: two tab-separated id columns, optional '#' header/comment lines.
GoldSet parse_gold(std::string_view tsv);
GoldSet load_gold(const std::filesystem::path& path);
// Throws ValidationError when a gold id is not in `docs`.
void check_gold_against(const GoldSet& gold, const std::vector<Document>& docs);

// Id lookup over a loaded corpus.
class DocumentIndex {
 public:
  explicit DocumentIndex(const std::vector<Document>& docs);
  const Document& at(const std::string& id) const;
  const Document* find(const std::string& id) const;

 private:
  std::unordered_map<std::string, const Document*> by_id_;
};

}  // namespace xdalign
