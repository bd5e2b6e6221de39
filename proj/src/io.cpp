#include "xdalign/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "xdalign/error.hpp"
#include "xdalign/text.hpp"

namespace xdalign {

namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(round_to(*v, kMetricDecimals)) : nlohmann::json(nullptr);
}

std::optional<double> read_optional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

template <typename Fn>
void for_each_json_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      fn(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace

double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double r = std::round(value * scale) / scale;
  return r == 0.0 ? 0.0 : r;
}

std::string alignments_jsonl(const PairSet& pairs) {
  std::string out;
  for (const auto& p : pairs.pairs) {
    nlohmann::ordered_json j;
    j["src_id"] = p.src_id;
    j["tgt_id"] = p.tgt_id;
    j["score"] = round_to(p.score, kScoreDecimals);
    j["strategy"] = to_string(pairs.strategy);
    j["threshold"] = round_to(pairs.threshold, kScoreDecimals);
    j["date"] = p.date;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<DocPair> read_alignments(const std::filesystem::path& path) {
  std::vector<DocPair> out;
  for_each_json_line(path, [&](const nlohmann::json& j) {
    out.push_back({j.at("src_id").get<std::string>(), j.at("tgt_id").get<std::string>(), j.at("score").get<double>(),
                   j.value("date", std::string{})});
  });
  return out;
}

std::string removed_jsonl(const std::vector<RemovedPair>& removed) {
  std::string out;
  for (const auto& r : removed) {
    nlohmann::ordered_json j;
    j["src_id"] = r.pair.src_id;
    j["tgt_id"] = r.pair.tgt_id;
    j["score"] = round_to(r.pair.score, kScoreDecimals);
    j["date"] = r.pair.date;
    j["reason"] = r.reason;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string sentence_pairs_jsonl(const std::vector<SentencePair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    nlohmann::ordered_json j;
    j["src_doc"] = p.src.doc_id;
    j["tgt_doc"] = p.tgt.doc_id;
    j["src_idx"] = p.src.idx;
    j["tgt_idx"] = p.tgt.idx;
    j["src_text"] = p.src.text;
    j["tgt_text"] = p.tgt.text;
    j["score"] = round_to(p.score, kScoreDecimals);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<SentencePair> read_sentence_pairs(const std::filesystem::path& path) {
  std::vector<SentencePair> out;
  for_each_json_line(path, [&](const nlohmann::json& j) {
    SentencePair p;
    p.src.doc_id = j.at("src_doc").get<std::string>();
    p.tgt.doc_id = j.at("tgt_doc").get<std::string>();
    p.src.idx = j.at("src_idx").get<std::size_t>();
    p.tgt.idx = j.at("tgt_idx").get<std::size_t>();
    p.src.text = j.at("src_text").get<std::string>();
    p.tgt.text = j.at("tgt_text").get<std::string>();
    p.src.char_len = text::char_count(p.src.text);
    p.tgt.char_len = text::char_count(p.tgt.text);
    p.score = j.at("score").get<double>();
    out.push_back(std::move(p));
  });
  return out;
}

std::string metrics_jsonl(const std::vector<MetricsRow>& rows) {
  std::string out;
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["src_id"] = r.pair.src_id;
    j["tgt_id"] = r.pair.tgt_id;
    j["score"] = round_to(r.pair.score, kScoreDecimals);
    j["date"] = r.pair.date;
    j["align_ratio_src"] = optional_number(r.metrics.align_ratio_src);
    j["align_ratio_tgt"] = optional_number(r.metrics.align_ratio_tgt);
    j["length_corr"] = optional_number(r.metrics.length_corr);
    j["monotonicity"] = optional_number(r.metrics.monotonicity);
    j["n_aligned"] = r.metrics.n_aligned;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<MetricsRow> read_metrics(const std::filesystem::path& path) {
  std::vector<MetricsRow> out;
  for_each_json_line(path, [&](const nlohmann::json& j) {
    MetricsRow r;
    r.pair = {j.at("src_id").get<std::string>(), j.at("tgt_id").get<std::string>(), j.at("score").get<double>(),
              j.value("date", std::string{})};
    r.metrics.align_ratio_src = read_optional(j, "align_ratio_src");
    r.metrics.align_ratio_tgt = read_optional(j, "align_ratio_tgt");
    r.metrics.length_corr = read_optional(j, "length_corr");
    r.metrics.monotonicity = read_optional(j, "monotonicity");
    r.metrics.n_aligned = j.value("n_aligned", std::size_t{0});
    out.push_back(std::move(r));
  });
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << contents;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace xdalign
