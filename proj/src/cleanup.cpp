#include "xdalign/cleanup.hpp"

#include <cmath>
#include <fstream>
#include <unordered_map>

#include "xdalign/embedding.hpp"
#include "xdalign/error.hpp"
#include "xdalign/text.hpp"

namespace xdalign {

namespace {

std::unordered_map<std::u32string, double> trigram_profile(std::string_view s) {
  const std::string norm = text::to_lower_utf8(text::normalize_whitespace(s));
  std::u32string cps;
  for (std::size_t pos = 0; pos < norm.size();) cps.push_back(text::next_code_point(norm, pos));
  std::unordered_map<std::u32string, double> profile;
  for (std::size_t i = 0; i + 3 <= cps.size(); ++i) profile[cps.substr(i, 3)] += 1.0;
  return profile;
}

std::string full_text(const Document& d) { return d.title + "\n" + d.lead + "\n" + d.content; }

bool has_marker(const std::string& lowered, const std::vector<std::string>& lowered_markers) {
  for (const auto& m : lowered_markers)
    if (!m.empty() && lowered.find(m) != std::string::npos) return true;
  return false;
}

}  // namespace

void CleanupConfig::validate() const {
  if (!(suspicious_score >= 0.0)) throw ValidationError("suspicious_score must be >= 0");
  if (!(trigram_overlap >= 0.0 && trigram_overlap <= 1.0)) throw ValidationError("trigram_overlap must lie in [0, 1]");
}

CleanupConfig CleanupConfig::from_json(const nlohmann::json& j) {
  CleanupConfig c;
  c.suspicious_score = j.value("suspicious_score", c.suspicious_score);
  c.same_language_check = j.value("same_language_check", c.same_language_check);
  c.trigram_overlap = j.value("trigram_overlap", c.trigram_overlap);
  c.error_markers = j.value("error_markers", c.error_markers);
  c.validate();
  return c;
}

nlohmann::json CleanupConfig::to_json() const {
  return {{"suspicious_score", suspicious_score},
          {"same_language_check", same_language_check},
          {"trigram_overlap", trigram_overlap},
          {"error_markers", error_markers}};
}

CleanupConfig load_cleanup_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return CleanupConfig::from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

double trigram_overlap(std::string_view a, std::string_view b) {
  const auto pa = trigram_profile(a);
  const auto pb = trigram_profile(b);
  if (pa.empty() || pb.empty()) return 0.0;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [g, c] : pa) {
    na += c * c;
    if (const auto it = pb.find(g); it != pb.end()) dot += c * it->second;
  }
  for (const auto& [g, c] : pb) nb += c * c;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

CleanupResult filter_faulty_pairs(const PairSet& pairs, const DocumentIndex& corpus, const CleanupConfig& config) {
  config.validate();
  std::vector<std::string> markers;
  for (const auto& m : config.error_markers) markers.push_back(text::to_lower_utf8(m));

  CleanupResult result{{{}, pairs.strategy, pairs.threshold}, {}};
  for (const auto& p : pairs.pairs) {
    const Document& src = corpus.at(p.src_id);
    const Document& tgt = corpus.at(p.tgt_id);
    std::string reason;
    if (p.score >= config.suspicious_score &&
        text::normalize_whitespace(build_alignment_text(src)) == text::normalize_whitespace(build_alignment_text(tgt))) {
      reason = "identical-text";
    } else if (!markers.empty() && (has_marker(text::to_lower_utf8(full_text(src)), markers) ||
                                    has_marker(text::to_lower_utf8(full_text(tgt)), markers))) {
      reason = "error-marker";
    } else if (config.same_language_check && trigram_overlap(full_text(src), full_text(tgt)) > config.trigram_overlap) {
      reason = "same-language";
    }
    if (reason.empty())
      result.kept.pairs.push_back(p);
    else
      result.removed.push_back({p, std::move(reason)});
  }
  return result;
}

}  // namespace xdalign
