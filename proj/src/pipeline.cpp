#include "xdalign/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <numeric>
#include <set>

#include "xdalign/digest.hpp"
#include "xdalign/error.hpp"
#include "xdalign/metrics.hpp"
#include "xdalign/parallel.hpp"
#include "xdalign/text.hpp"
#include "xdalign/vector_store.hpp"

namespace fs = std::filesystem;

namespace xdalign {

namespace {

const std::set<std::string> kConfigKeys = {
    "documents",       "languages",      "gold",           "provider",   "sentence_vectors", "strategy",
    "threshold",       "use_tuned_threshold", "min_chars",  "min_chars_rule", "analysis_threshold", "top_k",
    "histogram_bins",  "cleanup",        "output_dir",     "dump_matrices", "jobs"};

const std::set<std::string> kProviderKeys = {"mode",          "vectors",    "endpoint", "model",
                                             "batch_size",    "auth_token_env", "max_in_flight", "timeout_seconds"};

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

MinCharsRule parse_min_chars_rule(const std::string& s) {
  if (s == "each-side") return MinCharsRule::EachSide;
  if (s == "combined") return MinCharsRule::Combined;
  throw ValidationError("unknown min_chars_rule: " + s);
}

std::string to_string(MinCharsRule r) { return r == MinCharsRule::EachSide ? "each-side" : "combined"; }

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(round_to(*v, kMetricDecimals)) : nlohmann::json(nullptr);
}

class StageTimer {
 public:
  StageTimer(RunManifest& manifest, std::string name)
      : manifest_(manifest), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start_;
    manifest_.stage_seconds.emplace_back(name_, d.count());
  }
  const std::string& name() const { return name_; }

 private:
  RunManifest& manifest_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ValidationError("run config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!kConfigKeys.contains(key)) throw ValidationError("unknown run config key: " + key);

  RunConfig c;
  if (!j.contains("documents")) throw ValidationError("run config needs \"documents\"");
  c.documents = resolve(base_dir, j["documents"].get<std::string>());
  if (j.contains("languages")) {
    const auto& l = j["languages"];
    if (l.is_string()) {
      c.languages = LanguagePair::parse(l.get<std::string>());
    } else if (l.is_array() && l.size() == 2) {
      c.languages = LanguagePair::parse(l[0].get<std::string>() + "," + l[1].get<std::string>());
    } else {
      throw ValidationError("languages must be \"de,fr\" or [\"de\", \"fr\"]");
    }
  }
  if (j.contains("gold") && !j["gold"].is_null()) c.gold = resolve(base_dir, j["gold"].get<std::string>());
  if (j.contains("provider")) {
    const auto& p = j["provider"];
    for (const auto& [key, value] : p.items())
      if (!kProviderKeys.contains(key)) throw ValidationError("unknown provider key: " + key);
    c.provider.mode = parse_provider_mode(p.value("mode", std::string("file")));
    if (p.contains("vectors")) c.provider.vectors_path = resolve(base_dir, p["vectors"].get<std::string>());
    c.provider.endpoint = p.value("endpoint", std::string{});
    c.provider.model_name = p.value("model", std::string{});
    c.provider.batch_size = p.value("batch_size", c.provider.batch_size);
    c.provider.auth_token_env = p.value("auth_token_env", std::string{});
    c.provider.max_in_flight = p.value("max_in_flight", c.provider.max_in_flight);
    c.provider.timeout_seconds = p.value("timeout_seconds", c.provider.timeout_seconds);
  }
  if (j.contains("sentence_vectors") && !j["sentence_vectors"].is_null())
    c.sentence_vectors = resolve(base_dir, j["sentence_vectors"].get<std::string>());
  if (j.contains("strategy")) c.strategy = parse_strategy(j["strategy"].get<std::string>());
  c.threshold = j.value("threshold", c.threshold);
  c.use_tuned_threshold = j.value("use_tuned_threshold", c.use_tuned_threshold);
  c.min_chars = j.value("min_chars", c.min_chars);
  if (j.contains("min_chars_rule")) c.min_chars_rule = parse_min_chars_rule(j["min_chars_rule"].get<std::string>());
  c.analysis_threshold = j.value("analysis_threshold", c.analysis_threshold);
  c.top_k = j.value("top_k", c.top_k);
  c.histogram_bins = j.value("histogram_bins", c.histogram_bins);
  if (j.contains("cleanup")) c.cleanup = CleanupConfig::from_json(j["cleanup"]);
  if (j.contains("output_dir")) c.output_dir = resolve(base_dir, j["output_dir"].get<std::string>());
  if (j.contains("dump_matrices") && !j["dump_matrices"].is_null())
    c.dump_matrices = resolve(base_dir, j["dump_matrices"].get<std::string>());
  c.jobs = j.value("jobs", c.jobs);
  if (c.jobs == 0) throw ValidationError("jobs must be >= 1");
  if (!(c.threshold >= 0.0 && c.threshold <= 100.0)) throw ValidationError("threshold must lie in [0, 100]");
  if (c.histogram_bins == 0) throw ValidationError("histogram_bins must be >= 1");
  return c;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::ordered_json p;
  p["mode"] = provider.mode == ProviderMode::File ? "file" : "remote";
  if (!provider.vectors_path.empty()) p["vectors"] = provider.vectors_path.string();
  if (!provider.endpoint.empty()) p["endpoint"] = provider.endpoint;
  if (!provider.model_name.empty()) p["model"] = provider.model_name;
  p["batch_size"] = provider.batch_size;
  if (!provider.auth_token_env.empty()) p["auth_token_env"] = provider.auth_token_env;
  p["max_in_flight"] = provider.max_in_flight;
  p["timeout_seconds"] = provider.timeout_seconds;

  nlohmann::ordered_json j;
  j["documents"] = documents.string();
  j["languages"] = {languages.source, languages.target};
  j["gold"] = gold ? nlohmann::json(gold->string()) : nlohmann::json(nullptr);
  j["provider"] = p;
  j["sentence_vectors"] = sentence_vectors ? nlohmann::json(sentence_vectors->string()) : nlohmann::json(nullptr);
  j["strategy"] = xdalign::to_string(strategy);
  j["threshold"] = threshold;
  j["use_tuned_threshold"] = use_tuned_threshold;
  j["min_chars"] = min_chars;
  j["min_chars_rule"] = to_string(min_chars_rule);
  j["analysis_threshold"] = analysis_threshold;
  j["top_k"] = top_k;
  j["histogram_bins"] = histogram_bins;
  j["cleanup"] = cleanup.to_json();
  j["output_dir"] = output_dir.string();
  j["dump_matrices"] = dump_matrices ? nlohmann::json(dump_matrices->string()) : nlohmann::json(nullptr);
  j["jobs"] = jobs;
  return j;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return RunConfig::from_json(j, path.parent_path());
}

DocAlignment align_documents(const std::vector<Document>& docs, const LanguagePair& langs,
                             const EmbeddingMatrix& vectors, Strategy strategy, double threshold, std::size_t jobs,
                             const std::optional<fs::path>& dump_dir) {
  const auto buckets = bucket_by_date(docs, langs);
  std::vector<const DateBucket*> work;
  DocAlignment result;
  result.buckets = buckets.size();
  for (const auto& [date, b] : buckets) {
    if (b.alignable())
      work.push_back(&b);
    else
      ++result.unalignable_buckets;
  }
  if (dump_dir) fs::create_directories(*dump_dir);

  result.matrices.resize(work.size());
  std::vector<PairSet> per_bucket(work.size());
  parallel_for(work.size(), jobs, [&](std::size_t i) {
    result.matrices[i] = similarity_matrix(*work[i], vectors);
    per_bucket[i] = align(result.matrices[i], threshold, strategy);
    if (dump_dir) dump_matrix_csv(result.matrices[i], *dump_dir / (work[i]->date + ".csv"));
  });

  result.pairs = {{}, strategy, threshold};
  for (auto& ps : per_bucket)
    result.pairs.pairs.insert(result.pairs.pairs.end(), std::make_move_iterator(ps.pairs.begin()),
                              std::make_move_iterator(ps.pairs.end()));
  return result;
}

std::vector<SentencePair> align_sentence_corpus(const std::vector<DocPair>& doc_pairs, const DocumentIndex& docs,
                                                const Segmenter& segmenter, const EmbeddingMatrix& sentence_vectors,
                                                std::size_t min_chars, MinCharsRule rule, std::size_t jobs) {
  std::vector<std::vector<SentencePair>> per_pair(doc_pairs.size());
  parallel_for(doc_pairs.size(), jobs, [&](std::size_t i) {
    const auto& p = doc_pairs[i];
    const auto src = segment_sentences(docs.at(p.src_id), segmenter);
    const auto tgt = segment_sentences(docs.at(p.tgt_id), segmenter);
    per_pair[i] = filter_short_pairs(align_sentences(p, src, tgt, sentence_vectors), min_chars, rule);
  });
  std::vector<SentencePair> out;
  for (auto& v : per_pair) out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  return out;
}

std::vector<MetricsRow> compute_metrics(const std::vector<DocPair>& doc_pairs,
                                        const std::vector<SentencePair>& sentence_pairs, const DocumentIndex& docs,
                                        const Segmenter& segmenter, double analysis_threshold) {
  std::map<std::pair<std::string, std::string>, std::vector<SentencePair>> grouped;
  for (const auto& s : sentence_pairs) grouped[{s.src.doc_id, s.tgt.doc_id}].push_back(s);

  std::vector<MetricsRow> rows;
  rows.reserve(doc_pairs.size());
  for (const auto& p : doc_pairs) {
    const std::size_t src_total = segment_sentences(docs.at(p.src_id), segmenter).size();
    const std::size_t tgt_total = segment_sentences(docs.at(p.tgt_id), segmenter).size();
    const auto it = grouped.find({p.src_id, p.tgt_id});
    static const std::vector<SentencePair> kNone;
    rows.push_back({p, compute_pair_metrics(it == grouped.end() ? kNone : it->second, src_total, tgt_total,
                                            analysis_threshold)});
  }
  return rows;
}

nlohmann::json write_report(const ReportInputs& in, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const RuleSegmenter segmenter;
  nlohmann::ordered_json summary;
  std::vector<std::string> notices;

  const auto release = top_k(in.alignments, in.top_k);
  std::optional<double> cutoff;
  if (!release.empty() && release.size() < in.alignments.size()) cutoff = release.back().score;

  if (in.documents) {
    std::vector<std::pair<std::string, StatsTable>> subsets;
    subsets.emplace_back("aligned", corpus_stats(*in.documents, in.languages, &in.alignments, segmenter));
    subsets.emplace_back("top_k", corpus_stats(*in.documents, in.languages, &release, segmenter));
    write_text_file(out_dir / "stats.csv", stats_csv(subsets));
    notices.push_back("token counts skipped: no tokenizer configured");
  } else {
    notices.push_back("stats.csv skipped: no documents supplied");
  }

  const auto hist = score_histogram(in.alignments, in.histogram_bins, in.histogram_low, 100.0);
  write_text_file(out_dir / "histogram.csv", histogram_csv(hist));
  write_text_file(out_dir / "histogram.svg", histogram_svg(hist, cutoff, "Document similarity score distribution"));

  std::vector<double> scores;
  std::vector<std::optional<double>> ar_src, ar_tgt, lcorr, mono;
  for (const auto& r : in.metrics) {
    scores.push_back(r.pair.score);
    ar_src.push_back(r.metrics.align_ratio_src);
    ar_tgt.push_back(r.metrics.align_ratio_tgt);
    lcorr.push_back(r.metrics.length_corr);
    mono.push_back(r.metrics.monotonicity);
  }
  const auto c_src = metric_correlation(scores, ar_src);
  const auto c_tgt = metric_correlation(scores, ar_tgt);
  const auto c_len = metric_correlation(scores, lcorr);
  const auto c_mono = metric_correlation(scores, mono);

  // AlignRatio for both languages shares one file: score, src ratio, tgt ratio.
  {
    std::string csv = "score,align_ratio_" + in.languages.source + ",align_ratio_" + in.languages.target + "\n";
    for (std::size_t i = 0; i < scores.size(); ++i) {
      auto cell = [](const std::optional<double>& v) { return v ? text::format_fixed(*v, 6) : std::string("NA"); };
      csv += text::format_fixed(scores[i], 4) + "," + cell(ar_src[i]) + "," + cell(ar_tgt[i]) + "\n";
    }
    write_text_file(out_dir / "scatter_alignratio.csv", csv);
  }
  write_text_file(out_dir / "scatter_lengthcorr.csv", scatter_csv(c_len, "length_corr"));
  write_text_file(out_dir / "scatter_monotonicity.csv", scatter_csv(c_mono, "monotonicity"));
  write_text_file(out_dir / ("scatter_alignratio_" + in.languages.source + ".svg"),
                  scatter_svg(c_src, "document score", "AlignRatio", "AlignRatio " + in.languages.source));
  write_text_file(out_dir / ("scatter_alignratio_" + in.languages.target + ".svg"),
                  scatter_svg(c_tgt, "document score", "AlignRatio", "AlignRatio " + in.languages.target));
  write_text_file(out_dir / "scatter_lengthcorr.svg",
                  scatter_svg(c_len, "document score", "sentence length correlation", "Sentence length correlation"));
  write_text_file(out_dir / "scatter_monotonicity.svg",
                  scatter_svg(c_mono, "document score", "monotonicity", "Monotonicity"));

  summary["aligned_pairs"] = in.alignments.size();
  summary["released_pairs"] = release.size();
  summary["top_k"] = in.top_k;
  summary["cutoff_score"] = cutoff ? nlohmann::json(round_to(*cutoff, kScoreDecimals)) : nlohmann::json(nullptr);
  if (!release.empty()) {
    const double sum = std::accumulate(release.begin(), release.end(), 0.0,
                                       [](double acc, const DocPair& p) { return acc + p.score; });
    summary["release_score"] = {{"max", round_to(release.front().score, kScoreDecimals)},
                                {"mean", round_to(sum / release.size(), kScoreDecimals)},
                                {"min", round_to(release.back().score, kScoreDecimals)}};
  }
  summary["histogram"] = {{"low", round_to(in.histogram_low, kScoreDecimals)},
                          {"high", 100.0},
                          {"bins", in.histogram_bins},
                          {"below", hist.below},
                          {"above", hist.above}};
  nlohmann::ordered_json corr;
  auto add = [&](const std::string& name, const CorrelationResult& c) {
    corr[name] = {{"r", optional_json(c.r)}, {"observations", c.observations.size()}};
  };
  add("align_ratio_" + in.languages.source, c_src);
  add("align_ratio_" + in.languages.target, c_tgt);
  add("length_corr", c_len);
  add("monotonicity", c_mono);
  summary["correlations"] = corr;
  summary["metrics_pairs"] = in.metrics.size();
  summary["notices"] = notices;
  write_text_file(out_dir / "summary.json", summary.dump(2) + "\n");
  return summary;
}

void RunManifest::add_input(const fs::path& path) { inputs[path.string()] = sha256_file(path); }

void RunManifest::add_output(const fs::path& base, const fs::path& path) {
  outputs[fs::relative(path, base).generic_string()] = sha256_file(path);
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = version;
  j["config"] = config;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["counts"] = counts;
  nlohmann::ordered_json timings = nlohmann::ordered_json::array();
  for (const auto& [stage, s] : stage_seconds) timings.push_back({{"stage", stage}, {"seconds", s}});
  j["stage_seconds"] = timings;
  return j;
}

void RunManifest::write(const fs::path& path) const { write_text_file(path, to_json().dump(2) + "\n"); }

RunManifest run_pipeline(const RunConfig& config) {
  RunManifest manifest;
  manifest.config = config.to_json();
  const fs::path out = config.output_dir;
  fs::create_directories(out);
  std::vector<fs::path> written;
  auto emit = [&](const fs::path& path, const std::string& contents) {
    write_text_file(path, contents);
    written.push_back(path);
  };
  auto stage_error = [](const std::string& stage, const std::exception& e) {
    return Error("stage " + stage + " failed: " + e.what());
  };

  std::vector<Document> docs;
  std::optional<GoldSet> gold;
  {
    StageTimer t(manifest, "validate");
    try {
      manifest.add_input(config.documents);
      docs = load_documents(config.documents, config.languages);
      const auto summary = validate_corpus(docs, config.languages);
      for (const auto& [lang, n] : summary.per_language) manifest.counts["documents_" + lang] = n;
      if (config.gold) {
        manifest.add_input(*config.gold);
        gold = load_gold(*config.gold);
        check_gold_against(*gold, docs);
      }
    } catch (const std::exception& e) {
      throw stage_error(t.name(), e);
    }
  }
  const DocumentIndex index(docs);
  const RuleSegmenter segmenter;

  EmbeddingMatrix doc_vectors;
  {
    StageTimer t(manifest, "embed");
    try {
      if (config.provider.mode == ProviderMode::File) manifest.add_input(config.provider.vectors_path);
      const auto units = alignment_units(docs);
      doc_vectors = embed_texts(units, config.provider);
    } catch (const std::exception& e) {
      throw stage_error(t.name(), e);
    }
  }

  DocAlignment aligned;
  double threshold = config.threshold;
  {
    StageTimer t(manifest, "align-docs");
    try {
      aligned = align_documents(docs, config.languages, doc_vectors, config.strategy, threshold, config.jobs,
                                config.dump_matrices);
      manifest.counts["date_buckets"] = aligned.buckets;
      manifest.counts["unalignable_buckets"] = aligned.unalignable_buckets;
    } catch (const std::exception& e) {
      throw stage_error(t.name(), e);
    }
  }

  if (gold) {
    StageTimer t(manifest, "tune");
    try {
      const auto sweep = sweep_threshold(aligned.matrices, *gold, config.strategy, config.jobs);
      std::string csv = "threshold,precision,recall,f1\n";
      for (const auto& p : sweep.curve)
        csv += text::format_fixed(p.threshold, 1) + "," + text::format_fixed(p.metrics.precision, 6) + "," +
               text::format_fixed(p.metrics.recall, 6) + "," + text::format_fixed(p.metrics.f1, 6) + "\n";
      emit(out / "tune.csv", csv);
      if (config.use_tuned_threshold && sweep.best_threshold != threshold) {
        threshold = sweep.best_threshold;
        aligned.pairs = {{}, config.strategy, threshold};
        for (const auto& m : aligned.matrices) {
          auto ps = align(m, threshold, config.strategy);
          aligned.pairs.pairs.insert(aligned.pairs.pairs.end(), ps.pairs.begin(), ps.pairs.end());
        }
      }
    } catch (const std::exception& e) {
      throw stage_error(t.name(), e);
    }
  }
  manifest.counts["candidate_pairs"] = aligned.pairs.pairs.size();
  emit(out / "candidates.jsonl", alignments_jsonl(aligned.pairs));

  CleanupResult cleaned;
  {
    StageTimer t(manifest, "clean");
    try {
      cleaned = filter_faulty_pairs(aligned.pairs, index, config.cleanup);
    } catch (const std::exception& e) {
      throw stage_error(t.name(), e);
    }
    emit(out / "alignments.jsonl", alignments_jsonl(cleaned.kept));
    emit(out / "removed.jsonl", removed_jsonl(cleaned.removed));
    manifest.counts["kept_pairs"] = cleaned.kept.pairs.size();
    manifest.counts["removed_pairs"] = cleaned.removed.size();
  }

  const PairSet release{top_k(cleaned.kept.pairs, config.top_k), config.strategy, threshold};
  emit(out / "release.jsonl", alignments_jsonl(release));
  manifest.counts["released_pairs"] = release.pairs.size();

  std::vector<SentencePair> sentence_pairs;
  {
    StageTimer t(manifest, "align-sents");
    try {
      EmbeddingMatrix sentence_vectors;
      std::vector<Document> released_docs;
      std::set<std::string> seen;
      for (const auto& p : release.pairs)
        for (const auto* id : {&p.src_id, &p.tgt_id})
          if (seen.insert(*id).second) released_docs.push_back(index.at(*id));
      const auto units = sentence_units(released_docs, segmenter);
      if (!units.empty()) {
        ProviderConfig sp = config.provider;
        if (sp.mode == ProviderMode::File) {
          if (!config.sentence_vectors) throw ValidationError("file provider needs \"sentence_vectors\"");
          sp.vectors_path = *config.sentence_vectors;
          manifest.add_input(sp.vectors_path);
        }
        sentence_vectors = embed_texts(units, sp);
      }
      sentence_pairs = align_sentence_corpus(release.pairs, index, segmenter, sentence_vectors, config.min_chars,
                                             config.min_chars_rule, config.jobs);
    } catch (const std::exception& e) {
      throw stage_error(t.name(), e);
    }
    emit(out / "sentence_alignments.jsonl", sentence_pairs_jsonl(sentence_pairs));
    manifest.counts["sentence_pairs"] = sentence_pairs.size();
    manifest.counts["sentence_pairs_above_analysis_threshold"] =
        std::count_if(sentence_pairs.begin(), sentence_pairs.end(),
                      [&](const SentencePair& s) { return s.score >= config.analysis_threshold; });
  }

  std::vector<MetricsRow> metrics;
  {
    StageTimer t(manifest, "metrics");
    try {
      metrics = compute_metrics(release.pairs, sentence_pairs, index, segmenter, config.analysis_threshold);
    } catch (const std::exception& e) {
      throw stage_error(t.name(), e);
    }
    emit(out / "metrics.jsonl", metrics_jsonl(metrics));
  }

  {
    StageTimer t(manifest, "report");
    ReportInputs ri;
    ri.documents = &docs;
    ri.languages = config.languages;
    ri.alignments = cleaned.kept.pairs;
    ri.metrics = metrics;
    ri.histogram_low = threshold;
    ri.histogram_bins = config.histogram_bins;
    ri.top_k = config.top_k;
    try {
      write_report(ri, out / "report");
    } catch (const std::exception& e) {
      throw stage_error(t.name(), e);
    }
    for (const auto& entry : fs::directory_iterator(out / "report")) written.push_back(entry.path());
  }

  if (config.dump_matrices)
    for (const auto& entry : fs::directory_iterator(*config.dump_matrices)) written.push_back(entry.path());
  std::sort(written.begin(), written.end());
  for (const auto& p : written) manifest.add_output(out, p);
  manifest.write(out / "manifest.json");
  return manifest;
}

}  // namespace xdalign
