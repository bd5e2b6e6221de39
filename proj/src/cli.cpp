#include "xdalign/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "xdalign/digest.hpp"
#include "xdalign/error.hpp"
#include "xdalign/pipeline.hpp"
#include "xdalign/text.hpp"
#include "xdalign/vector_store.hpp"

namespace fs = std::filesystem;

namespace xdalign::cli {

namespace {

struct StageFailure : std::runtime_error {
  StageFailure(std::string stage, const std::string& what) : std::runtime_error(what), stage(std::move(stage)) {}
  std::string stage;
};

struct ProviderFlags {
  std::string endpoint;
  std::string model;
  std::size_t batch_size = 32;
  std::string auth_env;
  std::size_t max_in_flight = 1;
  std::string vectors;  // file mode source

  void attach(CLI::App* app, const std::string& vectors_flag, const std::string& vectors_help) {
    app->add_option(vectors_flag, vectors, vectors_help);
    app->add_option("--endpoint", endpoint, "Embedding service base URL (remote mode)");
    app->add_option("--model", model, "Model name sent to the embedding service");
    app->add_option("--batch-size", batch_size, "Texts per request")->check(CLI::PositiveNumber);
    app->add_option("--auth-env", auth_env, "Environment variable holding the bearer token");
    app->add_option("--max-in-flight", max_in_flight, "Concurrent requests")->check(CLI::PositiveNumber);
  }

  ProviderConfig config() const {
    ProviderConfig c;
    c.mode = endpoint.empty() ? ProviderMode::File : ProviderMode::Remote;
    c.endpoint = endpoint;
    c.model_name = model;
    c.batch_size = batch_size;
    c.auth_token_env = auth_env;
    c.max_in_flight = max_in_flight;
    c.vectors_path = vectors;
    return c;
  }
};

fs::path manifest_path_for(const fs::path& output) {
  fs::path p = output;
  p += ".manifest.json";
  return p;
}

void write_stage_manifest(const std::string& stage, const nlohmann::json& config, const std::vector<fs::path>& inputs,
                          const std::vector<fs::path>& outputs, double seconds, const fs::path& manifest_path) {
  RunManifest m;
  m.config = config;
  m.config["stage"] = stage;
  for (const auto& in : inputs) m.add_input(in);
  const fs::path base = manifest_path.has_parent_path() ? manifest_path.parent_path() : fs::path(".");
  for (const auto& out : outputs) m.add_output(base, out);
  m.stage_seconds.emplace_back(stage, seconds);
  m.write(manifest_path);
}

template <typename Fn>
void run_stage(const std::string& stage, Fn&& fn) {
  try {
    fn();
  } catch (const StageFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw StageFailure(stage, e.what());
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-lingual comparable corpus construction toolkit", "xdalign"};
  app.require_subcommand(1);
  app.set_version_flag("--version", XDALIGN_VERSION);

  std::string langs_flag = "de,fr";
  std::size_t jobs = 1;
  std::string input;

  // validate
  auto* validate = app.add_subcommand("validate", "Check a documents.jsonl corpus and print a summary");
  validate->add_option("--input", input, "documents.jsonl")->required();
  validate->add_option("--langs", langs_flag, "Language pair, source first");

  // embed
  std::string unit = "title-lead", embed_out;
  ProviderFlags embed_provider;
  auto* embed = app.add_subcommand("embed", "Embed title+lead or sentence units into a vector file");
  embed->add_option("--input", input, "documents.jsonl")->required();
  embed->add_option("--unit", unit, "title-lead | sentence")->check(CLI::IsMember({"title-lead", "sentence"}));
  embed->add_option("--out", embed_out, "Output vector file")->required();
  embed->add_option("--langs", langs_flag, "Language pair, source first");
  embed_provider.attach(embed, "--from-vectors", "Precomputed vector file (file mode)");

  // align-docs
  std::string vectors, strategy = "intersection", align_out, dump_dir;
  double threshold = 46.0;
  auto* align_docs = app.add_subcommand("align-docs", "Align documents within same-date buckets");
  align_docs->add_option("--input", input, "documents.jsonl")->required();
  align_docs->add_option("--vectors", vectors, "Title+lead vector file")->required();
  align_docs->add_option("--strategy", strategy, "above-threshold | best-fr | best-de | union | intersection");
  align_docs->add_option("--threshold", threshold, "Similarity threshold in [0, 100]")->check(CLI::Range(0.0, 100.0));
  align_docs->add_option("--out", align_out, "alignments.jsonl")->required();
  align_docs->add_option("--dump-matrices", dump_dir, "Write one CSV per date bucket here");
  align_docs->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  align_docs->add_option("--langs", langs_flag, "Language pair, source first");

  // tune
  std::string gold_path, curve_out;
  auto* tune = app.add_subcommand("tune", "Sweep thresholds 0..100 (step 0.5) against a gold set");
  tune->add_option("--input", input, "documents.jsonl")->required();
  tune->add_option("--vectors", vectors, "Title+lead vector file")->required();
  tune->add_option("--gold", gold_path, "gold.tsv")->required();
  tune->add_option("--strategy", strategy, "Alignment strategy");
  tune->add_option("--out", curve_out, "Also write the curve CSV here");
  tune->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  tune->add_option("--langs", langs_flag, "Language pair, source first");

  // clean
  std::string alignments_path, cleanup_path, kept_out, removed_out;
  auto* clean = app.add_subcommand("clean", "Remove faulty document pairs");
  clean->add_option("--input", input, "documents.jsonl")->required();
  clean->add_option("--alignments", alignments_path, "alignments.jsonl")->required();
  clean->add_option("--cleanup-config", cleanup_path, "cleanup.json");
  clean->add_option("--out", kept_out, "Kept pairs (JSONL)")->required();
  clean->add_option("--removed", removed_out, "Removal log (JSONL); defaults to <out>.removed.jsonl");
  clean->add_option("--langs", langs_flag, "Language pair, source first");

  // align-sents
  std::string doc_pairs_path, sents_out, min_chars_rule = "each-side";
  std::size_t min_chars = 30;
  double analysis_threshold = 46.0;
  ProviderFlags sent_provider;
  auto* align_sents = app.add_subcommand("align-sents", "Align sentences within aligned document pairs");
  align_sents->add_option("--input", input, "documents.jsonl")->required();
  align_sents->add_option("--doc-pairs", doc_pairs_path, "Document alignments (JSONL)")->required();
  sent_provider.attach(align_sents, "--sent-vectors", "Sentence vector file (file mode)");
  align_sents->add_option("--min-chars", min_chars, "Minimum sentence length in characters");
  align_sents->add_option("--min-chars-rule", min_chars_rule, "each-side | combined")
      ->check(CLI::IsMember({"each-side", "combined"}));
  align_sents->add_option("--analysis-threshold", analysis_threshold, "Score cut used by downstream analyses");
  align_sents->add_option("--out", sents_out, "sentence_alignments.jsonl")->required();
  align_sents->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  align_sents->add_option("--langs", langs_flag, "Language pair, source first");

  // metrics
  std::string sentence_pairs_path, metrics_out;
  auto* metrics = app.add_subcommand("metrics", "AlignRatio, sentence length correlation and monotonicity per pair");
  metrics->add_option("--input", input, "documents.jsonl")->required();
  metrics->add_option("--doc-pairs", doc_pairs_path, "Document alignments (JSONL)")->required();
  metrics->add_option("--sentence-pairs", sentence_pairs_path, "sentence_alignments.jsonl")->required();
  metrics->add_option("--analysis-threshold", analysis_threshold, "Only sentence pairs at or above this score count");
  metrics->add_option("--out", metrics_out, "metrics.jsonl")->required();
  metrics->add_option("--langs", langs_flag, "Language pair, source first");

  // report
  std::string metrics_path, report_dir;
  std::size_t top_k_count = 15000, bins = 100;
  auto* report = app.add_subcommand("report", "Corpus statistics, score histogram and correlation studies");
  report->add_option("--input", input, "documents.jsonl");
  report->add_option("--alignments", alignments_path, "Kept document alignments (JSONL)")->required();
  report->add_option("--metrics", metrics_path, "metrics.jsonl");
  report->add_option("--out", report_dir, "Report directory")->required();
  report->add_option("--threshold", threshold, "Histogram lower bound");
  report->add_option("--top-k", top_k_count, "Release size");
  report->add_option("--bins", bins, "Histogram bins")->check(CLI::PositiveNumber);
  report->add_option("--langs", langs_flag, "Language pair, source first");

  // pipeline
  std::string config_path, pipeline_out;
  std::optional<double> threshold_override;
  std::optional<std::size_t> top_k_override;
  std::optional<std::string> strategy_override;
  auto* pipeline = app.add_subcommand("pipeline", "Run every stage from one config file");
  pipeline->add_option("--config", config_path, "run.json")->required();
  auto* pipeline_jobs = pipeline->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  pipeline->add_option("--out", pipeline_out, "Output directory (overrides config)");
  pipeline->add_option("--threshold", threshold_override, "Overrides config threshold");
  pipeline->add_option("--top-k", top_k_override, "Overrides config top_k");
  pipeline->add_option("--strategy", strategy_override, "Overrides config strategy");

  std::vector<std::string> argv_rest(args.rbegin(), args.rend());
  if (!argv_rest.empty()) argv_rest.pop_back();  // program name
  try {
    app.parse(argv_rest);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    LanguagePair langs;
    run_stage("config", [&] { langs = LanguagePair::parse(langs_flag); });

    if (validate->parsed()) {
      run_stage("validate", [&] {
        const auto docs = load_documents(input, langs);
        out << validate_corpus(docs, langs).to_json().dump(2) << '\n';
      });
    } else if (embed->parsed()) {
      run_stage("embed", [&] {
        const auto docs = load_documents(input, langs);
        validate_corpus(docs, langs);
        const ProviderConfig pc = embed_provider.config();
        const RuleSegmenter segmenter;
        const auto units = unit == "sentence" ? sentence_units(docs, segmenter) : alignment_units(docs);
        const auto matrix = embed_texts(units, pc);
        save_vectors(matrix, embed_out);
        nlohmann::json cfg = {{"unit", unit}, {"langs", langs.to_string()}, {"model", pc.model_name},
                              {"batch_size", pc.batch_size}, {"endpoint", pc.endpoint}};
        std::vector<fs::path> inputs{input};
        if (pc.mode == ProviderMode::File) inputs.emplace_back(pc.vectors_path);
        write_stage_manifest("embed", cfg, inputs, {embed_out}, seconds_since(start), manifest_path_for(embed_out));
        out << "embedded " << matrix.rows() << " units, dim " << matrix.dim() << '\n';
      });
    } else if (align_docs->parsed()) {
      run_stage("align-docs", [&] {
        const Strategy s = parse_strategy(strategy);
        const auto docs = load_documents(input, langs);
        validate_corpus(docs, langs);
        const auto vecs = load_vectors(vectors);
        std::optional<fs::path> dump;
        if (!dump_dir.empty()) dump = dump_dir;
        const auto result = align_documents(docs, langs, vecs, s, threshold, jobs, dump);
        write_text_file(align_out, alignments_jsonl(result.pairs));
        nlohmann::json cfg = {{"strategy", to_string(s)}, {"threshold", threshold}, {"langs", langs.to_string()}};
        write_stage_manifest("align-docs", cfg, {input, vectors}, {align_out}, seconds_since(start),
                             manifest_path_for(align_out));
        out << "aligned " << result.pairs.pairs.size() << " pairs over " << result.buckets << " dates ("
            << result.unalignable_buckets << " unalignable)\n";
      });
    } else if (tune->parsed()) {
      run_stage("tune", [&] {
        const Strategy s = parse_strategy(strategy);
        const auto docs = load_documents(input, langs);
        validate_corpus(docs, langs);
        const auto gold = load_gold(gold_path);
        check_gold_against(gold, docs);
        const auto vecs = load_vectors(vectors);
        const auto aligned = align_documents(docs, langs, vecs, s, 0.0, jobs);
        const auto sweep = sweep_threshold(aligned.matrices, gold, s, jobs);
        std::string csv = "threshold,precision,recall,f1\n";
        for (const auto& p : sweep.curve)
          csv += text::format_fixed(p.threshold, 1) + "," + text::format_fixed(p.metrics.precision, 6) + "," +
                 text::format_fixed(p.metrics.recall, 6) + "," + text::format_fixed(p.metrics.f1, 6) + "\n";
        out << csv;
        out << "# best_threshold=" << text::format_fixed(sweep.best_threshold, 1)
            << " best_f1=" << text::format_fixed(sweep.best_f1, 6) << '\n';
        if (!curve_out.empty()) {
          write_text_file(curve_out, csv);
          write_stage_manifest("tune", {{"strategy", to_string(s)}}, {input, vectors, gold_path}, {curve_out},
                               seconds_since(start), manifest_path_for(curve_out));
        }
      });
    } else if (clean->parsed()) {
      run_stage("clean", [&] {
        const auto docs = load_documents(input, langs);
        validate_corpus(docs, langs);
        const DocumentIndex index(docs);
        CleanupConfig cc;
        std::vector<fs::path> inputs{input, alignments_path};
        if (!cleanup_path.empty()) {
          cc = load_cleanup_config(cleanup_path);
          inputs.emplace_back(cleanup_path);
        }
        PairSet ps;
        ps.pairs = read_alignments(alignments_path);
        const auto result = filter_faulty_pairs(ps, index, cc);
        if (removed_out.empty()) removed_out = kept_out + ".removed.jsonl";
        // Preserve the strategy/threshold columns of the input file.
        std::string kept;
        {
          std::ifstream in(alignments_path);
          std::string line;
          std::size_t i = 0, k = 0;
          while (std::getline(in, line)) {
            if (text::trim(line).empty()) continue;
            if (k < result.kept.pairs.size() && i < ps.pairs.size() && ps.pairs[i] == result.kept.pairs[k]) {
              kept += line + "\n";
              ++k;
            }
            ++i;
          }
        }
        write_text_file(kept_out, kept);
        write_text_file(removed_out, removed_jsonl(result.removed));
        write_stage_manifest("clean", cc.to_json(), inputs, {kept_out, removed_out}, seconds_since(start),
                             manifest_path_for(kept_out));
        out << "kept " << result.kept.pairs.size() << ", removed " << result.removed.size() << '\n';
      });
    } else if (align_sents->parsed()) {
      run_stage("align-sents", [&] {
        const auto docs = load_documents(input, langs);
        validate_corpus(docs, langs);
        const DocumentIndex index(docs);
        const auto pairs = read_alignments(doc_pairs_path);
        const RuleSegmenter segmenter;
        std::vector<Document> involved;
        std::set<std::string> seen;
        for (const auto& p : pairs)
          for (const auto* id : {&p.src_id, &p.tgt_id})
            if (seen.insert(*id).second) involved.push_back(index.at(*id));
        const auto units = sentence_units(involved, segmenter);
        EmbeddingMatrix vecs;
        const ProviderConfig pc = sent_provider.config();
        if (!units.empty()) vecs = embed_texts(units, pc);
        const auto rule = min_chars_rule == "combined" ? MinCharsRule::Combined : MinCharsRule::EachSide;
        const auto sents = align_sentence_corpus(pairs, index, segmenter, vecs, min_chars, rule, jobs);
        write_text_file(sents_out, sentence_pairs_jsonl(sents));
        std::vector<fs::path> inputs{input, doc_pairs_path};
        if (pc.mode == ProviderMode::File) inputs.emplace_back(pc.vectors_path);
        const auto above = std::count_if(sents.begin(), sents.end(),
                                         [&](const SentencePair& s) { return s.score >= analysis_threshold; });
        write_stage_manifest("align-sents",
                             {{"min_chars", min_chars}, {"min_chars_rule", min_chars_rule},
                              {"analysis_threshold", analysis_threshold}},
                             inputs, {sents_out}, seconds_since(start), manifest_path_for(sents_out));
        out << "aligned " << sents.size() << " sentence pairs (" << above << " at or above "
            << text::format_fixed(analysis_threshold, 1) << ")\n";
      });
    } else if (metrics->parsed()) {
      run_stage("metrics", [&] {
        const auto docs = load_documents(input, langs);
        validate_corpus(docs, langs);
        const DocumentIndex index(docs);
        const auto pairs = read_alignments(doc_pairs_path);
        const auto sents = read_sentence_pairs(sentence_pairs_path);
        const RuleSegmenter segmenter;
        const auto rows = compute_metrics(pairs, sents, index, segmenter, analysis_threshold);
        write_text_file(metrics_out, metrics_jsonl(rows));
        write_stage_manifest("metrics", {{"analysis_threshold", analysis_threshold}},
                             {input, doc_pairs_path, sentence_pairs_path}, {metrics_out}, seconds_since(start),
                             manifest_path_for(metrics_out));
        out << "computed metrics for " << rows.size() << " pairs\n";
      });
    } else if (report->parsed()) {
      run_stage("report", [&] {
        std::vector<Document> docs;
        std::vector<fs::path> inputs{alignments_path};
        ReportInputs ri;
        ri.languages = langs;
        if (!input.empty()) {
          docs = load_documents(input, langs);
          ri.documents = &docs;
          inputs.emplace_back(input);
        }
        ri.alignments = read_alignments(alignments_path);
        if (!metrics_path.empty()) {
          ri.metrics = read_metrics(metrics_path);
          inputs.emplace_back(metrics_path);
        }
        ri.histogram_low = threshold;
        ri.histogram_bins = bins;
        ri.top_k = top_k_count;
        const auto summary = write_report(ri, report_dir);
        std::vector<fs::path> outputs;
        for (const auto& e : fs::directory_iterator(report_dir))
          if (e.path().filename() != "manifest.json") outputs.push_back(e.path());
        std::sort(outputs.begin(), outputs.end());
        write_stage_manifest("report", {{"threshold", threshold}, {"top_k", top_k_count}, {"bins", bins}}, inputs,
                             outputs, seconds_since(start), fs::path(report_dir) / "manifest.json");
        out << summary.dump(2) << '\n';
      });
    } else if (pipeline->parsed()) {
      RunConfig config;
      run_stage("config", [&] {
        config = load_run_config(config_path);
        if (pipeline_jobs->count() > 0) config.jobs = jobs;
        if (!pipeline_out.empty()) config.output_dir = pipeline_out;
        if (threshold_override) config.threshold = *threshold_override;
        if (top_k_override) config.top_k = *top_k_override;
        if (strategy_override) config.strategy = parse_strategy(*strategy_override);
      });
      RunManifest manifest;
      try {
        manifest = run_pipeline(config);
      } catch (const std::exception& e) {
        throw StageFailure("pipeline", e.what());
      }
      out << nlohmann::json(manifest.counts).dump(2) << '\n';
    }
  } catch (const StageFailure& f) {
    err << "xdalign: " << f.stage << ": " << f.what() << '\n';
    return kExitStageFailure;
  }
  return kExitOk;
}

}  // namespace xdalign::cli
