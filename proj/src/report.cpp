#include "xdalign/report.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "xdalign/metrics.hpp"
#include "xdalign/text.hpp"

namespace xdalign {

using text::format_fixed;

std::size_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}) + overflow(); }

Histogram score_histogram(const std::vector<DocPair>& pairs, std::size_t bins, double low, double high) {
  if (bins == 0) throw std::invalid_argument("score_histogram: bins must be >= 1");
  if (!(low < high)) throw std::invalid_argument("score_histogram: low must be below high");
  Histogram h;
  h.counts.assign(bins, 0);
  h.bin_edges.resize(bins + 1);
  const double width = (high - low) / static_cast<double>(bins);
  for (std::size_t k = 0; k <= bins; ++k) h.bin_edges[k] = low + static_cast<double>(k) * width;
  h.bin_edges.back() = high;

  for (const auto& p : pairs) {
    const double s = p.score;
    if (s < low) {
      ++h.below;
      continue;
    }
    if (s > high) {
      ++h.above;
      continue;
    }
    auto k = static_cast<std::size_t>(std::floor((s - low) / width));
    k = std::min(k, bins - 1);
    // Division can land one bin off near an edge; settle against the edges.
    if (k > 0 && s < h.bin_edges[k]) --k;
    if (k + 1 < bins && s >= h.bin_edges[k + 1]) ++k;
    ++h.counts[k];
  }
  return h;
}

std::vector<DocPair> top_k(const std::vector<DocPair>& pairs, std::size_t k) {
  std::vector<DocPair> sorted = pairs;
  std::sort(sorted.begin(), sorted.end(), [](const DocPair& a, const DocPair& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.src_id != b.src_id) return a.src_id < b.src_id;
    return a.tgt_id < b.tgt_id;
  });
  if (k < sorted.size()) sorted.resize(k);
  return sorted;
}

CorrelationResult metric_correlation(const std::vector<double>& doc_scores,
                                     const std::vector<std::optional<double>>& metric_values) {
  if (doc_scores.size() != metric_values.size()) throw std::invalid_argument("metric_correlation: length mismatch");
  CorrelationResult c;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < doc_scores.size(); ++i) {
    if (!metric_values[i]) continue;
    c.observations.emplace_back(doc_scores[i], *metric_values[i]);
    xs.push_back(doc_scores[i]);
    ys.push_back(*metric_values[i]);
  }
  c.r = pearson(xs, ys);
  return c;
}

StatsTable corpus_stats(const std::vector<Document>& docs, const LanguagePair& langs, const std::vector<DocPair>* pairs,
                        const Segmenter& segmenter, const Tokenizer& tokenizer) {
  std::set<std::string> wanted;
  if (pairs)
    for (const auto& p : *pairs) {
      wanted.insert(p.src_id);
      wanted.insert(p.tgt_id);
    }

  StatsTable table;
  table.languages.resize(2);
  table.languages[0].lang = langs.source;
  table.languages[1].lang = langs.target;
  if (tokenizer)
    for (auto& l : table.languages) l.tokens = 0;

  auto count_sentences = [&](const std::string& s, const std::string& lang) {
    return text::trim(s).empty() ? std::size_t{0} : segmenter.split(s, lang).size();
  };

  for (const auto& d : docs) {
    if (pairs && !wanted.contains(d.id)) continue;
    auto& l = d.lang == langs.source ? table.languages[0] : table.languages[1];
    if (d.lang != l.lang) continue;
    ++l.articles;
    const std::size_t tc = text::char_count(d.title), lc = text::char_count(d.lead), cc = text::char_count(d.content);
    l.title_chars += tc;
    l.lead_chars += lc;
    l.content_chars += cc;
    l.characters += tc + lc + cc;
    l.title_sentences += count_sentences(d.title, d.lang);
    l.lead_sentences += count_sentences(d.lead, d.lang);
    const std::size_t content_sentences = count_sentences(d.content, d.lang);
    l.content_sentences += content_sentences;
    l.sentences += content_sentences;
    if (tokenizer) *l.tokens += tokenizer(d.title, d.lang) + tokenizer(d.lead, d.lang) + tokenizer(d.content, d.lang);
  }
  return table;
}

std::string stats_csv(const std::vector<std::pair<std::string, StatsTable>>& subsets) {
  std::ostringstream out;
  out << "subset,lang,articles,sentences,tokens,characters,avg_title_chars,avg_lead_chars,avg_content_chars,"
         "avg_title_sentences,avg_lead_sentences,avg_content_sentences\n";
  for (const auto& [name, table] : subsets) {
    for (const auto& l : table.languages) {
      out << name << ',' << l.lang << ',' << l.articles << ',' << l.sentences << ','
          << (l.tokens ? std::to_string(*l.tokens) : std::string("NA")) << ',' << l.characters << ','
          << format_fixed(l.avg(l.title_chars), 2) << ',' << format_fixed(l.avg(l.lead_chars), 2) << ','
          << format_fixed(l.avg(l.content_chars), 2) << ',' << format_fixed(l.avg(l.title_sentences), 2) << ','
          << format_fixed(l.avg(l.lead_sentences), 2) << ',' << format_fixed(l.avg(l.content_sentences), 2) << '\n';
    }
  }
  return out.str();
}

std::string histogram_csv(const Histogram& h) {
  std::ostringstream out;
  out << "bin,low,high,count\n";
  for (std::size_t k = 0; k < h.counts.size(); ++k)
    out << k << ',' << format_fixed(h.bin_edges[k], 4) << ',' << format_fixed(h.bin_edges[k + 1], 4) << ','
        << h.counts[k] << '\n';
  out << "below,,," << h.below << '\n';
  out << "above,,," << h.above << '\n';
  return out.str();
}

std::string scatter_csv(const CorrelationResult& c, std::string_view metric_name) {
  std::ostringstream out;
  out << "score," << metric_name << '\n';
  for (const auto& [x, y] : c.observations) out << format_fixed(x, 4) << ',' << format_fixed(y, 6) << '\n';
  return out.str();
}

namespace {

constexpr double kWidth = 640, kHeight = 400, kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;

std::string escape_xml(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void svg_open(std::ostringstream& out, std::string_view title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape_xml(title)
      << "</text>\n";
}

void svg_axes(std::ostringstream& out, const Frame& f, std::string_view x_label, std::string_view y_label) {
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight << "\" y2=\""
      << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = f.x0 + (f.x1 - f.x0) * t / 4.0;
    const double yv = f.y0 + (f.y1 - f.y0) * t / 4.0;
    out << "<text x=\"" << format_fixed(f.px(xv), 1) << "\" y=\"" << kHeight - kBottom + 16
        << "\" text-anchor=\"middle\">" << format_fixed(xv, 1) << "</text>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << format_fixed(f.py(yv) + 4, 1) << "\" text-anchor=\"end\">"
        << format_fixed(yv, 2) << "</text>\n";
  }
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">" << escape_xml(x_label)
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kHeight / 2 << ")\">" << escape_xml(y_label) << "</text>\n";
}

}  // namespace

std::string histogram_svg(const Histogram& h, std::optional<double> cutoff, std::string_view title) {
  std::ostringstream out;
  svg_open(out, title);
  const std::size_t peak = h.counts.empty() ? 0 : *std::max_element(h.counts.begin(), h.counts.end());
  const Frame f{h.bin_edges.front(), h.bin_edges.back(), 0.0, std::max<double>(1.0, static_cast<double>(peak))};
  svg_axes(out, f, "cosine similarity score", "article pairs");
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    if (h.counts[k] == 0) continue;
    const double x = f.px(h.bin_edges[k]), w = f.px(h.bin_edges[k + 1]) - x;
    const double y = f.py(static_cast<double>(h.counts[k]));
    out << "<rect x=\"" << format_fixed(x, 2) << "\" y=\"" << format_fixed(y, 2) << "\" width=\""
        << format_fixed(w, 2) << "\" height=\"" << format_fixed(kHeight - kBottom - y, 2)
        << "\" fill=\"steelblue\"/>\n";
  }
  if (cutoff && *cutoff >= f.x0 && *cutoff <= f.x1) {
    const double x = f.px(*cutoff);
    out << "<line x1=\"" << format_fixed(x, 2) << "\" y1=\"" << kTop << "\" x2=\"" << format_fixed(x, 2) << "\" y2=\""
        << kHeight - kBottom << "\" stroke=\"black\" stroke-dasharray=\"6 4\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string scatter_svg(const CorrelationResult& c, std::string_view x_label, std::string_view y_label,
                        std::string_view title) {
  std::ostringstream out;
  std::string full_title(title);
  full_title += c.r ? " (r = " + format_fixed(*c.r, 3) + ")" : " (r undefined)";
  svg_open(out, full_title);
  double x0 = 0, x1 = 100, y0 = -1, y1 = 1;
  if (!c.observations.empty()) {
    const auto [xmin, xmax] = std::minmax_element(c.observations.begin(), c.observations.end());
    x0 = xmin->first;
    x1 = xmax->first;
    y0 = y1 = c.observations.front().second;
    for (const auto& [x, y] : c.observations) {
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
    if (x1 - x0 < 1e-9) x1 = x0 + 1;
    if (y1 - y0 < 1e-9) y1 = y0 + 1;
  }
  const Frame f{x0, x1, y0, y1};
  svg_axes(out, f, x_label, y_label);
  for (const auto& [x, y] : c.observations)
    out << "<circle cx=\"" << format_fixed(f.px(x), 2) << "\" cy=\"" << format_fixed(f.py(y), 2)
        << "\" r=\"2.5\" fill=\"steelblue\" fill-opacity=\"0.6\"/>\n";
  if (c.r && c.observations.size() >= 2) {
    // Least-squares trend line.
    double mx = 0, my = 0;
    for (const auto& [x, y] : c.observations) {
      mx += x;
      my += y;
    }
    mx /= c.observations.size();
    my /= c.observations.size();
    double sxy = 0, sxx = 0;
    for (const auto& [x, y] : c.observations) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    const double slope = sxy / sxx;
    const double ya = my + slope * (x0 - mx), yb = my + slope * (x1 - mx);
    out << "<line x1=\"" << format_fixed(f.px(x0), 2) << "\" y1=\"" << format_fixed(f.py(ya), 2) << "\" x2=\""
        << format_fixed(f.px(x1), 2) << "\" y2=\"" << format_fixed(f.py(yb), 2)
        << "\" stroke=\"crimson\" stroke-width=\"1.5\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace xdalign
