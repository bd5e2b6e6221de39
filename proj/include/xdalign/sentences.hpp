#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "xdalign/aligner.hpp"
#include "xdalign/corpus.hpp"
#include "xdalign/embedding.hpp"

namespace xdalign {

struct Sentence {
  std::string doc_id;
  std::size_t idx = 0;
  std::string text;
  std::size_t char_len = 0;
};

struct SentencePair {
  Sentence src;
  Sentence tgt;
  double score = 0.0;
};

class Segmenter {
 public:
  virtual ~Segmenter() = default;
  virtual std::vector<std::string> split(std::string_view text, std::string_view lang) const = 0;
};

// Splits after . ! ? and ellipses (plus trailing closing quotes/brackets)
// when followed by whitespace, except after known abbreviations, initials,
// and German ordinals, or when the next word starts in lowercase.
class RuleSegmenter : public Segmenter {
 public:
  std::vector<std::string> split(std::string_view text, std::string_view lang) const override;

  static bool is_abbreviation(std::string_view token, std::string_view lang);
};

std::vector<Sentence> segment_sentences(const Document& doc, const Segmenter& segmenter);

// "<doc id>#<sentence index>"
std::string sentence_unit_id(std::string_view doc_id, std::size_t idx);

std::vector<TextUnit> sentence_units(const std::vector<Document>& docs, const Segmenter& segmenter);

// Mutual-best (Intersection, threshold 0) over the sentence similarity matrix.
// Sentence vectors are looked up by sentence_unit_id.
std::vector<SentencePair> align_sentences(const DocPair& doc_pair, const std::vector<Sentence>& src,
                                          const std::vector<Sentence>& tgt, const EmbeddingMatrix& sentence_vectors);

enum class MinCharsRule {
  EachSide,  // both sentences must reach min_chars
  Combined,  // the two lengths summed must reach min_chars
};

std::vector<SentencePair> filter_short_pairs(const std::vector<SentencePair>& pairs, std::size_t min_chars = 30,
                                             MinCharsRule rule = MinCharsRule::EachSide);

}  // namespace xdalign
