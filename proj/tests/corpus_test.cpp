#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "support.hpp"
#include "xdalign/corpus.hpp"
#include "xdalign/error.hpp"
#include "xdalign/text.hpp"

using namespace xdalign;
using testing_support::fixture;
using testing_support::TempDir;

namespace {

Document doc(std::string id, std::string lang, std::string date = "2021-11-13") {
  return Document{std::move(id), std::move(lang), std::move(date), "T", "L", "C", nullptr};
}

template <typename E>
std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const E& e) {
    return e.what();
  }
  return "<no throw>";
}

}  // namespace

TEST(ParseDocumentRecord, ReadsAllFields) {
  const auto d = parse_document_record(
      R"({"id":"de-1","lang":"de","publish_date":"2021-11-13","title":"T","lead":"L","content":"C"})", 1, {});
  EXPECT_EQ(d.id, "de-1");
  EXPECT_EQ(d.lang, "de");
  EXPECT_EQ(d.publish_date, "2021-11-13");
  EXPECT_EQ(d.title, "T");
  EXPECT_EQ(d.lead, "L");
  EXPECT_EQ(d.content, "C");
  EXPECT_TRUE(d.meta.is_null());
}

TEST(ParseDocumentRecord, MissingFieldIsNamed) {
  const auto msg = message_of<ParseError>([] {
    parse_document_record(R"({"id":"de-1","lang":"de","publish_date":"2021-11-13","title":"T","content":"C"})", 7,
                          {});
  });
  EXPECT_NE(msg.find("\"lead\""), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 7"), std::string::npos) << msg;
}

TEST(ParseDocumentRecord, RejectsInvalidDate) {
  EXPECT_THROW(parse_document_record(
                   R"({"id":"x","lang":"de","publish_date":"2021-13-40","title":"T","lead":"L","content":"C"})", 1,
                   {}),
               ValidationError);
}

TEST(ParseDocumentRecord, RejectsForeignLanguageAndBadJson) {
  EXPECT_THROW(
      parse_document_record(R"({"id":"x","lang":"it","publish_date":"2021-11-13","title":"T","lead":"L","content":"C"})",
                            1, {}),
      ValidationError);
  EXPECT_THROW(parse_document_record("{not json", 1, {}), ParseError);
  EXPECT_THROW(parse_document_record(R"(["array"])", 1, {}), ParseError);
  EXPECT_THROW(
      parse_document_record(R"({"id":"x","lang":"de","publish_date":"2021-11-13","title":3,"lead":"L","content":"C"})",
                            1, {}),
      ParseError);
}

TEST(ParseDocumentRecord, KeepsMetaObject) {
  const auto d = parse_document_record(
      R"({"id":"x","lang":"fr","publish_date":"2021-11-13","title":"T","lead":"L","content":"C","meta":{"src":"rts"}})",
      1, {});
  EXPECT_EQ(d.meta["src"], "rts");
}

TEST(SerializeDocument, RoundTripsRandomDocuments) {
  std::mt19937_64 rng(11);
  const std::vector<std::string> pieces = {"Mobilité", "«Ab 2030»", " ", "\"q\"", "\\", "\t", "ß", "a", "Zürich"};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1), len(0, 6);
  auto random_text = [&] {
    std::string s = "[";
    for (std::size_t n = len(rng); n > 0; --n) s += pieces[pick(rng)];
    return s + "]";
  };
  for (int round = 0; round < 200; ++round) {
    Document d{"id-" + std::to_string(round), round % 2 ? "de" : "fr", "2020-02-29", random_text(), random_text(),
               random_text(), nullptr};
    const auto back = parse_document_record(serialize_document(d), 1, {});
    EXPECT_EQ(back, d);
  }
}

TEST(IsoDate, AcceptsRealDatesOnly) {
  EXPECT_TRUE(is_valid_iso_date("2021-11-13"));
  EXPECT_TRUE(is_valid_iso_date("2020-02-29"));
  EXPECT_FALSE(is_valid_iso_date("2021-02-29"));
  EXPECT_FALSE(is_valid_iso_date("2021-13-40"));
  EXPECT_FALSE(is_valid_iso_date("2021-1-13"));
  EXPECT_FALSE(is_valid_iso_date("13.11.2021"));
  EXPECT_FALSE(is_valid_iso_date(""));
}

TEST(ValidateCorpus, CountsPerLanguage) {
  const std::vector<Document> docs = {doc("a", "de"), doc("b", "de"), doc("c", "de"), doc("d", "fr"), doc("e", "fr")};
  const auto s = validate_corpus(docs, {});
  EXPECT_EQ(s.per_language.at("de"), 3u);
  EXPECT_EQ(s.per_language.at("fr"), 2u);
  EXPECT_TRUE(s.warnings.empty());
}

TEST(ValidateCorpus, DuplicateIdIsAnError) {
  const auto msg = message_of<ValidationError>([] { validate_corpus({doc("x", "de"), doc("x", "fr")}, {}); });
  EXPECT_NE(msg.find("duplicate"), std::string::npos) << msg;
  EXPECT_NE(msg.find("x"), std::string::npos) << msg;
}

TEST(ValidateCorpus, ForeignLanguageIsAnError) {
  EXPECT_THROW(validate_corpus({doc("a", "de"), doc("b", "it")}, {}), ValidationError);
}

TEST(ValidateCorpus, EmptyCorpusIsAnError) { EXPECT_THROW(validate_corpus({}, {}), ValidationError); }

TEST(ValidateCorpus, EmptyTitleOrLeadWarns) {
  auto a = doc("a", "de");
  a.title.clear();
  auto b = doc("b", "fr");
  b.lead.clear();
  const auto s = validate_corpus({a, b}, {});
  ASSERT_EQ(s.warnings.size(), 2u);
  EXPECT_EQ(s.per_date.at("2021-11-13").at("de"), 1u);
}

TEST(LanguagePair, ParsesCustomPair) {
  const auto p = LanguagePair::parse("en,it");
  EXPECT_EQ(p.source, "en");
  EXPECT_EQ(p.target, "it");
  EXPECT_THROW(LanguagePair::parse("de"), ValidationError);
  EXPECT_THROW(LanguagePair::parse("de,de"), ValidationError);
}

TEST(Gold, ParsesHeaderAndMatchesUnordered) {
  const auto g = parse_gold("# de\tfr\nde-1\tfr-1\n\nde-2\tfr-2\n");
  EXPECT_EQ(g.size(), 2u);
  EXPECT_TRUE(g.contains("de-1", "fr-1"));
  EXPECT_TRUE(g.contains("fr-2", "de-2"));
  EXPECT_FALSE(g.contains("de-1", "fr-2"));
}

TEST(Gold, RejectsMalformedAndDuplicatePairs) {
  EXPECT_THROW(parse_gold("de-1 fr-1\n"), ParseError);
  EXPECT_THROW(parse_gold("a\tb\tc\n"), ParseError);
  EXPECT_THROW(parse_gold("a\tb\nb\ta\n"), ValidationError);
}

TEST(Gold, UnknownIdsAreReported) {
  const std::vector<Document> docs = {doc("a", "de"), doc("b", "fr")};
  EXPECT_NO_THROW(check_gold_against(parse_gold("a\tb\n"), docs));
  EXPECT_THROW(check_gold_against(parse_gold("a\tzzz\n"), docs), ValidationError);
}

TEST(LoadDocuments, ReadsBundledFixture) {
  const auto docs = load_documents(fixture("documents.jsonl"), {});
  ASSERT_EQ(docs.size(), 20u);
  const auto s = validate_corpus(docs, {});
  EXPECT_EQ(s.per_language.at("de"), 11u);
  EXPECT_EQ(s.per_language.at("fr"), 9u);
  EXPECT_EQ(s.per_date.size(), 4u);
  const auto gold = load_gold(fixture("gold.tsv"));
  EXPECT_NO_THROW(check_gold_against(gold, docs));
}

TEST(LoadDocuments, ErrorNamesLine) {
  TempDir dir;
  std::ofstream(dir / "d.jsonl")
      << R"({"id":"a","lang":"de","publish_date":"2021-11-13","title":"T","lead":"L","content":"C"})" << "\n\n"
      << R"({"id":"b","lang":"de","publish_date":"2021-11-13","title":"T","content":"C"})" << "\n";
  const auto msg = message_of<ParseError>([&] { load_documents(dir / "d.jsonl", {}); });
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(DocumentIndex, LooksUpById) {
  const std::vector<Document> docs = {doc("a", "de"), doc("b", "fr")};
  DocumentIndex index(docs);
  EXPECT_EQ(index.at("b").lang, "fr");
  EXPECT_EQ(index.find("zz"), nullptr);
  EXPECT_THROW(index.at("zz"), ValidationError);
}

TEST(Text, TrimAndCount) {
  EXPECT_EQ(text::trim("\xC2\xA0 Mobilität \n"), "Mobilität");
  EXPECT_EQ(text::normalize_whitespace("  a \t b\n\nc "), "a b c");
  EXPECT_EQ(text::char_count("Mobilität"), 9u);
  EXPECT_EQ(text::char_count("«»"), 2u);
  EXPECT_EQ(text::to_lower_utf8("ÄÖÜ Élan"), "äöü élan");
  EXPECT_EQ(text::format_fixed(-0.00001, 4), "0.0000");
  EXPECT_EQ(text::format_fixed(70.71067, 4), "70.7107");
}
