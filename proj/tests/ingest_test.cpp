#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "gmncs/ingest.hpp"
#include "support/fixtures.hpp"

namespace gmncs {
namespace {

ParseResult parse_string(const std::string& text, Format format) {
  std::istringstream in(text);
  return parse_dataset(in, format);
}

TEST(ParseJsonl, MapsFields) {
  const auto result = parse_string(
      R"({"id":"a1","year":2009,"categories":["2304"],"citations":7,"author_count":2,"countries":["GB"]})"
      "\n",
      Format::jsonl);
  ASSERT_TRUE(result.errors.empty());
  ASSERT_EQ(result.records.size(), 1u);
  const ArticleRecord expected{"a1", 2009, {"2304"}, 7, 2, {"GB"}};
  EXPECT_EQ(result.records[0], expected);
}

TEST(ParseJsonl, NegativeCitationsIsALineError) {
  const auto result = parse_string(
      R"({"id":"a1","year":2009,"categories":["X"],"citations":-1,"author_count":2,"countries":[]})", Format::jsonl);
  EXPECT_TRUE(result.records.empty());
  ASSERT_EQ(result.errors.size(), 1u);
  EXPECT_EQ(result.errors[0].line, 1u);
  EXPECT_EQ(result.errors[0].reason, "citations must be >= 0");
}

TEST(ParseJsonl, CountriesDedupCaseInsensitively) {
  const auto result = parse_string(
      R"({"id":"a1","year":2009,"categories":["X"],"citations":0,"author_count":1,"countries":["de","DE"]})",
      Format::jsonl);
  ASSERT_EQ(result.records.size(), 1u);
  EXPECT_EQ(result.records[0].countries, std::vector<std::string>{"DE"});
}

TEST(ParseJsonl, SchemaViolationsAreCollectedNotFatal) {
  const std::string text =
      R"({"id":"ok1","year":2010,"categories":["X"],"citations":1,"author_count":1,"countries":[]})"
      "\n"
      "not json\n"
      "\n"
      R"({"id":"b","year":2010,"categories":[],"citations":1,"author_count":1,"countries":[]})"
      "\n"
      R"({"id":"c","year":2010,"categories":["X"],"citations":1.5,"author_count":1,"countries":[]})"
      "\n"
      R"({"id":"d","year":2010,"categories":["X"],"citations":1,"author_count":0,"countries":[]})"
      "\n"
      R"({"id":"e","year":2010,"categories":["X"],"citations":1,"author_count":1})"
      "\n"
      R"({"id":"f","year":2010,"categories":["X"],"citations":1,"author_count":1,"countries":[],"extra":1})"
      "\n"
      R"({"id":"ok2","year":2011,"categories":["X","Y"],"citations":0,"author_count":12,"countries":[]})"
      "\n";
  const auto result = parse_string(text, Format::jsonl);
  ASSERT_EQ(result.records.size(), 2u);
  EXPECT_EQ(result.records[0].id, "ok1");
  EXPECT_EQ(result.records[1].id, "ok2");
  ASSERT_EQ(result.errors.size(), 6u);
  const std::vector<std::size_t> lines = {2, 4, 5, 6, 7, 8};
  for (std::size_t i = 0; i < lines.size(); ++i) EXPECT_EQ(result.errors[i].line, lines[i]);
  EXPECT_EQ(result.errors[1].reason, "categories must be non-empty");
  EXPECT_EQ(result.errors[3].reason, "author_count must be >= 1");
  EXPECT_EQ(result.errors[4].reason, "missing field 'countries'");
}

TEST(ParseCsv, ParsesListsAndEmptyCells) {
  const std::string text =
      "id,year,categories,citations,author_count,countries\n"
      "a1,2009,2304;1102,7,2,gb;De;GB\n"
      "a2,2010,X,0,1,\n"
      "\"a,3\",2010,X,3,1,RU\n";
  const auto result = parse_string(text, Format::csv);
  ASSERT_TRUE(result.errors.empty());
  ASSERT_EQ(result.records.size(), 3u);
  EXPECT_EQ(result.records[0].categories, (std::vector<std::string>{"2304", "1102"}));
  EXPECT_EQ(result.records[0].countries, (std::vector<std::string>{"GB", "DE"}));
  EXPECT_TRUE(result.records[1].countries.empty());
  EXPECT_EQ(result.records[2].id, "a,3");
}

TEST(ParseCsv, LineErrorsCarryPhysicalLineNumbers) {
  const std::string text =
      "id,year,categories,citations,author_count,countries\n"
      "a1,2009,X,-1,2,GB\n"
      "a2,2009,,1,2,GB\n"
      "a3,20x9,X,1,2,GB\n"
      "a4,2009,X,1,2\n"
      "a5,2009,X,1,2,GB\n";
  const auto result = parse_string(text, Format::csv);
  ASSERT_EQ(result.records.size(), 1u);
  ASSERT_EQ(result.errors.size(), 4u);
  EXPECT_EQ(result.errors[0].line, 2u);
  EXPECT_EQ(result.errors[0].reason, "citations must be >= 0");
  EXPECT_EQ(result.errors[3].line, 5u);
}

TEST(ParseCsv, WrongHeaderIsFatal) {
  EXPECT_THROW((void)parse_string("id,year\n", Format::csv), IngestError);
}

TEST(ParseFile, MissingFileIsFatal) {
  EXPECT_THROW((void)parse_file("/nonexistent/data.jsonl"), IngestError);
  EXPECT_THROW((void)parse_file("/nonexistent/data.unknown"), IngestError);
}

TEST(Format, FromExtension) {
  EXPECT_EQ(format_from_extension("a/b.jsonl"), Format::jsonl);
  EXPECT_EQ(format_from_extension("b.CSV"), Format::csv);
  EXPECT_FALSE(format_from_extension("b.txt").has_value());
}

TEST(ValidateDataset, ReportsDuplicatesAndUnknownCountries) {
  const std::vector<ArticleRecord> records = {
      {"a1", 2009, {"X"}, 1, 1, {"GB"}},
      {"a1", 2011, {"Y"}, 2, 12, {}},
      {"a2", 2010, {"X"}, 3, 1, {"RU"}},
  };
  const auto report = validate_dataset(records);
  EXPECT_EQ(report.duplicates, std::vector<std::string>{"a1"});
  EXPECT_EQ(report.unknown_country_count, 1u);
  EXPECT_EQ(report.over_ten_authors_count, 1u);
  EXPECT_EQ(report.year_min, 2009);
  EXPECT_EQ(report.year_max, 2011);
  EXPECT_EQ(report.category_counts.at("X"), 2u);
  EXPECT_FALSE(report.empty);
}

TEST(ValidateDataset, EmptyDatasetWarns) {
  const auto report = validate_dataset({});
  EXPECT_EQ(report.record_count, 0u);
  EXPECT_TRUE(report.empty);
  EXPECT_FALSE(report.warnings.empty());
  EXPECT_FALSE(report.year_min.has_value());
}

// Round trip and line accounting over generated datasets.
TEST(IngestProperty, RoundTripBothFormats) {
  std::mt19937_64 rng(11);
  testing::DatasetShape shape;
  shape.max_records = 60;
  shape.categories = {"1101", "Arts & Humanities", "x\"y", "c,d"};
  for (int i = 0; i < 1000; ++i) {
    const auto records = testing::random_dataset(rng, shape);
    for (const auto format : {Format::jsonl, Format::csv}) {
      std::ostringstream out;
      write_dataset(out, records, format);
      std::istringstream in(out.str());
      const auto parsed = parse_dataset(in, format);
      ASSERT_TRUE(parsed.errors.empty());
      ASSERT_EQ(parsed.records, records);
    }
  }
}

TEST(IngestProperty, EveryDataLineYieldsRecordOrError) {
  std::mt19937_64 rng(12);
  std::bernoulli_distribution corrupt(0.3);
  std::uniform_int_distribution<int> how(0, 3);
  for (int i = 0; i < 1000; ++i) {
    testing::DatasetShape shape;
    shape.max_records = 30;
    const auto records = testing::random_dataset(rng, shape);
    std::ostringstream out;
    write_jsonl(out, records);
    std::istringstream lines(out.str());
    std::string text;
    std::string line;
    std::size_t data_lines = 0;
    while (std::getline(lines, line)) {
      if (corrupt(rng)) {
        switch (how(rng)) {
          case 0: line = line.substr(0, line.size() / 2); break;
          case 1: line.replace(line.find("\"citations\":"), 12, "\"citations\":-"); break;
          case 2: line = "[]"; break;
          default: line.replace(line.find("\"year\":"), 7, "\"year\":\"x\","); break;
        }
      }
      text += line + "\n";
      ++data_lines;
    }
    const auto parsed = parse_string(text, Format::jsonl);
    ASSERT_EQ(parsed.records.size() + parsed.errors.size(), data_lines);
  }
}

}  // namespace
}  // namespace gmncs
