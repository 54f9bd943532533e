#include <gtest/gtest.h>

#include "nsgev/error.hpp"
#include "nsgev/series.hpp"

using namespace nsgev;

TEST(Csv, Minimal) {
  const auto s = parse_series_csv("year,value\n1968,150.2\n1969,98.4");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.t(0), 1.0);
  EXPECT_EQ(s.t(1), 2.0);
  EXPECT_DOUBLE_EQ(s.values()[0], 150.2);
}

TEST(Csv, GapsKeepTrueTimeIndex) {
  const auto s = parse_series_csv("year,value\n1897,1.1\n1899,1.2\n1989,1.5\n");
  EXPECT_EQ(s.t(1), 3.0);
  EXPECT_EQ(s.t(2), 93.0);
}

TEST(Csv, CovariatesBomAndCrlf) {
  const auto s = parse_series_csv("\xEF\xBB\xBFyear,value,soi\r\n1900,1.4,-0.3\r\n1901,1.5,0.8\r\n");
  ASSERT_TRUE(s.has_covariate("soi"));
  EXPECT_DOUBLE_EQ(s.covariate("soi")[1], 0.8);
}

TEST(Csv, EmptyValuesSkippedWithCount) {
  CsvIngestReport rep;
  const auto s = parse_series_csv("year,value\n2000,1\n2001,\n2002,3\n", &rep);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(rep.skipped_empty, 1u);
  EXPECT_EQ(s.t(1), 3.0);
}

TEST(Csv, ErrorsNameTheLine) {
  try {
    parse_series_csv("year,value\n2000,1\n2001,2\n2001,3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  try {
    parse_series_csv("year,value\n2000,abc\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_series_csv("2000,1\n2001,2\n"), ParseError);
  EXPECT_THROW(parse_series_csv(""), ParseError);
  EXPECT_THROW(parse_series_csv("year,value\n2001,1\n2000,2\n"), ParseError);
}

TEST(Series, SubsetAndWithValues) {
  auto s = parse_series_csv("year,value,x\n1,1,10\n2,2,20\n3,3,30\n4,4,40\n");
  const std::vector<std::size_t> rows{1, 3};
  const auto sub = s.subset(rows);
  EXPECT_EQ(sub.size(), 2u);
  EXPECT_EQ(sub.t(1), 4.0);
  EXPECT_DOUBLE_EQ(sub.covariate("x")[1], 40.0);
  const auto w = s.with_values({5, 6, 7, 8});
  EXPECT_EQ(w.years(), s.years());
  EXPECT_DOUBLE_EQ(w.values()[3], 8.0);
  EXPECT_THROW(s.with_values({1, 2}), Error);
}
