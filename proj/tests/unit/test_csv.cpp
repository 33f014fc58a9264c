#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "acctest/csv.hpp"
#include "acctest/errors.hpp"

using namespace acctest;

TEST(Csv, ReadsQuotedAndTrimmedFields) {
  std::istringstream in("p, is_null\n0.1, 1\n\n\"0.2\",0\n");
  const auto t = read_csv(in);
  EXPECT_EQ(t.header, (std::vector<std::string>{"p", "is_null"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][0], "0.2");
  EXPECT_EQ(t.column("is_null"), 1u);
  EXPECT_FALSE(t.column("q").has_value());
}

TEST(Csv, QuotedCommaAndEscapedQuote) {
  std::istringstream in("name,v\n\"a,b\",1\n\"say \"\"hi\"\"\",2\n");
  const auto t = read_csv(in);
  EXPECT_EQ(t.rows[0][0], "a,b");
  EXPECT_EQ(t.rows[1][0], "say \"hi\"");
}

TEST(Csv, Errors) {
  std::istringstream empty("");
  EXPECT_THROW(read_csv(empty), ValidationError);
  std::istringstream ragged("a,b\n1,2\n3\n");
  try {
    read_csv(ragged);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Csv, FieldQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("piecewise:0,0.5,1"), "\"piecewise:0,0.5,1\"");
  EXPECT_EQ(csv_field("a\"b"), "\"a\"\"b\"");
}

TEST(Csv, NumbersRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 0.0, 2.0 / 3.0, 123456.789}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
}
