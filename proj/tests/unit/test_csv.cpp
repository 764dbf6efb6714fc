#include "squeezelab/csv.hpp"
#include "squeezelab/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace squeezelab;

TEST(Csv, NumbersRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) {
    EXPECT_EQ(std::strtod(format_double(x).c_str(), nullptr), x);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
}

TEST(Csv, Quoting) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, WritesHeaderAndRows) {
  const auto path = std::filesystem::temp_directory_path() / "squeezelab_csv_test.csv";
  {
    CsvWriter w(path, {"n", "x", "label"});
    w.row({std::int64_t{3}, 0.25, std::string("a,b")});
    EXPECT_THROW(w.row({0.1}), InvalidArgument);
    w.close();
  }
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "n,x,label\r\n3,0.25,\"a,b\"\r\n");
  std::filesystem::remove(path);
}

TEST(Csv, UnwritablePathNamesThePath) {
  try {
    CsvWriter w("/nonexistent_dir_for_test/out.csv", {"a"});
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent_dir_for_test/out.csv"), std::string::npos);
  }
}
