#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "tadpole/errors.hpp"
#include "tadpole/trace_io.hpp"

using namespace tadpole;

namespace {

std::string five_rows() {
  return "1e9,1,0\n2e9,0.5,0.5\n3e9,0,1\n4e9,-0.5,0.5\n5e9,-1,0\n";
}

FrequencyTrace parse_csv(const std::string& text) {
  std::istringstream in(text);
  return io::read_trace_csv(in, "test.csv");
}

FrequencyTrace parse_s2p(const std::string& text) {
  std::istringstream in(text);
  return io::read_touchstone(in, 2, "test.s2p");
}

// Line number carried by the ParseError thrown from `fn`.
template <typename Fn>
std::size_t error_line(Fn&& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "no ParseError";
  return 0;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("tadpole_test_" + name);
}

}  // namespace

TEST(TraceCsv, ParsesMetadataAndSamples) {
  const auto t = parse_csv(
      "# label=res_A\n# power_dbm=-120.5\n# temperature_k=0.02\n# operator=lab 3\n"
      "freq_hz,re,im\n" +
      five_rows());
  EXPECT_EQ(t.label, "res_A");
  EXPECT_DOUBLE_EQ(*t.power_dbm, -120.5);
  EXPECT_DOUBLE_EQ(*t.temperature_k, 0.02);
  EXPECT_EQ(t.attributes.at("operator"), "lab 3");
  ASSERT_EQ(t.size(), 5u);
  EXPECT_EQ(t.s21[2], complex(0.0, 1.0));
}

TEST(TraceCsv, TooFewPoints) {
  EXPECT_THROW(parse_csv("freq_hz,re,im\n1,1,0\n2,1,0\n3,1,0\n"), ParseError);
}

TEST(TraceCsv, BadHeaderNamesLine) {
  EXPECT_EQ(error_line([] { parse_csv("# label=x\nf,re,im\n" + five_rows()); }), 2u);
}

TEST(TraceCsv, NonMonotoneGridNamesLine) {
  EXPECT_EQ(error_line([] { parse_csv("freq_hz,re,im\n1,1,0\n2,1,0\n2,1,0\n4,1,0\n5,1,0\n"); }), 4u);
}

TEST(TraceCsv, NonFiniteSampleNamesLine) {
  EXPECT_EQ(error_line([] { parse_csv("freq_hz,re,im\n1,1,0\n2,nan,0\n3,1,0\n4,1,0\n5,1,0\n"); }),
            3u);
  EXPECT_EQ(error_line([] { parse_csv("freq_hz,re,im\n1,1,0\n2,1,0\n3,1,inf\n4,1,0\n5,1,0\n"); }),
            4u);
}

TEST(TraceCsv, UnparsableNumberNamesLine) {
  EXPECT_EQ(error_line([] { parse_csv("freq_hz,re,im\n1,1,0\n2,x,0\n3,1,0\n4,1,0\n5,1,0\n"); }), 3u);
}

TEST(TraceCsv, MissingHeader) { EXPECT_THROW(parse_csv("# label=x\n"), ParseError); }

TEST(Touchstone, MagnitudeAngleIdentity) {
  std::string text = "! two-port\n# HZ S MA R 50\n";
  for (int i = 1; i <= 5; ++i) text += std::to_string(i) + "e6 0 0 1 0 1 0 0 0\n";
  const auto t = parse_s2p(text);
  ASSERT_EQ(t.size(), 5u);
  for (const auto& z : t.s21) EXPECT_EQ(z, complex(1.0, 0.0));
  EXPECT_DOUBLE_EQ(t.frequency[0], 1e6);
}

TEST(Touchstone, UnitsAndFormats) {
  std::string ri = "# MHZ S RI R 50\n";
  std::string db = "# KHZ S DB R 50\n";
  for (int i = 1; i <= 5; ++i) {
    ri += std::to_string(i) + " 0 0 0.3 -0.4 0 0 0 0\n";
    db += std::to_string(i) + " 0 0 -6.0205999132796239 90 0 0 0 0\n";
  }
  const auto a = parse_s2p(ri);
  EXPECT_DOUBLE_EQ(a.frequency[4], 5e6);
  EXPECT_EQ(a.s21[0], complex(0.3, -0.4));
  const auto b = parse_s2p(db);
  EXPECT_DOUBLE_EQ(b.frequency[0], 1e3);
  EXPECT_NEAR(b.s21[0].real(), 0.0, 1e-12);
  EXPECT_NEAR(b.s21[0].imag(), 0.5, 1e-12);
}

TEST(Touchstone, DefaultsToGhzMagnitudeAngle) {
  std::string text;
  for (int i = 1; i <= 5; ++i) text += std::to_string(i) + " 0 0 2 180 0 0 0 0\n";
  const auto t = parse_s2p(text);
  EXPECT_DOUBLE_EQ(t.frequency[1], 2e9);
  EXPECT_NEAR(t.s21[0].real(), -2.0, 1e-12);
}

TEST(Touchstone, RecordsMayWrapLines) {
  std::string text = "# GHZ S RI\n";
  for (int i = 1; i <= 5; ++i) text += std::to_string(i) + " 0 0\n 0.5 0.5\n 0 0 0 0\n";
  const auto t = parse_s2p(text);
  ASSERT_EQ(t.size(), 5u);
  EXPECT_EQ(t.s21[3], complex(0.5, 0.5));
}

TEST(Touchstone, OnePortUsesS11) {
  std::istringstream in("# HZ S RI\n1 0.1 0.2\n2 0.1 0.2\n3 0.1 0.2\n4 0.1 0.2\n5 0.1 0.2\n");
  const auto t = io::read_touchstone(in, 1, "x.s1p");
  EXPECT_EQ(t.s21[0], complex(0.1, 0.2));
}

TEST(Touchstone, RejectsVersionTwoKeywords) {
  EXPECT_EQ(error_line([] { parse_s2p("! header\n[Version] 2.0\n# HZ S RI\n"); }), 2u);
}

TEST(Touchstone, NonMonotoneGridNamesLine) {
  EXPECT_EQ(error_line([] {
              parse_s2p("# HZ S RI\n1 0 0 1 0 0 0 0 0\n3 0 0 1 0 0 0 0 0\n2 0 0 1 0 0 0 0 0\n");
            }),
            4u);
}

TEST(Touchstone, IncompleteRecord) {
  EXPECT_THROW(parse_s2p("# HZ S RI\n1 0 0 1 0 0 0 0\n"), ParseError);
}

TEST(TraceFile, RoundTripPreservesValuesAndMetadata) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    FrequencyTrace t;
    t.label = "trace " + std::to_string(rep);
    t.power_dbm = -100.0 - rep * 0.37;
    if (rep % 2) t.temperature_k = 0.011 * rep;
    t.attributes["noise_seed"] = std::to_string(rep);
    double f = 4e8 + std::abs(g(rng)) * 1e6;
    for (int i = 0; i < 50; ++i) {
      f += 1.0 + std::abs(g(rng)) * 1e3;
      t.frequency.push_back(f);
      t.s21.emplace_back(g(rng) * 1e-3, g(rng) * 1e5);
    }
    const auto path = temp_path("roundtrip.csv");
    io::write_trace(t, path);
    const auto back = io::read_trace(path);
    EXPECT_EQ(back, t);  // 17 significant digits round-trip doubles exactly
    std::filesystem::remove(path);
  }
}

TEST(TraceFile, EmptyTraceWriteFails) {
  std::ostringstream out;
  EXPECT_THROW(io::write_trace_csv(FrequencyTrace{}, out), IoError);
}

TEST(TraceFile, FormatByExtension) {
  const auto path = temp_path("trace.s2p");
  {
    std::ofstream out(path);
    out << "# HZ S RI\n";
    for (int i = 1; i <= 5; ++i) out << i << " 0 0 1 0 0 0 0 0\n";
  }
  const auto t = io::read_trace(path);
  EXPECT_EQ(t.label, "tadpole_test_trace");
  EXPECT_EQ(t.size(), 5u);
  std::filesystem::remove(path);
  EXPECT_THROW(io::read_trace(temp_path("missing.csv")), IoError);
  EXPECT_THROW(io::read_trace(temp_path("whatever.txt")), IoError);
}

TEST(Trace, ValidateNamesRow) {
  FrequencyTrace t;
  t.frequency = {1, 2, 3, 3, 5};
  t.s21.assign(5, complex(1.0, 0.0));
  try {
    t.validate();
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("4"), std::string::npos) << e.what();
  }
}

TEST(Trace, SliceAndPowerConversion) {
  FrequencyTrace t;
  for (int i = 0; i < 10; ++i) {
    t.frequency.push_back(i);
    t.s21.emplace_back(i, 0);
  }
  t.power_dbm = -90.0;
  const auto s = slice(t, 2.0, 6.0);
  EXPECT_EQ(s.size(), 5u);
  EXPECT_EQ(s.power_dbm, t.power_dbm);
  EXPECT_DOUBLE_EQ(dbm_to_watts(30.0), 1.0);
  EXPECT_NEAR(watts_to_dbm(dbm_to_watts(-147.6)), -147.6, 1e-12);
}
