#include <doctest.h>

#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "cfrsense/error.hpp"
#include "cfrsense/io/csv.hpp"
#include "cfrsense/prng.hpp"

using namespace cfrsense;
using namespace cfrsense::io;

namespace {

std::vector<CfrSnapshot> sample_snapshots(std::size_t n_sub, std::size_t frames) {
  rng::Stream rng(321, 0);
  std::vector<CfrSnapshot> out;
  for (std::size_t f = 0; f < frames; ++f) {
    CfrSnapshot s;
    s.frame_index = f;
    s.subject_id = 3;
    s.session_id = 1 + static_cast<std::uint32_t>(f % 2);
    s.label = f % 2 ? Label::dehydrated : Label::hydrated;
    for (std::size_t k = 0; k < n_sub; ++k) {
      double re = 0.0, im = 0.0;
      rng.next_gaussian_pair(re, im);
      s.h.emplace_back(re * 1e-3, im * 100.0);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string cfr_text(const std::vector<CfrSnapshot>& snaps) {
  std::ostringstream out;
  write_cfr_csv(snaps, out);
  return out.str();
}

std::vector<LabeledExample> sample_examples(std::size_t n_feat, std::size_t count) {
  rng::Stream rng(654, 0);
  std::vector<LabeledExample> out;
  for (std::size_t i = 0; i < count; ++i) {
    LabeledExample ex;
    ex.subject_id = static_cast<int>(i % 4);
    ex.session_id = static_cast<int>(i % 3);
    ex.window_index = static_cast<int>(i);
    ex.label = i % 2 ? Label::dehydrated : Label::hydrated;
    for (std::size_t k = 0; k < n_feat; ++k) {
      double a = 0.0, b = 0.0;
      rng.next_gaussian_pair(a, b);
      ex.features.push_back(a * std::pow(10.0, static_cast<double>(k) - 2.0) + b);
    }
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace

TEST_CASE("nine significant digit formatting") {
  CHECK(format_g9(0.0) == "0");
  CHECK(format_g9(1.0) == "1");
  CHECK(format_g9(0.1) == "0.1");
  CHECK(format_g9(-2.5) == "-2.5");
  CHECK(format_g9(1.0 / 3.0) == "0.333333333");
  CHECK(format_g9(123456789.0) == "123456789");
}

TEST_CASE("csv headers spell out every column") {
  CHECK(cfr_csv_header(2) ==
        "subject_id,session_id,frame_index,label,h00_re,h00_im,h01_re,h01_im");
  CHECK(examples_csv_header(3) == "subject_id,session_id,window_index,label,f00,f01,f02");
  const std::string wide = cfr_csv_header(64);
  CHECK(wide.find("h63_re,h63_im") != std::string::npos);
  CHECK(wide.find("h64") == std::string::npos);
}

TEST_CASE("cfr csv round trip restores values to formatting precision") {
  const auto snaps = sample_snapshots(4, 6);
  const std::string text = cfr_text(snaps);
  std::istringstream in(text);
  const auto back = read_cfr_csv(in, "mem");
  REQUIRE(back.size() == snaps.size());
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    CHECK(back[i].frame_index == snaps[i].frame_index);
    CHECK(back[i].subject_id == snaps[i].subject_id);
    CHECK(back[i].session_id == snaps[i].session_id);
    CHECK(back[i].label == snaps[i].label);
    REQUIRE(back[i].h.size() == snaps[i].h.size());
    for (std::size_t k = 0; k < snaps[i].h.size(); ++k) {
      const double scale = std::max(1.0, std::abs(snaps[i].h[k]));
      CHECK(std::abs(back[i].h[k] - snaps[i].h[k]) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("a rewritten cfr csv is byte identical") {
  const auto snaps = sample_snapshots(3, 5);
  const std::string first = cfr_text(snaps);
  std::istringstream in(first);
  const std::string second = cfr_text(read_cfr_csv(in, "mem"));
  CHECK(first == second);
}

TEST_CASE("examples csv round trips and rewrites byte identically") {
  const auto examples = sample_examples(5, 9);
  std::ostringstream out;
  write_examples_csv(examples, out);
  const std::string first = out.str();

  std::istringstream in(first);
  const auto back = read_examples_csv(in, "mem");
  REQUIRE(back.size() == examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    CHECK(back[i].subject_id == examples[i].subject_id);
    CHECK(back[i].session_id == examples[i].session_id);
    CHECK(back[i].window_index == examples[i].window_index);
    CHECK(back[i].label == examples[i].label);
    for (std::size_t k = 0; k < examples[i].features.size(); ++k) {
      const double scale = std::max(1.0, std::abs(examples[i].features[k]));
      CHECK(std::abs(back[i].features[k] - examples[i].features[k]) <= 1e-8 * scale);
    }
  }

  std::ostringstream again;
  write_examples_csv(back, again);
  CHECK(again.str() == first);
}

TEST_CASE("empty writes emit just the default width header") {
  std::ostringstream out;
  write_examples_csv({}, out);
  CHECK(out.str() == examples_csv_header(64) + "\n");
}

TEST_CASE("crlf and a trailing blank line are tolerated") {
  const auto snaps = sample_snapshots(2, 3);
  std::string text = cfr_text(snaps);
  std::string crlf;
  for (char c : text) {
    if (c == '\n') crlf += "\r\n";
    else crlf.push_back(c);
  }
  std::istringstream in(crlf);
  CHECK(read_cfr_csv(in, "mem").size() == 3);
}

TEST_CASE("malformed cfr rows carry their line number") {
  const auto snaps = sample_snapshots(2, 3);
  const std::string good = cfr_text(snaps);

  SUBCASE("truncated row") {
    std::string text = good;
    text.resize(text.rfind(',') + 1);
    text += "\n";
    std::istringstream in(text);
    try {
      (void)read_cfr_csv(in, "mem");
      FAIL("expected parse_error");
    } catch (const parse_error& e) {
      CHECK(e.line_number == 4);
    }
  }

  SUBCASE("bad label") {
    std::string text = good;
    const auto pos = text.find("hydrated");
    text.replace(pos, 8, "moisture");
    std::istringstream in(text);
    CHECK_THROWS_AS((void)read_cfr_csv(in, "mem"), parse_error);
  }

  SUBCASE("negative id") {
    std::string text = good;
    text.replace(text.find("\n3,"), 3, "\n-3,");
    std::istringstream in(text);
    CHECK_THROWS_AS((void)read_cfr_csv(in, "mem"), parse_error);
  }

  SUBCASE("non numeric field") {
    std::string text = good;
    const auto tail = text.rfind(',');
    text = text.substr(0, tail + 1) + "xx\n";
    std::istringstream in(text);
    CHECK_THROWS_AS((void)read_cfr_csv(in, "mem"), parse_error);
  }

  SUBCASE("non finite value") {
    std::string text = good;
    const auto tail = text.rfind(',');
    text = text.substr(0, tail + 1) + "nan\n";
    std::istringstream in(text);
    CHECK_THROWS_AS((void)read_cfr_csv(in, "mem"), data_error);
  }

  SUBCASE("wrong header") {
    std::string text = good;
    text.replace(0, 10, "subject_ID");
    std::istringstream in(text);
    CHECK_THROWS_AS((void)read_cfr_csv(in, "mem"), parse_error);
  }

  SUBCASE("missing header") {
    std::istringstream in("");
    CHECK_THROWS_AS((void)read_cfr_csv(in, "mem"), parse_error);
  }
}

TEST_CASE("writers refuse non finite values") {
  auto snaps = sample_snapshots(2, 1);
  snaps[0].h[0] = cplx(std::nan(""), 0.0);
  std::ostringstream out;
  CHECK_THROWS_AS(write_cfr_csv(snaps, out), data_error);
}

TEST_CASE("mixed snapshot widths are rejected when writing") {
  auto snaps = sample_snapshots(3, 2);
  snaps[1].h.pop_back();
  std::ostringstream out;
  CHECK_THROWS_AS(write_cfr_csv(snaps, out), data_error);
}
