#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cfrsense/error.hpp"
#include "cfrsense/preprocess.hpp"
#include "cfrsense/prng.hpp"

using namespace cfrsense;

namespace {

std::vector<CfrSnapshot> session(std::uint32_t subject, std::uint32_t sess, Label label,
                                 std::size_t frames, std::size_t n_sub, double base,
                                 double jitter, std::uint64_t seed) {
  rng::Stream gen(seed, 0);
  std::vector<CfrSnapshot> out(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    auto& s = out[t];
    s.frame_index = t;
    s.subject_id = subject;
    s.session_id = sess;
    s.label = label;
    s.h.resize(n_sub);
    for (std::size_t k = 0; k < n_sub; ++k) {
      const double mag = base + static_cast<double>(k) +
                         jitter * (2.0 * gen.next_unit() - 1.0);
      s.h[k] = cplx(mag, 0.0);
    }
  }
  return out;
}

FilterSpec small_filter() {
  FilterSpec f;
  f.savgol_window = 5;
  f.savgol_polyorder = 2;
  return f;
}

}  // namespace

TEST_CASE("clean sessions survive artifact rejection untouched") {
  auto snaps = session(1, 1, Label::hydrated, 200, 8, 2.0, 0.05, 5);
  auto res = reject_artifacts(snaps, 6.0);
  CHECK(res.n_rejected == 0);
  CHECK(res.kept.size() == 200);

  auto constant = session(1, 2, Label::hydrated, 100, 8, 3.0, 0.0, 6);
  auto res2 = reject_artifacts(constant, 6.0);
  CHECK(res2.n_rejected == 0);
}

TEST_CASE("a magnitude spike on one subcarrier rejects exactly that frame") {
  auto snaps = session(1, 1, Label::hydrated, 200, 8, 2.0, 0.05, 7);
  snaps[40].h[0] *= 100.0;
  auto res = reject_artifacts(snaps, 6.0);
  REQUIRE(res.n_rejected == 1);
  CHECK(res.kept.size() == 199);
  for (const auto& s : res.kept) CHECK(!(s.frame_index == 40));
}

TEST_CASE("an infinite threshold keeps everything") {
  auto snaps = session(1, 1, Label::hydrated, 50, 4, 2.0, 0.3, 8);
  snaps[10].h[2] *= 50.0;
  auto res = reject_artifacts(snaps, std::numeric_limits<double>::infinity());
  CHECK(res.n_rejected == 0);
}

TEST_CASE("rejection sessions are judged independently") {
  auto a = session(1, 1, Label::hydrated, 120, 4, 2.0, 0.05, 9);
  auto b = session(1, 1, Label::dehydrated, 120, 4, 50.0, 0.05, 10);
  a[5].h[0] *= 100.0;
  std::vector<CfrSnapshot> all = a;
  all.insert(all.end(), b.begin(), b.end());
  auto res = reject_artifacts(all, 6.0);
  CHECK(res.n_rejected == 1);
}

TEST_CASE("constant magnitudes featurize to themselves") {
  auto snaps = session(2, 1, Label::dehydrated, 250, 6, 1.5, 0.0, 11);
  auto res = featurize(snaps, small_filter(), 250.0, 125);
  REQUIRE(res.examples.size() == 2);
  CHECK(res.warnings.empty());
  for (const auto& ex : res.examples) {
    REQUIRE(ex.features.size() == 6);
    for (std::size_t k = 0; k < 6; ++k)
      CHECK(ex.features[k] == doctest::Approx(1.5 + static_cast<double>(k)).epsilon(1e-9));
    CHECK(ex.label == Label::dehydrated);
    CHECK(ex.subject_id == 2);
    CHECK(ex.session_id == 1);
  }
  CHECK(res.examples[0].window_index == 0);
  CHECK(res.examples[1].window_index == 1);
}

TEST_CASE("window counts follow integer division per session") {
  auto a = session(1, 1, Label::hydrated, 500, 4, 2.0, 0.1, 12);
  auto b = session(1, 2, Label::hydrated, 260, 4, 2.0, 0.1, 13);
  std::vector<CfrSnapshot> all = a;
  all.insert(all.end(), b.begin(), b.end());
  auto res = featurize(all, small_filter(), 250.0, 125);
  CHECK(res.examples.size() == 4 + 2);
}

TEST_CASE("sessions shorter than a window are skipped with a warning") {
  auto snaps = session(3, 4, Label::hydrated, 60, 4, 2.0, 0.1, 14);
  auto res = featurize(snaps, small_filter(), 250.0, 125);
  CHECK(res.examples.empty());
  REQUIRE(res.warnings.size() == 1);
  CHECK(res.warnings[0].find("subject 3") != std::string::npos);
  CHECK(res.warnings[0].find("session 4") != std::string::npos);
}

TEST_CASE("featurization is deterministic") {
  auto snaps = session(1, 1, Label::hydrated, 250, 4, 2.0, 0.2, 15);
  auto r1 = featurize(snaps, small_filter(), 250.0, 125);
  auto r2 = featurize(snaps, small_filter(), 250.0, 125);
  REQUIRE(r1.examples.size() == r2.examples.size());
  for (std::size_t i = 0; i < r1.examples.size(); ++i)
    CHECK(r1.examples[i].features == r2.examples[i].features);
}

TEST_CASE("standardization zeroes means and unit-scales spreads") {
  rng::Stream gen(16, 0);
  std::vector<LabeledExample> exs(40);
  for (auto& ex : exs) {
    ex.features = {10.0 * gen.next_unit(), 5.0 - 3.0 * gen.next_unit(), 7.0};
    ex.label = Label::hydrated;
  }
  auto st = standardize_fit(exs);
  standardize_apply(st, exs);

  for (std::size_t j = 0; j < 3; ++j) {
    double mean = 0.0;
    for (const auto& ex : exs) mean += ex.features[j];
    mean /= exs.size();
    CHECK(std::abs(mean) < 1e-9);
  }
  for (std::size_t j = 0; j < 2; ++j) {
    double ss = 0.0;
    for (const auto& ex : exs) ss += ex.features[j] * ex.features[j];
    CHECK(std::sqrt(ss / (exs.size() - 1)) == doctest::Approx(1.0).epsilon(1e-9));
  }
  for (const auto& ex : exs) CHECK(ex.features[2] == 0.0);  // constant feature: offset only
}

TEST_CASE("standardizer statistics apply as plain arithmetic") {
  Standardizer st;
  st.mean = {2.0};
  st.scale = {2.0};
  std::vector<LabeledExample> exs(1);
  exs[0].features = {4.0};
  standardize_apply(st, exs);
  CHECK(exs[0].features[0] == doctest::Approx(1.0));
}

TEST_CASE("preprocessing rejects bad setups") {
  FilterSpec f;
  CHECK_THROWS_AS(f.validate(9.0), config_error);  // cutoff 5 at rate 9: >= Nyquist
  f.savgol_window = 4;
  CHECK_THROWS_AS(f.validate(250.0), config_error);

  auto snaps = session(1, 1, Label::hydrated, 20, 2, 1.0, 0.0, 17);
  CHECK_THROWS_AS((void)reject_artifacts(snaps, 0.0), config_error);
  CHECK_THROWS_AS((void)featurize(snaps, small_filter(), 250.0, 0), config_error);
  CHECK_THROWS_AS((void)standardize_fit({}), data_error);
}
