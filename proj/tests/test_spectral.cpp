#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "neurobands/electrode_sets.hpp"
#include "neurobands/errors.hpp"
#include "neurobands/features.hpp"
#include "neurobands/spectral.hpp"
#include "neurobands/synth.hpp"
#include "test_util.hpp"

using namespace neurobands;

namespace {

constexpr double kPi = std::numbers::pi;

// Direct DFT evaluated in long double, separate from the library's dft_naive.
std::vector<std::complex<long double>> reference_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<long double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<long double> acc = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const long double ang = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>((k * t) % n) /
                              static_cast<long double>(n);
      acc += static_cast<long double>(x[t]) * std::complex<long double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

double normwise_error(const Spectrum& a, const Spectrum& b) {
  double diff = 0, ref = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    diff = std::max(diff, std::abs(a.bins[k] - b.bins[k]));
    ref = std::max(ref, std::abs(b.bins[k]));
  }
  return diff / ref;
}

Recording constant_recording(std::size_t trials, std::size_t samples, std::uint64_t seed) {
  SynthSpec spec;
  spec.n_trials = trials;
  spec.n_samples = samples;
  spec.tone_hz = {10.0, 30.0};
  spec.seed = seed;
  return synth_dataset(spec);
}

}  // namespace

TEST_CASE("dft_naive small examples") {
  auto check = [](std::vector<double> x, std::vector<Complex> want) {
    const Spectrum s = dft_naive(x);
    REQUIRE(s.size() == want.size());
    for (std::size_t k = 0; k < want.size(); ++k) CHECK(std::abs(s.bins[k] - want[k]) < 1e-12);
  };
  check({1, 1, 1, 1}, {4, 0, 0, 0});
  check({1, -1, 1, -1}, {0, 0, 4, 0});
  check({1, 0, 0, 0}, {1, 1, 1, 1});
}

TEST_CASE("dft_naive agrees with a long double reference") {
  std::mt19937_64 rng(1);
  for (std::size_t n : {5, 12, 64, 100}) {
    const auto x = testutil::random_signal(n, rng);
    const Spectrum s = dft_naive(x);
    const auto ref = reference_dft(x);
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(s.bins[k] - Complex(static_cast<double>(ref[k].real()), static_cast<double>(ref[k].imag()))) <
            1e-10);
    }
  }
}

TEST_CASE("fft matches dft_naive for every power of two up to 1024") {
  std::mt19937_64 rng(2);
  for (std::size_t n = 1; n <= 1024; n *= 2) {
    for (int rep = 0; rep < 10; ++rep) {
      const auto x = testutil::random_signal(n, rng);
      CHECK(normwise_error(fft(x), dft_naive(x)) < 1e-9);
    }
  }
}

TEST_CASE("fft single-bin sinusoid") {
  std::vector<double> x(256);
  for (std::size_t i = 0; i < 256; ++i) x[i] = std::sin(2 * kPi * 20 * static_cast<double>(i) / 256);
  const Spectrum s = fft(x);
  for (std::size_t k = 0; k < 256; ++k) {
    if (k == 20 || k == 236) {
      CHECK(std::abs(s.bins[k]) == doctest::Approx(128.0).epsilon(1e-12));
    } else {
      CHECK(std::abs(s.bins[k]) < 1e-10);
    }
  }
}

TEST_CASE("fft rejects non-power-of-two sizes") {
  CHECK_THROWS_AS(fft(std::vector<double>(100, 0.0)), FftSizeError);
  CHECK_THROWS_AS(FftPlan(0), FftSizeError);
  CHECK_THROWS_AS(FftPlan(3), FftSizeError);
  CHECK(is_power_of_two(1));
  CHECK_FALSE(is_power_of_two(96));
}

TEST_CASE("fft plan reuse and float input") {
  const FftPlan plan(64);
  std::mt19937_64 rng(3);
  const auto x = testutil::random_signal(64, rng);
  std::vector<float> xf(x.begin(), x.end());
  std::vector<double> xd(xf.begin(), xf.end());
  std::vector<Complex> a(64), b(64);
  plan.transform(xd, a);
  plan.transform_real<float>(xf, b);
  CHECK(a == b);
  std::vector<Complex> again(64);
  plan.transform(xd, again);
  CHECK(a == again);
}

TEST_CASE("conjugate symmetry and Parseval") {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    const auto x = testutil::random_signal(256, rng);
    const Spectrum s = fft(x);
    for (std::size_t k = 1; k < 256; ++k) CHECK(std::abs(s.bins[256 - k] - std::conj(s.bins[k])) < 1e-9);
    double te = 0, fe = 0;
    for (double v : x) te += v * v;
    for (const auto& c : s.bins) fe += std::norm(c);
    CHECK(std::abs(te - fe / 256.0) / te < 1e-9);
  }
}

TEST_CASE("band definitions tile 4-45 Hz") {
  CHECK(kBands[0].low_hz == 4.0);
  CHECK(kBands[4].high_hz == 45.0);
  for (std::size_t i = 1; i < kBands.size(); ++i) CHECK(kBands[i].low_hz == kBands[i - 1].high_hz);
  CHECK(band(BandName::beta).contains(16.0));
  CHECK_FALSE(band(BandName::beta).contains(25.0));
  CHECK(band_label(BandName::delta) == "Delta");
  CHECK(parse_band("GAMMA") == BandName::gamma);
  CHECK_FALSE(parse_band("mu"));
}

TEST_CASE("band_power examples") {
  std::vector<double> x(256);
  for (std::size_t i = 0; i < 256; ++i) x[i] = std::sin(2 * kPi * 10 * static_cast<double>(i) / 128.0 + 0.4);
  const Spectrum s = dft_naive(x, 128.0);
  const double theta = band_power(s, band(BandName::theta));
  for (auto b : {BandName::delta, BandName::alpha, BandName::beta, BandName::gamma}) {
    CHECK(theta > 100 * band_power(s, band(b)));
  }
  CHECK(band_powers(fft(x, 128.0))[1] == doctest::Approx(theta).epsilon(1e-12));

  const Spectrum zero = fft(std::vector<double>(256, 0.0), 128.0);
  for (double p : band_powers(zero)) CHECK(p == 0.0);

  const Spectrum slow = fft(std::vector<double>(256, 0.0), 64.0);
  CHECK_THROWS_AS(band_power(slow, band(BandName::gamma)), BandError);
  CHECK_NOTHROW(band_power(slow, band(BandName::delta)));
}

TEST_CASE("band power excludes DC and Nyquist and sums exactly") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    auto x = testutil::random_signal(256, rng);
    for (auto& v : x) v += 3.0;  // strong DC
    const Spectrum s = fft(x, 128.0);
    const auto p = band_powers(s);
    // Oracle: bins 8..89 are exactly [4, 45) Hz at 0.5 Hz resolution.
    double want = 0;
    for (std::size_t k = 8; k < 90; ++k) want += std::norm(s.bins[k]);
    const double got = std::accumulate(p.begin(), p.end(), 0.0);
    CHECK(std::abs(got - want) <= 1e-9 * want);
    CHECK(std::abs(one_sided_power(s, 4, 45) - want) <= 1e-9 * want);
  }
}

TEST_CASE("window arithmetic") {
  const WindowPlan plan{};
  CHECK(window_count(7680, plan) == 465);
  CHECK(window_count(256, plan) == 1);
  CHECK_THROWS_AS(window_count(255, plan), WindowError);

  for (std::size_t w : {16, 64, 256}) {
    for (std::size_t step : {1, 3, 16, 100}) {
      for (std::size_t t = w; t < w + 300; t += 7) {
        std::size_t brute = 0;
        for (std::size_t start = 0; start + w <= t; start += step) ++brute;
        CHECK(window_count(t, {w, step}) == brute);
      }
    }
  }
  CHECK_THROWS_AS((WindowPlan{100, 16}).validate(), FftSizeError);
  CHECK_THROWS_AS((WindowPlan{256, 0}).validate(), WindowError);
}

TEST_CASE("extract_windows is rectangular") {
  std::vector<double> x(300);
  std::iota(x.begin(), x.end(), 0.0);
  const auto w = extract_windows(x, {32, 16});
  REQUIRE(w.size() == window_count(300, {32, 16}));
  for (std::size_t i = 0; i < w.size(); ++i) {
    REQUIRE(w[i].size() == 32);
    for (std::size_t j = 0; j < 32; ++j) CHECK(w[i][j] == static_cast<double>(16 * i + j));
  }
}

TEST_CASE("feature columns per set") {
  CHECK(feature_columns(literature_set(1)).size() == 60);
  CHECK(feature_columns(literature_set(3)).size() == 25);
  CHECK(feature_columns(literature_set(4)).size() == 20);
  CHECK(feature_columns(literature_set(9)).size() == 160);
  CHECK(feature_columns(lobe_set(Lobe::temporal)) ==
        std::vector<std::string>{"T7_Delta", "T7_Theta", "T7_Alpha", "T7_Beta", "T7_Gamma", "T8_Delta", "T8_Theta",
                                 "T8_Alpha", "T8_Beta", "T8_Gamma"});
  // Published "FP1" spelling is displayed canonically.
  CHECK(feature_columns(literature_set(4))[0] == "Fp1_Delta");
}

TEST_CASE("full-size trial block gives 18600 x 160") {
  const Recording rec = constant_recording(40, 7680, 9);
  const FeatureSet fs = extract_features(rec, literature_set(9), {}, {}, 2);
  CHECK(fs.n_rows == 18600);
  CHECK(fs.n_cols() == 160);
  CHECK(fs.matrix.size() == 18600u * 160u);
  const auto labels = binarize_valence(rec.labels);
  for (std::size_t r = 0; r < fs.n_rows; ++r) {
    CHECK(fs.labels[r] == labels[static_cast<std::size_t>(fs.provenance[r].trial)]);
  }
  CHECK(fs.provenance[465].trial == 1);
  CHECK(fs.provenance[466].window_start == 16);
}

TEST_CASE("feature values match a naive oracle") {
  const Recording rec = constant_recording(2, 400, 10);
  const ElectrodeSet set = custom_set({"O2", "FP1"});
  const FeatureSet fs = extract_features(rec, set, {256, 16});
  REQUIRE(fs.n_rows == 2 * window_count(400, {256, 16}));
  const std::size_t per_trial = window_count(400, {256, 16});
  for (std::size_t r : {std::size_t{0}, std::size_t{4}, per_trial + 3}) {
    const std::size_t trial = r / per_trial, start = 16 * (r % per_trial);
    for (std::size_t e = 0; e < 2; ++e) {
      const std::size_t ch = e == 0 ? 31 : 0;
      const auto src = rec.channel(trial, ch);
      const std::vector<double> x(src.begin() + static_cast<long>(start), src.begin() + static_cast<long>(start) + 256);
      const Spectrum s = dft_naive(x, 128.0);
      for (std::size_t b = 0; b < 5; ++b) {
        const double want = std::log(one_sided_power(s, kBands[b].low_hz, kBands[b].high_hz) + 1e-8);
        CHECK(fs.row(r)[e * 5 + b] == doctest::Approx(static_cast<float>(want)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("features separate synthetic classes") {
  const Recording rec = constant_recording(8, 1024, 12);
  const FeatureSet fs = extract_features(rec, literature_set(9));
  // Theta column of Fp1.
  double sum[2] = {0, 0}, sq[2] = {0, 0};
  std::size_t cnt[2] = {0, 0};
  for (std::size_t r = 0; r < fs.n_rows; ++r) {
    const int c = static_cast<int>(fs.labels[r]);
    const double v = fs.row(r)[1];
    sum[c] += v;
    sq[c] += v * v;
    cnt[c] += 1;
  }
  const double m0 = sum[0] / cnt[0], m1 = sum[1] / cnt[1];
  const double v0 = sq[0] / cnt[0] - m0 * m0, v1 = sq[1] / cnt[1] - m1 * m1;
  const double pooled = std::sqrt(((cnt[0] - 1) * v0 + (cnt[1] - 1) * v1) / (cnt[0] + cnt[1] - 2));
  CHECK(std::abs(m0 - m1) > 5 * pooled);
}

TEST_CASE("feature extraction is permutation-equivariant and job-independent") {
  const Recording rec = constant_recording(3, 600, 13);
  const ElectrodeSet a = custom_set({"Fp1", "Cz", "O2"});
  const ElectrodeSet b = custom_set({"O2", "Fp1", "Cz"});
  const FeatureSet fa = extract_features(rec, a);
  const FeatureSet fb = extract_features(rec, b);
  const std::size_t perm[3] = {1, 2, 0};  // column block of a's electrode i inside b
  for (std::size_t r = 0; r < fa.n_rows; ++r) {
    for (std::size_t e = 0; e < 3; ++e) {
      for (std::size_t k = 0; k < 5; ++k) CHECK(fa.row(r)[e * 5 + k] == fb.row(r)[perm[e] * 5 + k]);
    }
  }
  const FeatureSet fj = extract_features(rec, a, {}, {}, 3);
  CHECK(fj.matrix == fa.matrix);
  CHECK(fj.provenance == fa.provenance);
}

TEST_CASE("feature extraction validates inputs") {
  const Recording rec = constant_recording(2, 255, 14);
  CHECK_THROWS_AS(extract_features(rec, literature_set(1)), WindowError);
  const Recording ok = constant_recording(2, 300, 14);
  CHECK_THROWS_AS(extract_features(ok, literature_set(1), {100, 16}), FftSizeError);
}

TEST_CASE("features container round trip") {
  testutil::TempDir dir("spectral");
  std::vector<Recording> recs = {constant_recording(2, 300, 15), constant_recording(2, 300, 16)};
  recs[1].subject_id = 2;
  const FeatureSet fs = extract_features(recs, literature_set(4));
  CHECK(fs.provenance.back().subject == 2);
  write_features(dir / "f.eegb", fs);
  const FeatureSet back = load_features(dir / "f.eegb");
  CHECK(back.electrode_set_id == fs.electrode_set_id);
  CHECK(back.columns == fs.columns);
  CHECK(back.n_rows == fs.n_rows);
  CHECK(back.matrix == fs.matrix);
  CHECK(back.labels == fs.labels);
  CHECK(back.provenance == fs.provenance);
}
