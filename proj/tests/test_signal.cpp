#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "mlrid/errors.hpp"
#include "mlrid/signal.hpp"

using namespace mlrid;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<cd> direct_dft(const std::vector<double>& x) {
  const auto n = x.size();
  std::vector<cd> y(n);
  for (std::size_t a = 0; a < n; ++a) {
    cd acc = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      const double ang = -2.0 * kPi * static_cast<double>((a * b) % n) / static_cast<double>(n);
      acc += x[b] * cd(std::cos(ang), std::sin(ang));
    }
    y[a] = acc;
  }
  return y;
}

std::vector<double> random_signal(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = g(rng);
  return x;
}

std::vector<double> tone(std::size_t n, double fs, double freq, double amp, double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = amp * std::sin(2.0 * kPi * freq * static_cast<double>(k) / fs + phase);
  return x;
}

double rms(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s / static_cast<double>(a.size()));
}

double rms_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("forward transform agrees with the direct sum") {
  for (std::size_t n : {2U, 16U, 64U, 256U}) {
    const auto x = random_signal(n, static_cast<unsigned>(n));
    const auto fast = dft_forward(x, 100.0);
    const auto slow = direct_dft(x);
    double scale = 0.0;
    for (const auto& v : slow) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(fast.bins[k] - slow[k]) <= 1e-9 * scale);
  }
}

TEST_CASE("round trip, Parseval and simple spectra") {
  for (std::size_t n = 16; n <= 4096; n *= 2) {
    const auto x = random_signal(n, 3);
    const auto s = dft_forward(x, 1.0);
    const auto back = dft_inverse(s);
    double err = 0.0;
    for (std::size_t k = 0; k < n; ++k) err = std::max(err, std::abs(back[k] - x[k]));
    CHECK(err < 1e-9 * (1.0 + max_abs(x)));

    double time_energy = 0.0;
    double freq_energy = 0.0;
    for (double v : x) time_energy += v * v;
    for (const auto& b : s.bins) freq_energy += std::norm(b);
    CHECK(freq_energy / static_cast<double>(n) == doctest::Approx(time_energy).epsilon(1e-10));
  }

  const std::vector<double> c(64, 2.5);
  const auto s = dft_forward(c, 1.0);
  CHECK(std::abs(s.bins[0] - cd(64 * 2.5)) < 1e-9 * 64 * 2.5);
  for (std::size_t k = 1; k < 64; ++k) CHECK(std::abs(s.bins[k]) < 1e-9 * 64 * 2.5);
  const auto ps = power_spectrum(s);
  CHECK(ps.size() == 33);
  CHECK(ps[0] == doctest::Approx(2.5));

  std::vector<double> cosine(64);
  for (std::size_t j = 0; j < 64; ++j) cosine[j] = std::cos(2.0 * kPi * static_cast<double>(j) * 5.0 / 64.0);
  const auto cs = dft_forward(cosine, 64.0);
  for (std::size_t k = 0; k < 64; ++k) {
    if (k == 5 || k == 59) {
      CHECK(std::abs(cs.bins[k]) == doctest::Approx(32.0));
    } else {
      CHECK(std::abs(cs.bins[k]) < 1e-9);
    }
  }
  CHECK(dft_inverse(Spectrum{std::vector<cd>{cd(8.0), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 1.0}) ==
        std::vector<double>(8, 1.0));
}

TEST_CASE("inverse transform is linear and rejects broken symmetry") {
  const auto a = dft_forward(random_signal(32, 1), 1.0);
  const auto b = dft_forward(random_signal(32, 2), 1.0);
  Spectrum mix{std::vector<cd>(32), 1.0};
  for (std::size_t k = 0; k < 32; ++k) mix.bins[k] = 2.0 * a.bins[k] - 0.5 * b.bins[k];
  const auto ia = dft_inverse(a);
  const auto ib = dft_inverse(b);
  const auto im = dft_inverse(mix);
  for (std::size_t k = 0; k < 32; ++k) CHECK(im[k] == doctest::Approx(2.0 * ia[k] - 0.5 * ib[k]).epsilon(1e-12));

  auto broken = a;
  broken.bins[3] += cd(0.0, 5.0);
  CHECK_THROWS_AS(dft_inverse(broken), IntegrityError);
  CHECK_THROWS_AS(dft_forward(std::vector<double>(24, 1.0), 1.0), ArgumentError);
}

TEST_CASE("amplitude spectrum of exact-bin sinusoids") {
  const auto zero = power_spectrum(dft_forward(std::vector<double>(128, 0.0), 1.0));
  CHECK(max_abs(zero) == 0.0);
  const auto x = tone(1024, 204.8, 1.0, 0.7, 0.4);
  const auto ps = power_spectrum(dft_forward(x, 204.8));
  CHECK(ps[5] == doctest::Approx(0.7).epsilon(1e-9));
  for (std::size_t k = 0; k < ps.size(); ++k) {
    if (k != 5) CHECK(ps[k] < 1e-9);
  }
}

TEST_CASE("filter removes out-of-band tones and noise") {
  const double fs = 204.8;
  const auto clean = tone(1024, fs, 1.0, 0.2);
  auto noisy = clean;
  const auto high = tone(1024, fs, 50.0, 0.2);
  for (std::size_t k = 0; k < noisy.size(); ++k) noisy[k] += high[k];
  const auto out = fft_filter(noisy, fs, FilterConfig{});
  CHECK(rms_diff(out, clean) < 0.05 * rms(clean));
  CHECK(out[0] == 0.0);
  const auto ps = power_spectrum(dft_forward(out, fs));
  for (std::size_t k = 0; k < ps.size(); ++k) {
    if (static_cast<double>(k) * fs / 1024.0 > 10.0) CHECK(ps[k] < 1e-9);
  }
}

TEST_CASE("filter fixed point and idempotence") {
  const double fs = 204.8;
  const auto pass = tone(1024, fs, 2.0, 0.3);
  CHECK(rms_diff(fft_filter(pass, fs, FilterConfig{}), pass) < 1e-6);

  auto mixed = random_signal(1024, 9);
  const auto t1 = tone(1024, fs, 1.0, 0.4, 0.3);
  for (std::size_t k = 0; k < mixed.size(); ++k) mixed[k] = 0.05 * mixed[k] + t1[k] + 0.1 * k / 1024.0;
  for (auto mode : {FilterMode::roll_pitch, FilterMode::yaw}) {
    FilterConfig cfg;
    cfg.mode = mode;
    const auto once = fft_filter(mixed, fs, cfg);
    const auto twice = fft_filter(once, fs, cfg);
    CHECK(rms_diff(once, twice) < 1e-9);
    CHECK(once[0] == 0.0);
  }
}

TEST_CASE("yaw mode keeps a slow ramp that peak gating would drop") {
  const double fs = 204.8;
  // About one radian over the window, the heading drift of a robot missing one leg.
  std::vector<double> ramp(1024);
  for (std::size_t k = 0; k < ramp.size(); ++k) ramp[k] = 1.0 * static_cast<double>(k) / 1024.0;
  FilterConfig yaw;
  yaw.mode = FilterMode::yaw;
  const auto kept = fft_filter(ramp, fs, yaw);
  double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
  const double n = 1024.0;
  for (std::size_t k = 0; k < 1024; ++k) {
    sa += ramp[k];
    sb += kept[k];
    sab += ramp[k] * kept[k];
    saa += ramp[k] * ramp[k];
    sbb += kept[k] * kept[k];
  }
  const double corr = (sab - sa * sb / n) / std::sqrt((saa - sa * sa / n) * (sbb - sb * sb / n));
  CHECK(corr > 0.95);
}

TEST_CASE("peak gating keeps the lowest bin of a plateau") {
  const double fs = 64.0;
  std::vector<double> x(64, 0.0);
  const auto a = tone(64, fs, 2.0, 0.5, 0.2);
  const auto b = tone(64, fs, 3.0, 0.5, 1.1);
  for (std::size_t k = 0; k < 64; ++k) x[k] = a[k] + b[k];
  FilterConfig cfg;
  cfg.f_cutoff = 20.0;
  const auto ps = power_spectrum(dft_forward(fft_filter(x, fs, cfg), fs));
  CHECK(ps[2] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(ps[3] < 1e-9);
}

TEST_CASE("uniform resampling") {
  const std::vector<double> times{0.0, 0.3, 0.35, 1.0, 2.2};
  std::vector<double> affine;
  for (double t : times) affine.push_back(3.0 * t - 1.0);
  const auto out = resample_uniform(times, affine, 0.1, 2.0, 16);
  for (std::size_t k = 0; k < out.size(); ++k) CHECK(out[k] == doctest::Approx(3.0 * (0.1 + k * 2.0 / 16) - 1.0).epsilon(1e-12));
  CHECK(resample_uniform(times, std::vector<double>(5, 4.0), 0.0, 2.0, 16) == std::vector<double>(16, 4.0));
  CHECK_THROWS_AS(resample_uniform(times, affine, 1.0, 2.0, 16), ArgumentError);
  CHECK_THROWS_AS(resample_uniform(times, affine, 0.0, 1.0, 12), ArgumentError);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> step(1.0 / 1000.0, 1.0 / 950.0);
  std::vector<double> jt{0.0};
  while (jt.back() < 6.0) jt.push_back(jt.back() + step(rng));
  std::vector<double> vals;
  for (double t : jt) vals.push_back(0.3 * std::sin(2.0 * kPi * t));
  const auto grid = resample_uniform(jt, vals, 0.5, 5.0, 1024);
  double err = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = 0.5 + static_cast<double>(k) * 5.0 / 1024.0;
    err += std::pow(grid[k] - 0.3 * std::sin(2.0 * kPi * t), 2);
  }
  CHECK(std::sqrt(err / 1024.0) < 1e-3);
}

TEST_CASE("corruption harness") {
  OrientationTrajectory clean;
  clean.t0 = 0.0;
  clean.dt = 5.0 / 2048;
  for (std::size_t k = 0; k < 2048; ++k) {
    const double t = clean.time(k);
    clean.roll.push_back(0.2 * std::sin(2.0 * kPi * t));
    clean.pitch.push_back(0.05 * std::cos(2.0 * kPi * t));
    clean.yaw.push_back(0.01 * t);
  }

  const auto same = corrupt_trajectory(clean, CorruptionConfig{});
  REQUIRE(same.size() == clean.size());
  for (std::size_t k = 0; k < same.size(); ++k) {
    CHECK(same.time[k] == doctest::Approx(clean.time(k)).epsilon(1e-12));
    CHECK(same.roll[k] == clean.roll[k]);
  }

  CorruptionConfig delayed;
  delayed.delay = 0.3;
  CHECK(corrupt_trajectory(clean, delayed).time.front() == doctest::Approx(0.3));

  CorruptionConfig noisy;
  noisy.noise_sigma = 0.0175;
  noisy.rng_seed = 11;
  const auto n1 = corrupt_trajectory(clean, noisy);
  CHECK(n1.roll == corrupt_trajectory(clean, noisy).roll);
  double s = 0.0;
  for (std::size_t k = 0; k < n1.size(); ++k) s += std::pow(n1.roll[k] - clean.roll[k], 2);
  CHECK(std::sqrt(s / static_cast<double>(n1.size())) == doctest::Approx(0.0175).epsilon(0.1));

  const auto bench = CorruptionConfig::bench(3);
  const auto rec = corrupt_trajectory(clean, bench);
  for (std::size_t k = 1; k < rec.size(); ++k) {
    const double gap = rec.time[k] - rec.time[k - 1];
    CHECK(gap >= 1.0 / 1000.0 - 1e-12);
    CHECK(gap <= 1.0 / 950.0 + 1e-12);
  }
}

TEST_CASE("filtered corrupted record stays close to the filtered clean one") {
  OrientationTrajectory clean;
  clean.t0 = 0.0;
  clean.dt = 7.0 / 8192;
  for (std::size_t k = 0; k < 8192; ++k) {
    const double t = clean.time(k);
    clean.roll.push_back(0.3 * std::sin(2.0 * kPi * t) + 0.12 * std::sin(6.0 * kPi * t));
    clean.pitch.push_back(0.15 * std::cos(2.0 * kPi * t));
    clean.yaw.push_back(0.05 * t);
  }
  CorruptionConfig cfg;
  cfg.noise_sigma = deg_to_rad(1.0);
  cfg.drift_rate = deg_to_rad(0.1);
  cfg.jitter = SampleJitter{};
  cfg.rng_seed = 21;
  const auto rec = corrupt_trajectory(clean, cfg);
  const auto window = resample_record(rec, 0.5, 5.0, 1024);
  const auto ref = resample_record(OrientationRecord::from(clean), 0.5, 5.0, 1024);
  const auto a = filter_trajectory(window, 10.0, 0.1);
  const auto b = filter_trajectory(ref, 10.0, 0.1);
  CHECK(rms_diff(a.roll, b.roll) < 2.0 * cfg.noise_sigma);
  CHECK(rms_diff(a.pitch, b.pitch) < 2.0 * cfg.noise_sigma);
  CHECK(rms_diff(a.yaw, b.yaw) < 2.0 * cfg.noise_sigma);
}

TEST_CASE("config validation") {
  FilterConfig f;
  f.f_cutoff = 0.0;
  CHECK_THROWS_AS(f.validate(), ConfigError);
  CorruptionConfig c;
  c.jitter = SampleJitter{1000.0, 950.0};
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
