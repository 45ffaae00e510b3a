#include "mlrid/signal.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <string>

#include "mlrid/errors.hpp"

namespace mlrid {
namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
 public:
  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto& plan = plans_[{n, sign}];
    if (plan == nullptr) {
      auto* in = fftw_alloc_complex(n);
      auto* out = fftw_alloc_complex(n);
      plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
      fftw_free(in);
      fftw_free(out);
    }
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void transform(std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out, int sign) {
  auto plan = plan_cache().get(in.size(), sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
}

void require_power_of_two(std::size_t n) {
  if (n < 2 || !is_power_of_two(n)) {
    throw ArgumentError("transform length " + std::to_string(n) +
                        " is not a power of two; resample the signal with resample_uniform first");
  }
}

}  // namespace

void FilterConfig::validate() const {
  if (!(f_cutoff > 0.0)) throw ConfigError("filter cutoff must be positive");
  if (!(p_threshold >= 0.0)) throw ConfigError("power threshold must be non-negative");
}

void CorruptionConfig::validate() const {
  if (!(noise_sigma >= 0.0)) throw ConfigError("noise sigma must be non-negative");
  if (!std::isfinite(drift_rate)) throw ConfigError("drift rate must be finite");
  if (!(delay >= 0.0)) throw ConfigError("delay must be non-negative");
  if (jitter && !(jitter->rate_low > 0.0 && jitter->rate_low <= jitter->rate_high)) {
    throw ConfigError("jitter rates must satisfy 0 < rate_low <= rate_high");
  }
}

CorruptionConfig CorruptionConfig::bench(std::uint64_t seed) {
  CorruptionConfig cfg;
  cfg.noise_sigma = deg_to_rad(1.0);
  cfg.drift_rate = deg_to_rad(0.1);
  cfg.delay = 0.3;
  cfg.jitter = SampleJitter{};
  cfg.rng_seed = seed;
  return cfg;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Spectrum dft_forward(std::span<const double> x, double sample_rate) {
  require_power_of_two(x.size());
  std::vector<std::complex<double>> in(x.begin(), x.end());
  Spectrum s;
  s.sample_rate = sample_rate;
  s.bins.resize(x.size());
  transform(in, s.bins, FFTW_FORWARD);
  return s;
}

std::vector<double> dft_inverse(const Spectrum& spectrum) {
  const std::size_t n = spectrum.size();
  require_power_of_two(n);
  double scale = 0.0;
  for (const auto& c : spectrum.bins) scale = std::max(scale, std::abs(c));
  for (std::size_t k = 0; k < n; ++k) {
    const auto mismatch = std::abs(spectrum.bins[k] - std::conj(spectrum.bins[(n - k) % n]));
    if (mismatch > 1e-9 * scale) {
      throw IntegrityError("spectrum is not conjugate-symmetric at bin " + std::to_string(k));
    }
  }
  std::vector<std::complex<double>> in = spectrum.bins;
  std::vector<std::complex<double>> out(n);
  transform(in, out, FFTW_BACKWARD);

  std::vector<double> x(n);
  double norm2 = 0.0;
  double worst_imag = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = out[k].real() * inv_n;
    norm2 += x[k] * x[k];
    worst_imag = std::max(worst_imag, std::abs(out[k].imag() * inv_n));
  }
  if (worst_imag > 1e-9 * std::max(std::sqrt(norm2), 1e-12)) {
    throw IntegrityError("inverse transform left an imaginary residue");
  }
  return x;
}

std::vector<double> power_spectrum(const Spectrum& spectrum) {
  const std::size_t n = spectrum.size();
  const std::size_t half = n / 2;
  std::vector<double> ps(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    const double weight = (k == 0 || k == half) ? 1.0 : 2.0;
    ps[k] = weight * std::abs(spectrum.bins[k]) / static_cast<double>(n);
  }
  return ps;
}

std::vector<double> fft_filter(std::span<const double> channel, double sample_rate, const FilterConfig& cfg) {
  cfg.validate();
  auto spectrum = dft_forward(channel, sample_rate);
  auto ps = power_spectrum(spectrum);
  const std::size_t n = spectrum.size();
  const std::size_t half = n / 2;

  ps[0] = 0.0;
  for (std::size_t k = 1; k <= half; ++k) {
    if (spectrum.frequency(k) > cfg.f_cutoff * (1.0 + 1e-12)) ps[k] = 0.0;
  }

  std::vector<bool> keep(half + 1, false);
  if (cfg.mode == FilterMode::yaw) {
    for (std::size_t k = 1; k <= half; ++k) keep[k] = ps[k] > cfg.p_threshold;
  } else {
    // Values within rounding of each other form one plateau.
    const auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); };
    const auto above = [&](double a, double b) { return a > b && !same(a, b); };
    std::size_t k = 1;
    while (k <= half) {
      std::size_t top = k;
      while (top + 1 <= half && same(ps[top + 1], ps[k])) ++top;
      const bool above_left = above(ps[k], ps[k - 1]);
      const bool above_right = top == half || above(ps[k], ps[top + 1]);
      if (above_left && above_right && ps[k] > cfg.p_threshold) keep[k] = true;
      k = top + 1;
    }
  }

  for (std::size_t k = 0; k <= half; ++k) {
    if (keep[k]) continue;
    spectrum.bins[k] = 0.0;
    spectrum.bins[(n - k) % n] = 0.0;
  }
  auto out = dft_inverse(spectrum);
  const double origin = out.front();
  for (auto& v : out) v -= origin;
  out.front() = 0.0;
  return out;
}

OrientationTrajectory filter_trajectory(const OrientationTrajectory& traj, double f_cutoff, double p_threshold) {
  const FilterConfig rp{f_cutoff, p_threshold, FilterMode::roll_pitch};
  const FilterConfig yw{f_cutoff, p_threshold, FilterMode::yaw};
  OrientationTrajectory out;
  out.t0 = 0.0;
  out.dt = traj.dt;
  out.roll = fft_filter(traj.roll, traj.sample_rate(), rp);
  out.pitch = fft_filter(traj.pitch, traj.sample_rate(), rp);
  out.yaw = fft_filter(traj.yaw, traj.sample_rate(), yw);
  return out;
}

std::vector<double> interpolate_uniform(std::span<const double> times, std::span<const double> values,
                                        double t_start, double duration, std::size_t samples) {
  if (times.size() != values.size()) throw ArgumentError("times and values differ in length");
  if (times.size() < 2) throw ArgumentError("interpolation needs at least two samples");
  if (samples < 2) throw ArgumentError("resampled grid needs at least two samples");
  if (!(duration > 0.0)) throw ArgumentError("resampling duration must be positive");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw ArgumentError("timestamps must be strictly increasing");
  }
  const double slack = 1e-9 * std::max(1.0, std::abs(times.back()));
  if (t_start < times.front() - slack || t_start + duration > times.back() + slack) {
    throw ArgumentError("requested window [" + std::to_string(t_start) + ", " + std::to_string(t_start + duration) +
                        "] s lies outside the recorded range [" + std::to_string(times.front()) + ", " +
                        std::to_string(times.back()) + "] s");
  }

  std::vector<double> out(samples);
  std::size_t j = 0;
  const std::size_t last = times.size() - 2;
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = t_start + duration * static_cast<double>(k) / static_cast<double>(samples);
    while (j < last && times[j + 1] <= t) ++j;
    const double span = times[j + 1] - times[j];
    const double frac = std::clamp((t - times[j]) / span, 0.0, 1.0);
    out[k] = values[j] + (values[j + 1] - values[j]) * frac;
  }
  return out;
}

std::vector<double> resample_uniform(std::span<const double> times, std::span<const double> values,
                                     double t_start, double duration, std::size_t samples) {
  if (!is_power_of_two(samples)) throw ArgumentError("resampled length must be a power of two");
  return interpolate_uniform(times, values, t_start, duration, samples);
}

OrientationTrajectory resample_record(const OrientationRecord& record, double t_start, double duration,
                                      std::size_t samples) {
  OrientationTrajectory out;
  out.t0 = t_start;
  out.dt = duration / static_cast<double>(samples);
  out.roll = resample_uniform(record.time, record.roll, t_start, duration, samples);
  out.pitch = resample_uniform(record.time, record.pitch, t_start, duration, samples);
  out.yaw = resample_uniform(record.time, record.yaw, t_start, duration, samples);
  return out;
}

OrientationRecord corrupt_trajectory(const OrientationTrajectory& traj, const CorruptionConfig& cfg) {
  cfg.validate();
  traj.validate();
  std::mt19937_64 rng(cfg.rng_seed);

  std::vector<double> instants;
  if (cfg.jitter) {
    std::uniform_real_distribution<double> step(1.0 / cfg.jitter->rate_high, 1.0 / cfg.jitter->rate_low);
    const double end = traj.time(traj.size() - 1);
    for (double t = traj.t0; t <= end; t += step(rng)) instants.push_back(t);
  } else {
    instants.resize(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) instants[k] = traj.time(k);
  }

  auto sample = [&](const std::vector<double>& channel, double t) {
    const double pos = (t - traj.t0) / traj.dt;
    const auto j = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(pos))), traj.size() - 2);
    const double frac = std::clamp(pos - static_cast<double>(j), 0.0, 1.0);
    return channel[j] + (channel[j + 1] - channel[j]) * frac;
  };

  OrientationRecord out;
  const std::size_t m = instants.size();
  out.time.resize(m);
  out.roll.resize(m);
  out.pitch.resize(m);
  out.yaw.resize(m);
  std::normal_distribution<double> noise(0.0, cfg.noise_sigma > 0.0 ? cfg.noise_sigma : 1.0);
  for (std::size_t k = 0; k < m; ++k) {
    const double t = instants[k];
    if (cfg.jitter) {
      out.roll[k] = sample(traj.roll, t);
      out.pitch[k] = sample(traj.pitch, t);
      out.yaw[k] = sample(traj.yaw, t);
    } else {
      out.roll[k] = traj.roll[k];
      out.pitch[k] = traj.pitch[k];
      out.yaw[k] = traj.yaw[k];
    }
    const double drift = cfg.drift_rate * (t - traj.t0);
    out.roll[k] += drift;
    out.pitch[k] += drift;
    out.yaw[k] += drift;
    if (cfg.noise_sigma > 0.0) {
      out.roll[k] += noise(rng);
      out.pitch[k] += noise(rng);
      out.yaw[k] += noise(rng);
    }
    out.time[k] = t + cfg.delay;
  }
  return out;
}

}  // namespace mlrid
