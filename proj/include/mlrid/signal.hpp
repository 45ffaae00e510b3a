#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mlrid/trajectory.hpp"

namespace mlrid {

/// Full (two-sided) DFT of a real signal. bins[k] holds the coefficient of
/// frequency k * sample_rate / n.
struct Spectrum {
  std::vector<std::complex<double>> bins;
  double sample_rate = 0.0;

  std::size_t size() const { return bins.size(); }
  double frequency(std::size_t k) const { return static_cast<double>(k) * sample_rate / static_cast<double>(bins.size()); }
};

enum class FilterMode { roll_pitch, yaw };

struct FilterConfig {
  double f_cutoff = 10.0;    // Hz
  double p_threshold = 0.1;  // single-sided amplitude, signal units
  FilterMode mode = FilterMode::roll_pitch;

  void validate() const;
};

struct SampleJitter {
  double rate_low = 950.0;   // Hz
  double rate_high = 1000.0; // Hz
};

/// Reproduces IMU bench artefacts on a clean trajectory. An empty `jitter`
/// keeps the trajectory's own uniform sampling.
struct CorruptionConfig {
  double noise_sigma = 0.0;  // rad
  double drift_rate = 0.0;   // rad/s
  double delay = 0.0;        // s
  std::optional<SampleJitter> jitter;
  std::uint64_t rng_seed = 0;

  void validate() const;

  /// 1 degree noise, 0.1 degree/s drift, 0.3 s delay, 950-1000 Hz jitter.
  static CorruptionConfig bench(std::uint64_t seed);
};

bool is_power_of_two(std::size_t n);

/// Forward DFT, Y[k] = sum_j x[j] exp(-2 pi i j k / n). n must be a power of two >= 2.
Spectrum dft_forward(std::span<const double> x, double sample_rate);

/// Inverse DFT returning the real part. Throws IntegrityError when the
/// spectrum is not conjugate-symmetric or the result keeps an imaginary
/// residue.
std::vector<double> dft_inverse(const Spectrum& spectrum);

/// Single-sided amplitude spectrum, n/2 + 1 entries: (2 - [DC or Nyquist]) |Y[k]| / n.
std::vector<double> power_spectrum(const Spectrum& spectrum);

/// Spectral gate used before comparing simulated and recorded orientation.
///
/// Bins above the cutoff and the DC bin are dropped. In roll/pitch mode
/// only strict local maxima of the amplitude spectrum above the threshold
/// survive (the lowest bin of a flat-topped peak wins); in yaw mode every
/// bin above the threshold survives. Bins are dropped in conjugate pairs,
/// and the reconstruction is shifted so its first sample is exactly zero.
std::vector<double> fft_filter(std::span<const double> channel, double sample_rate, const FilterConfig& cfg);

/// Roll and pitch in roll/pitch mode, yaw in yaw mode; time base kept, t0 reset to 0.
OrientationTrajectory filter_trajectory(const OrientationTrajectory& traj, double f_cutoff, double p_threshold);

/// Linear interpolation onto t_start + k * duration / samples for any
/// sample count >= 2. Throws ArgumentError when the window leaves the record.
std::vector<double> interpolate_uniform(std::span<const double> times, std::span<const double> values,
                                        double t_start, double duration, std::size_t samples);

/// interpolate_uniform restricted to power-of-two sample counts.
std::vector<double> resample_uniform(std::span<const double> times, std::span<const double> values,
                                     double t_start, double duration, std::size_t samples);

/// Resamples all three channels of a record onto a power-of-two grid.
OrientationTrajectory resample_record(const OrientationRecord& record, double t_start, double duration,
                                      std::size_t samples);

/// Re-samples the trajectory at jittered instants, adds drift and Gaussian
/// noise, and shifts every timestamp by the configured delay.
OrientationRecord corrupt_trajectory(const OrientationTrajectory& traj, const CorruptionConfig& cfg);

}  // namespace mlrid
