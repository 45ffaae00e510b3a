#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mlrid {

/// Structural description of a multi-legged robot.
///
/// Legs are stored in numbering order (leg 1 first). Mount angles are
/// azimuths measured from the forward (+y) body axis, positive toward the
/// right side (+x), so a leg on the right has a positive lateral offset.
struct RobotSpec {
  std::vector<int> links_per_leg;
  std::vector<std::vector<double>> link_lengths;  // m, [leg][link], proximal first
  std::vector<std::vector<double>> link_masses;   // kg, [leg][link]
  double body_mass = 0.0;                         // kg
  std::vector<double> mount_angles;               // rad
  double mount_radius = 0.0;                      // m

  int leg_count() const { return static_cast<int>(links_per_leg.size()); }
  int total_links() const;
  double full_length(int leg) const;

  /// Throws StructuralError when the description is inconsistent.
  void validate() const;

  /// Six-legged, three-link default: legs 1/3/5 on the right at 45/90/135
  /// degrees, legs 2/4/6 mirrored on the left.
  static RobotSpec hexapod();
};

/// Binary link-existence vector, segmented per leg (1 = link present).
class MorphologyVector {
 public:
  MorphologyVector() = default;
  MorphologyVector(std::vector<std::uint8_t> bits, std::vector<int> links_per_leg);

  static MorphologyVector all_present(const RobotSpec& spec);
  /// Builds a feasible vector from per-leg present-link counts.
  static MorphologyVector from_counts(const RobotSpec& spec, std::span<const int> counts);
  /// Parses the bracketed literal form, e.g. "[111][110][000]".
  static MorphologyVector parse(std::string_view literal);

  std::span<const std::uint8_t> bits() const { return bits_; }
  std::span<const int> links_per_leg() const { return links_; }
  int size() const { return static_cast<int>(bits_.size()); }
  int leg_count() const { return static_cast<int>(links_.size()); }
  int leg_offset(int leg) const { return offsets_[static_cast<std::size_t>(leg)]; }
  std::span<const std::uint8_t> leg(int leg) const;

  bool bit(int index) const { return bits_[static_cast<std::size_t>(index)] != 0; }
  void set_bit(int index, bool present) { bits_[static_cast<std::size_t>(index)] = present ? 1 : 0; }

  /// Prefix-of-ones test on every leg.
  bool is_feasible() const;
  /// Number of links present on a leg (0-based leg index).
  int present_links(int leg) const;
  /// Per-leg present-link counts; identifies the leg-damage class.
  std::vector<int> damage_class() const;
  /// True when a leg has lost at least one link.
  bool leg_damaged(int leg) const { return present_links(leg) < links_[static_cast<std::size_t>(leg)]; }

  std::string to_string() const;

  friend bool operator==(const MorphologyVector& a, const MorphologyVector& b) {
    return a.bits_ == b.bits_ && a.links_ == b.links_;
  }
  friend std::strong_ordering operator<=>(const MorphologyVector& a, const MorphologyVector& b) {
    if (auto c = a.bits_ <=> b.bits_; c != 0) return c;
    return a.links_ <=> b.links_;
  }

 private:
  std::vector<std::uint8_t> bits_;
  std::vector<int> links_;
  std::vector<int> offsets_;
};

/// Link logic: within each leg, every link distal to the first absent one
/// is forced absent. Throws StructuralError when `m` does not match `spec`.
MorphologyVector apply_link_logic(const MorphologyVector& m, const RobotSpec& spec);

/// Link logic using the vector's own leg segmentation.
MorphologyVector apply_link_logic(const MorphologyVector& m);

/// Product of (n_i + 1); saturates at UINT64_MAX.
std::uint64_t feasible_count(const RobotSpec& spec);

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 20;

/// All link-logic fixed points in lexicographic order. Throws ResourceError
/// when 2^N_T exceeds `raw_state_cap`.
std::vector<MorphologyVector> enumerate_feasible(const RobotSpec& spec,
                                                 std::uint64_t raw_state_cap = kDefaultEnumerationCap);

/// `count` pairwise-distinct feasible vectors, each a uniform random bit
/// vector repaired by link logic and redrawn on collision.
std::vector<MorphologyVector> random_feasible(const RobotSpec& spec, std::size_t count, std::uint64_t rng_seed);

}  // namespace mlrid
