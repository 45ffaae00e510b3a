#include "mlrid/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "mlrid/errors.hpp"

namespace mlrid {

int RobotSpec::total_links() const {
  int total = 0;
  for (int n : links_per_leg) total += n;
  return total;
}

double RobotSpec::full_length(int leg) const {
  double sum = 0.0;
  for (double l : link_lengths.at(static_cast<std::size_t>(leg))) sum += l;
  return sum;
}

void RobotSpec::validate() const {
  const auto n = links_per_leg.size();
  if (n == 0) throw StructuralError("robot has no legs");
  if (link_lengths.size() != n || link_masses.size() != n || mount_angles.size() != n) {
    throw StructuralError("per-leg tables must all have one entry per leg");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int links = links_per_leg[i];
    if (links < 1) throw StructuralError("leg " + std::to_string(i + 1) + " has no links");
    if (link_lengths[i].size() != static_cast<std::size_t>(links) ||
        link_masses[i].size() != static_cast<std::size_t>(links)) {
      throw StructuralError("leg " + std::to_string(i + 1) + ": link table size does not match link count");
    }
    for (int j = 0; j < links; ++j) {
      if (!(link_lengths[i][static_cast<std::size_t>(j)] > 0.0) ||
          !(link_masses[i][static_cast<std::size_t>(j)] > 0.0)) {
        throw StructuralError("leg " + std::to_string(i + 1) + ": link lengths and masses must be positive");
      }
    }
    if (!std::isfinite(mount_angles[i])) throw StructuralError("mount angle must be finite");
  }
  if (!(body_mass > 0.0)) throw StructuralError("body mass must be positive");
  if (!(mount_radius > 0.0)) throw StructuralError("mount radius must be positive");
}

RobotSpec RobotSpec::hexapod() {
  constexpr double deg = std::numbers::pi / 180.0;
  RobotSpec spec;
  spec.links_per_leg.assign(6, 3);
  spec.link_lengths.assign(6, {0.045, 0.075, 0.12});
  spec.link_masses.assign(6, {0.03, 0.05, 0.06});
  spec.body_mass = 1.2;
  spec.mount_angles = {45 * deg, -45 * deg, 90 * deg, -90 * deg, 135 * deg, -135 * deg};
  spec.mount_radius = 0.1;
  return spec;
}

MorphologyVector::MorphologyVector(std::vector<std::uint8_t> bits, std::vector<int> links_per_leg)
    : bits_(std::move(bits)), links_(std::move(links_per_leg)) {
  int total = 0;
  offsets_.reserve(links_.size());
  for (int n : links_) {
    if (n < 1) throw StructuralError("leg segment must hold at least one link");
    offsets_.push_back(total);
    total += n;
  }
  if (static_cast<std::size_t>(total) != bits_.size()) {
    throw StructuralError("morphology length " + std::to_string(bits_.size()) + " does not match " +
                          std::to_string(total) + " links");
  }
  for (auto b : bits_) {
    if (b > 1) throw StructuralError("morphology elements must be 0 or 1");
  }
}

MorphologyVector MorphologyVector::all_present(const RobotSpec& spec) {
  return MorphologyVector(std::vector<std::uint8_t>(static_cast<std::size_t>(spec.total_links()), 1),
                          spec.links_per_leg);
}

MorphologyVector MorphologyVector::from_counts(const RobotSpec& spec, std::span<const int> counts) {
  if (counts.size() != spec.links_per_leg.size()) throw StructuralError("one count per leg required");
  std::vector<std::uint8_t> bits;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0 || counts[i] > spec.links_per_leg[i]) throw StructuralError("link count out of range");
    for (int j = 0; j < spec.links_per_leg[i]; ++j) bits.push_back(j < counts[i] ? 1 : 0);
  }
  return MorphologyVector(std::move(bits), spec.links_per_leg);
}

MorphologyVector MorphologyVector::parse(std::string_view literal) {
  std::vector<std::uint8_t> bits;
  std::vector<int> links;
  bool open = false;
  int current = 0;
  for (char c : literal) {
    if (c == ' ' || c == '\t') continue;
    if (c == '[') {
      if (open) throw ParseError("nested '[' in morphology literal");
      open = true;
      current = 0;
    } else if (c == ']') {
      if (!open || current == 0) throw ParseError("empty or unbalanced leg group in morphology literal");
      links.push_back(current);
      open = false;
    } else if ((c == '0' || c == '1') && open) {
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
      ++current;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "' in morphology literal");
    }
  }
  if (open || links.empty()) throw ParseError("unterminated morphology literal");
  return MorphologyVector(std::move(bits), std::move(links));
}

std::span<const std::uint8_t> MorphologyVector::leg(int leg) const {
  const auto i = static_cast<std::size_t>(leg);
  return std::span<const std::uint8_t>(bits_).subspan(static_cast<std::size_t>(offsets_[i]),
                                                      static_cast<std::size_t>(links_[i]));
}

bool MorphologyVector::is_feasible() const {
  for (int i = 0; i < leg_count(); ++i) {
    bool seen_zero = false;
    for (auto b : leg(i)) {
      if (b == 0) seen_zero = true;
      else if (seen_zero) return false;
    }
  }
  return true;
}

int MorphologyVector::present_links(int leg_index) const {
  int count = 0;
  for (auto b : leg(leg_index)) count += b;
  return count;
}

std::vector<int> MorphologyVector::damage_class() const {
  std::vector<int> counts;
  counts.reserve(links_.size());
  for (int i = 0; i < leg_count(); ++i) counts.push_back(present_links(i));
  return counts;
}

std::string MorphologyVector::to_string() const {
  std::string out;
  for (int i = 0; i < leg_count(); ++i) {
    out += '[';
    for (auto b : leg(i)) out += static_cast<char>('0' + b);
    out += ']';
  }
  return out;
}

MorphologyVector apply_link_logic(const MorphologyVector& m) {
  MorphologyVector out = m;
  for (int i = 0; i < m.leg_count(); ++i) {
    const int begin = m.leg_offset(i);
    const int n = m.links_per_leg()[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      if (!out.bit(begin + j)) {
        for (int k = j + 1; k < n; ++k) out.set_bit(begin + k, false);
        break;
      }
    }
  }
  return out;
}

MorphologyVector apply_link_logic(const MorphologyVector& m, const RobotSpec& spec) {
  if (m.size() != spec.total_links() ||
      !std::ranges::equal(m.links_per_leg(), spec.links_per_leg)) {
    throw StructuralError("morphology " + m.to_string() + " does not match the robot's " +
                          std::to_string(spec.total_links()) + "-link layout");
  }
  return apply_link_logic(m);
}

std::uint64_t feasible_count(const RobotSpec& spec) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t count = 1;
  for (int n : spec.links_per_leg) {
    const auto factor = static_cast<std::uint64_t>(n) + 1;
    if (count > kMax / factor) return kMax;
    count *= factor;
  }
  return count;
}

std::vector<MorphologyVector> enumerate_feasible(const RobotSpec& spec, std::uint64_t raw_state_cap) {
  spec.validate();
  const int total = spec.total_links();
  if (total >= 64 || (std::uint64_t{1} << total) > raw_state_cap) {
    throw ResourceError("enumeration of 2^" + std::to_string(total) + " raw states exceeds the cap of " +
                        std::to_string(raw_state_cap));
  }
  // Mixed-radix walk over per-leg present-link counts.
  const auto legs = spec.links_per_leg.size();
  std::vector<int> counts(legs, 0);
  std::vector<MorphologyVector> out;
  out.reserve(static_cast<std::size_t>(feasible_count(spec)));
  while (true) {
    out.push_back(MorphologyVector::from_counts(spec, counts));
    std::size_t i = legs;
    while (i > 0) {
      --i;
      if (++counts[i] <= spec.links_per_leg[i]) break;
      counts[i] = 0;
      if (i == 0) {
        std::ranges::sort(out);
        return out;
      }
    }
  }
}

std::vector<MorphologyVector> random_feasible(const RobotSpec& spec, std::size_t count, std::uint64_t rng_seed) {
  spec.validate();
  if (count > feasible_count(spec)) {
    throw ArgumentError("requested " + std::to_string(count) + " distinct morphologies but only " +
                        std::to_string(feasible_count(spec)) + " are feasible");
  }
  std::mt19937_64 rng(rng_seed);
  const auto total = static_cast<std::size_t>(spec.total_links());
  std::set<MorphologyVector> seen;
  std::vector<MorphologyVector> out;
  out.reserve(count);
  std::vector<std::uint8_t> bits(total);
  while (out.size() < count) {
    std::uint64_t word = 0;
    for (std::size_t k = 0; k < total; ++k) {
      if (k % 64 == 0) word = rng();
      bits[k] = static_cast<std::uint8_t>(word & 1U);
      word >>= 1;
    }
    auto candidate = apply_link_logic(MorphologyVector(bits, spec.links_per_leg));
    if (seen.insert(candidate).second) out.push_back(std::move(candidate));
  }
  return out;
}

}  // namespace mlrid
