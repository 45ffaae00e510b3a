#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "mlrid/trajectory.hpp"

namespace mlrid {

inline constexpr const char* kTrajectoryHeader = "time_s,roll_deg,pitch_deg,yaw_deg";

/// Reads `time_s,roll_deg,pitch_deg,yaw_deg` rows; angles come back in
/// radians. Throws ParseError naming the offending line.
OrientationRecord read_trajectory(std::istream& in, const std::string& source = "<stream>");
OrientationRecord load_trajectory(const std::filesystem::path& path);

/// Writes degrees with 15 significant digits.
void write_trajectory(std::ostream& out, const OrientationRecord& record);
void save_trajectory(const OrientationRecord& record, const std::filesystem::path& path);

/// Two-column `freq_hz,power` table.
void save_spectrum_table(std::span<const double> power, double bin_width, const std::filesystem::path& path);

}  // namespace mlrid
