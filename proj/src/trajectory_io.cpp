#include "mlrid/trajectory_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "mlrid/errors.hpp"

namespace mlrid {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_field(std::string_view field, const std::string& where) {
  field = trim(field);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || end != field.data() + field.size() || !std::isfinite(value)) {
    throw ParseError(where + ": '" + std::string(field) + "' is not a finite number");
  }
  return value;
}

std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace

OrientationRecord read_trajectory(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source + ":1: missing header");
  if (trim(line) != kTrajectoryHeader) {
    throw ParseError(source + ":1: expected header '" + std::string(kTrajectoryHeader) + "'");
  }
  OrientationRecord rec;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    double fields[4];
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = body.find(',', start);
      const auto piece = body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      if (count == 4) throw ParseError(where + ": expected 4 columns");
      fields[count++] = parse_field(piece, where);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (count != 4) throw ParseError(where + ": expected 4 columns, found " + std::to_string(count));
    if (!rec.time.empty() && !(fields[0] > rec.time.back())) {
      throw ParseError(where + ": timestamp " + format(fields[0]) + " does not increase");
    }
    rec.time.push_back(fields[0]);
    rec.roll.push_back(deg_to_rad(fields[1]));
    rec.pitch.push_back(deg_to_rad(fields[2]));
    rec.yaw.push_back(deg_to_rad(fields[3]));
  }
  return rec;
}

OrientationRecord load_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_trajectory(in, path.string());
}

void write_trajectory(std::ostream& out, const OrientationRecord& record) {
  record.validate();
  out << kTrajectoryHeader << '\n';
  for (std::size_t k = 0; k < record.size(); ++k) {
    out << format(record.time[k]) << ',' << format(rad_to_deg(record.roll[k])) << ','
        << format(rad_to_deg(record.pitch[k])) << ',' << format(rad_to_deg(record.yaw[k])) << '\n';
  }
}

void save_trajectory(const OrientationRecord& record, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ResourceError("cannot write " + path.string());
  write_trajectory(out, record);
  out.flush();
  if (!out) throw ResourceError("write failed for " + path.string());
}

void save_spectrum_table(std::span<const double> power, double bin_width, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ResourceError("cannot write " + path.string());
  out << "freq_hz,power\n";
  for (std::size_t k = 0; k < power.size(); ++k) {
    out << format(static_cast<double>(k) * bin_width) << ',' << format(power[k]) << '\n';
  }
  if (!out) throw ResourceError("write failed for " + path.string());
}

}  // namespace mlrid
