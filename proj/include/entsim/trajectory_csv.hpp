#pragma once

// Trajectory files: header `tid,seq,lat,lon[,timestamp]`, one fix per row,
// rows grouped by tid and sorted by seq.

#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "entsim/csv.hpp"
#include "entsim/geometry.hpp"

namespace entsim {

inline std::vector<Trajectory> read_trajectories(std::istream& in) {
  const auto rows = csv::read_rows(in);
  if (rows.empty()) throw SchemaError("trajectory CSV is empty");

  const auto& header = rows.front().second;
  const bool has_ts = header.size() == 5;
  if (!(header.size() == 4 || has_ts) || header[0] != "tid" ||
      header[1] != "seq" || header[2] != "lat" || header[3] != "lon" ||
      (has_ts && header[4] != "timestamp"))
    throw SchemaError("trajectory CSV header must be tid,seq,lat,lon[,timestamp]");

  std::vector<Trajectory> out;
  std::set<std::string> seen;
  std::string current_id;
  std::vector<Fix> current;
  auto flush = [&] {
    if (current.empty()) return;
    out.emplace_back(current_id, std::move(current));
    current.clear();
  };

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& [line_no, f] = rows[r];
    if (f.size() != header.size())
      throw SchemaError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, got " +
                        std::to_string(f.size()));
    if (f[0].empty())
      throw SchemaError("line " + std::to_string(line_no) + ": empty tid");
    const auto seq = csv::parse_uint(f[1], line_no, "seq");
    const double lat = csv::parse_double(f[2], line_no, "lat");
    const double lon = csv::parse_double(f[3], line_no, "lon");
    std::optional<std::string> ts;
    if (has_ts && !f[4].empty()) ts = f[4];

    if (current.empty() || f[0] != current_id) {
      flush();
      if (!seen.insert(f[0]).second)
        throw SchemaError("line " + std::to_string(line_no) + ": rows of tid '" +
                          f[0] + "' are not contiguous");
      current_id = f[0];
    } else if (seq <= current.back().seq()) {
      throw SchemaError("line " + std::to_string(line_no) + ": seq of tid '" +
                        f[0] + "' is not strictly increasing");
    }
    try {
      current.emplace_back(lat, lon, seq, std::move(ts));
    } catch (const InputDomainError& e) {
      throw InputDomainError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  flush();
  return out;
}

inline void write_trajectories(std::ostream& out,
                               const std::vector<Trajectory>& trajectories) {
  out << "tid,seq,lat,lon,timestamp\n";
  for (const auto& t : trajectories)
    for (const auto& f : t.fixes())
      out << csv::quote_if_needed(t.id()) << ',' << f.seq() << ','
          << csv::format_double(f.lat()) << ',' << csv::format_double(f.lon())
          << ',' << csv::quote_if_needed(f.timestamp().value_or("")) << '\n';
}

}  // namespace entsim
