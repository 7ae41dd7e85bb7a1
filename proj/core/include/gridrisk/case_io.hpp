#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridrisk/grid_case.hpp"

namespace gridrisk {

enum class CaseFormat { NativeJson, MatpowerText };

// .json -> native, .m/.txt -> MATPOWER-style text.
CaseFormat detect_format(const std::string& path);

struct LoadResult {
  GridCase gcase;
  std::vector<std::string> warnings;
};

// Loads, synthesizes missing emergency ratings, and validates.  Buses without
// coordinates are rejected unless a coordinate CSV (header bus_id,x_km,y_km)
// is supplied.
LoadResult load_case(const std::string& path, CaseFormat format,
                     const std::optional<std::string>& coords_csv_path = std::nullopt);

LoadResult load_case(const std::string& path,
                     const std::optional<std::string>& coords_csv_path = std::nullopt);

// Native JSON writer; load_case(save_case(c)) round-trips field-for-field.
void save_case(const GridCase& gcase, const std::string& path);

std::string case_to_json(const GridCase& gcase);
GridCase case_from_json(const std::string& text);

}  // namespace gridrisk
