#include "gridrisk/case_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

namespace gridrisk {

using nlohmann::json;

CaseFormat detect_format(const std::string& path) {
  const auto dot = path.find_last_of('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == "json") return CaseFormat::NativeJson;
  if (ext == "m" || ext == "txt" || ext == "mat" || ext == "case") return CaseFormat::MatpowerText;
  throw ParseError("cannot infer case format from extension of '" + path + "'");
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double require_number(const json& j, const char* field, const std::string& ctx) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_number()) {
    throw ParseError(ctx + ": missing or non-numeric field '" + field + "'");
  }
  return it->get<double>();
}

int require_int(const json& j, const char* field, const std::string& ctx) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_number_integer()) {
    throw ParseError(ctx + ": missing or non-integer field '" + field + "'");
  }
  return it->get<int>();
}

// bus_id,x_km,y_km
std::map<int, std::pair<double, double>> read_coords_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open coordinate file '" + path + "'");
  std::map<int, std::pair<double, double>> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      if (line.find("bus_id") == std::string::npos)
        throw ParseError("coordinate file must start with header bus_id,x_km,y_km");
      header = false;
      continue;
    }
    std::istringstream ls(line);
    std::string tok;
    int id;
    double x, y;
    if (!std::getline(ls, tok, ',')) throw ParseError("bad coordinate row: " + line);
    id = std::stoi(tok);
    if (!std::getline(ls, tok, ',')) throw ParseError("bad coordinate row: " + line);
    x = std::stod(tok);
    if (!std::getline(ls, tok, ',')) throw ParseError("bad coordinate row: " + line);
    y = std::stod(tok);
    out[id] = {x, y};
  }
  return out;
}

GridCase parse_native_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  GridCase g;
  g.base_mva = require_number(j, "base_mva", "case");
  if (j.contains("outage_probability")) {
    g.outage_probability = j.at("outage_probability").get<double>();
  }
  if (!j.contains("buses") || !j["buses"].is_array()) throw ParseError("case: missing buses[]");
  if (!j.contains("branches") || !j["branches"].is_array())
    throw ParseError("case: missing branches[]");
  for (const auto& jb : j["buses"]) {
    Bus b;
    b.id = require_int(jb, "id", "bus");
    const std::string ctx = "bus " + std::to_string(b.id);
    // Coordinates may be absent here and supplied via the coordinate CSV.
    b.x_km = jb.contains("x_km") ? require_number(jb, "x_km", ctx)
                                 : std::numeric_limits<double>::quiet_NaN();
    b.y_km = jb.contains("y_km") ? require_number(jb, "y_km", ctx)
                                 : std::numeric_limits<double>::quiet_NaN();
    b.load_mw = jb.contains("load_mw") ? require_number(jb, "load_mw", ctx) : 0.0;
    b.is_slack_candidate = jb.value("is_slack_candidate", true);
    g.buses.push_back(b);
  }
  for (const auto& jb : j["branches"]) {
    Branch br;
    br.id = require_int(jb, "id", "branch");
    const std::string ctx = "branch " + std::to_string(br.id);
    br.from_bus = require_int(jb, "from_bus", ctx);
    br.to_bus = require_int(jb, "to_bus", ctx);
    br.reactance_pu = require_number(jb, "reactance_pu", ctx);
    br.rate_a_mw = require_number(jb, "rate_a_mw", ctx);
    if (jb.contains("rate_b_mw")) br.rate_b_mw = jb.at("rate_b_mw").get<double>();
    if (jb.contains("rate_c_mw")) br.rate_c_mw = jb.at("rate_c_mw").get<double>();
    br.in_service = jb.value("in_service", true);
    if (jb.contains("outage_probability"))
      br.outage_probability = jb.at("outage_probability").get<double>();
    g.branches.push_back(br);
  }
  if (j.contains("generators")) {
    for (const auto& jg : j["generators"]) {
      Generator gen;
      gen.id = require_int(jg, "id", "generator");
      const std::string ctx = "generator " + std::to_string(gen.id);
      gen.bus = require_int(jg, "bus", ctx);
      gen.p_mw = require_number(jg, "p_mw", ctx);
      gen.p_max_mw = require_number(jg, "p_max_mw", ctx);
      gen.p_min_mw = jg.contains("p_min_mw") ? require_number(jg, "p_min_mw", ctx) : 0.0;
      g.generators.push_back(gen);
    }
  }
  g.rebuild_index();
  return g;
}

// Reads the numeric rows of one `mpc.<name> = [ ... ];` matrix.
std::vector<std::vector<double>> matpower_matrix(const std::string& text,
                                                 const std::string& name) {
  const std::string key = "mpc." + name;
  auto pos = text.find(key);
  if (pos == std::string::npos) throw ParseError("MATPOWER case: missing " + key);
  pos = text.find('[', pos);
  const auto end = text.find(']', pos);
  if (pos == std::string::npos || end == std::string::npos)
    throw ParseError("MATPOWER case: unterminated matrix " + key);
  std::vector<std::vector<double>> rows;
  std::istringstream body(text.substr(pos + 1, end - pos - 1));
  std::string line;
  while (std::getline(body, line, ';')) {
    if (auto c = line.find('%'); c != std::string::npos) line.erase(c);
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

double matpower_scalar(const std::string& text, const std::string& name) {
  const std::string key = "mpc." + name;
  auto pos = text.find(key);
  if (pos == std::string::npos) throw ParseError("MATPOWER case: missing " + key);
  pos = text.find('=', pos);
  if (pos == std::string::npos) throw ParseError("MATPOWER case: malformed " + key);
  return std::stod(text.substr(pos + 1));
}

GridCase parse_matpower(const std::string& text, std::vector<std::string>& warnings) {
  GridCase g;
  g.base_mva = matpower_scalar(text, "baseMVA");

  const auto bus_rows = matpower_matrix(text, "bus");
  for (const auto& r : bus_rows) {
    if (r.size() < 3) throw ParseError("MATPOWER bus row has fewer than 3 columns");
    Bus b;
    b.id = static_cast<int>(r[0]);
    b.load_mw = r[2];  // Pd
    if (b.load_mw < 0.0) b.load_mw = 0.0;
    b.x_km = std::numeric_limits<double>::quiet_NaN();
    b.y_km = std::numeric_limits<double>::quiet_NaN();
    b.is_slack_candidate = r.size() > 1 && static_cast<int>(r[1]) == 3;
    g.buses.push_back(b);
  }

  const auto branch_rows = matpower_matrix(text, "branch");
  int next_branch_id = 1;
  bool ignored_cols = false;
  for (const auto& r : branch_rows) {
    if (r.size() < 6) throw ParseError("MATPOWER branch row has fewer than 6 columns");
    Branch br;
    br.id = next_branch_id++;
    br.from_bus = static_cast<int>(r[0]);
    br.to_bus = static_cast<int>(r[1]);
    br.reactance_pu = r[3];
    br.rate_a_mw = r[5];
    if (r.size() > 6 && r[6] > 0.0) br.rate_b_mw = r[6];
    if (r.size() > 7 && r[7] > 0.0) br.rate_c_mw = r[7];
    if (r.size() > 10) br.in_service = r[10] != 0.0;
    if (r.size() > 11) ignored_cols = true;
    g.branches.push_back(br);
  }

  const auto gen_rows = matpower_matrix(text, "gen");
  int next_gen_id = 1;
  for (const auto& r : gen_rows) {
    if (r.size() < 2) throw ParseError("MATPOWER gen row has fewer than 2 columns");
    Generator gen;
    gen.id = next_gen_id++;
    gen.bus = static_cast<int>(r[0]);
    gen.p_mw = r[1];
    gen.p_max_mw = r.size() > 8 ? r[8] : std::max(gen.p_mw, 0.0);
    gen.p_min_mw = r.size() > 9 ? std::max(r[9], 0.0) : 0.0;
    if (r.size() > 7 && r[7] == 0.0) {  // status
      gen.p_mw = gen.p_max_mw = gen.p_min_mw = 0.0;
    }
    gen.p_mw = std::min(std::max(gen.p_mw, gen.p_min_mw), gen.p_max_mw);
    g.generators.push_back(gen);
  }
  if (ignored_cols) {
    warnings.push_back("MATPOWER import: columns beyond angmin/angmax were ignored");
  }
  g.rebuild_index();
  return g;
}

}  // namespace

GridCase case_from_json(const std::string& text) { return parse_native_json(text); }

std::string case_to_json(const GridCase& g) {
  json j;
  j["base_mva"] = g.base_mva;
  j["outage_probability"] = g.outage_probability;
  j["buses"] = json::array();
  for (const auto& b : g.buses) {
    json jb{{"id", b.id},           {"x_km", b.x_km},
            {"y_km", b.y_km},       {"load_mw", b.load_mw},
            {"is_slack_candidate", b.is_slack_candidate}};
    j["buses"].push_back(jb);
  }
  j["branches"] = json::array();
  for (const auto& br : g.branches) {
    json jb{{"id", br.id},
            {"from_bus", br.from_bus},
            {"to_bus", br.to_bus},
            {"reactance_pu", br.reactance_pu},
            {"rate_a_mw", br.rate_a_mw},
            {"in_service", br.in_service}};
    if (br.rate_b_mw) jb["rate_b_mw"] = *br.rate_b_mw;
    if (br.rate_c_mw) jb["rate_c_mw"] = *br.rate_c_mw;
    if (br.outage_probability) jb["outage_probability"] = *br.outage_probability;
    j["branches"].push_back(jb);
  }
  j["generators"] = json::array();
  for (const auto& gen : g.generators) {
    j["generators"].push_back(json{{"id", gen.id},
                                   {"bus", gen.bus},
                                   {"p_mw", gen.p_mw},
                                   {"p_max_mw", gen.p_max_mw},
                                   {"p_min_mw", gen.p_min_mw}});
  }
  return j.dump(2);
}

LoadResult load_case(const std::string& path, CaseFormat format,
                     const std::optional<std::string>& coords_csv_path) {
  LoadResult result;
  const std::string text = read_file(path);
  result.gcase = format == CaseFormat::NativeJson ? parse_native_json(text)
                                                  : parse_matpower(text, result.warnings);

  if (coords_csv_path) {
    const auto coords = read_coords_csv(*coords_csv_path);
    for (auto& b : result.gcase.buses) {
      auto it = coords.find(b.id);
      if (it != coords.end()) {
        b.x_km = it->second.first;
        b.y_km = it->second.second;
      }
    }
  }
  for (const auto& b : result.gcase.buses) {
    if (!std::isfinite(b.x_km) || !std::isfinite(b.y_km)) {
      throw ValidationError("bus " + std::to_string(b.id) +
                            " has no coordinates; supply a coordinate CSV");
    }
  }

  synthesize_ratings(result.gcase);
  auto w = validate_case(result.gcase);
  result.warnings.insert(result.warnings.end(), w.begin(), w.end());
  return result;
}

LoadResult load_case(const std::string& path,
                     const std::optional<std::string>& coords_csv_path) {
  return load_case(path, detect_format(path), coords_csv_path);
}

void save_case(const GridCase& gcase, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << case_to_json(gcase) << "\n";
}

}  // namespace gridrisk
