#include "levytrim/report_io.hpp"

#include "levytrim/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

namespace levytrim {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_escape(fields[i]);
  }
  line += "\r\n";
  return line;
}

std::string table_to_csv(const Table& table) {
  std::string out = csv_line(table.columns);
  std::vector<std::string> cells;
  for (const auto& row : table.rows) {
    cells.clear();
    for (double v : row) cells.push_back(std::isfinite(v) ? format_double(v) : std::string());
    out += csv_line(cells);
  }
  return out;
}

namespace {

nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string reports_to_json(const std::vector<VerificationReport>& reports) {
  using nlohmann::ordered_json;
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json j;
    j["check_name"] = r.check_name;
    j["seed"] = r.seed;
    j["n_samples"] = r.n_samples;
    ordered_json cfg = ordered_json::object();
    for (const auto& [k, v] : r.config) cfg[k] = v;
    j["config"] = cfg;
    ordered_json stats = ordered_json::array();
    for (const auto& s : r.statistics) {
      ordered_json e;
      e["name"] = s.name;
      e["value"] = number(s.value);
      e["threshold"] = number(s.threshold);
      e["relation"] = s.relation;
      e["pass"] = s.pass;
      stats.push_back(e);
    }
    j["statistics"] = stats;
    ordered_json info = ordered_json::object();
    for (const auto& [k, v] : r.info) info[k] = number(v);
    j["info"] = info;
    j["pass"] = r.pass;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw ConfigError("cannot create directory " + path.parent_path().string());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("cannot rename into " + path.string());
  }
}

}  // namespace levytrim
