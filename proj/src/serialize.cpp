#include "qprecon/serialize.hpp"

#include <charconv>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qprecon/numlin.hpp"

namespace qprecon {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_cell(const Cell& c) {
  if (auto* i = std::get_if<long>(&c)) return std::to_string(*i);
  if (auto* d = std::get_if<double>(&c)) return format_double(*d);
  return std::get<std::string>(c);
}

std::string to_csv(const Table& t, const std::vector<std::string>& comments) {
  std::ostringstream os;
  for (const auto& c : comments) os << "# " << c << '\n';
  for (size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << t.columns[k];
  os << '\n';
  for (const auto& row : t.rows) {
    for (size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << format_cell(row[k]);
    os << '\n';
  }
  return os.str();
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Cell parse_cell(const std::string& s) {
  long i = 0;
  auto [pi, ei] = std::from_chars(s.data(), s.data() + s.size(), i);
  if (ei == std::errc() && pi == s.data() + s.size() && !s.empty()) return i;
  double d = 0.0;
  auto [pd, ed] = std::from_chars(s.data(), s.data() + s.size(), d);
  if (ed == std::errc() && pd == s.data() + s.size() && !s.empty()) return d;
  return s;
}

}  // namespace

Table parse_csv(const std::string& text, const std::string& name) {
  Table t;
  t.name = name;
  std::istringstream is(text);
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields = split(line);
    if (header) {
      t.columns = std::move(fields);
      header = false;
      continue;
    }
    if (fields.size() != t.columns.size())
      throw Error(ErrorKind::IoError, "CSV row has " + std::to_string(fields.size()) + " fields, expected " +
                                          std::to_string(t.columns.size()));
    std::vector<Cell> row;
    for (const auto& f : fields) row.push_back(parse_cell(f));
    t.rows.push_back(std::move(row));
  }
  return t;
}

nlohmann::json to_json(const Table& t) {
  nlohmann::json j;
  j["name"] = t.name;
  j["columns"] = t.columns;
  nlohmann::json records = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::object();
    for (size_t k = 0; k < row.size() && k < t.columns.size(); ++k)
      std::visit([&](const auto& v) { r[t.columns[k]] = v; }, row[k]);
    records.push_back(std::move(r));
  }
  j["records"] = std::move(records);
  return j;
}

Table table_from_json(const nlohmann::json& j) {
  Table t;
  t.name = j.value("name", "");
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& r : j.at("records")) {
    std::vector<Cell> row;
    for (const auto& col : t.columns) {
      const auto& c = r.at(col);
      if (c.is_number_integer()) row.emplace_back(c.get<long>());
      else if (c.is_number()) row.emplace_back(c.get<double>());
      else if (c.is_null()) row.emplace_back(std::nan(""));
      else row.emplace_back(c.get<std::string>());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string config_hash(const nlohmann::json& config) {
  const std::string s = config.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string emit_report(const Table& t, ReportFormat format, const std::string& dir,
                        const std::vector<std::string>& comments, const nlohmann::json& meta) {
  if (t.rows.empty()) throw Error(ErrorKind::IoError, "refusing to write an empty report '" + t.name + "'");
  if (t.name.empty()) throw Error(ErrorKind::IoError, "report needs a name");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir + ": " + ec.message());
  const std::string path =
      (std::filesystem::path(dir) / (t.name + (format == ReportFormat::csv ? ".csv" : ".json"))).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path);
  if (format == ReportFormat::csv) {
    out << to_csv(t, comments);
  } else {
    nlohmann::json j = to_json(t);
    if (!meta.is_null()) j["meta"] = meta;
    out << j.dump(2) << '\n';
  }
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
  return path;
}

}  // namespace qprecon
