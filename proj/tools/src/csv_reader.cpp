#include "csv_reader.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace phiproj::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << source << ":" << line << ": " << what;
  throw InputError(os.str());
}

double parse_number(std::string_view field, const std::string& source, std::size_t line,
                    const std::string& column) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    fail(source, line,
         "field '" + column + "': cannot parse '" + std::string(field) + "' as a number");
  }
  if (!std::isfinite(value)) {
    fail(source, line, "field '" + column + "': value must be finite");
  }
  return value;
}

}  // namespace

DataTable read_csv(std::istream& in, const std::string& source) {
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::string> header;

  while (header.empty() && std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (line_no == 1 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
    if (trim(line).empty()) continue;
    for (auto f : split(line)) header.emplace_back(f);
  }
  if (header.empty()) throw InputError(source + ": empty file, expected a header row");

  int id_col = -1, weight_col = -1;
  std::vector<int> data_cols;
  DataTable table;
  std::unordered_set<std::string> seen;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto& name = header[c];
    if (name.empty()) fail(source, line_no, "empty column name at position " + std::to_string(c + 1));
    if (!seen.insert(name).second) fail(source, line_no, "duplicate column '" + name + "'");
    if (name == "id") {
      id_col = static_cast<int>(c);
    } else if (name == "weight") {
      weight_col = static_cast<int>(c);
    } else {
      data_cols.push_back(static_cast<int>(c));
      table.columns.push_back(name);
    }
  }

  std::vector<std::vector<double>> rows;
  std::vector<double> weights;
  std::unordered_set<std::string> ids_seen;
  while (std::getline(in, raw)) {
    ++line_no;
    if (trim(raw).empty()) continue;
    const auto fields = split(raw);
    if (fields.size() != header.size()) {
      fail(source, line_no,
           "expected " + std::to_string(header.size()) + " fields, found " +
               std::to_string(fields.size()));
    }
    std::string id = id_col >= 0 ? std::string(fields[static_cast<std::size_t>(id_col)])
                                 : std::to_string(rows.size());
    if (id.empty()) fail(source, line_no, "field 'id': empty identifier");
    if (!ids_seen.insert(id).second) fail(source, line_no, "field 'id': duplicate '" + id + "'");
    table.ids.push_back(std::move(id));
    if (weight_col >= 0) {
      weights.push_back(
          parse_number(fields[static_cast<std::size_t>(weight_col)], source, line_no, "weight"));
    }
    std::vector<double> row;
    row.reserve(data_cols.size());
    for (std::size_t k = 0; k < data_cols.size(); ++k) {
      row.push_back(parse_number(fields[static_cast<std::size_t>(data_cols[k])], source, line_no,
                                 table.columns[k]));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(source + ": no data rows after the header");

  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(data_cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < data_cols.size(); ++c) {
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  if (weight_col >= 0) table.weights = std::move(weights);
  return table;
}

DataTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  return read_csv(in, path);
}

}  // namespace phiproj::cli
