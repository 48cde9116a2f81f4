#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace phiproj::cli {

/// Malformed input. The message carries file, line and field context.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric table read from CSV. `id` and `weight` are recognised by name;
/// every other column is numeric data.
struct DataTable {
  std::vector<std::string> columns;  ///< data column names, in file order
  std::vector<std::string> ids;      ///< from `id`, or "0", "1", ... by row
  std::optional<std::vector<double>> weights;
  Eigen::MatrixXd values;  ///< rows x columns.size()

  std::size_t rows() const noexcept { return ids.size(); }
};

/// Comma-separated, header row first, `.` decimal point, no quoting. Blank
/// lines are skipped; a UTF-8 BOM and trailing '\r' are tolerated.
DataTable read_csv(std::istream& in, const std::string& source);
DataTable read_csv_file(const std::string& path);

}  // namespace phiproj::cli
