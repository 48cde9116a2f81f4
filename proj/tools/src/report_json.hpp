#pragma once

#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "phiproj/diagnostics.hpp"
#include "phiproj/dual_solver.hpp"
#include "phiproj/primal_oracle.hpp"

namespace phiproj::cli {

/// Finite doubles become JSON numbers; +-inf and nan become the strings
/// "inf", "-inf" and "nan".
nlohmann::json number_json(double x);
nlohmann::json vector_json(const Eigen::VectorXd& v);

/// Inverse of number_json; accepts numbers and the three special strings.
double json_number(const nlohmann::json& j);
Eigen::VectorXd json_vector(const nlohmann::json& j);

nlohmann::json diagnostics_json(const DiagnosticsReport& report);
nlohmann::json oracle_json(const OracleResult& result, double primal_value);

/// Serialized with nlohmann's shortest round-trip formatting.
std::string dump(const nlohmann::json& j);

}  // namespace phiproj::cli
