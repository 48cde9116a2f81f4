#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "csv_reader.hpp"

namespace phiproj::cli {

namespace {

[[noreturn]] void bad(const std::string& source, const std::string& field,
                      const std::string& what) {
  throw InputError(source + ": field '" + field + "': " + what);
}

double number(const nlohmann::json& v, const std::string& source, const std::string& field) {
  if (!v.is_number()) bad(source, field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(source, field, "must be finite");
  return x;
}

bool boolean(const nlohmann::json& v, const std::string& source, const std::string& field) {
  if (!v.is_boolean()) bad(source, field, "expected true or false");
  return v.get<bool>();
}

}  // namespace

DivergenceFamily RunConfig::family() const {
  return make_family(gamma,
                     nonnegative ? DomainMode::nonnegative_extension : DomainMode::full_line);
}

SolveOptions RunConfig::solve_options() const {
  SolveOptions o;
  o.tolerance = tol;
  o.max_iterations = max_iter;
  return o;
}

RunConfig parse_config(const nlohmann::json& j, const std::string& source) {
  if (!j.is_object()) throw InputError(source + ": expected a JSON object at top level");
  RunConfig cfg;
  for (const auto& [key, v] : j.items()) {
    if (key == "divergence") {
      if (!v.is_object()) bad(source, key, "expected an object {gamma, nonnegative}");
      cfg.divergence_given = true;
      for (const auto& [k2, v2] : v.items()) {
        if (k2 == "gamma") {
          cfg.gamma = number(v2, source, "divergence.gamma");
        } else if (k2 == "nonnegative") {
          cfg.nonnegative = boolean(v2, source, "divergence.nonnegative");
        } else {
          bad(source, "divergence." + k2, "unknown key");
        }
      }
    } else if (key == "tol") {
      cfg.tol = number(v, source, key);
      if (!(cfg.tol > 0.0)) bad(source, key, "must be > 0");
    } else if (key == "max_iter") {
      if (!v.is_number_integer()) bad(source, key, "expected an integer");
      cfg.max_iter = v.get<int>();
      if (cfg.max_iter < 1) bad(source, key, "must be >= 1");
    } else if (key == "oracle") {
      cfg.oracle = boolean(v, source, key);
    } else if (key == "oracle_resolution") {
      if (!v.is_number_unsigned() || v.get<std::size_t>() < 2) {
        bad(source, key, "expected an integer >= 2");
      }
      cfg.oracle_resolution = v.get<std::size_t>();
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) bad(source, key, "expected a nonnegative integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "renormalize") {
      cfg.renormalize = boolean(v, source, key);
    } else if (key == "targets") {
      if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
          cfg.targets.by_position.push_back(
              number(v[i], source, "targets[" + std::to_string(i) + "]"));
        }
      } else if (v.is_object()) {
        for (const auto& [name, m] : v.items()) {
          cfg.targets.by_name.emplace_back(name, number(m, source, "targets." + name));
        }
      } else {
        bad(source, key, "expected an array or an object of numbers");
      }
    } else {
      bad(source, key, "unknown key");
    }
  }
  if (!cfg.nonnegative && cfg.gamma != 2.0) {
    bad(source, "divergence.nonnegative", "false is only supported for gamma = 2");
  }
  return cfg;
}

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(source + ": invalid JSON: " + e.what());
  }
  return parse_config(j, source);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config_text(os.str(), path);
}

}  // namespace phiproj::cli
