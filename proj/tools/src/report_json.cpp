#include "report_json.hpp"

#include <cmath>
#include <limits>

#include "csv_reader.hpp"

namespace phiproj::cli {

nlohmann::json number_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

nlohmann::json vector_json(const Eigen::VectorXd& v) {
  auto out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_json(v(i)));
  return out;
}

double json_number(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw InputError("expected a number, got " + j.dump());
}

Eigen::VectorXd json_vector(const nlohmann::json& j) {
  if (!j.is_array()) throw InputError("expected an array, got " + j.dump());
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = json_number(j[i]);
  return v;
}

namespace {

nlohmann::json cq_json(const CqResult& cq) {
  nlohmann::json j{{"status", std::string(to_string(cq.status))}, {"draws", cq.draws}};
  j["witness"] = cq.witness ? vector_json(*cq.witness) : nlohmann::json(nullptr);
  return j;
}

}  // namespace

nlohmann::json diagnostics_json(const DiagnosticsReport& r) {
  nlohmann::json j;
  j["family"] = r.family;
  j["coercive"] = r.coercive;
  j["essentially_smooth"] = r.essentially_smooth;
  j["strictly_convex"] = r.strictly_convex;
  j["condition_c0"] = r.condition_c0;
  j["cq"] = cq_json(r.cq);
  j["positive_witness"] = cq_json(r.positive_witness);
  j["characterization_residual"] =
      r.characterization_residual ? number_json(*r.characterization_residual)
                                  : nlohmann::json(nullptr);
  if (r.support) {
    j["support"] = {{"full_support", r.support->full_support},
                    {"lemma_applies", r.support->lemma_applies},
                    {"inconsistent", r.support->inconsistent}};
  } else {
    j["support"] = nullptr;
  }
  auto conditions = nlohmann::json::array();
  for (const auto& c : r.conditions) {
    conditions.push_back({{"label", c.label}, {"holds", c.holds}, {"note", c.note}});
  }
  j["conditions"] = std::move(conditions);
  j["predicts"] = {{"primal_existence", r.predicts_primal_existence},
                   {"primal_uniqueness", r.predicts_primal_uniqueness},
                   {"dual_attainment", r.predicts_dual_attainment},
                   {"dual_uniqueness", r.predicts_dual_uniqueness}};
  j["notes"] = r.notes;
  return j;
}

nlohmann::json oracle_json(const OracleResult& result, double primal_value) {
  return {{"value", number_json(result.value)},
          {"difference", number_json(result.value - primal_value)},
          {"touches_box", result.touches_box},
          {"density", vector_json(result.density)}};
}

std::string dump(const nlohmann::json& j) { return j.dump(2); }

}  // namespace phiproj::cli
