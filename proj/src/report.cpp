#include "sigmalab/report.hpp"

#include <cmath>
#include <fstream>

namespace sigmalab {

Json number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

Json to_json(Point2 p) { return Json::array({number(p.x1), number(p.x2)}); }

Json to_json(const EllipticityReport& report) {
  return {{"K_estimate", number(report.K_estimate)},
          {"min_sym_eig", number(report.min_sym_eig)},
          {"min_inv_sym_eig", number(report.min_inv_sym_eig)},
          {"sample_count", report.sample_count},
          {"worst_point", to_json(report.worst_point)},
          {"elliptic", report.passed()}};
}

Json to_json(const UnimodalityVerdict& verdict) {
  Json j{{"unimodal", verdict.unimodal}, {"direction_changes", verdict.direction_changes}};
  if (verdict.unimodal) {
    j["rise_arc"] = {verdict.rise_arc.begin, verdict.rise_arc.end};
    j["fall_arc"] = {verdict.fall_arc.begin, verdict.fall_arc.end};
  }
  return j;
}

Json to_json(const QuasiconformalDefect& defect) {
  return {{"sup_ratio", number(defect.sup_ratio)},
          {"ratio_unbounded", defect.ratio_unbounded},
          {"min_jacobian_f", number(defect.min_jacobian_f)},
          {"near_degenerate", defect.near_degenerate},
          {"triangles_used", defect.triangles_used}};
}

Json to_json(const InjectivityResult& result) {
  Json violations = Json::array();
  for (const auto& v : result.violations) {
    if (v.kind == InjectivityViolation::Kind::boundary_crossing) {
      violations.push_back({{"kind", "boundary_crossing"}, {"segments", {v.first, v.second}}});
    } else {
      violations.push_back({{"kind", "orientation"}, {"triangle", v.first}});
    }
  }
  return {{"injective", result.injective},
          {"violation_count", result.violation_count},
          {"violations", violations}};
}

Json to_json(const LewyReport& report) {
  Json grads = Json::array();
  for (double g : report.min_abs_grad) grads.push_back(number(g));
  Json probes = Json::array();
  for (const auto& p : report.probes) {
    probes.push_back({{"z0", to_json(p.z0)},
                      {"w0", to_json(p.w0)},
                      {"r", number(p.r)},
                      {"triangles", p.triangles},
                      {"unimodal", p.unimodal}});
  }
  return {{"directions_tested", report.directions_tested},
          {"margin", number(report.margin)},
          {"inset_triangles", report.inset_triangles},
          {"min_abs_det", number(report.min_abs_det)},
          {"min_abs_grad", grads},
          {"probes", probes},
          {"injective", report.injective},
          {"all_unimodal", report.all_unimodal},
          {"passed", report.passed}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("write failed: " + path.string());
}

}  // namespace sigmalab
