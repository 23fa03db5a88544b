#include "cbgame/cli/output.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace cbgame::cli {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  (void)ec;
  return std::string(buf.data(), ptr);
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path + "'");
  }
}

std::string surface_csv(const SolutionSurface& s) {
  std::string out = "x,tau,u,contact_lower,contact_upper\n";
  for (Eigen::Index j = 0; j < s.u.cols(); ++j) {
    for (Eigen::Index i = 0; i < s.u.rows(); ++i) {
      out += format_double(s.xs(i));
      out += ',';
      out += format_double(s.taus(j));
      out += ',';
      out += format_double(s.u(i, j));
      out += s.contact_lower(i, j) ? ",1" : ",0";
      out += s.contact_upper(i, j) ? ",1\n" : ",0\n";
    }
  }
  return out;
}

std::string boundary_csv(const BoundaryCurve& curve) {
  std::string out = "tau,c_tau,all_contact\n";
  for (Eigen::Index j = 0; j < curve.values.size(); ++j) {
    out += format_double(curve.taus(j));
    out += ',';
    out += format_double(curve.values(j));
    out += curve.all_contact[j] ? ",1\n" : ",0\n";
  }
  return out;
}

nlohmann::ordered_json to_json(const RegimeReport& r) {
  return {{"regime", std::string(to_string(r.regime))},
          {"qK", r.qK},
          {"rK", r.rK},
          {"strict", r.strict},
          {"first_mover", std::string(to_string(r.first_mover))}};
}

nlohmann::ordered_json to_json(const ShapeDiagnosis& d) {
  nlohmann::ordered_json j;
  j["monotone_nondecreasing"] = d.monotone_nondecreasing;
  j["nonmonotone"] = d.nonmonotone;
  if (d.witness) {
    const auto& w = *d.witness;
    j["witness"] = {{"tau_a", w.tau_a}, {"tau_b", w.tau_b}, {"tau_c", w.tau_c}, {"rise", w.rise}, {"fall", w.fall}};
  } else {
    j["witness"] = nullptr;
  }
  j["absorbed_at_zero"] = d.absorbed_at_zero;
  if (d.absorption_interval)
    j["absorption_interval"] = {d.absorption_interval->first, d.absorption_interval->second};
  else
    j["absorption_interval"] = nullptr;
  j["start_value"] = d.start_value;
  j["limit_value"] = d.limit_value;
  j["max_jump"] = d.max_jump;
  if (d.min_margin_above_underline_X)
    j["min_margin_above_underline_X"] = *d.min_margin_above_underline_X;
  else
    j["min_margin_above_underline_X"] = nullptr;
  return j;
}

nlohmann::ordered_json to_json(const BoundaryCurve& curve) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index j = 0; j < curve.values.size(); ++j)
    rows.push_back({{"tau", curve.taus(j)}, {"c_tau", curve.values(j)}, {"all_contact", bool(curve.all_contact[j])}});
  return {{"kind", curve.kind == BoundaryKind::Conversion ? "Conversion" : "Call"}, {"dx", curve.dx}, {"rows", rows}};
}

nlohmann::ordered_json surface_json(const SolutionSurface& s) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index j = 0; j < s.u.cols(); ++j)
    for (Eigen::Index i = 0; i < s.u.rows(); ++i)
      rows.push_back({{"x", s.xs(i)},
                      {"tau", s.taus(j)},
                      {"u", s.u(i, j)},
                      {"contact_lower", bool(s.contact_lower(i, j))},
                      {"contact_upper", bool(s.contact_upper(i, j))}});
  return {{"regime", to_json(s.regime)}, {"rows", rows}};
}

std::string dump(const nlohmann::ordered_json& value) { return value.dump(2) + "\n"; }

}  // namespace cbgame::cli
