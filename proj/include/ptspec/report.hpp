#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptspec/finite_difference.hpp"
#include "ptspec/potential.hpp"
#include "ptspec/spectrum.hpp"

namespace ptspec {

using ordered_json = nlohmann::ordered_json;

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Comment block, column names, stringified rows. to_csv applies RFC-style
/// quoting (quote when a field holds comma, quote, or newline; double inner
/// quotes); comments become leading `# ` lines.
struct CsvDocument {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace detail

inline std::string to_csv(const CsvDocument& doc) {
  std::string out;
  for (const std::string& c : doc.comments) out += "# " + c + "\n";
  for (std::size_t j = 0; j < doc.columns.size(); ++j)
    out += (j ? "," : "") + detail::csv_quote(doc.columns[j]);
  out += '\n';
  for (const auto& row : doc.rows) {
    for (std::size_t j = 0; j < row.size(); ++j)
      out += (j ? "," : "") + detail::csv_quote(row[j]);
    out += '\n';
  }
  return out;
}

inline ordered_json potential_json(const PotentialSpec& pot) {
  return ordered_json{{"name", pot.name()}, {"coupling", pot.coupling()}};
}

inline ordered_json report_json(const SpectrumReport& rep) {
  ordered_json j;
  j["potential"] = potential_json(rep.potential);
  j["n1"] = rep.n1;
  j["n2"] = rep.n2;
  j["filter_abs"] = rep.filter_abs;
  j["filter_rel"] = rep.filter_rel;
  j["convergence_delta"] = rep.convergence_delta;
  j["converged_cutoff"] = rep.converged_cutoff;
  j["real_levels"] = ordered_json::array();
  for (const RealLevel& lvl : rep.real_levels)
    j["real_levels"].push_back({{"quantum_number", lvl.quantum_number},
                                {"energy", lvl.energy},
                                {"cross_size_delta", lvl.cross_size_delta}});
  j["complex_levels"] = ordered_json::array();
  for (const Complex& z : rep.complex_levels)
    j["complex_levels"].push_back({{"re", z.real()}, {"im", z.imag()}});
  return j;
}

inline SpectrumReport report_from_json(const ordered_json& j) {
  SpectrumReport rep{
      potential_from_name(j.at("potential").at("name").get<std::string>(),
                          j.at("potential").at("coupling").get<double>()),
      j.at("n1").get<std::size_t>(),
      j.at("n2").get<std::size_t>(),
      {},
      {},
      j.at("filter_abs").get<double>(),
      j.at("filter_rel").get<double>(),
      j.at("convergence_delta").get<double>(),
      j.at("converged_cutoff").get<double>()};
  for (const auto& lvl : j.at("real_levels"))
    rep.real_levels.push_back({lvl.at("quantum_number").get<std::size_t>(),
                               lvl.at("energy").get<double>(),
                               lvl.at("cross_size_delta").get<double>()});
  for (const auto& z : j.at("complex_levels"))
    rep.complex_levels.emplace_back(z.at("re").get<double>(),
                                    z.at("im").get<double>());
  return rep;
}

inline ordered_json scan_json(const GScanResult& scan) {
  ordered_json j;
  j["points"] = ordered_json::array();
  for (std::size_t i = 0; i < scan.g_values.size(); ++i)
    j["points"].push_back({{"g", scan.g_values[i]},
                           {"real_count", scan.real_counts[i]},
                           {"error", scan.errors[i]}});
  j["merge_brackets"] = ordered_json::array();
  for (const auto& [lo, hi] : scan.merge_brackets)
    j["merge_brackets"].push_back({{"g_low", lo}, {"g_high", hi}});
  return j;
}

inline GScanResult scan_from_json(const ordered_json& j) {
  GScanResult scan;
  for (const auto& p : j.at("points")) {
    scan.g_values.push_back(p.at("g").get<double>());
    scan.real_counts.push_back(p.at("real_count").get<int>());
    scan.errors.push_back(p.at("error").get<std::string>());
  }
  for (const auto& b : j.at("merge_brackets"))
    scan.merge_brackets.emplace_back(b.at("g_low").get<double>(),
                                     b.at("g_high").get<double>());
  return scan;
}

inline ordered_json oracle_json(const std::vector<OracleRow>& rows) {
  ordered_json j = ordered_json::array();
  for (const OracleRow& r : rows) {
    ordered_json row;
    row["energy_mdm"] = r.energy_mdm;
    if (std::isnan(r.energy_fd)) {
      row["energy_fd"] = nullptr;
      row["gap"] = nullptr;
    } else {
      row["energy_fd"] = r.energy_fd;
      row["gap"] = r.gap;
    }
    row["flagged"] = r.flagged;
    j.push_back(row);
  }
  return j;
}

}  // namespace ptspec
