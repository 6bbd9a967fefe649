// Batch front end for the spectral pipeline: table reproduction, coupling
// scans, convergence ladders, and finite-difference cross-checks. All rows
// carry the tolerances they were classified under, and all file output is
// written once, at the end, by a single writer.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptspec/finite_difference.hpp"
#include "ptspec/matrix_io.hpp"
#include "ptspec/report.hpp"
#include "ptspec/run_config.hpp"
#include "ptspec/spectrum.hpp"

namespace {

using ptspec::Complex;
using ptspec::RunConfig;
using ptspec::fmt_double;
using ptspec::ordered_json;

struct TableRef {
  double value;
  double tolerance;
};

// Published high-precision reference values (reference table I) for the
// three real levels of the x^2/4 + 2i x|x| spectrum, with the per-level
// acceptance tolerances used by the checked table run.
const std::vector<TableRef> kTable1Refs = {
    {1.720857958, 1e-5}, {6.579362154, 1e-4}, {7.398126125, 1e-4}};

// Published reference values (reference table II) for the first six
// even-dominant levels of the x^2/4 + exp(-2i x|x|) spectrum.
const std::vector<TableRef> kTable2Refs = {
    {0.8818, 2e-3}, {2.7360, 2e-3}, {4.6094, 2e-3},
    {6.5142, 2e-3}, {8.4815, 2e-3}, {10.5107, 2e-3}};

std::string iso_now() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string potential_label(const RunConfig& cfg) {
  std::string out = cfg.potential;
  if (cfg.potential == "ahmed_cubic") out += " g=" + fmt_double(cfg.g);
  if (cfg.potential == "harmonic") out += " k=" + fmt_double(cfg.k);
  return out;
}

double parameter_of(const RunConfig& cfg) {
  return cfg.potential == "harmonic" ? cfg.k : cfg.g;
}

std::vector<std::string> common_comments(const RunConfig& cfg) {
  std::vector<std::string> c;
  c.push_back("command: " + cfg.command);
  c.push_back("potential: " + potential_label(cfg));
  c.push_back("sizes: n1=" + std::to_string(cfg.n1) +
              " n2=" + std::to_string(cfg.n2));
  c.push_back("filter_abs: " + fmt_double(cfg.tol_filter_abs));
  c.push_back("filter_rel: " + fmt_double(cfg.tol_filter_rel));
  c.push_back("convergence_delta: " + fmt_double(cfg.tol_convergence));
  if (cfg.timestamps) c.push_back("generated: " + iso_now());
  return c;
}

void append_tolerance_columns(ptspec::CsvDocument& doc) {
  doc.columns.push_back("filter_abs");
  doc.columns.push_back("filter_rel");
  doc.columns.push_back("convergence_delta");
}

void append_tolerance_cells(std::vector<std::string>& row,
                            const RunConfig& cfg) {
  row.push_back(fmt_double(cfg.tol_filter_abs));
  row.push_back(fmt_double(cfg.tol_filter_rel));
  row.push_back(fmt_double(cfg.tol_convergence));
}

ordered_json json_envelope(const RunConfig& cfg) {
  ordered_json j;
  j["command"] = cfg.command;
  if (cfg.timestamps) j["generated"] = iso_now();
  return j;
}

// Single writer: everything funnels through here exactly once per run.
void emit(const RunConfig& cfg, const std::string& body) {
  if (cfg.output.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream os(cfg.output, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + cfg.output);
  os << body;
  if (!os) throw std::runtime_error("write failed: " + cfg.output);
}

void maybe_dump_matrix(const RunConfig& cfg, const ptspec::PotentialSpec& pot) {
  if (cfg.dump_matrix.empty()) return;
  const ptspec::BasisSpec basis(cfg.n2);
  const ptspec::QuadratureSpec quad =
      ptspec::QuadratureSpec::standard(basis.x_support);
  const ptspec::ComplexMatrix m = ptspec::assemble(pot, basis, quad);
  ptspec::save_matrix(cfg.dump_matrix, m, pot.name(), pot.coupling());
}

ptspec::SpectrumTolerances tolerances_of(const RunConfig& cfg) {
  return {cfg.tol_filter_abs, cfg.tol_filter_rel, cfg.tol_convergence};
}

int run_spectrum(const RunConfig& cfg) {
  const auto pot = ptspec::potential_from_name(cfg.potential, parameter_of(cfg));
  maybe_dump_matrix(cfg, pot);
  const ptspec::SpectrumReport rep =
      ptspec::spectrum_report(pot, cfg.n1, cfg.n2, tolerances_of(cfg));
  std::string body;
  if (cfg.format == "json") {
    ordered_json j = json_envelope(cfg);
    j["report"] = ptspec::report_json(rep);
    body = j.dump(2) + "\n";
  } else {
    ptspec::CsvDocument doc;
    doc.comments = common_comments(cfg);
    doc.comments.push_back("converged_cutoff: " +
                           fmt_double(rep.converged_cutoff));
    doc.columns = {"kind", "quantum_number", "re", "im", "cross_size_delta"};
    append_tolerance_columns(doc);
    for (const ptspec::RealLevel& lvl : rep.real_levels) {
      std::vector<std::string> row = {
          "real", std::to_string(lvl.quantum_number), fmt_double(lvl.energy),
          "0", fmt_double(lvl.cross_size_delta)};
      append_tolerance_cells(row, cfg);
      doc.rows.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < rep.complex_levels.size(); ++i) {
      const Complex z = rep.complex_levels[i];
      std::vector<std::string> row = {"complex_pair", std::to_string(i),
                                      fmt_double(z.real()),
                                      fmt_double(z.imag()), ""};
      append_tolerance_cells(row, cfg);
      doc.rows.push_back(std::move(row));
    }
    body = ptspec::to_csv(doc);
  }
  emit(cfg, body);
  return 0;
}

int run_scan_g(const RunConfig& cfg) {
  std::vector<double> grid = cfg.g_values;
  if (grid.empty()) grid = {0.5, 1.0, 1.5, 2.0};
  const ptspec::GScanResult scan =
      ptspec::scan_g(grid, cfg.n1, cfg.n2, tolerances_of(cfg));
  std::string body;
  if (cfg.format == "json") {
    ordered_json j = json_envelope(cfg);
    j["n1"] = cfg.n1;
    j["n2"] = cfg.n2;
    j["scan"] = ptspec::scan_json(scan);
    body = j.dump(2) + "\n";
  } else {
    ptspec::CsvDocument doc;
    doc.comments = common_comments(cfg);
    doc.columns = {"kind", "g", "real_count", "error", "g_low", "g_high"};
    append_tolerance_columns(doc);
    for (std::size_t i = 0; i < scan.g_values.size(); ++i) {
      std::vector<std::string> row = {
          "point", fmt_double(scan.g_values[i]),
          std::to_string(scan.real_counts[i]), scan.errors[i], "", ""};
      append_tolerance_cells(row, cfg);
      doc.rows.push_back(std::move(row));
    }
    for (const auto& [lo, hi] : scan.merge_brackets) {
      std::vector<std::string> row = {"merge_bracket", "", "",         "",
                                      fmt_double(lo),  fmt_double(hi)};
      append_tolerance_cells(row, cfg);
      doc.rows.push_back(std::move(row));
    }
    body = ptspec::to_csv(doc);
  }
  emit(cfg, body);
  return 0;
}

int run_converge(const RunConfig& cfg) {
  const auto pot = ptspec::potential_from_name(cfg.potential, parameter_of(cfg));
  std::vector<std::size_t> sizes = cfg.sizes;
  if (sizes.empty()) sizes = {100, 200, 400};
  if (sizes.size() < 2)
    throw ptspec::config_error("converge needs at least two sizes");
  std::vector<ptspec::SpectrumReport> reports;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i)
    reports.push_back(ptspec::spectrum_report(pot, sizes[i], sizes[i + 1],
                                              tolerances_of(cfg)));
  std::string body;
  if (cfg.format == "json") {
    ordered_json j = json_envelope(cfg);
    j["reports"] = ordered_json::array();
    for (const auto& rep : reports) j["reports"].push_back(ptspec::report_json(rep));
    body = j.dump(2) + "\n";
  } else {
    ptspec::CsvDocument doc;
    doc.comments = common_comments(cfg);
    std::string ladder = "sizes:";
    for (const std::size_t s : sizes) ladder += " " + std::to_string(s);
    doc.comments.push_back(ladder);
    doc.columns = {"n1", "n2", "quantum_number", "energy", "cross_size_delta"};
    append_tolerance_columns(doc);
    for (const auto& rep : reports)
      for (const ptspec::RealLevel& lvl : rep.real_levels) {
        std::vector<std::string> row = {
            std::to_string(rep.n1), std::to_string(rep.n2),
            std::to_string(lvl.quantum_number), fmt_double(lvl.energy),
            fmt_double(lvl.cross_size_delta)};
        append_tolerance_cells(row, cfg);
        doc.rows.push_back(std::move(row));
      }
    body = ptspec::to_csv(doc);
  }
  emit(cfg, body);
  return 0;
}

int run_oracle_compare(const RunConfig& cfg) {
  const auto pot = ptspec::potential_from_name(cfg.potential, parameter_of(cfg));
  maybe_dump_matrix(cfg, pot);
  const ptspec::SpectrumReport rep =
      ptspec::spectrum_report(pot, cfg.n1, cfg.n2, tolerances_of(cfg));
  const ptspec::GridSpec grid(cfg.grid_half_width, cfg.grid_points);
  const std::vector<ptspec::OracleRow> rows =
      ptspec::oracle_compare(pot, rep, grid);
  std::string body;
  if (cfg.format == "json") {
    ordered_json j = json_envelope(cfg);
    j["report"] = ptspec::report_json(rep);
    j["grid"] = {{"half_width", grid.half_width}, {"points", grid.points}};
    j["oracle"] = ptspec::oracle_json(rows);
    body = j.dump(2) + "\n";
  } else {
    ptspec::CsvDocument doc;
    doc.comments = common_comments(cfg);
    doc.comments.push_back("grid: half_width=" + fmt_double(grid.half_width) +
                           " points=" + std::to_string(grid.points));
    doc.comments.push_back(
        "flag rule: no finite-difference partner within 10x the convergence "
        "delta; no further judgment is applied here");
    doc.columns = {"quantum_number", "energy_mdm", "energy_fd", "gap",
                   "flagged"};
    append_tolerance_columns(doc);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const ptspec::OracleRow& r = rows[i];
      std::vector<std::string> row = {
          std::to_string(i), fmt_double(r.energy_mdm),
          std::isnan(r.energy_fd) ? "" : fmt_double(r.energy_fd),
          std::isnan(r.gap) ? "" : fmt_double(r.gap),
          r.flagged ? "true" : "false"};
      append_tolerance_cells(row, cfg);
      doc.rows.push_back(std::move(row));
    }
    body = ptspec::to_csv(doc);
  }
  emit(cfg, body);
  return 0;
}

struct TableRow {
  std::size_t quantum_number = 0;
  double energy = 0.0;
  double cross_size_delta = 0.0;
  double even_weight = std::numeric_limits<double>::quiet_NaN();
  bool has_reference = false;
  double reference = 0.0;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool within = false;
  bool interleaved_odd = false;
};

int emit_table(const RunConfig& cfg, const std::vector<TableRow>& rows,
               const std::vector<std::string>& extra_comments,
               bool expected_count_ok, bool with_parity) {
  bool all_within = expected_count_ok;
  for (const TableRow& r : rows)
    if (r.has_reference && !r.within) all_within = false;

  std::string body;
  if (cfg.format == "json") {
    ordered_json j = json_envelope(cfg);
    j["potential"] = potential_label(cfg);
    j["n1"] = cfg.n1;
    j["n2"] = cfg.n2;
    j["filter_abs"] = cfg.tol_filter_abs;
    j["filter_rel"] = cfg.tol_filter_rel;
    j["convergence_delta"] = cfg.tol_convergence;
    j["all_within_tolerance"] = all_within;
    j["rows"] = ordered_json::array();
    for (const TableRow& r : rows) {
      ordered_json row;
      row["quantum_number"] = r.quantum_number;
      row["energy"] = r.energy;
      row["cross_size_delta"] = r.cross_size_delta;
      if (with_parity) {
        if (std::isnan(r.even_weight)) {
          row["even_weight"] = nullptr;
          row["dominant_parity"] = "unknown";
        } else {
          row["even_weight"] = r.even_weight;
          row["dominant_parity"] = r.even_weight > 0.5 ? "even" : "odd";
        }
        row["interleaved_odd"] = r.interleaved_odd;
      }
      if (r.has_reference) {
        row["reference"] = r.reference;
        row["deviation"] = r.deviation;
        row["tolerance"] = r.tolerance;
        row["within_tolerance"] = r.within;
      } else {
        row["reference"] = nullptr;
      }
      j["rows"].push_back(row);
    }
    body = j.dump(2) + "\n";
  } else {
    ptspec::CsvDocument doc;
    doc.comments = common_comments(cfg);
    for (const std::string& c : extra_comments) doc.comments.push_back(c);
    doc.columns = {"quantum_number", "energy", "cross_size_delta"};
    if (with_parity) {
      doc.columns.push_back("even_weight");
      doc.columns.push_back("dominant_parity");
      doc.columns.push_back("interleaved_odd");
    }
    doc.columns.push_back("reference");
    doc.columns.push_back("deviation");
    doc.columns.push_back("tolerance");
    doc.columns.push_back("within_tolerance");
    append_tolerance_columns(doc);
    for (const TableRow& r : rows) {
      std::vector<std::string> row = {std::to_string(r.quantum_number),
                                      fmt_double(r.energy),
                                      fmt_double(r.cross_size_delta)};
      if (with_parity) {
        row.push_back(std::isnan(r.even_weight) ? ""
                                                : fmt_double(r.even_weight));
        row.push_back(std::isnan(r.even_weight)
                          ? "unknown"
                          : (r.even_weight > 0.5 ? "even" : "odd"));
        row.push_back(r.interleaved_odd ? "true" : "false");
      }
      if (r.has_reference) {
        row.push_back(fmt_double(r.reference));
        row.push_back(fmt_double(r.deviation));
        row.push_back(fmt_double(r.tolerance));
        row.push_back(r.within ? "true" : "false");
      } else {
        row.push_back("");
        row.push_back("");
        row.push_back("");
        row.push_back("");
      }
      append_tolerance_cells(row, cfg);
      doc.rows.push_back(std::move(row));
    }
    body = ptspec::to_csv(doc);
  }
  emit(cfg, body);
  if (cfg.strict && !all_within) return 3;
  return 0;
}

int run_table1(RunConfig cfg) {
  cfg.potential = "ahmed_cubic";
  cfg.g = 2.0;
  if (cfg.fast) {
    cfg.n1 = 300;
    cfg.n2 = 400;
  }
  const auto pot = ptspec::PotentialSpec::ahmed_cubic(cfg.g);
  maybe_dump_matrix(cfg, pot);
  const ptspec::SpectrumReport rep =
      ptspec::spectrum_report(pot, cfg.n1, cfg.n2, tolerances_of(cfg));
  std::vector<TableRow> rows;
  for (const ptspec::RealLevel& lvl : rep.real_levels) {
    TableRow r;
    r.quantum_number = lvl.quantum_number;
    r.energy = lvl.energy;
    r.cross_size_delta = lvl.cross_size_delta;
    if (lvl.quantum_number < kTable1Refs.size()) {
      const TableRef& ref = kTable1Refs[lvl.quantum_number];
      r.has_reference = true;
      r.reference = ref.value;
      r.deviation = std::fabs(lvl.energy - ref.value);
      r.tolerance = cfg.fast ? std::max(ref.tolerance, 1e-3) : ref.tolerance;
      r.within = r.deviation <= r.tolerance;
    }
    rows.push_back(r);
  }
  const bool count_ok = rep.real_levels.size() == kTable1Refs.size();
  std::vector<std::string> extra = {
      "reference: published high-precision values (reference table I)",
      "expected_real_count: " + std::to_string(kTable1Refs.size()) +
          " observed: " + std::to_string(rep.real_levels.size())};
  if (cfg.fast)
    extra.push_back("fast mode: sizes (300, 400), tolerances widened to 1e-3");
  return emit_table(cfg, rows, extra, count_ok, /*with_parity=*/false);
}

int run_table2(RunConfig cfg) {
  cfg.potential = "exp_pt";
  if (cfg.fast) {
    cfg.n1 = 300;
    cfg.n2 = 400;
  }
  const auto pot = ptspec::PotentialSpec::exp_pt();
  maybe_dump_matrix(cfg, pot);
  const ptspec::SpectrumReport rep =
      ptspec::spectrum_report(pot, cfg.n1, cfg.n2, tolerances_of(cfg));
  const std::vector<ptspec::LabeledLevel> labeled =
      ptspec::parity_labeled_levels(rep);
  std::vector<TableRow> rows;
  std::size_t next_ref = 0;
  double last_compared_energy = -std::numeric_limits<double>::infinity();
  for (const ptspec::LabeledLevel& lvl : labeled) {
    TableRow r;
    r.quantum_number = lvl.quantum_number;
    r.energy = lvl.energy;
    r.cross_size_delta = lvl.cross_size_delta;
    r.even_weight = lvl.even_weight;
    const bool even_dominant = !std::isnan(lvl.even_weight) &&
                               lvl.even_weight > 0.5;
    if (even_dominant && next_ref < kTable2Refs.size()) {
      const TableRef& ref = kTable2Refs[next_ref++];
      r.has_reference = true;
      r.reference = ref.value;
      r.deviation = std::fabs(lvl.energy - ref.value);
      r.tolerance = cfg.fast ? std::max(ref.tolerance, 1e-3) : ref.tolerance;
      r.within = r.deviation <= r.tolerance;
      last_compared_energy = lvl.energy;
    }
    rows.push_back(r);
  }
  // The reference table lists even-dominant levels only; odd-dominant
  // levels sitting below the last compared one interleave that sequence
  // and are flagged rather than dropped.
  for (TableRow& r : rows) {
    const bool odd_dominant = !std::isnan(r.even_weight) &&
                              r.even_weight <= 0.5;
    r.interleaved_odd = odd_dominant && r.energy < last_compared_energy;
  }
  const bool count_ok = next_ref == kTable2Refs.size();
  std::vector<std::string> extra = {
      "reference: published values (reference table II), even-dominant "
      "levels only",
      "note: odd-dominant levels interleave the published sequence and are "
      "flagged in interleaved_odd",
      "compared_even_levels: " + std::to_string(next_ref) +
          " of " + std::to_string(kTable2Refs.size())};
  if (cfg.fast)
    extra.push_back("fast mode: sizes (300, 400)");
  return emit_table(cfg, rows, extra, count_ok, /*with_parity=*/true);
}

int dispatch(const RunConfig& cfg) {
  if (!cfg.dump_matrix.empty() &&
      (cfg.command == "scan-g" || cfg.command == "converge"))
    throw ptspec::config_error("dump_matrix needs a single-potential command");
  if (cfg.command == "spectrum") return run_spectrum(cfg);
  if (cfg.command == "scan-g") return run_scan_g(cfg);
  if (cfg.command == "converge") return run_converge(cfg);
  if (cfg.command == "oracle-compare") return run_oracle_compare(cfg);
  if (cfg.command == "table1") return run_table1(cfg);
  if (cfg.command == "table2") return run_table2(cfg);
  throw ptspec::config_error("unknown command '" + cfg.command + "'");
}

void print_error(int code, const std::string& command,
                 const std::string& kind, const std::string& message) {
  ordered_json j;
  j["error"] = {{"code", code},
                {"command", command},
                {"kind", kind},
                {"message", message}};
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;

  // Pass 1: apply a config file, if any, so flags parsed below override it.
  try {
    for (int i = 1; i < argc; ++i) {
      const std::string a = argv[i];
      if (a == "--config" && i + 1 < argc)
        cfg = ptspec::parse_config_file(argv[i + 1], std::move(cfg));
      else if (a.rfind("--config=", 0) == 0)
        cfg = ptspec::parse_config_file(a.substr(9), std::move(cfg));
    }
  } catch (const ptspec::config_error& e) {
    print_error(1, cfg.command, "config", e.what());
    return 1;
  }

  CLI::App app{
      "Spectral solver for PT-symmetric Hamiltonians p^2 + V(x) in a "
      "harmonic-oscillator basis"};
  app.fallthrough(true);
  std::string config_path;  // consumed in pass 1; declared so CLI11 accepts it
  app.add_option("--config", config_path, "configuration file (key = value)");
  app.add_option("--potential", cfg.potential,
                 "ahmed_cubic | exp_pt | shifted_ho | harmonic");
  app.add_option("--g", cfg.g, "ahmed_cubic coupling");
  app.add_option("--k", cfg.k, "harmonic spring constant");
  app.add_option("--n1", cfg.n1, "smaller basis size");
  app.add_option("--n2", cfg.n2, "larger basis size");
  app.add_option("--grid-half-width", cfg.grid_half_width,
                 "finite-difference half width L");
  app.add_option("--grid-points", cfg.grid_points,
                 "finite-difference interior points");
  app.add_option("--tol-filter-abs", cfg.tol_filter_abs,
                 "reality filter, absolute");
  app.add_option("--tol-filter-rel", cfg.tol_filter_rel,
                 "reality filter, relative");
  app.add_option("--tol-convergence", cfg.tol_convergence,
                 "cross-size agreement delta");
  app.add_option("--g-values", cfg.g_values, "scan-g grid")->delimiter(',');
  app.add_option("--sizes", cfg.sizes, "converge ladder")->delimiter(',');
  app.add_option("--output,-o", cfg.output, "output file (default stdout)");
  app.add_option("--format", cfg.format, "csv | json");
  app.add_option("--dump-matrix", cfg.dump_matrix,
                 "write the assembled n2 matrix to this path");
  app.add_flag("--strict", cfg.strict,
               "exit 3 when a table deviates from its reference");
  app.add_flag("--fast", cfg.fast,
               "table commands: sizes (300, 400), tolerance 1e-3");
  app.add_flag("--timestamps", cfg.timestamps,
               "record a timestamp in output headers");
  const std::pair<const char*, const char*> cmds[] = {
      {"spectrum", "real and complex levels at one (n1, n2) pair"},
      {"scan-g", "converged-real-level count over a coupling grid"},
      {"converge", "level ladder across increasing basis sizes"},
      {"oracle-compare", "gap between basis levels and a grid solver"},
      {"table1", "cubic-coupling real levels vs published reference"},
      {"table2", "exponential-potential levels vs published reference"}};
  for (const auto& [name, blurb] : cmds)
    app.add_subcommand(name, blurb)->fallthrough(true);
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    print_error(1, cfg.command, "config", e.what());
    return 1;
  }
  if (!app.get_subcommands().empty())
    cfg.command = app.get_subcommands().front()->get_name();

  try {
    ptspec::validate_config(cfg);
  } catch (const ptspec::config_error& e) {
    print_error(1, cfg.command, "config", e.what());
    return 1;
  }

  try {
    return dispatch(cfg);
  } catch (const ptspec::config_error& e) {
    print_error(1, cfg.command, "config", e.what());
    return 1;
  } catch (const ptspec::tolerance_error& e) {
    print_error(2, cfg.command, "tolerance", e.what());
    return 2;
  } catch (const ptspec::convergence_error& e) {
    print_error(2, cfg.command, "convergence", e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error(2, cfg.command, "pipeline", e.what());
    return 2;
  }
}
