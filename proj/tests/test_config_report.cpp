#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <string>

#include "ptspec/report.hpp"
#include "ptspec/run_config.hpp"

using namespace ptspec;

TEST_CASE("minimal document fills documented defaults") {
  const RunConfig cfg = parse_config("command = spectrum\npotential = harmonic\n");
  CHECK(cfg.command == "spectrum");
  CHECK(cfg.potential == "harmonic");
  CHECK(cfg.n1 == 700);
  CHECK(cfg.n2 == 900);
  CHECK(cfg.g == 2.0);
  CHECK(cfg.grid_half_width == 12.0);
  CHECK(cfg.grid_points == 3000);
  CHECK(cfg.tol_filter_abs == 1e-6);
  CHECK(cfg.tol_filter_rel == 1e-8);
  CHECK(cfg.tol_convergence == 5e-3);
  CHECK(cfg.format == "csv");
  CHECK(!cfg.strict);
  CHECK(!cfg.fast);
  CHECK(!cfg.timestamps);
}

TEST_CASE("comments, blank lines, quoted strings, lists, booleans") {
  const std::string text =
      "# header comment\n"
      "command = scan-g\n"
      "\n"
      "output = \"dir with space/run #7.csv\"  # quoted hash stays\n"
      "g_values = 0.5, 1.0, 1.5\n"
      "sizes = 100, 200, 400\n"
      "strict = true\n"
      "g = 1.25\n";
  const RunConfig cfg = parse_config(text);
  CHECK(cfg.command == "scan-g");
  CHECK(cfg.output == "dir with space/run #7.csv");
  CHECK(cfg.g_values == std::vector<double>{0.5, 1.0, 1.5});
  CHECK(cfg.sizes == std::vector<std::size_t>{100, 200, 400});
  CHECK(cfg.strict);
  CHECK(cfg.g == 1.25);
}

TEST_CASE("parse errors carry line numbers and key names") {
  CHECK_THROWS_WITH(parse_config("command = spectrum\nnot a pair\n"),
                    Catch::Matchers::ContainsSubstring("line 2"));
  CHECK_THROWS_WITH(parse_config("g = \"two\"\n"),
                    Catch::Matchers::ContainsSubstring("'g'"));
  CHECK_THROWS_WITH(parse_config("g = \"two\"\n"),
                    Catch::Matchers::ContainsSubstring("type mismatch"));
  CHECK_THROWS_WITH(parse_config("waffles = 3\n"),
                    Catch::Matchers::ContainsSubstring("unknown key 'waffles'"));
  CHECK_THROWS_WITH(parse_config("n1 = 3.5\n"),
                    Catch::Matchers::ContainsSubstring("'n1'"));
  CHECK_THROWS_WITH(parse_config("strict = yes\n"),
                    Catch::Matchers::ContainsSubstring("'strict'"));
  CHECK_THROWS_WITH(parse_config("g =\n"),
                    Catch::Matchers::ContainsSubstring("missing value"));
  CHECK_THROWS_WITH(parse_config("output = \"oops\n"),
                    Catch::Matchers::ContainsSubstring("unbalanced"));
  CHECK_THROWS_AS(parse_config_file("/nonexistent/p.cfg"), config_error);
}

TEST_CASE("later documents override earlier values, like flags do") {
  RunConfig cfg = parse_config("command = spectrum\nn2 = 500\n");
  cfg = parse_config("n2 = 900\n", std::move(cfg));
  CHECK(cfg.command == "spectrum");
  CHECK(cfg.n2 == 900);
}

TEST_CASE("cross-field validation") {
  RunConfig cfg = parse_config("command = spectrum\npotential = harmonic\n");
  CHECK_NOTHROW(validate_config(cfg));

  RunConfig bad = cfg;
  bad.command = "fly";
  CHECK_THROWS_AS(validate_config(bad), config_error);

  bad = cfg;
  bad.potential = "unobtainium";
  CHECK_THROWS_AS(validate_config(bad), config_error);

  bad = cfg;
  bad.n1 = 900;
  bad.n2 = 700;
  CHECK_THROWS_AS(validate_config(bad), config_error);

  bad = cfg;
  bad.tol_convergence = 0.0;
  CHECK_THROWS_AS(validate_config(bad), config_error);

  bad = cfg;
  bad.format = "xml";
  CHECK_THROWS_AS(validate_config(bad), config_error);

  bad = cfg;
  bad.g_values = {1.0, 1.0};
  CHECK_THROWS_AS(validate_config(bad), config_error);

  bad = cfg;
  bad.grid_points = 50;
  CHECK_THROWS_AS(validate_config(bad), config_error);
}

TEST_CASE("CSV quoting") {
  CsvDocument doc;
  doc.comments = {"one comment"};
  doc.columns = {"a", "b"};
  doc.rows = {{"plain", "with,comma"},
              {"with \"quote\"", "multi\nline"}};
  CHECK(to_csv(doc) ==
        "# one comment\n"
        "a,b\n"
        "plain,\"with,comma\"\n"
        "\"with \"\"quote\"\"\",\"multi\nline\"\n");
}

TEST_CASE("numbers are printed compactly and losslessly enough") {
  CHECK(fmt_double(0.5) == "0.5");
  CHECK(fmt_double(1e-6) == "1e-06");
  CHECK(fmt_double(1.720857958) == "1.720857958");
}

TEST_CASE("spectrum report JSON round trip is structure-identical") {
  SpectrumReport rep{PotentialSpec::ahmed_cubic(2.0),
                     700,
                     900,
                     {{0, 1.720857958, 1.1e-8}, {1, 6.579362072, 2.4e-7}},
                     {Complex(9.1, 2.3)},
                     1e-6,
                     1e-8,
                     5e-3,
                     8.2};
  const ordered_json j = report_json(rep);
  const SpectrumReport back = report_from_json(j);
  CHECK(report_json(back) == j);  // identical structure after a round trip
  CHECK(back.potential.name() == "ahmed_cubic");
  CHECK(back.potential.coupling() == 2.0);
  CHECK(back.real_levels.size() == 2);
  CHECK(back.real_levels[1].energy == 6.579362072);
  CHECK(back.complex_levels[0] == Complex(9.1, 2.3));
  CHECK(back.converged_cutoff == 8.2);
}

TEST_CASE("scan JSON round trip is structure-identical") {
  GScanResult scan;
  scan.g_values = {0.5, 1.0};
  scan.real_counts = {3, -1};
  scan.errors = {"", "diverged"};
  scan.merge_brackets = {{2.3, 2.4}};
  const ordered_json j = scan_json(scan);
  const GScanResult back = scan_from_json(j);
  CHECK(scan_json(back) == j);
  CHECK(back.errors[1] == "diverged");
  CHECK(back.merge_brackets[0] == std::pair<double, double>(2.3, 2.4));
}

TEST_CASE("oracle rows serialize missing partners as null") {
  std::vector<OracleRow> rows = {
      {1.0, 1.001, 1e-3, false},
      {2.0, std::numeric_limits<double>::quiet_NaN(),
       std::numeric_limits<double>::quiet_NaN(), true}};
  const ordered_json j = oracle_json(rows);
  CHECK(j[0]["energy_fd"] == 1.001);
  CHECK(j[1]["energy_fd"].is_null());
  CHECK(j[1]["gap"].is_null());
  CHECK(j[1]["flagged"] == true);
}
