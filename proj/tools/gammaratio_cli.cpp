// Command-line front end: series evaluation against the direct-ratio
// oracle, coefficient tables, convergence scans, decay-order fits, and
// the shipped validation battery. Exit codes: 0 success, 2 domain or
// precondition errors, 3 validation failures.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gammaratio/gammaratio.hpp"

namespace {

using nlohmann::json;

// Shortest decimal string that round-trips to the same double.
std::string fmt(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    quoted += c;
    if (c == '"') quoted += '"';
  }
  quoted += '"';
  return quoted;
}

json params_json(const gammaratio::ParameterSet& params) {
  return json{{"a", params.a},
              {"b", params.b},
              {"p", params.order()},
              {"s", params.excess}};
}

enum class Format { human, csv, json_fmt };

Format parse_format(const std::string& name) {
  if (name == "human") return Format::human;
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json_fmt;
  throw gammaratio::DomainError("unknown output format: " + name);
}

struct Options {
  std::vector<double> a;
  std::vector<double> b;
  long n = 0;
  std::vector<long> n_grid{20, 40, 80, 160, 320, 640};
  int order = -1;
  int order_cap = -1;
  int k_max = 10;
  std::string format = "human";
  std::uint64_t seed = gammaratio::kDefaultSeed;
};

gammaratio::ParameterSet make_params(const Options& opt) {
  return gammaratio::ParameterSet(opt.a, opt.b);
}

int run_eval(const Options& opt) {
  const gammaratio::ParameterSet params = make_params(opt);
  if ((opt.order < 0) == (opt.order_cap < 0)) {
    throw gammaratio::DomainError(
        "eval requires exactly one of --order and --order-cap");
  }
  const gammaratio::EvaluationResult result =
      opt.order >= 0 ? gammaratio::evaluate(params, opt.n, opt.order)
                     : gammaratio::optimal_truncation(params, opt.n,
                                                      opt.order_cap);
  const double oracle = gammaratio::oracle_ratio(params, opt.n);
  const double abs_error = std::abs(result.value - oracle);
  const double rel_error = abs_error / std::abs(oracle);

  switch (parse_format(opt.format)) {
    case Format::human:
      std::cout << "value = " << fmt(result.value) << "\n"
                << "oracle = " << fmt(oracle) << "\n"
                << "abs_error = " << fmt(abs_error) << "\n"
                << "rel_error = " << fmt(rel_error) << "\n"
                << "M_used = " << result.M_used << "\n"
                << "terminated = " << (result.terminated ? "true" : "false")
                << "\n"
                << "error_estimate = " << fmt(result.error_estimate) << "\n";
      break;
    case Format::csv:
      std::cout << "value,oracle,abs_error,rel_error,M_used,terminated,"
                   "error_estimate\n"
                << fmt(result.value) << ',' << fmt(oracle) << ','
                << fmt(abs_error) << ',' << fmt(rel_error) << ','
                << result.M_used << ','
                << (result.terminated ? "true" : "false") << ','
                << fmt(result.error_estimate) << "\n";
      break;
    case Format::json_fmt: {
      json out{{"params", params_json(params)},
               {"n", opt.n},
               {"value", result.value},
               {"oracle", oracle},
               {"abs_error", abs_error},
               {"rel_error", rel_error},
               {"M_used", result.M_used},
               {"terminated", result.terminated},
               {"error_estimate", result.error_estimate}};
      std::cout << out.dump() << "\n";
      break;
    }
  }
  return 0;
}

int run_coeffs(const Options& opt) {
  const gammaratio::ParameterSet params = make_params(opt);
  const gammaratio::CoefficientTable table =
      gammaratio::coefficient_table(params, opt.k_max);

  switch (parse_format(opt.format)) {
    case Format::human:
      for (std::size_t k = 0; k < table.values.size(); ++k) {
        std::cout << k << "  " << fmt(table.values[k]) << "\n";
      }
      break;
    case Format::csv:
      std::cout << "k,value\n";
      for (std::size_t k = 0; k < table.values.size(); ++k) {
        std::cout << k << ',' << fmt(table.values[k]) << "\n";
      }
      break;
    case Format::json_fmt: {
      json out{{"params", params_json(params)}, {"values", table.values}};
      std::cout << out.dump() << "\n";
      break;
    }
  }
  return 0;
}

json rows_json(const gammaratio::ConvergenceReport& report) {
  json rows = json::array();
  for (const gammaratio::GridRow& row : report.grid) {
    rows.push_back(json{{"n", row.n},
                        {"oracle", row.oracle_value},
                        {"series", row.series_value},
                        {"abs_error", row.abs_error}});
  }
  return rows;
}

int run_convergence(const Options& opt, bool fit_only) {
  const gammaratio::ParameterSet params = make_params(opt);
  if (opt.order < 0) {
    throw gammaratio::DomainError("convergence scans require --order");
  }
  const gammaratio::ConvergenceReport report =
      gammaratio::convergence_scan(params, opt.order, opt.n_grid);

  switch (parse_format(opt.format)) {
    case Format::human:
      if (!fit_only) {
        for (const gammaratio::GridRow& row : report.grid) {
          std::cout << "n = " << row.n << "  oracle = "
                    << fmt(row.oracle_value) << "  series = "
                    << fmt(row.series_value) << "  abs_error = "
                    << fmt(row.abs_error) << "\n";
        }
      }
      std::cout << (fit_only ? "" : "fitted_order = ")
                << fmt(report.fitted_order) << "\n";
      break;
    case Format::csv:
      if (fit_only) {
        std::cout << "fitted_order\n" << fmt(report.fitted_order) << "\n";
      } else {
        std::cout << "n,oracle,series,abs_error\n";
        for (const gammaratio::GridRow& row : report.grid) {
          std::cout << row.n << ',' << fmt(row.oracle_value) << ','
                    << fmt(row.series_value) << ',' << fmt(row.abs_error)
                    << "\n";
        }
      }
      break;
    case Format::json_fmt: {
      json out;
      if (fit_only) {
        out = json{{"fitted_order", report.fitted_order}};
      } else {
        out = json{{"params", params_json(params)},
                   {"rows", rows_json(report)},
                   {"fitted_order", report.fitted_order}};
      }
      std::cout << out.dump() << "\n";
      break;
    }
  }
  return 0;
}

int run_validate(const Options& opt) {
  const std::vector<gammaratio::CheckResult> checks =
      gammaratio::run_validation(opt.seed);
  bool all_passed = true;
  for (const gammaratio::CheckResult& check : checks) {
    all_passed = all_passed && check.passed;
  }

  switch (parse_format(opt.format)) {
    case Format::human:
      for (const gammaratio::CheckResult& check : checks) {
        std::cout << (check.passed ? "PASS" : "FAIL") << "  " << check.name
                  << "  (" << check.detail << ")\n";
      }
      std::cout << (all_passed ? "all checks passed" : "checks FAILED")
                << "\n";
      break;
    case Format::csv:
      std::cout << "name,passed,detail\n";
      for (const gammaratio::CheckResult& check : checks) {
        std::cout << csv_escape(check.name) << ','
                  << (check.passed ? "true" : "false") << ','
                  << csv_escape(check.detail) << "\n";
      }
      break;
    case Format::json_fmt: {
      json rows = json::array();
      for (const gammaratio::CheckResult& check : checks) {
        rows.push_back(json{{"name", check.name},
                            {"passed", check.passed},
                            {"detail", check.detail}});
      }
      json out{{"seed", opt.seed}, {"checks", rows}, {"passed", all_passed}};
      std::cout << out.dump() << "\n";
      break;
    }
  }
  return all_passed ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Asymptotic evaluation of gamma-function product ratios at shifted "
      "arguments, with a direct log-gamma oracle and convergence checks"};
  app.require_subcommand(1);

  Options opt;

  const auto add_params = [&opt](CLI::App* cmd) {
    cmd->add_option("--a", opt.a, "numerator shifts a_1,...,a_{p+1}")
        ->required()
        ->delimiter(',');
    cmd->add_option("--b", opt.b, "denominator shifts b_1,...,b_p")
        ->required()
        ->delimiter(',');
  };
  const auto add_format = [&opt](CLI::App* cmd) {
    cmd->add_option("--format", opt.format, "output format: human|csv|json");
  };

  CLI::App* eval = app.add_subcommand(
      "eval", "evaluate the truncated series and compare with the oracle");
  add_params(eval);
  eval->add_option("--n", opt.n, "evaluation point")->required();
  eval->add_option("--order", opt.order, "truncation order M");
  eval->add_option("--order-cap", opt.order_cap,
                   "pick the optimal truncation M* <= cap");
  add_format(eval);

  CLI::App* coeffs =
      app.add_subcommand("coeffs", "print the coefficient table A_k");
  add_params(coeffs);
  coeffs->add_option("--k-max", opt.k_max, "largest coefficient index");
  add_format(coeffs);

  CLI::App* convergence = app.add_subcommand(
      "convergence", "oracle-vs-series error grid and fitted decay order");
  add_params(convergence);
  convergence->add_option("--order", opt.order, "truncation order M")
      ->required();
  convergence->add_option("--n-grid", opt.n_grid,
                          "strictly increasing evaluation points")
      ->delimiter(',');
  add_format(convergence);

  CLI::App* order_fit = app.add_subcommand(
      "order-fit", "fitted empirical decay order only");
  add_params(order_fit);
  order_fit->add_option("--order", opt.order, "truncation order M")
      ->required();
  order_fit->add_option("--n-grid", opt.n_grid,
                        "strictly increasing evaluation points")
      ->delimiter(',');
  add_format(order_fit);

  CLI::App* validate =
      app.add_subcommand("validate", "run the shipped invariant battery");
  validate->add_option("--seed", opt.seed, "random-corpus seed");
  add_format(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (eval->parsed()) return run_eval(opt);
    if (coeffs->parsed()) return run_coeffs(opt);
    if (convergence->parsed()) return run_convergence(opt, false);
    if (order_fit->parsed()) return run_convergence(opt, true);
    return run_validate(opt);
  } catch (const gammaratio::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
