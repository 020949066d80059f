// Command-line driver: saturate problems with CC(X) and/or ground congruence
// closure, print or append CSV rows, dump final classes, answer queries.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "ccx/frontend.hpp"

namespace {

ccx::Equation parse_query(const std::string& text, const ccx::Signature& sig) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("query must look like 's = t'");
  return {ccx::parse_ground_term(text.substr(0, eq), sig),
          ccx::parse_ground_term(text.substr(eq + 1), sig)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-ground congruence closure over a bounded ground term space"};

  std::vector<std::string> inputs;
  std::string mode = "both";
  unsigned depth = 4;
  std::string ineq = "drop";
  double timeout_secs = 0;
  std::string csv_path, dump_path;
  std::vector<std::string> queries;
  std::string format = "auto";

  app.add_option("problems", inputs, "Problem files (TPTP CNF or equation list)")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--mode", mode, "Engines to run")
      ->check(CLI::IsMember({"ccx", "cc", "both"}))
      ->capture_default_str();
  app.add_option("--depth", depth, "Nesting depth of the bound term")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--ineq", ineq, "Inequations: drop them or read them as equations")
      ->check(CLI::IsMember({"drop", "eq"}))
      ->capture_default_str();
  app.add_option("--timeout-secs", timeout_secs, "Per-engine time limit, 0 for none")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--csv", csv_path, "Append result rows to this CSV file");
  app.add_option("--dump-classes", dump_path, "Write final classes to this file");
  app.add_option("--query", queries, "Ground equality 's = t' to decide after saturation");
  app.add_option("--format", format, "Input format")
      ->check(CLI::IsMember({"auto", "tptp", "eqlist"}))
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  ccx::RunConfig config;
  config.mode = mode == "ccx" ? ccx::Mode::Ccx : mode == "cc" ? ccx::Mode::Cc : ccx::Mode::Both;
  config.depth = depth;
  config.ineq = ineq == "eq" ? ccx::InequationPolicy::AsEquation : ccx::InequationPolicy::Drop;
  if (timeout_secs > 0)
    config.timeout = std::chrono::milliseconds(static_cast<long long>(timeout_secs * 1000));

  std::unique_ptr<ccx::CsvWriter> csv;
  if (!csv_path.empty()) csv = std::make_unique<ccx::CsvWriter>(csv_path);
  std::ofstream dump_out;
  if (!dump_path.empty()) {
    dump_out.open(dump_path);
    if (!dump_out) {
      std::cerr << "error: cannot write " << dump_path << "\n";
      return 1;
    }
  }
  if (!queries.empty() && config.mode == ccx::Mode::Cc) {
    std::cerr << "error: --query needs the ccx engine\n";
    return 2;
  }

  if (!csv) std::cout << ccx::csv_header() << "\n";
  int status = 0;
  for (const auto& path : inputs) {
    try {
      ccx::Problem problem;
      if (format == "auto") {
        problem = ccx::load_problem(path, config.ineq);
      } else {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        problem = format == "tptp" ? ccx::parse_tptp_ueq(ss.str(), config.ineq, path)
                                   : ccx::parse_equation_list(ss.str(), path);
      }
      for (const auto& note : problem.notes) std::cerr << problem.name << ": " << note << "\n";

      ccx::RunArtifacts artifacts;
      const ccx::ReportRow row = ccx::run(config, problem, &artifacts);
      if (csv)
        csv->write(row);
      else
        std::cout << ccx::to_csv(row) << "\n";

      if (dump_out.is_open()) {
        dump_out << "# " << problem.name << "\n";
        if (artifacts.ccx) dump_out << ccx::dump(*artifacts.ccx);
        if (artifacts.cc && artifacts.cc->completed)
          dump_out << ccx::dump(artifacts.cc->partition, problem.sig, artifacts.cc->time_ms);
      }
      if (artifacts.ccx) {
        std::cerr << problem.name << ": " << artifacts.ccx->derived_class_count()
                  << " classes besides untouched single-term classes\n";
        for (const auto& q : queries) {
          const auto [s, t] = parse_query(q, problem.sig);
          const bool equal = ccx::query_equal(*artifacts.ccx, s, t);
          std::cout << problem.name << ": " << q << " : " << (equal ? "equal" : "not equal")
                    << (artifacts.ccx->completed ? "" : " (incomplete saturation)") << "\n";
        }
      }
    } catch (const std::exception& e) {
      std::cerr << path << ": error: " << e.what() << "\n";
      status = 1;
    }
  }
  return status;
}
