#pragma once

#include <chrono>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ccx/engine.hpp"
#include "ccx/ground_cc.hpp"

namespace ccx {

struct Problem {
  std::string name;
  /// Symbols of the kept equations, in order of first appearance.
  Signature sig;
  EquationSet equations;
  /// Printing names of the variables (TPTP upper-case identifiers).
  std::unordered_map<VarId, std::string> var_names;
  /// Human-readable notes on dropped or converted clauses.
  std::vector<std::string> notes;

  /// Compares signature, equations and variable names.
  friend bool operator==(const Problem& a, const Problem& b) {
    return a.sig == b.sig && a.equations == b.equations && a.var_names == b.var_names;
  }
};

enum class InequationPolicy { Drop, AsEquation };

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

/// The CNF unit-equality subset of TPTP: cnf(name, role, s = t) and
/// cnf(name, role, s != t) clauses, with % and /* */ comments.
Problem parse_tptp_ueq(std::string_view text, InequationPolicy policy = InequationPolicy::Drop,
                       std::string name = {});

/// One "s = t" per line; '#' starts a comment. Upper-case identifiers are
/// variables, scoped to their line.
Problem parse_equation_list(std::string_view text, std::string name = {});

/// Reads a whole file and dispatches on content: TPTP when it contains a
/// cnf/fof/include clause, the equation list otherwise.
Problem load_problem(const std::string& path, InequationPolicy policy = InequationPolicy::Drop);

/// Parses one term against an existing signature. Variables are looked up
/// in (and added to) `scope`; new ids are taken from `next_var`.
struct VarScope {
  std::map<std::string, VarId, std::less<>> ids;
  VarId next_var = 0;
};
Term parse_term(std::string_view text, Signature& sig, VarScope& scope);
/// Ground-term convenience form; rejects variables and unknown symbols.
Term parse_ground_term(std::string_view text, const Signature& sig);

/// Prints the equations as TPTP axioms; parsing the result yields an equal
/// Problem.
std::string to_tptp(const Problem& p);

/// Nests the non-constant symbols (first one innermost, cycling when depth
/// exceeds their number) in the first argument, filling every other
/// argument with the first constant. Throws std::invalid_argument without
/// a constant or for depth 0.
Term build_beta(const Signature& sig, unsigned depth);

enum class Mode { Ccx, Cc, Both };

struct RunConfig {
  Mode mode = Mode::Both;
  unsigned depth = 4;
  InequationPolicy ineq = InequationPolicy::Drop;
  std::optional<std::chrono::milliseconds> timeout;
  std::size_t cc_cap = 20'000'000;
};

struct ReportRow {
  std::string problem;
  std::string status_ccx = "skipped";
  double time_ccx_ms = 0;
  std::size_t classes_ccx = 0;
  std::size_t derived_classes_ccx = 0;
  std::string status_cc = "skipped";
  double time_cc_ms = 0;
  std::size_t classes_cc = 0;
  std::size_t nonsingleton_cc = 0;
};

struct RunArtifacts {
  std::optional<SaturationResult> ccx;
  std::optional<GroundCcResult> cc;
};

/// Runs the selected engines under the time limit. Timeouts and exhausted
/// budgets are reported in the row's status fields.
ReportRow run(const RunConfig& config, const Problem& problem, RunArtifacts* artifacts = nullptr);

std::string csv_header();
std::string to_csv(const ReportRow& row);

/// Appends rows to a CSV file, writing the header first when the file is
/// new or empty. Thread-safe.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;
  void write(const ReportRow& row);

 private:
  std::FILE* file_ = nullptr;
  std::mutex mutex_;
};

}  // namespace ccx
