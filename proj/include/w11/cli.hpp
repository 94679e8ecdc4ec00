#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "w11/serialize.hpp"

namespace w11::cli {

enum class Command { Graphs, H11, Alpha, Beta, Sweep, Purity, Count, Tau, Genfun };
enum class Format { Json, Csv };

std::string to_string(Command c);

struct Invocation {
  Command command = Command::Graphs;
  std::string action;        // second word for graphs/h11/count/genfun; empty otherwise
  Json parameters = Json::object();  // typed, validated
  std::optional<std::string> out;
  Format format = Format::Json;
  unsigned threads = 1;
  bool modular_precheck = true;
  bool timing = false;

  friend bool operator==(const Invocation&, const Invocation&) = default;
};

/// Raised for bad arguments; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kVerificationFailure = 1;
inline constexpr int kUsage = 2;
inline constexpr int kInconsistency = 3;
inline constexpr int kIo = 4;
}  // namespace exit_code

/// argv without the program name. Defaults come from a key = value config
/// file (--config, else $WEIGHT11_CONFIG), then flags override.
Invocation parse_invocation(const std::vector<std::string>& argv);
/// Arguments that parse back to the same invocation.
std::vector<std::string> render(const Invocation& inv);
std::string usage();
/// Command lines shown in the usage text.
std::vector<std::vector<std::string>> usage_examples();

struct Report {
  Json command;     // {"name", "action"}
  Json parameters;
  Json results;
  std::vector<std::string> axioms_consumed;
  std::optional<Json> timing;
  int exit_code = exit_code::kOk;
};

Json report_json(const Report& r);
/// "path,value" lines, one per scalar leaf; paths join keys and array
/// indices with '.'.
std::string csv_flatten(const Json& j);

/// Runs the computation. Verification failures come back as reports with
/// exit_code 1; inconsistencies and I/O failures are thrown.
Report execute(const Invocation& inv);

/// Writes the report to inv.out or stdout. Returns the exit code (4 on I/O
/// failure).
int emit_report(const Report& r, const Invocation& inv);

/// Whole program: parse, execute, emit, map errors to exit codes.
int run(const std::vector<std::string>& argv);

}  // namespace w11::cli
