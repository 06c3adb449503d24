#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcalc/criteria.hpp"

namespace qcalc::cli {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

// Process exit codes.
enum ExitCode : int { kOk = 0, kVerificationFailure = 1, kUsageError = 2, kIoError = 3 };

struct RunConfig {
  std::uint64_t seed = 42;
  double tol = 1e-9;
  double fail_threshold = 1e-3;
  std::size_t dims = 2;
  std::optional<std::string> output_path;

  // ConfigError unless 0 < tol < fail_threshold and dims >= 2.
  void validate() const;
  lab::Thresholds thresholds() const { return {tol, fail_threshold}; }
};

/// One entry of a report. `status` is what the summary counts; for a case
/// expected to fail it is pass when the failure was reproduced. `data` holds
/// every other field.
struct Result {
  std::string name;
  lab::Status status = lab::Status::pass;
  Json data = Json::object();

  friend bool operator==(const Result&, const Result&) = default;
};

struct Summary {
  std::size_t passed = 0, failed = 0, indeterminate = 0;
  friend bool operator==(const Summary&, const Summary&) = default;
};

struct Report {
  std::string version = kVersion;
  std::string command;
  RunConfig config;
  std::vector<Result> results;

  Summary summary() const;
  int exit_code() const;
};

enum class Expect { hold, fail };

// Finite values as numbers; infinities and NaN as "inf", "-inf", "nan".
Json number(double x);

// %.17g
std::string format_double(double x);

Json criterion_json(const lab::CriterionReport& r);

/// Wraps a criterion report. With Expect::fail the result passes when the
/// criterion failed (and, for a chain, a failing step was located), fails
/// when it held, and stays indeterminate in the gap band.
Result criterion_result(const lab::CriterionReport& r, Expect expect);

Json to_json(const Report& report);
// Inverse of to_json; std::invalid_argument on a malformed document.
Report report_from_json(const Json& j);

/// Canonical text: keys sorted, no insignificant whitespace, floats with 17
/// significant digits, trailing newline.
std::string canonical_dump(const Json& j);

// Writes canonical_dump(to_json(report)); std::runtime_error on I/O failure.
void emit_report(const Report& report, const std::string& path);

}  // namespace qcalc::cli
