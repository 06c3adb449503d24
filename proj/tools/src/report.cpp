#include "qcalc/cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "qcalc/errors.hpp"

namespace qcalc::cli {
namespace {

lab::Status parse_status(const std::string& s) {
  if (s == "pass") return lab::Status::pass;
  if (s == "fail") return lab::Status::fail;
  if (s == "indeterminate") return lab::Status::indeterminate;
  throw std::invalid_argument("unknown status '" + s + "'");
}

void dump_into(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += Json(key).dump();
        out += ':';
        dump_into(value, out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        dump_into(j[i], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : Json(format_double(x)).dump();
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

void RunConfig::validate() const {
  if (!(tol > 0.0)) throw ConfigError("--tol must be positive");
  if (!(tol < fail_threshold)) {
    throw ConfigError("--tol must be below --fail-threshold (got " + format_double(tol) +
                      " >= " + format_double(fail_threshold) + ")");
  }
  if (dims < 2) throw ConfigError("--dims must be at least 2");
}

Summary Report::summary() const {
  Summary s;
  for (const auto& r : results) {
    switch (r.status) {
      case lab::Status::pass: ++s.passed; break;
      case lab::Status::fail: ++s.failed; break;
      case lab::Status::indeterminate: ++s.indeterminate; break;
    }
  }
  return s;
}

int Report::exit_code() const {
  const Summary s = summary();
  return (s.failed == 0 && s.indeterminate == 0) ? kOk : kVerificationFailure;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

Json criterion_json(const lab::CriterionReport& r) {
  Json j = Json::object();
  j["criterion"] = r.name;
  j["criterion_status"] = std::string(lab::to_string(r.status));
  j["holds"] = r.holds;
  j["max_deviation"] = number(r.max_deviation);
  j["witness"] = r.witness;
  Json metrics = Json::object();
  for (const auto& m : r.metrics) metrics[m.name] = number(m.value);
  j["metrics"] = metrics;
  j["notes"] = r.notes;
  if (!r.steps.empty()) {
    Json steps = Json::array();
    for (const auto& s : r.steps) {
      steps.push_back({{"from", s.from},
                       {"to", s.to},
                       {"reason", s.reason},
                       {"deviation", number(s.deviation)}});
    }
    j["steps"] = steps;
    j["first_failing_step"] = r.first_failing_step;
    j["vacuous"] = r.vacuous;
    Json pre = Json::array();
    for (const auto& p : r.preconditions) {
      pre.push_back({{"criterion", p.name},
                     {"criterion_status", std::string(lab::to_string(p.status))},
                     {"max_deviation", number(p.max_deviation)}});
    }
    j["preconditions"] = pre;
  }
  return j;
}

Result criterion_result(const lab::CriterionReport& r, Expect expect) {
  Result out;
  out.name = r.name;
  out.data = criterion_json(r);
  out.data["expected"] = expect == Expect::hold ? "hold" : "fail";
  if (expect == Expect::hold || r.status == lab::Status::indeterminate) {
    out.status = r.status;
  } else {
    const bool located = r.steps.empty() || !r.first_failing_step.empty();
    out.status = (r.status == lab::Status::fail && located) ? lab::Status::pass
                                                             : lab::Status::fail;
  }
  return out;
}

Json to_json(const Report& report) {
  Json config = {{"seed", report.config.seed},
                 {"tol", report.config.tol},
                 {"fail_threshold", report.config.fail_threshold},
                 {"dims", report.config.dims},
                 {"output_path", nullptr}};
  if (report.config.output_path) config["output_path"] = *report.config.output_path;

  Json results = Json::array();
  for (const auto& r : report.results) {
    Json entry = r.data;
    entry["name"] = r.name;
    entry["status"] = std::string(lab::to_string(r.status));
    results.push_back(std::move(entry));
  }
  const Summary s = report.summary();
  return {{"version", report.version},
          {"command", report.command},
          {"config", config},
          {"results", results},
          {"summary",
           {{"passed", s.passed}, {"failed", s.failed}, {"indeterminate", s.indeterminate}}}};
}

Report report_from_json(const Json& j) {
  try {
    Report r;
    r.version = j.at("version").get<std::string>();
    r.command = j.at("command").get<std::string>();
    const Json& c = j.at("config");
    r.config.seed = c.at("seed").get<std::uint64_t>();
    r.config.tol = c.at("tol").get<double>();
    r.config.fail_threshold = c.at("fail_threshold").get<double>();
    r.config.dims = c.at("dims").get<std::size_t>();
    if (!c.at("output_path").is_null()) r.config.output_path = c.at("output_path").get<std::string>();
    for (const auto& e : j.at("results")) {
      Result res;
      res.name = e.at("name").get<std::string>();
      res.status = parse_status(e.at("status").get<std::string>());
      res.data = e;
      res.data.erase("name");
      res.data.erase("status");
      r.results.push_back(std::move(res));
    }
    return r;
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

std::string canonical_dump(const Json& j) {
  std::string out;
  dump_into(j, out);
  out += '\n';
  return out;
}

void emit_report(const Report& report, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << canonical_dump(to_json(report));
  f.close();
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace qcalc::cli
