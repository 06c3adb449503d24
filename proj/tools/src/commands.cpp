#include "qcalc/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "qcalc/bell.hpp"
#include "qcalc/errors.hpp"
#include "qcalc/identities.hpp"
#include "qcalc/scenarios.hpp"

namespace qcalc::cli {
namespace {

using lab::CriterionReport;
using lab::Scenario;
using lab::Status;

// "1,2.5,-3" -> {1, 2.5, -3}; ConfigError unless exactly `count` numbers.
std::vector<double> parse_list(const std::string& text, std::size_t count, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size() || !std::isfinite(v)) {
      throw ConfigError(std::string(what) + ": '" + item + "' is not a number");
    }
    out.push_back(v);
  }
  if (out.size() != count || (!text.empty() && text.back() == ',')) {
    throw ConfigError(std::string(what) + ": expected " + std::to_string(count) +
                      " comma-separated numbers, got '" + text + "'");
  }
  return out;
}

std::string join(const std::vector<std::string>& args) {
  std::string out;
  for (const auto& a : args) {
    if (!out.empty()) out += ' ';
    out += a;
  }
  return out;
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& out) const {
    std::vector<std::size_t> width;
    for (const auto& row : rows_) {
      width.resize(std::max(width.size(), row.size()), 0);
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    for (const auto& row : rows_) {
      std::string line;
      for (std::size_t c = 0; c < row.size(); ++c) {
        line += row[c];
        if (c + 1 < row.size()) line += std::string(width[c] - row[c].size() + 2, ' ');
      }
      out << line << '\n';
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string json_cell(const Json& j) {
  if (j.is_number_float()) return format_double(j.get<double>());
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

void print_criteria(const Report& report, std::ostream& out) {
  Table t({"name", "status", "max_deviation", "expected", "detail"});
  for (const auto& r : report.results) {
    std::string detail;
    if (r.data.contains("first_failing_step") && !r.data["first_failing_step"].get<std::string>().empty()) {
      detail = "first failing step " + r.data["first_failing_step"].get<std::string>();
      if (r.data.value("vacuous", false)) detail += " (hypotheses fail)";
    } else if (r.data.contains("hypotheses_hold")) {
      detail = r.data["hypotheses_hold"].get<bool>() ? "hypotheses hold" : "vacuous";
    }
    t.add({r.name, std::string(lab::to_string(r.status)),
           json_cell(r.data.value("max_deviation", Json(0.0))),
           r.data.value("expected", std::string("-")), detail});
  }
  t.print(out);
}

void print_summary(const Report& report, std::ostream& out) {
  const Summary s = report.summary();
  out << "summary: " << s.passed << " passed, " << s.failed << " failed, " << s.indeterminate
      << " indeterminate\n";
}

CriterionReport worst_of(const std::vector<CriterionReport>& reports, const std::string& name,
                         const lab::Thresholds& thr) {
  CriterionReport out;
  out.name = name;
  const CriterionReport* worst = nullptr;
  for (const auto& r : reports) {
    if (!worst || r.max_deviation > worst->max_deviation) worst = &r;
  }
  out.max_deviation = worst->max_deviation;
  out.witness = worst->name + ": " + worst->witness;
  out.metrics = worst->metrics;
  out.notes = worst->notes;
  out.holds = out.max_deviation <= thr.tol;
  out.status = lab::classify(out.max_deviation, thr);
  return out;
}

std::vector<CriterionReport> per_result_reports(const Scenario& s, const lab::Thresholds& thr) {
  std::vector<CriterionReport> out;
  for (std::size_t i = 0; i < s.inst.look().size(); ++i) {
    for (std::size_t j = 0; j < s.primitive.size(); ++j) {
      auto r = s.family == lab::Family::transparency
                   ? lab::check_import(s.examinee, s.inst, i, s.primitive[j], thr)
                   : lab::check_bearing(s.examinee, s.inst, i, s.primitive[j], thr);
      r.name += "[t=" + std::to_string(j) + "]";
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::string per_result_name(const Scenario& s) {
  return s.family == lab::Family::transparency ? "import" : "bearing";
}

Result aggregate_result(const Scenario& s, const lab::Thresholds& thr, Expect expect) {
  const auto reports = per_result_reports(s, thr);
  Result r = criterion_result(worst_of(reports, s.name + "/" + per_result_name(s), thr), expect);
  Json elements = Json::array();
  for (const auto& e : reports) {
    elements.push_back({{"criterion", e.name},
                        {"criterion_status", std::string(lab::to_string(e.status))},
                        {"max_deviation", number(e.max_deviation)}});
  }
  r.data["elements"] = elements;
  return r;
}

Result blanket_result(const Scenario& s, const lab::Thresholds& thr, Expect expect) {
  auto b = lab::blanket_criterion(s, thr);
  b.name = s.name + "/" + std::string(lab::to_string(s.family));
  return criterion_result(b, expect);
}

Result chain_result(const Scenario& s, const lab::Thresholds& thr, Expect expect) {
  auto c = s.family == lab::Family::transparency
               ? lab::chain_transparency(s.examinee, s.inst, s.primitive, thr)
               : lab::chain_invisibility(s.examinee, s.inst, s.primitive, thr);
  c.name = s.name + "/" + c.name;
  return criterion_result(c, expect);
}

// Hypotheses: every per-result criterion and innocence of look against
// primitive. When they all hold the blanket criterion must hold too.
Result implication_result(const Scenario& s, const lab::Thresholds& thr) {
  const auto reports = per_result_reports(s, thr);
  const auto innocence = lab::check_innocence(lab::ExamineeSpace(s.inst.joint_space()),
                                              s.inst.look(), s.primitive, thr);
  bool hypotheses = innocence.holds;
  double hyp_dev = innocence.max_deviation;
  for (const auto& r : reports) {
    hypotheses = hypotheses && r.holds;
    hyp_dev = std::max(hyp_dev, r.max_deviation);
  }
  auto conclusion = lab::blanket_criterion(s, thr);
  Result out;
  out.name = s.name + "/" + per_result_name(s) + "_implies_" + std::string(lab::to_string(s.family));
  out.data = criterion_json(conclusion);
  out.data["hypotheses_hold"] = hypotheses;
  out.data["hypothesis_max_deviation"] = number(hyp_dev);
  out.data["description"] = s.description;
  out.status = hypotheses ? conclusion.status : Status::pass;
  return out;
}

// A chain on a random scenario must hold whenever its hypotheses do.
Result random_chain_result(const Scenario& s, const lab::Thresholds& thr) {
  auto c = s.family == lab::Family::transparency
               ? lab::chain_transparency(s.examinee, s.inst, s.primitive, thr)
               : lab::chain_invisibility(s.examinee, s.inst, s.primitive, thr);
  c.name = s.name + "/" + c.name;
  Result out;
  out.name = c.name;
  out.data = criterion_json(c);
  out.data["description"] = s.description;
  out.status = c.vacuous ? Status::pass : c.status;
  return out;
}

Expect expectation(const Scenario& s) { return s.expected_to_hold ? Expect::hold : Expect::fail; }

Report bell_report(const std::string& command, const RunConfig& cfg) {
  Report r;
  r.command = command;
  r.config = cfg;
  return r;
}

void write_json(const Report& report, const RunConfig& cfg) {
  if (cfg.output_path) emit_report(report, *cfg.output_path);
}

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int finish(const Report& report, const RunConfig& cfg) {
  try {
    write_json(report, cfg);
  } catch (const std::exception& e) {
    throw IoFailure(e.what());
  }
  return report.exit_code();
}

}  // namespace

Report verify_report(const std::string& suite, const RunConfig& cfg, std::size_t random_count,
                     std::size_t instances) {
  cfg.validate();
  const auto thr = cfg.thresholds();
  const bool all = suite == "all";
  if (!all && suite != "identities" && suite != "criteria" && suite != "chains") {
    throw ConfigError("unknown suite '" + suite + "'");
  }
  Report report;
  report.config = cfg;

  if (all || suite == "identities") {
    report.results.push_back(
        criterion_result(lab::run_innocence_suite(cfg.seed, instances, thr), Expect::hold));
    report.results.push_back(criterion_result(
        lab::run_combined_conditioning_suite(cfg.seed, instances, thr), Expect::hold));
    report.results.push_back(criterion_result(
        lab::run_instrument_composition_suite(cfg.seed, instances, thr), Expect::hold));
  }
  if (all || suite == "criteria" || suite == "chains") {
    std::vector<Scenario> scenarios;
    for (const auto& name : lab::scenario_names()) {
      scenarios.push_back(lab::build_scenario(name, cfg.dims, cfg.seed));
    }
    std::vector<Scenario> random;
    for (std::size_t i = 0; i < random_count; ++i) {
      random.push_back(lab::perturbed_scenario(i, cfg.dims, cfg.seed));
    }
    if (all || suite == "criteria") {
      for (const auto& s : scenarios) {
        report.results.push_back(aggregate_result(s, thr, expectation(s)));
        report.results.push_back(blanket_result(s, thr, expectation(s)));
      }
      for (const auto& s : random) report.results.push_back(implication_result(s, thr));
    }
    if (all || suite == "chains") {
      for (const auto& s : scenarios) report.results.push_back(chain_result(s, thr, expectation(s)));
      for (const auto& s : random) report.results.push_back(random_chain_result(s, thr));
    }
  }
  return report;
}

Report scenario_report(const std::string& name, const RunConfig& cfg) {
  cfg.validate();
  const auto thr = cfg.thresholds();
  const Scenario s = lab::build_scenario(name, cfg.dims, cfg.seed);
  Report report;
  report.config = cfg;
  report.results.push_back(aggregate_result(s, thr, expectation(s)));
  report.results.push_back(blanket_result(s, thr, expectation(s)));
  report.results.push_back(chain_result(s, thr, expectation(s)));
  return report;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orbit/co-orbit observation calculus: verification lab and Bell toolkit", "qcalc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  RunConfig cfg;
  std::string json_path;
  auto add_common = [&](CLI::App* sub, bool thresholds) {
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    sub->add_option("--json", json_path, "write the report as canonical JSON");
    if (thresholds) {
      sub->add_option("--tol", cfg.tol, "pass tolerance")->capture_default_str();
      sub->add_option("--fail-threshold", cfg.fail_threshold, "failure threshold")
          ->capture_default_str();
      sub->add_option("--dims", cfg.dims, "dimension of each factor")->capture_default_str();
    }
  };

  auto* verify = app.add_subcommand("verify", "run verification suites");
  std::string suite = "all";
  std::size_t random_count = 0;
  std::size_t instances = 200;
  verify->add_option("--suite", suite, "identities | criteria | chains | all")
      ->check(CLI::IsMember({"identities", "criteria", "chains", "all"}))
      ->capture_default_str();
  verify->add_option("--random", random_count, "number of random perturbed scenarios");
  verify->add_option("--instances", instances, "random instances per identity")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(verify, true);

  auto* bell = app.add_subcommand("bell", "two-wing singlet experiment");
  bell->require_subcommand(1);
  std::string angles = "0,90,45,-45";
  bool no_flip = false;
  auto* correlations = bell->add_subcommand("correlations", "same-outcome table of the four pairs");
  correlations->add_option("--angles", angles, "a,b,j,k in degrees")->required();
  correlations->add_flag("--no-flip", no_flip, "keep the raw singlet outcome labels");
  add_common(correlations, false);

  std::string rates;
  auto* bound = bell->add_subcommand("bound", "largest B-K break rate allowed by three links");
  bound->add_option("--rates", rates, "r_bj,r_ja,r_ak")->required();
  add_common(bound, false);

  double favored = 0.0, epsilon = 0.0;
  std::size_t qq_n = 10;
  auto* qq = bell->add_subcommand("qq", "whether the credible B,K pairs can exist");
  qq->add_option("--favored", favored, "favored same-outcome rate")->required();
  qq->add_option("--epsilon", epsilon, "band half-width")->capture_default_str();
  qq->add_option("--n", qq_n, "record length for the witness")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(qq, false);

  std::uint64_t tail_n = 0;
  double tail_p = 0.0, lo = 0.0, hi = 0.0;
  auto* tail = bell->add_subcommand("tail", "log10 of a binomial two-sided tail");
  tail->add_option("--n", tail_n, "number of runs")->required()->check(CLI::PositiveNumber);
  tail->add_option("--p", tail_p, "per-run probability")->required();
  tail->add_option("--lo", lo, "lower edge of the kept range")->required();
  tail->add_option("--hi", hi, "upper edge of the kept range")->required();
  add_common(tail, false);

  std::string pair_name = "AJ";
  std::size_t sim_n = 100000;
  auto* simulate = bell->add_subcommand("simulate", "sample one pair and compare with Born");
  simulate->add_option("--angles", angles, "a,b,j,k in degrees")->capture_default_str();
  simulate->add_option("--pair", pair_name, "AJ | AK | BJ | BK")->capture_default_str();
  simulate->add_option("--n", sim_n, "number of runs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_flag("--no-flip", no_flip, "keep the raw singlet outcome labels");
  add_common(simulate, false);

  auto* scenario = app.add_subcommand("scenario", "named instrumented observations");
  scenario->require_subcommand(1);
  auto* list = scenario->add_subcommand("list", "list scenarios");
  std::string scenario_name;
  auto* run_one = scenario->add_subcommand("run", "evaluate one scenario");
  run_one->add_option("name", scenario_name, "scenario name")->required();
  add_common(run_one, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "qcalc: " << e.what() << '\n';
    return kUsageError;
  }
  if (!json_path.empty()) cfg.output_path = json_path;
  const std::string command = join(args);

  try {
    if (verify->parsed()) {
      Report report = verify_report(suite, cfg, random_count, instances);
      report.command = command;
      print_criteria(report, out);
      print_summary(report, out);
      return finish(report, cfg);
    }
    if (list->parsed()) {
      Table t({"name", "family", "expected", "description"});
      for (const auto& name : lab::scenario_names()) {
        const auto s = lab::build_scenario(name, 2, cfg.seed);
        t.add({name, std::string(lab::to_string(s.family)),
               s.expected_to_hold ? "hold" : "fail", s.description});
      }
      t.print(out);
      return kOk;
    }
    if (run_one->parsed()) {
      Report report = scenario_report(scenario_name, cfg);
      report.command = command;
      print_criteria(report, out);
      print_summary(report, out);
      return finish(report, cfg);
    }

    Report report = bell_report(command, cfg);
    if (correlations->parsed()) {
      const auto v = parse_list(angles, 4, "--angles");
      const auto ac = bell::AnalyzerConfig::from_degrees(v[0], v[1], v[2], v[3], !no_flip);
      const auto table = bell::pair_correlation(ac);
      const double deg[4] = {v[0], v[1], v[2], v[3]};
      Table t({"pair", "relative_angle_deg", "p_same"});
      for (bell::Pair p : bell::kAllPairs) {
        const double left = (p == bell::Pair::AJ || p == bell::Pair::AK) ? deg[0] : deg[1];
        const double right = (p == bell::Pair::AJ || p == bell::Pair::BJ) ? deg[2] : deg[3];
        Result r;
        r.name = "p_same[" + std::string(bell::to_string(p)) + "]";
        r.data = {{"pair", std::string(bell::to_string(p))},
                  {"relative_angle_deg", number(right - left)},
                  {"label_flip", !no_flip},
                  {"p_same", number(table.at(p))}};
        t.add({std::string(bell::to_string(p)), format_double(right - left),
               format_double(table.at(p))});
        report.results.push_back(std::move(r));
      }
      t.print(out);
    } else if (bound->parsed()) {
      const auto v = parse_list(rates, 3, "--rates");
      const double b = bell::triangle_bound(v[0], v[1], v[2]);
      Result r;
      r.name = "triangle_bound";
      r.data = {{"rates", {number(v[0]), number(v[1]), number(v[2])}}, {"bound", number(b)}};
      report.results.push_back(std::move(r));
      out << "max B-K break rate: " << format_double(b) << '\n';
    } else if (qq->parsed()) {
      const auto res = bell::qq_empty(qq_n, favored, epsilon);
      Result r;
      r.name = "qq_empty";
      r.data = {{"n", qq_n},
                {"favored", number(favored)},
                {"epsilon", number(epsilon)},
                {"empty", res.empty},
                {"required", number(res.certificate.required)},
                {"bound", number(res.certificate.bound)},
                {"certificate", res.certificate.text},
                {"witness", nullptr}};
      out << (res.empty ? "empty" : "not empty") << ": " << res.certificate.text << '\n';
      if (res.witness) {
        auto bits = [](const bell::OutcomeSequence& s) {
          std::string b;
          for (auto x : s.bits()) b += static_cast<char>('0' + x);
          return b;
        };
        const auto& w = *res.witness;
        r.data["witness"] = {{"A", bits(w.a)}, {"J", bits(w.j)}, {"B", bits(w.b)}, {"K", bits(w.k)}};
        Table t({"record", "bits"});
        t.add({"A", bits(w.a)});
        t.add({"J", bits(w.j)});
        t.add({"B", bits(w.b)});
        t.add({"K", bits(w.k)});
        t.print(out);
      } else if (!res.empty) {
        out << "no witness at n=" << qq_n << '\n';
      }
      report.results.push_back(std::move(r));
    } else if (tail->parsed()) {
      Table t({"p", "log10_tail"});
      for (double p : {tail_p, bell::kQuantumFavored}) {
        const double v = bell::tail_log10(tail_n, p, lo, hi);
        Result r;
        r.name = p == tail_p ? "tail_log10" : "tail_log10[quantum_p]";
        r.data = {{"n", tail_n}, {"p", number(p)}, {"lo", number(lo)}, {"hi", number(hi)},
                  {"log10_tail", number(v)}};
        report.results.push_back(std::move(r));
        t.add({format_double(p), format_double(v)});
      }
      t.print(out);
    } else if (simulate->parsed()) {
      const auto v = parse_list(angles, 4, "--angles");
      const auto ac = bell::AnalyzerConfig::from_degrees(v[0], v[1], v[2], v[3], !no_flip);
      const bell::Pair pair = bell::parse_pair(pair_name);
      const auto [left, right] = bell::sample_pair(ac, pair, sim_n, cfg.seed);
      const double empirical = 1.0 - bell::break_stats(left, right).rate;
      const double exact = bell::pair_correlation(ac).at(pair);
      const double band = 4.0 * std::sqrt(exact * (1.0 - exact) / static_cast<double>(sim_n));
      Result r;
      r.name = "simulate[" + std::string(bell::to_string(pair)) + "]";
      r.data = {{"pair", std::string(bell::to_string(pair))},
                {"n", sim_n},
                {"seed", cfg.seed},
                {"empirical_same_rate", number(empirical)},
                {"exact_same_rate", number(exact)},
                {"abs_deviation", number(std::abs(empirical - exact))},
                {"band_4sigma", number(band)},
                {"within_band", std::abs(empirical - exact) <= band}};
      Table t({"pair", "seed", "n", "empirical", "exact", "abs_deviation"});
      t.add({std::string(bell::to_string(pair)), std::to_string(cfg.seed), std::to_string(sim_n),
             format_double(empirical), format_double(exact),
             format_double(std::abs(empirical - exact))});
      t.print(out);
      report.results.push_back(std::move(r));
    }
    return finish(report, cfg);
  } catch (const IoFailure& e) {
    err << "qcalc: " << e.what() << '\n';
    return kIoError;
  } catch (const qcalc::Error& e) {
    err << "qcalc: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace qcalc::cli
