#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "propscore/error.hpp"
#include "propscore/rule_spec.hpp"
#include "propscore/verify.hpp"

namespace propscore::cli {
namespace {

constexpr double kAgreementTolerance = 1e-9;

struct Options {
  std::string input;
  std::string second;
  std::optional<double> C;
  std::optional<double> c;
  int grid_n = kDefaultGridN;
  double tol = kDefaultTolerance;
  std::string out_path;
};

std::string num(double v) { return format_number(v); }
std::string num(ExtReal v) { return format_number(v); }

void print_report(std::ostream& out, const ProprietyReport& r) {
  out << "checked_pairs " << r.checked_pairs << '\n';
  out << "support " << to_string(r.support) << '\n';
  out << "worst_violation " << num(r.worst_violation) << '\n';
  out << "result " << (r.passed ? "pass" : "fail") << '\n';
  if (r.witness) {
    out << "witness_p " << num(r.witness->p) << '\n';
    out << "witness_q " << num(r.witness->q) << '\n';
    out << "witness_lhs " << num(r.witness->lhs) << '\n';
    out << "witness_rhs " << num(r.witness->rhs) << '\n';
  }
}

int cmd_derive(const Options& o, std::ostream& out) {
  const RuleSpecDocument doc = read_rule_spec(o.input);
  const double C = o.C.value_or(doc.C.value_or(0.0));
  const double c = o.c.value_or(doc.c.value_or(0.0));
  const GridSpec grid = make_grid(o.grid_n);
  const ScoringRule rule = derive_false_score(doc.T, C, c);

  if (!o.out_path.empty()) {
    RuleSpecDocument result{doc.name, doc.notes, rule.T, std::nullopt, C, c};
    // Opaque companions have no registry tag; such files re-derive F on load.
    if (is_serializable(rule.F)) result.F = rule.F;
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file) throw ValueError("cannot write " + o.out_path);
    file << serialize_rule_spec(result);
    if (!file) throw ValueError("failed writing " + o.out_path);
  }

  out << "x,T,F\n";
  for (double x : grid.points) {
    out << num(x) << ',' << num(rule.T(x)) << ',' << num(rule.F(x)) << '\n';
  }
  return kPass;
}

int cmd_check(const Options& o, std::ostream& out) {
  const RuleSpecDocument doc = read_rule_spec(o.input);
  const GridSpec grid = make_grid(o.grid_n);
  const ScoringRule rule = load_rule(doc);
  const ProprietyReport report = propriety_check(rule, grid, o.tol);
  out << "rule " << doc.name << '\n';
  out << "grid_points " << grid.points.size() << '\n';
  out << "tolerance " << num(o.tol) << '\n';
  print_report(out, report);
  return report.passed ? kPass : kFail;
}

struct Forecast {
  double q;
  int outcome;
};

std::vector<Forecast> read_forecasts(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValueError("cannot read " + path);
  std::vector<Forecast> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != "q,outcome") throw ParseError(line_no, "header", "expected 'q,outcome'");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ParseError(line_no, "row", "expected two columns");
    }
    ExtReal q;
    if (!parse_ext_real(std::string_view(line).substr(0, comma), q) || q.is_neg_inf()) {
      throw ParseError(line_no, "q", "not a number");
    }
    if (!(q.value() >= 0.0 && q.value() <= 1.0)) throw ParseError(line_no, "q", "outside [0,1]");
    const std::string outcome = line.substr(comma + 1);
    if (outcome != "0" && outcome != "1") throw ParseError(line_no, "outcome", "expected 0 or 1");
    rows.push_back({q.value(), outcome == "1" ? 1 : 0});
  }
  if (!header) throw ParseError(line_no, "header", "empty forecast file");
  if (rows.empty()) throw ParseError(line_no, "row", "no forecasts");
  return rows;
}

int cmd_score(const Options& o, std::ostream& out) {
  const ScoringRule rule = load_rule(read_rule_spec(o.input));
  const std::vector<Forecast> rows = read_forecasts(o.second);
  std::ostringstream body;
  body << "q,outcome,score\n";
  bool neg_inf = false;
  double sum = 0.0;
  double comp = 0.0;
  for (const Forecast& f : rows) {
    const ExtReal s = f.outcome == 1 ? rule.T(f.q) : rule.F(f.q);
    body << num(f.q) << ',' << f.outcome << ',' << num(s) << '\n';
    if (s.is_neg_inf()) {
      neg_inf = true;
      continue;
    }
    const double t = sum + s.value();
    comp += std::abs(sum) >= std::abs(s.value()) ? (sum - t) + s.value() : (s.value() - t) + sum;
    sum = t;
  }
  const ExtReal mean = neg_inf ? kNegInf : ExtReal((sum + comp) / static_cast<double>(rows.size()));
  out << body.str() << "mean,," << num(mean) << '\n';
  return kPass;
}

bool components_agree(const ScoreFn& a, const ScoreFn& b, const GridSpec& grid) {
  return std::all_of(grid.points.begin(), grid.points.end(), [&](double x) {
    const ExtReal u = a(x);
    const ExtReal v = b(x);
    if (u.is_neg_inf() || v.is_neg_inf()) return u == v;
    return std::abs(u.value() - v.value()) <=
           kAgreementTolerance * (1.0 + std::max(std::abs(u.value()), std::abs(v.value())));
  });
}

int cmd_compare(const Options& o, std::ostream& out) {
  const RuleSpecDocument da = read_rule_spec(o.input);
  const RuleSpecDocument db = read_rule_spec(o.second);
  const ScoringRule a = load_rule(da);
  const ScoringRule b = load_rule(db);
  const GridSpec grid = make_grid(o.grid_n);
  out << "a " << da.name << '\n' << "b " << db.name << '\n';

  if (components_agree(a.T, b.T, grid)) {
    out << "mode uniqueness\n";
    UniquenessGap g;
    try {
      g = uniqueness_gap(a.T, a.F, b.F, grid);
    } catch (const PreconditionFailed& e) {
      out << "result fail\nreason " << e.what() << '\n';
      return kFail;
    }
    out << "is_constant " << (g.is_constant ? "true" : "false") << '\n';
    out << "gap " << num(g.gap) << '\n';
    out << "spread " << num(g.spread) << '\n';
    out << "c_at_1 " << num(g.c_at_1) << '\n';
    out << "result " << (g.is_constant ? "pass" : "fail") << '\n';
    return g.is_constant ? kPass : kFail;
  }

  out << "mode difference\n";
  const DifferenceReport d = difference_propriety(a, b, grid, o.tol);
  out << "t_difference_nondecreasing " << (d.t_difference_nondecreasing ? "true" : "false")
      << '\n';
  out << "f_difference_nonincreasing " << (d.f_difference_nonincreasing ? "true" : "false")
      << '\n';
  out << "corollary_verdict " << (d.corollary_verdict ? "proper" : "not proper") << '\n';
  out << "grid_verdict " << (d.grid_verdict.passed ? "proper" : "not proper") << '\n';
  print_report(out, d.grid_verdict);
  if (!d.agree()) {
    out << "conclusion verdicts disagree\n";
    return kFail;
  }
  out << "conclusion " << (d.corollary_verdict ? "difference proper" : "difference not proper")
      << '\n';
  return kPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Proper scoring rules from one monotone component", "propscore"};
  app.require_subcommand(1);
  Options o;

  auto add_grid = [&o](CLI::App* sub) {
    sub->add_option("--grid-n", o.grid_n, "Uniform grid points (>= 3)");
  };
  auto add_tol = [&o](CLI::App* sub) {
    sub->add_option("--tol", o.tol, "Relative propriety tolerance")->check(CLI::NonNegativeNumber);
  };

  CLI::App* derive = app.add_subcommand("derive", "Derive F from T and print x,T,F on the grid");
  derive->add_option("input", o.input, "Rule-spec file")->required();
  derive->add_option("--C", o.C, "Free constant C");
  derive->add_option("--c", o.c, "Drop c >= 0 at 1");
  derive->add_option("--out", o.out_path, "Write the completed rule-spec here");
  add_grid(derive);

  CLI::App* check = app.add_subcommand("check", "Check propriety on a grid");
  check->add_option("input", o.input, "Rule-spec file")->required();
  add_grid(check);
  add_tol(check);

  CLI::App* score = app.add_subcommand("score", "Score forecasts from a q,outcome CSV");
  score->add_option("input", o.input, "Rule-spec file")->required();
  score->add_option("forecasts", o.second, "Forecast CSV")->required();

  CLI::App* compare = app.add_subcommand("compare", "Compare two rules");
  compare->add_option("a", o.input, "First rule-spec file")->required();
  compare->add_option("b", o.second, "Second rule-spec file")->required();
  add_grid(compare);
  add_tol(compare);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (o.c && *o.c < 0.0) throw ValueError("--c must be >= 0");
    if (*derive) return cmd_derive(o, out);
    if (*check) return cmd_check(o, out);
    if (*score) return cmd_score(o, out);
    return cmd_compare(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace propscore::cli
