#include "pdist/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "pdist/dsl.hpp"
#include "pdist/errors.hpp"
#include "pdist/json_io.hpp"
#include "pdist/random_family.hpp"

namespace pdist::cli {
namespace {

struct Flags {
  std::string problem;
  std::string out;
  std::string interface_path;
  std::string solution;
  double tol = 1e-9;
  std::vector<double> window;
  std::optional<std::uint64_t> seed;
  std::string form = "tilde";
  bool csv = false;
  std::vector<std::string> inputs;
  int order = 1;
  int delta_order = 0;
  std::vector<double> points;
  std::string side = "+";
  double eps = 1e-3;
  double x0 = 0.0;
  double threshold = 1e-3;
  std::string test_body;
  std::vector<double> support;
  int samples = 101;
};

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json dist_document(const PiecewiseDist& f) {
  Json j = to_json(f);
  j["text"] = print_dist(f);
  return j;
}

void emit(const Flags& flags, const Json& doc, std::ostream& out) {
  const std::string text = doc.dump(2);
  if (flags.out.empty()) {
    out << text << "\n";
    return;
  }
  std::ofstream file(flags.out);
  if (!file) throw InputError("cannot write " + flags.out);
  file << text << "\n";
}

Form parse_form(const std::string& s) {
  if (s == "tilde") return Form::tilde;
  if (s == "star") return Form::star;
  throw InputError("--form must be 'tilde' or 'star', got '" + s + "'");
}

Side parse_side(const std::string& s) {
  if (s == "+" || s == "plus") return Side::plus;
  if (s == "-" || s == "minus" || s == "\xE2\x88\x92") return Side::minus;
  throw InputError("--side must be '+' or '-', got '" + s + "'");
}

Problem load_problem(const Flags& flags) {
  if (flags.problem.empty()) throw InputError("--problem is required");
  Json j = read_json_file(flags.problem);
  if (!flags.window.empty()) j["window"] = flags.window;
  return problem_from_json(j);
}

// Operands come from the command line, or from the seeded family when --seed
// is given and fewer operands were passed.
std::vector<PiecewiseDist> operands(const Flags& flags, std::size_t count) {
  std::vector<PiecewiseDist> ds;
  for (const auto& text : flags.inputs) ds.push_back(parse_dist(text));
  if (ds.size() < count && flags.seed) {
    RandomFamily fam(*flags.seed);
    while (ds.size() < count) ds.push_back(fam.dist());
  }
  if (ds.size() != count) {
    throw InputError("expected " + std::to_string(count) + " distribution argument(s), got " +
                     std::to_string(flags.inputs.size()));
  }
  return ds;
}

std::vector<InterfaceSpec> interfaces_for(const Flags& flags) {
  if (!flags.interface_path.empty()) {
    const Json j = read_json_file(flags.interface_path);
    std::vector<InterfaceSpec> specs;
    if (j.is_array()) {
      for (std::size_t k = 0; k < j.size(); ++k) {
        specs.push_back(interface_from_json(j[k], "interfaces[" + std::to_string(k) + "]"));
      }
    } else {
      specs.push_back(interface_from_json(j));
    }
    return specs;
  }
  return load_problem(flags).interfaces;
}

Json class_json(const InterfaceSpec& spec) {
  const InterfaceClass c = classify(spec);
  return {{"point", spec.point},
          {"kind", to_string(c.kind)},
          {"dimension", c.dimension},
          {"rank_a", c.rank_a},
          {"rank_b", c.rank_b},
          {"rank_ab", c.rank_ab},
          {"rank_deficient", c.rank_deficient}};
}

PiecewiseDist solution_from_file(const std::string& path) {
  const Json j = read_json_file(path);
  if (j.contains("solutions")) {
    const Json& sols = j["solutions"];
    if (!sols.is_array() || sols.empty()) throw InputError(path + ": the report contains no solution");
    return dist_from_json(sols[0]);
  }
  return dist_from_json(j);
}

int cmd_star(const Flags& flags, std::ostream& out) {
  const auto ds = operands(flags, 2);
  emit(flags, dist_document(star(ds[0], ds[1])), out);
  return kOk;
}

int cmd_d(const Flags& flags, std::ostream& out) {
  if (flags.order < 0) throw InputError("--order must be non-negative");
  const auto ds = operands(flags, 1);
  emit(flags, dist_document(derivative(ds[0], flags.order)), out);
  return kOk;
}

int cmd_dtilde(const Flags& flags, std::ostream& out) {
  if (flags.order < 0) throw InputError("--order must be non-negative");
  const auto ds = operands(flags, 1);
  std::vector<double> pts = flags.points;
  if (pts.empty()) pts = ds[0].breakpoints();
  std::sort(pts.begin(), pts.end());
  if (std::adjacent_find(pts.begin(), pts.end()) != pts.end()) throw InputError("--points contains duplicates");
  emit(flags, dist_document(tilde_d(ds[0], PointSet(pts), flags.order)), out);
  return kOk;
}

int cmd_fhat(const Flags& flags, std::ostream& out) {
  const auto ds = operands(flags, 1);
  Json list = Json::array();
  for (const auto& spec : interfaces_for(flags)) {
    const PiecewiseDist trace = f_hat_trace(spec, ds[0]);
    const PiecewiseDist shift = f_hat_shift(spec, ds[0]);
    const auto agree = approx_equal(trace, shift, flags.tol);
    list.push_back({{"point", spec.point},
                    {"value", dist_document(trace)},
                    {"forms_agree", agree.equal},
                    {"form_difference", std::max(agree.max_piece_diff, agree.max_delta_diff)}});
  }
  emit(flags, list, out);
  return kOk;
}

int cmd_classify(const Flags& flags, std::ostream& out) {
  Json list = Json::array();
  for (const auto& spec : interfaces_for(flags)) list.push_back(class_json(spec));
  emit(flags, list, out);
  return kOk;
}

int cmd_ode2(const Flags& flags, std::ostream& out) {
  const Problem p = load_problem(flags);
  const Ode2Operator op = build_ode2(p.ode, p.interfaces, parse_form(flags.form));
  Json a = Json::array();
  Json b = Json::array();
  for (const auto& c : op.coeffs.a_tilde) a.push_back(print_dist(c));
  for (const auto& c : op.coeffs.b_tilde) b.push_back(print_dist(c));
  Json doc = {{"form", to_string(op.form)}, {"points", op.points.points()}, {"a_tilde", a}, {"b_tilde", b}};
  Json ifs = Json::array();
  for (const auto& spec : op.interfaces) ifs.push_back(class_json(spec));
  doc["interfaces"] = ifs;
  if (!flags.inputs.empty()) {
    const auto ds = operands(flags, 1);
    doc["residual"] = dist_document(apply_ode2(op, ds[0]));
  }
  emit(flags, doc, out);
  return kOk;
}

// Samples each interval between window ends and interface points, endpoints
// included; at an interface both one-sided values appear.
void write_csv(const PiecewiseDist& psi, const Problem& p, int samples, std::ostream& out) {
  std::vector<double> cuts{p.window.lo};
  for (const auto& s : p.interfaces) cuts.push_back(s.point);
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.push_back(p.window.hi);
  out << "x,re,im\n";
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    for (int s = 0; s < samples; ++s) {
      const double x = s + 1 == samples ? b : a + (b - a) * s / (samples - 1);
      const double mid = 0.5 * (a + b);
      const Complex v = psi.piece_at(mid, Side::plus)(x);
      out << number(x) << "," << number(v.real()) << "," << number(v.imag()) << "\n";
    }
  }
}

int cmd_solve(const Flags& flags, std::ostream& out, std::ostream& err) {
  if (flags.samples < 2) throw InputError("--samples must be at least 2");
  const Problem p = load_problem(flags);
  const SolutionReport report = solve(p.ode, p.interfaces, p.init, p.window);
  const Json doc = to_json(report);
  if (!report.consistent) {
    if (!flags.out.empty()) emit(flags, doc, out);
    else out << doc.dump(2) << "\n";
    err << "interface conditions are inconsistent with the initial data\n";
    return kVerificationFailed;
  }
  if (!flags.out.empty()) emit(flags, doc, out);
  write_csv(report.solutions.front(), p, flags.samples, out);
  return kOk;
}

int cmd_verify(const Flags& flags, std::ostream& out) {
  const Problem p = load_problem(flags);
  PiecewiseDist psi;
  if (!flags.solution.empty()) {
    psi = solution_from_file(flags.solution);
  } else {
    psi = operands(flags, 1)[0];
  }
  const Ode2Operator op = build_ode2(p.ode, p.interfaces, parse_form(flags.form));
  const VerifyReport rep = verify(op, psi, flags.tol, p.window);
  emit(flags,
       {{"pass", rep.pass},
        {"tol", flags.tol},
        {"piece_max", rep.piece_max},
        {"delta_max", rep.delta_max},
        {"detail", rep.detail}},
       out);
  return rep.pass ? kOk : kVerificationFailed;
}

TestFn test_function(const Flags& flags) {
  if (flags.test_body.empty()) return TestFn::bump(0.0, 2.0);
  if (flags.support.size() != 2) throw InputError("--test needs --support A B");
  try {
    return TestFn(parse_smooth(flags.test_body), flags.support[0], flags.support[1]);
  } catch (const ConstructionError& e) {
    throw InputError(std::string("--test: ") + e.what());
  }
}

int cmd_pair(const Flags& flags, std::ostream& out) {
  const auto ds = operands(flags, 1);
  const TestFn g = test_function(flags);
  const Complex v = pair(ds[0], g);
  emit(flags, {{"re", v.real()}, {"im", v.imag()}}, out);
  return kOk;
}

int cmd_mollifier(const Flags& flags, std::ostream& out) {
  if (flags.delta_order < 0) throw InputError("--order must be non-negative");
  if (!(flags.eps > 0.0)) throw InputError("--eps must be positive");
  const auto ds = operands(flags, 1);
  const Side side = parse_side(flags.side);
  const TestFn g = test_function(flags);
  const Complex limit = pair(delta_shift(side, flags.delta_order, flags.x0, ds[0]), g);
  const Complex approx = pair(mollifier_apply(side, flags.delta_order, flags.eps, ds[0], flags.x0), g);
  const double error = std::abs(approx - limit);
  const bool pass = error < flags.threshold;
  if (flags.csv) {
    out << "eps,approx_re,approx_im,limit_re,limit_im,error\n"
        << number(flags.eps) << "," << number(approx.real()) << "," << number(approx.imag()) << ","
        << number(limit.real()) << "," << number(limit.imag()) << "," << number(error) << "\n";
  }
  if (!flags.csv || !flags.out.empty()) {
    emit(flags,
         {{"side", side == Side::plus ? "+" : "-"},
          {"order", flags.delta_order},
          {"eps", flags.eps},
          {"approx", complex_to_json(approx)},
          {"limit", complex_to_json(limit)},
          {"error", error},
          {"threshold", flags.threshold},
          {"pass", pass}},
         out);
  }
  return pass ? kOk : kVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Flags flags;
  CLI::App app{"Piecewise distributions, star products and ODEs with interface conditions", "pdist"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", flags.out, "Write the JSON document here");
    sub->add_option("--tol", flags.tol, "Tolerance (default 1e-9)");
    sub->add_option("--seed", flags.seed, "Draw missing operands from the seeded random family");
  };
  auto add_problem = [&](CLI::App* sub) {
    sub->add_option("--problem", flags.problem, "Problem file (JSON)");
    sub->add_option("--window", flags.window, "Window A B overriding the problem file")->expected(2);
  };
  auto add_inputs = [&](CLI::App* sub, const char* what) { sub->add_option("inputs", flags.inputs, what); };

  auto* star_cmd = app.add_subcommand("star", "Star product F * G");
  add_common(star_cmd);
  add_inputs(star_cmd, "Two distributions");

  auto* d_cmd = app.add_subcommand("d", "Distributional derivative");
  add_common(d_cmd);
  add_inputs(d_cmd, "Distribution");
  d_cmd->add_option("--order", flags.order, "Derivative order");

  auto* dt_cmd = app.add_subcommand("dtilde", "Modified derivative");
  add_common(dt_cmd);
  add_inputs(dt_cmd, "Distribution");
  dt_cmd->add_option("--order", flags.order, "Derivative order");
  dt_cmd->add_option("--points", flags.points, "Interface points (default: breakpoints of F)")->delimiter(',');

  auto* fhat_cmd = app.add_subcommand("fhat", "Interface operator applied to psi");
  add_common(fhat_cmd);
  add_problem(fhat_cmd);
  add_inputs(fhat_cmd, "psi");
  fhat_cmd->add_option("--interface", flags.interface_path, "Interface spec file (JSON object or array)");

  auto* classify_cmd = app.add_subcommand("classify", "Classify interface conditions");
  add_common(classify_cmd);
  add_problem(classify_cmd);
  classify_cmd->add_option("--interface", flags.interface_path, "Interface spec file (JSON object or array)");

  auto* ode2_cmd = app.add_subcommand("ode2", "Build the distributional equation");
  add_common(ode2_cmd);
  add_problem(ode2_cmd);
  add_inputs(ode2_cmd, "Optional psi to apply the operator to");
  ode2_cmd->add_option("--form", flags.form, "tilde or star");

  auto* solve_cmd = app.add_subcommand("solve", "Solve the problem: CSV on stdout, JSON report to --out");
  add_common(solve_cmd);
  add_problem(solve_cmd);
  solve_cmd->add_option("--samples", flags.samples, "CSV samples per interval");

  auto* verify_cmd = app.add_subcommand("verify", "Check that psi solves the distributional equation");
  add_common(verify_cmd);
  add_problem(verify_cmd);
  add_inputs(verify_cmd, "psi");
  verify_cmd->add_option("--solution", flags.solution, "Solve report or distribution JSON");
  verify_cmd->add_option("--form", flags.form, "tilde or star");

  auto* pair_cmd = app.add_subcommand("pair", "Pair F with a test function (default: bump on [-2, 2])");
  add_common(pair_cmd);
  add_inputs(pair_cmd, "Distribution");
  pair_cmd->add_option("--test", flags.test_body, "Test function body");
  pair_cmd->add_option("--support", flags.support, "Support A B of the test function")->expected(2);

  auto* moll_cmd = app.add_subcommand("mollifier-check", "Compare a mollified shifting delta with its limit");
  add_common(moll_cmd);
  moll_cmd->add_option("--dist", flags.inputs, "Distribution F");
  moll_cmd->add_option("--side", flags.side, "+ or -");
  moll_cmd->add_option("--order", flags.delta_order, "Delta derivative order");
  moll_cmd->add_option("--eps", flags.eps, "Mollifier half-width");
  moll_cmd->add_option("--x0", flags.x0, "Point of the shifting delta");
  moll_cmd->add_option("--threshold", flags.threshold, "Pass threshold on the pairing error");
  moll_cmd->add_flag("--csv", flags.csv, "Print CSV");
  moll_cmd->add_option("--test", flags.test_body, "Test function body");
  moll_cmd->add_option("--support", flags.support, "Support A B of the test function")->expected(2);

  // CLI11 consumes the vector from the back.
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (star_cmd->parsed()) return cmd_star(flags, out);
    if (d_cmd->parsed()) return cmd_d(flags, out);
    if (dt_cmd->parsed()) return cmd_dtilde(flags, out);
    if (fhat_cmd->parsed()) return cmd_fhat(flags, out);
    if (classify_cmd->parsed()) return cmd_classify(flags, out);
    if (ode2_cmd->parsed()) return cmd_ode2(flags, out);
    if (solve_cmd->parsed()) return cmd_solve(flags, out, err);
    if (verify_cmd->parsed()) return cmd_verify(flags, out);
    if (pair_cmd->parsed()) return cmd_pair(flags, out);
    if (moll_cmd->parsed()) return cmd_mollifier(flags, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace pdist::cli
