#include "pdist/json_io.hpp"

#include <fstream>
#include <sstream>

#include "pdist/dsl.hpp"
#include "pdist/errors.hpp"

namespace pdist {
namespace {

const Json& field(const Json& j, const char* name, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  auto it = j.find(name);
  if (it == j.end()) throw InputError(where + "." + name + ": missing");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

SmoothExpr expression(const Json& j, const std::string& where) {
  if (j.is_number()) return SmoothExpr(j.get<double>());
  if (!j.is_string()) throw InputError(where + ": expected an expression string");
  try {
    return parse_smooth(j.get<std::string>());
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

Eigen::MatrixXcd matrix(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = 0;
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array()) throw InputError(where + "[" + std::to_string(r) + "]: expected an array");
    if (r == 0) cols = static_cast<Eigen::Index>(j[r].size());
    if (static_cast<Eigen::Index>(j[r].size()) != cols) throw InputError(where + ": rows have different lengths");
  }
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = complex_from_json(j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                                  where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

Json matrix_to_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Json complex_to_json(Complex c) { return {{"re", c.real()}, {"im", c.imag()}}; }

Complex complex_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2) return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
  if (j.is_object()) {
    const double re = j.contains("re") ? number(j["re"], where + ".re") : 0.0;
    const double im = j.contains("im") ? number(j["im"], where + ".im") : 0.0;
    return {re, im};
  }
  throw InputError(where + ": expected a complex number");
}

Json to_json(const PiecewiseDist& f) {
  Json pieces = Json::array();
  for (const auto& p : f.pieces()) pieces.push_back(p.str());
  Json deltas = Json::array();
  for (const auto& d : f.delta_terms()) {
    deltas.push_back({{"point_index", d.point_index},
                      {"order", d.order},
                      {"re", d.coefficient.real()},
                      {"im", d.coefficient.imag()}});
  }
  return {{"breakpoints", f.breakpoints()}, {"pieces", pieces}, {"deltas", deltas}};
}

PiecewiseDist dist_from_json(const Json& j) {
  const std::string where = "distribution";
  const Json& bp = field(j, "breakpoints", where);
  const Json& ps = field(j, "pieces", where);
  if (!bp.is_array()) throw InputError(where + ".breakpoints: expected an array");
  if (!ps.is_array()) throw InputError(where + ".pieces: expected an array");
  std::vector<double> breakpoints;
  for (std::size_t i = 0; i < bp.size(); ++i) {
    breakpoints.push_back(number(bp[i], where + ".breakpoints[" + std::to_string(i) + "]"));
  }
  std::vector<SmoothExpr> pieces;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    pieces.push_back(expression(ps[i], where + ".pieces[" + std::to_string(i) + "]"));
  }
  std::vector<std::vector<Complex>> deltas(breakpoints.size());
  if (j.contains("deltas")) {
    const Json& ds = j["deltas"];
    if (!ds.is_array()) throw InputError(where + ".deltas: expected an array");
    for (std::size_t k = 0; k < ds.size(); ++k) {
      const std::string w = where + ".deltas[" + std::to_string(k) + "]";
      const Json& pi = field(ds[k], "point_index", w);
      const Json& ord = field(ds[k], "order", w);
      if (!pi.is_number_integer() || pi.get<long>() < 0 || pi.get<std::size_t>() >= breakpoints.size()) {
        throw InputError(w + ".point_index: not a valid breakpoint index");
      }
      if (!ord.is_number_integer() || ord.get<long>() < 0 || ord.get<long>() > 1000) {
        throw InputError(w + ".order: expected a non-negative integer");
      }
      auto& coefs = deltas[pi.get<std::size_t>()];
      const auto o = ord.get<std::size_t>();
      if (coefs.size() <= o) coefs.resize(o + 1, 0.0);
      coefs[o] += complex_from_json(ds[k], w);
    }
  }
  if (pieces.size() != breakpoints.size() + 1) {
    throw InputError(where + ".pieces: expected " + std::to_string(breakpoints.size() + 1) + " entries, got " +
                     std::to_string(pieces.size()));
  }
  try {
    return canonicalize(std::move(breakpoints), std::move(pieces), std::move(deltas));
  } catch (const ConstructionError& e) {
    throw InputError(where + ": " + e.what());
  }
}

Json to_json(const InterfaceSpec& spec) {
  return {{"point", spec.point}, {"A", matrix_to_json(spec.A)}, {"B", matrix_to_json(spec.B)}};
}

InterfaceSpec interface_from_json(const Json& j, const std::string& where) {
  const double point = number(field(j, "point", where), where + ".point");
  Eigen::MatrixXcd A = matrix(field(j, "A", where), where + ".A");
  Eigen::MatrixXcd B = matrix(field(j, "B", where), where + ".B");
  return InterfaceSpec::make(point, std::move(A), std::move(B));
}

Problem problem_from_json(const Json& j) {
  const std::string where = "problem";
  if (!j.is_object()) throw InputError(where + ": expected an object");
  const Json& ode = field(j, "ode", where);
  const Json& order = field(ode, "order", where + ".ode");
  if (!order.is_number_integer() || order.get<long>() < 1 || order.get<long>() > 32) {
    throw InputError(where + ".ode.order: expected an integer between 1 and 32");
  }
  const int n = order.get<int>();
  const Json& cs = field(ode, "coeffs", where + ".ode");
  if (!cs.is_array() || cs.size() != static_cast<std::size_t>(n) + 1) {
    throw InputError(where + ".ode.coeffs: expected an array of " + std::to_string(n + 1) + " expressions");
  }
  std::vector<SmoothExpr> coeffs;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    coeffs.push_back(expression(cs[i], where + ".ode.coeffs[" + std::to_string(i) + "]"));
  }
  const SmoothExpr rhs = ode.contains("rhs") ? expression(ode["rhs"], where + ".ode.rhs") : SmoothExpr();

  Problem p;
  if (j.contains("window")) {
    const Json& w = j["window"];
    if (!w.is_array() || w.size() != 2) throw InputError(where + ".window: expected [a, b]");
    p.window = {number(w[0], where + ".window[0]"), number(w[1], where + ".window[1]")};
    if (!(p.window.lo < p.window.hi)) throw InputError(where + ".window: expected a < b");
  }
  if (j.contains("interfaces")) {
    const Json& is = j["interfaces"];
    if (!is.is_array()) throw InputError(where + ".interfaces: expected an array");
    for (std::size_t k = 0; k < is.size(); ++k) {
      const std::string w = where + ".interfaces[" + std::to_string(k) + "]";
      InterfaceSpec spec = interface_from_json(is[k], w);
      if (spec.order() != n) {
        throw InputError(w + ": A and B must have n=" + std::to_string(n) + " columns, got " +
                         std::to_string(spec.order()));
      }
      p.interfaces.push_back(std::move(spec));
    }
  }
  if (j.contains("init")) {
    const Json& init = j["init"];
    p.init.x = number(field(init, "x", where + ".init"), where + ".init.x");
    const Json& jet = field(init, "jet", where + ".init");
    if (!jet.is_array() || jet.size() != static_cast<std::size_t>(n)) {
      throw InputError(where + ".init.jet: expected " + std::to_string(n) + " entries");
    }
    p.init.jet.resize(n);
    for (int i = 0; i < n; ++i) {
      p.init.jet[i] = complex_from_json(jet[static_cast<std::size_t>(i)], where + ".init.jet[" + std::to_string(i) + "]");
    }
  } else {
    p.init.x = p.window.lo;
    p.init.jet = Eigen::VectorXcd::Zero(n);
  }
  p.ode = OdeSpec::make(std::move(coeffs), rhs, p.window);
  return p;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": invalid JSON: " + e.what());
  }
}

Problem parse_problem(const std::string& path) { return problem_from_json(read_json_file(path)); }

Json to_json(const SolutionReport& report) {
  Json sols = Json::array();
  for (const auto& s : report.solutions) sols.push_back(to_json(s));
  Json ifs = Json::array();
  for (const auto& r : report.interfaces) {
    ifs.push_back({{"point", r.point}, {"status", to_string(r.status)}, {"fiber_dim", r.fiber_dim}});
  }
  Json out = {{"solutions", sols},
              {"interfaces", ifs},
              {"residual", {{"piece_max", report.piece_residual}, {"delta_max", report.delta_residual}}},
              {"exact", report.exact}};
  out["dimension"] = report.consistent ? Json(report.dimension) : Json(nullptr);
  return out;
}

}  // namespace pdist
