#include "pdist/random_family.hpp"

#include <algorithm>

namespace pdist {

double RandomFamily::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int RandomFamily::integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Complex RandomFamily::complex_unit() { return {uniform(), uniform()}; }

SmoothExpr RandomFamily::smooth() {
  const int kind = integer(0, 9);
  if (kind == 0) return {};
  const SmoothExpr x = SmoothExpr::x();
  SmoothExpr poly;
  const int degree = integer(0, 3);
  for (int d = degree; d >= 0; --d) poly = poly * x + SmoothExpr(uniform());
  switch (kind) {
    case 1:
      return poly * sin(x);
    case 2:
      return poly * cos(x);
    case 3:
      return poly * exp(x / 2.0);
    case 4:
      return poly + SmoothExpr(Complex(0.0, uniform())) * sin(x * 2.0);
    default:
      return poly;
  }
}

PiecewiseDist RandomFamily::dist(const std::vector<double>& candidates) {
  std::vector<double> pool = candidates;
  std::shuffle(pool.begin(), pool.end(), rng);
  const int count = integer(0, std::min<int>(max_points, static_cast<int>(pool.size())));
  std::vector<double> pts(pool.begin(), pool.begin() + count);
  std::sort(pts.begin(), pts.end());
  std::vector<SmoothExpr> pieces;
  for (int i = 0; i <= count; ++i) pieces.push_back(smooth());
  std::vector<std::vector<Complex>> deltas(pts.size());
  for (auto& coefs : deltas) {
    if (uniform(0.0, 1.0) >= delta_probability) continue;
    coefs.assign(static_cast<std::size_t>(integer(0, max_delta_order)) + 1, 0.0);
    for (auto& c : coefs) {
      if (integer(0, 2) != 0) c = complex_unit();
    }
  }
  return canonicalize(std::move(pts), std::move(pieces), std::move(deltas));
}

PiecewiseDist RandomFamily::two_sided(double x0) {
  return canonicalize({x0}, {smooth(), smooth()}, {});
}

Eigen::MatrixXcd RandomFamily::matrix(int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = integer(0, 3) == 0 ? Complex(0.0) : complex_unit();
  }
  return m;
}

}  // namespace pdist
