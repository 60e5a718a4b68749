#include "kothe/optim.hpp"

#include <algorithm>
#include <cmath>

namespace kothe::optim {

double gauge_bisection(const std::function<double(double)>& g, double start, double rel_tol) {
  if (!(start > 0.0) || !std::isfinite(start)) start = 1.0;
  double hi = start;
  int guard = 0;
  while (!(g(hi) <= 1.0)) {
    hi *= 2.0;
    if (++guard > 300) return kInf;
  }
  double lo = hi / 2.0;
  guard = 0;
  while (g(lo) <= 1.0) {
    hi = lo;
    lo /= 2.0;
    if (++guard > 300) return 0.0;
  }
  // g(lo) > 1 >= g(hi)
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

ScalarMinimum golden_section(const std::function<double(double)>& f, double lo, double hi,
                             double rel_tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  ScalarMinimum best{lo, f(lo)};
  auto consider = [&](double x, double v) {
    if (v < best.value) best = {x, v};
  };
  consider(hi, f(hi));
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = f(c), fd = f(d);
  consider(c, fc);
  consider(d, fd);
  for (int it = 0; it < 400 && (hi - lo) > rel_tol * std::max(std::abs(hi), 1e-300); ++it) {
    bool go_left;
    if (std::isinf(fc) && std::isinf(fd))
      go_left = best.argmin < c;  // the finite region is an interval containing best.argmin
    else
      go_left = fc < fd;
    if (go_left) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = f(c);
      consider(c, fc);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = f(d);
      consider(d, fd);
    }
  }
  return best;
}

ScalarMinimum minimize_on_positive_axis(const std::function<double(double)>& f, double start,
                                        double rel_tol) {
  if (!(start > 0.0) || !std::isfinite(start)) start = 1.0;
  double m = start;
  double fm = f(m);
  for (int guard = 0; !std::isfinite(fm); ++guard) {
    if (guard > 600) return {start, kInf};
    m = guard % 2 == 0 ? start * std::ldexp(1.0, guard / 2 + 1) : start * std::ldexp(1.0, -(guard / 2 + 1));
    fm = f(m);
  }
  // Grow to the right while decreasing.
  double hi = 2.0 * m;
  double fhi = f(hi);
  for (int guard = 0; fhi < fm && guard < 600; ++guard) {
    m = hi;
    fm = fhi;
    hi *= 2.0;
    fhi = f(hi);
  }
  // Grow to the left while decreasing.
  double lo = 0.5 * m;
  double flo = f(lo);
  for (int guard = 0; flo < fm && guard < 600; ++guard) {
    hi = m;
    m = lo;
    fm = flo;
    lo *= 0.5;
    flo = f(lo);
  }
  ScalarMinimum best = golden_section(f, lo, hi, rel_tol);
  if (fm < best.value) best = {m, fm};
  return best;
}

namespace {

double quad(const std::vector<double>& P, std::span<const double> a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += P[i * n + j] * a[j];
    s += a[i] * row;
  }
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

EllipsoidResult ellipsoid_minimize(const std::function<Cut(std::span<const double>)>& oracle,
                                   std::vector<double> center, std::span<const double> radii,
                                   const EllipsoidOptions& options) {
  const std::size_t n = center.size();
  EllipsoidResult result;
  result.argmin = center;
  if (n == 0) {
    Cut c = oracle(center);
    result.value = c.feasible ? c.value : kInf;
    result.lower_bound = result.value;
    result.converged = true;
    return result;
  }

  std::vector<double> P(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) P[i * n + i] = radii[i] * radii[i];
  std::vector<double> Pa(n);

  auto gap_closed = [&] {
    if (!std::isfinite(result.value)) return false;
    const double tol = std::max(options.abs_tol, options.rel_tol * std::abs(result.value));
    if (result.value - result.lower_bound <= tol) return true;
    return options.known_lower_bound && result.value - *options.known_lower_bound <= tol;
  };

  for (int it = 0; it < options.max_iterations; ++it) {
    result.iterations = it + 1;
    if (options.linear_objective) {
      const auto& c = *options.linear_objective;
      const double spread = std::sqrt(std::max(quad(P, c, n), 0.0));
      result.lower_bound = std::max(result.lower_bound, dot(c, center) - spread);
    }

    Cut cut = oracle(center);
    if (cut.candidate_value && *cut.candidate_value < result.value) {
      result.value = *cut.candidate_value;
      result.argmin = cut.candidate;
    }
    if (cut.feasible && cut.value < result.value) {
      result.value = cut.value;
      result.argmin = center;
    }

    std::vector<double>& a = cut.normal;
    double b;
    const double aPa = quad(P, a, n);
    if (!(aPa > 0.0) || !std::isfinite(aPa)) break;
    const double scale = std::sqrt(aPa);
    if (cut.feasible) {
      result.lower_bound = std::max(result.lower_bound, cut.value - scale);
      // Keep {z : a.(z - x) <= best - f(x)}.
      b = dot(a, center) - (cut.value - result.value);
    } else {
      b = cut.rhs;
    }
    double alpha = (dot(a, center) - b) / scale;
    if (alpha >= 1.0) {
      // Nothing in the ellipsoid improves on the incumbent (or is feasible).
      if (cut.feasible || std::isfinite(result.value))
        result.lower_bound = std::max(result.lower_bound, result.value);
      break;
    }
    alpha = std::max(alpha, 0.0);

    if (gap_closed()) {
      result.converged = true;
      return result;
    }

    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += P[i * n + j] * a[j];
      Pa[i] = s / scale;
    }
    if (n == 1) {
      // Exact interval update: keep {z : a z <= b}.
      const double r = std::sqrt(P[0]);
      double lo = center[0] - r, hi = center[0] + r;
      const double bound = b / a[0];
      if (a[0] > 0.0)
        hi = std::min(hi, bound);
      else
        lo = std::max(lo, bound);
      if (hi < lo) break;
      center[0] = 0.5 * (lo + hi);
      P[0] = 0.25 * (hi - lo) * (hi - lo);
      continue;
    }
    const double dn = static_cast<double>(n);
    const double tau = (1.0 + dn * alpha) / (dn + 1.0);
    const double sigma = 2.0 * (1.0 + dn * alpha) / ((dn + 1.0) * (1.0 + alpha));
    const double delta = dn * dn * (1.0 - alpha * alpha) / (dn * dn - 1.0);
    for (std::size_t i = 0; i < n; ++i) center[i] -= tau * Pa[i];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        const double v = delta * (P[i * n + j] - sigma * Pa[i] * Pa[j]);
        P[i * n + j] = v;
        P[j * n + i] = v;
      }
  }
  result.converged = gap_closed();
  return result;
}

std::vector<double> finite_difference_gradient(const std::function<double(std::span<const double>)>& f,
                                               std::span<const double> x) {
  std::vector<double> point(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
    const double saved = point[i];
    point[i] = saved + h;
    const double up = f(point);
    point[i] = saved - h;
    const double down = f(point);
    point[i] = saved;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace kothe::optim
