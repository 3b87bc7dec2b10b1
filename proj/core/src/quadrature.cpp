#include "levytrim/quadrature.hpp"

#include "levytrim/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <vector>

namespace levytrim::quad {

namespace {

constexpr unsigned kMaxDepth = 18;
using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

// On intervals much shorter than their distance from 0 the nodes themselves carry rounding
// error of order eps |x| / (b − a), so the error estimate stalls above tight relative
// tolerances and bisection runs to the full depth for nothing.
unsigned depth_for(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) return kMaxDepth;
  return (b - a) <= 1e-4 * std::max(std::abs(a), std::abs(b)) ? 3u : kMaxDepth;
}

}  // namespace

double integrate_log(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (!(b > a)) return 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  const double u_lo = std::isinf(b) ? -inf : -std::log(b);
  const double u_hi = (a <= 0.0) ? inf : -std::log(a);
  auto g = [&](double u) {
    const double y = std::exp(-u);
    if (y == 0.0 || std::isinf(y)) return 0.0;
    const double v = f(y) * y;
    return std::isfinite(v) ? v : 0.0;
  };
  double err = 0.0;
  double l1 = 0.0;
  const double r = Kronrod::integrate(g, u_lo, u_hi, depth_for(a, b), rel_tol, &err, &l1);
  if (!std::isfinite(r)) throw NumericFailure("log-substituted quadrature diverged", a, b);
  return r;
}

double integrate_finite(const std::function<double(double)>& f, double a, double b,
                        double rel_tol) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  const double r = Kronrod::integrate(f, a, b, depth_for(a, b), rel_tol, &err);
  if (!std::isfinite(r)) throw NumericFailure("finite-interval quadrature diverged", a, b);
  return r;
}

FourierPair integrate_fourier_tail(const std::function<double(double)>& f, double c, double omega,
                                   double rel_tol) {
  // Shift to [0, ∞): ∫_0^∞ f(c+s) e^{iω(c+s)} ds.
  auto shifted = [&](double s) { return f(c + s); };
  // Construction precomputes the node tables and dominates the cost; keep one pair per
  // thread and tolerance.
  struct Cached {
    double tol;
    boost::math::quadrature::ooura_fourier_cos<double> fc;
    boost::math::quadrature::ooura_fourier_sin<double> fs;
  };
  thread_local std::vector<std::unique_ptr<Cached>> cache;
  Cached* hit = nullptr;
  for (auto& c_ptr : cache) {
    if (c_ptr->tol == rel_tol) hit = c_ptr.get();
  }
  if (hit == nullptr) {
    cache.push_back(std::unique_ptr<Cached>(new Cached{rel_tol, boost::math::quadrature::ooura_fourier_cos<double>(rel_tol), boost::math::quadrature::ooura_fourier_sin<double>(rel_tol)}));
    hit = cache.back().get();
  }
  auto& fc = hit->fc;
  auto& fs = hit->fs;
  const double cc = fc.integrate(shifted, omega).first;
  const double ss = fs.integrate(shifted, omega).first;
  const double co = std::cos(omega * c);
  const double si = std::sin(omega * c);
  return {co * cc - si * ss, si * cc + co * ss};
}

}  // namespace levytrim::quad
