#include "probe/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/tools/toms748_solve.hpp>

namespace probe {

bool Box::contains(const VecX& x, double slack) const {
  for (int i = 0; i < dim(); ++i) {
    if (x(i) < lo(i) - slack || x(i) > hi(i) + slack) return false;
  }
  return true;
}

namespace {

MatX finite_difference_jacobian(const ResidualFn& f, const VecX& x, const VecX& fx, double rel_step) {
  const int k = static_cast<int>(x.size());
  MatX j(fx.size(), k);
  VecX xp = x;
  for (int c = 0; c < k; ++c) {
    const double h = rel_step * std::max(1.0, std::abs(x(c)));
    xp(c) = x(c) + h;
    const VecX fp = f(xp);
    xp(c) = x(c) - h;
    const VecX fm = f(xp);
    xp(c) = x(c);
    j.col(c) = (fp - fm) / (2.0 * h);
  }
  return j;
}

bool finite(const VecX& v) { return v.allFinite(); }

}  // namespace

std::vector<VecX> solve_square_system(const ResidualFn& residual, const std::vector<VecX>& seeds, const Box& box,
                                      const NewtonOptions& opt, const JacobianFn& jacobian) {
  std::vector<VecX> roots;
  for (const VecX& seed : seeds) {
    VecX x = seed;
    VecX fx = residual(x);
    if (!finite(fx)) continue;
    double norm = fx.norm();
    bool converged = fx.lpNorm<Eigen::Infinity>() <= opt.residual_tol;
    for (int it = 0; it < opt.max_iterations && !converged; ++it) {
      const MatX j = jacobian ? jacobian(x) : finite_difference_jacobian(residual, x, fx, opt.fd_step);
      const VecX step = j.colPivHouseholderQr().solve(-fx);
      if (!finite(step)) break;
      // Backtracking on |f|.
      double lambda = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 30; ++ls) {
        const VecX trial = x + lambda * step;
        const VecX ft = residual(trial);
        if (finite(ft) && ft.norm() < norm * (1.0 - 1e-4 * lambda)) {
          x = trial;
          fx = ft;
          norm = ft.norm();
          accepted = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!accepted) {
        // A full step that lands on the tolerance is still a root.
        const VecX trial = x + step;
        const VecX ft = residual(trial);
        if (finite(ft) && ft.lpNorm<Eigen::Infinity>() <= opt.residual_tol) {
          x = trial;
          fx = ft;
        }
        converged = fx.lpNorm<Eigen::Infinity>() <= opt.residual_tol;
        break;
      }
      converged = fx.lpNorm<Eigen::Infinity>() <= opt.residual_tol;
    }
    if (!converged || !box.contains(x, opt.box_slack)) continue;
    const bool seen = std::any_of(roots.begin(), roots.end(),
                                  [&](const VecX& r) { return (r - x).norm() <= opt.dedup_distance; });
    if (!seen) roots.push_back(x);
  }
  return roots;
}

std::vector<VecX> make_seed_grid(const Box& box, int per_axis, int grid_cap, int random_count, std::uint64_t seed) {
  const int k = box.dim();
  std::vector<VecX> seeds;
  long total = 1;
  for (int i = 0; i < k && total <= grid_cap; ++i) total *= per_axis;
  if (total <= grid_cap) {
    for (long idx = 0; idx < total; ++idx) {
      VecX x(k);
      long rem = idx;
      for (int i = 0; i < k; ++i) {
        const int c = static_cast<int>(rem % per_axis);
        rem /= per_axis;
        const double frac = (c + 0.5) / per_axis;
        x(i) = box.lo(i) + frac * (box.hi(i) - box.lo(i));
      }
      seeds.push_back(x);
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < random_count; ++s) {
    VecX x(k);
    for (int i = 0; i < k; ++i) x(i) = box.lo(i) + unit(rng) * (box.hi(i) - box.lo(i));
    seeds.push_back(x);
  }
  return seeds;
}

std::vector<double> scalar_roots(const std::function<double(double)>& f, double lo, double hi, int samples,
                                 double x_tol) {
  std::vector<double> roots;
  if (!(hi > lo) || samples < 1) return roots;
  double x0 = lo;
  double f0 = f(x0);
  auto tol = [x_tol](double a, double b) { return std::abs(a - b) <= x_tol * std::max(1.0, std::abs(a)); };
  for (int i = 1; i <= samples; ++i) {
    const double x1 = (i == samples) ? hi : lo + (hi - lo) * i / samples;
    const double f1 = f(x1);
    if (std::isfinite(f0) && std::isfinite(f1)) {
      if (f0 == 0.0) {
        roots.push_back(x0);
      } else if ((f0 < 0) != (f1 < 0) && f1 != 0.0) {
        std::uintmax_t iters = 100;
        auto [a, b] = boost::math::tools::toms748_solve(f, x0, x1, f0, f1, tol, iters);
        roots.push_back(0.5 * (a + b));
      }
    }
    x0 = x1;
    f0 = f1;
  }
  if (std::isfinite(f0) && f0 == 0.0) roots.push_back(x0);
  return roots;
}

}  // namespace probe
