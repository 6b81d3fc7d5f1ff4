#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace probe {

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Axis-aligned parameter box.
struct Box {
  VecX lo;
  VecX hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const VecX& x, double slack) const;
};

struct NewtonOptions {
  int max_iterations = 60;
  double residual_tol = 1e-10;  // |residual|_inf at a root
  double dedup_distance = 1e-8;
  double fd_step = 1e-7;        // relative finite-difference step
  double box_slack = 1e-9;
};

using ResidualFn = std::function<VecX(const VecX&)>;
using JacobianFn = std::function<MatX(const VecX&)>;

/// Multi-start damped Newton for square systems R^k -> R^k (k <= 20).
/// Roots outside the box are discarded and the rest deduplicated. An empty
/// result means no seed converged.
std::vector<VecX> solve_square_system(const ResidualFn& residual, const std::vector<VecX>& seeds, const Box& box,
                                      const NewtonOptions& options = {}, const JacobianFn& jacobian = {});

/// Seed set: a uniform grid of `per_axis`^k points (capped at `grid_cap`)
/// plus `random_count` uniform samples drawn from a fixed-seed generator.
std::vector<VecX> make_seed_grid(const Box& box, int per_axis = 3, int grid_cap = 729, int random_count = 64,
                                 std::uint64_t seed = 0x5eed);

/// Real roots of a continuous scalar function on [lo, hi], found by
/// sign-change scanning over `samples` intervals and TOMS 748 refinement.
/// Non-finite samples split the scan. Tangential (even) roots are missed.
std::vector<double> scalar_roots(const std::function<double(double)>& f, double lo, double hi, int samples,
                                 double x_tol = 1e-14);

}  // namespace probe
