#include <doctest.h>

#include <random>

#include "probe/plucker.hpp"
#include "probe/solver.hpp"

using namespace probe;

namespace {

Vec3 gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double x = g(rng);
  const double y = g(rng);
  const double z = g(rng);
  return {x, y, z};
}

}  // namespace

TEST_CASE("planted transversal is recovered") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2, 2), len(0.2, 1.0);
  const Vec3 dir = Vec3(1, 1, 1).normalized();
  int recovered = 0;
  const int trials = 200;
  for (int i = 0; i < trials; ++i) {
    std::array<Segment3, 4> segs;
    for (auto& s : segs) {
      const Vec3 p = u(rng) * dir;
      const Vec3 e = gaussian(rng).normalized();
      s = {p - len(rng) * e, p + len(rng) * e};
    }
    try {
      for (const auto& t : line_transversals_4(segs, 1e-8)) {
        CHECK(t.side_residual <= 1e-10);
        if (std::abs(std::abs(t.line.dir.dot(dir)) - 1.0) < 1e-9 && point_line_distance(Vec3::Zero(), t.line) < 1e-8) {
          ++recovered;
        }
      }
    } catch (const DegenerateConfiguration&) {
    }
  }
  CHECK(recovered >= trials - 2);
}

TEST_CASE("parallel segments admit no transversal") {
  const Vec3 z(0, 0, 1);
  std::array<Segment3, 4> segs = {Segment3{Vec3(0, 0, 0), Vec3(0, 0, 1)}, Segment3{Vec3(1, 0, 0), Vec3(1, 0, 1)},
                                  Segment3{Vec3(0, 1, 0), Vec3(0, 1, 1)}, Segment3{Vec3(2, 3, 0), Vec3(2, 3, 1)}};
  CHECK(line_transversals_4(segs, 1e-8).empty());
  (void)z;
}

TEST_CASE("shared supporting line is degenerate") {
  std::array<Segment3, 4> segs = {Segment3{Vec3(0, 0, 0), Vec3(1, 0, 0)}, Segment3{Vec3(2, 0, 0), Vec3(3, 0, 0)},
                                  Segment3{Vec3(0, 1, 0), Vec3(0, 1, 1)}, Segment3{Vec3(1, 2, 3), Vec3(2, 1, 3)}};
  CHECK_THROWS_AS(line_transversals_4(segs, 1e-8), DegenerateConfiguration);
}

TEST_CASE("damped Newton finds the root in the box") {
  const ResidualFn f = [](const VecX& x) {
    VecX r(1);
    r(0) = x(0) * x(0) - 4.0;
    return r;
  };
  Box box{VecX::Constant(1, 0.0), VecX::Constant(1, 10.0)};
  const auto roots = solve_square_system(f, {VecX::Constant(1, 1.0), VecX::Constant(1, 5.0)}, box);
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0](0) - 2.0) < 1e-10);

  const ResidualFn g = [](const VecX& x) {
    VecX r(1);
    r(0) = x(0) * x(0) + 1.0;
    return r;
  };
  CHECK(solve_square_system(g, make_seed_grid(box), box).empty());
}

TEST_CASE("planted root of a coupled system") {
  const ResidualFn f = [](const VecX& x) {
    VecX r(3);
    r(0) = x(0) * x(0) + x(1) * x(1) + x(2) * x(2) - 1.0;
    r(1) = x(0) - x(1);
    r(2) = x(2) - 0.5;
    return r;
  };
  Box box{VecX::Constant(3, 0.0), VecX::Constant(3, 1.0)};
  const auto roots = solve_square_system(f, make_seed_grid(box), box);
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0](0) - std::sqrt(0.375)) < 1e-9);
}

TEST_CASE("scalar roots by bracketing") {
  const auto roots = scalar_roots([](double x) { return std::sin(x); }, 0.5, 10.0, 200);
  REQUIRE(roots.size() == 3);
  CHECK(std::abs(roots[0] - kPi) < 1e-12);
  CHECK(std::abs(roots[2] - 3 * kPi) < 1e-12);
}
