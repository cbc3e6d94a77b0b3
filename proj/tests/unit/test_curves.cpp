#include <doctest.h>

#include <cmath>
#include <random>

#include "ld/abstraction.hpp"
#include "ld/engine.hpp"
#include "ld/errors.hpp"
#include "ld/problem_tools.hpp"
#include "ld/problems/curves.hpp"

using namespace ld;

namespace {

CurveSpec small_spec(int L = 3, double lambda = 1.0) {
  CurveSpec spec;
  spec.k1 = 2;
  spec.k2 = 4;
  spec.L = L;
  spec.lambda = lambda;
  return spec;
}

std::size_t tree_depth(const Derivation& d) {
  std::size_t deepest = 0;
  std::size_t shallowest = static_cast<std::size_t>(-1);
  for (const Derivation& c : d.children) {
    const std::size_t cd = tree_depth(c);
    deepest = std::max(deepest, cd);
    shallowest = std::min(shallowest, cd);
  }
  if (d.children.empty()) return 0;
  REQUIRE(deepest == shallowest);
  return deepest + 1;
}

}  // namespace

TEST_CASE("shape cost") {
  CHECK(shape_cost({0, 0}, {3, 0}, {7, 0}, 16) == 0);
  CHECK(shape_cost({0, 0}, {2, 0}, {2, 3}, 16) == doctest::Approx(16));
  CHECK(shape_cost({0, 0}, {2, 0}, {3, 1}, 16) == doctest::Approx(8));
  CHECK_THROWS_AS(shape_cost({0, 0}, {2, 0}, {1, 1}, 16), GeometryError);
  CHECK_THROWS_AS(shape_cost({0, 0}, {0, 0}, {1, 1}, 16), GeometryError);
}

TEST_CASE("segment cost") {
  const CurveSpec spec = small_spec();
  const Image flat(16, 16, 90);
  CHECK(seg_cost(flat, {1, 1}, {4, 3}, spec) == doctest::Approx(static_cast<double>(rasterize({1, 1}, {4, 3}).size())));
  CHECK_THROWS_AS(seg_cost(flat, {1, 1}, {2, 1}, spec), GeometryError);
  CHECK_THROWS_AS(seg_cost(flat, {1, 1}, {9, 1}, spec), GeometryError);

  // Vertical edge between x = 7 and x = 8.
  Image step(16, 16);
  for (int y = 0; y < 16; ++y)
    for (int x = 8; x < 16; ++x) step.set(x, y, 255);
  const GradientField grad(step);
  const Weight along = seg_cost(grad, {7, 4}, {7, 8}, spec);
  CHECK(along < 5 * 0.6);
  for (int y = 2; y < 14; y += 3) CHECK(along < seg_cost(grad, {5, y}, {9, y}, spec));
  CHECK(seg_cost(grad, {6, 2}, {8, 5}, spec) == seg_cost(grad, {8, 5}, {6, 2}, spec));
  CHECK(seg_cost(grad, {7, 12}, {8, 9}, spec) == seg_cost(grad, {8, 9}, {7, 12}, spec));
}

TEST_CASE("box shape bounds are lower bounds") {
  std::mt19937_64 gen(3);
  int checked = 0;
  for (int t = 0; t < 400; ++t) {
    const int level = 1 + static_cast<int>(gen() % 2);
    const int n = 16 >> level;
    auto box = [&] { return Pixel{static_cast<int>(gen() % n), static_cast<int>(gen() % n)}; };
    const Pixel A = box(), B = box(), C = box();
    const auto bound = shape_bound(A, B, C, level, 16);
    const int s = 1 << level;
    for (int k = 0; k < 40; ++k) {
      auto inside = [&](Pixel P) {
        return Pixel{P.x * s + static_cast<int>(gen() % s), P.y * s + static_cast<int>(gen() % s)};
      };
      const Pixel a = inside(A), b = inside(B), c = inside(C);
      const auto exact = shape_bound(a, b, c, 0, 16);
      if (!exact) continue;
      CAPTURE(t);
      REQUIRE(bound);
      CHECK(*bound <= *exact + 1e-12);
      ++checked;
    }
  }
  CHECK(checked > 1000);
  // Far apart along one axis: some triple is collinear.
  CHECK(*shape_bound({0, 0}, {6, 0}, {12, 1}, 1, 16) == 0);
}

TEST_CASE("on a blank image the lightest goal is the cheapest base segment") {
  const Image blank(16, 16);
  const CurveSpec spec = small_spec(2, 0.0);
  const RunResult r = kld(curve_problem(blank, spec));
  REQUIRE(r.goal_derived);
  Weight best = kInfinity;
  const GradientField grad(blank);
  for (int ay = 0; ay < 16; ++ay)
    for (int ax = 0; ax < 16; ++ax)
      for (int by = 0; by < 16; ++by)
        for (int bx = 0; bx < 16; ++bx) {
          const int d2 = (ax - bx) * (ax - bx) + (ay - by) * (ay - by);
          if (d2 >= 4 && d2 <= 16) best = std::min(best, seg_cost(grad, {ax, ay}, {bx, by}, spec));
        }
  CHECK(*r.solution.goal_weight == best);
}

TEST_CASE("the goal rule is signed and passes problem validation") {
  const Problem p = curve_problem(Image(8, 8), small_spec(1));
  CHECK(p.goal_priority_offset() == 2);
  CHECK(validate_problem(p).ok());
}

TEST_CASE("A*LD with the pyramid database matches KLD on line images") {
  const std::pair<Pixel, Pixel> lines[] = {{{0, 3}, {15, 9}}, {{2, 0}, {10, 15}}, {{0, 0}, {15, 15}}};
  for (const auto& [p, q] : lines) {
    CAPTURE(p.x);
    CAPTURE(q.y);
    const Image img = gen_step_image(16, 16, p, q, 40, 220);
    const CurveSpec spec = small_spec(3, 4.0);
    const Problem concrete = curve_problem(img, spec);
    const RunResult k = kld(concrete);
    REQUIRE(k.goal_derived);

    const CurvePyramid pyramid = curve_pyramid(concrete, img, spec);
    const Heuristic h = curve_pdb_heuristic(pyramid);
    const RunResult a = astar_ld(concrete, h);
    REQUIRE(a.goal_derived);
    CHECK(*a.solution.goal_weight == *k.solution.goal_weight);
    CHECK(a.stats.expansions <= k.stats.expansions);

    const Derivation d = get_derivation(a.solution, concrete.goal());
    CHECK(eval_derivation(d) == doctest::Approx(*a.solution.goal_weight));
    const Derivation& curve = d.children.at(0);
    CHECK(tree_depth(curve) == static_cast<std::size_t>(concrete.registry().args(curve.conclusion())[4]));
    const auto points = curve_points(d, concrete.registry());
    CHECK(points.size() == (std::size_t{1} << concrete.registry().args(curve.conclusion())[4]) + 1);
  }
}

TEST_CASE("the pyramid heuristic is monotone") {
  const Image img = gen_step_image(16, 16, {0, 5}, {15, 11}, 30, 200);
  const CurveSpec spec = small_spec();
  const Problem concrete = curve_problem(img, spec);
  const CurvePyramid pyramid = curve_pyramid(concrete, img, spec);
  const MonotoneReport report = check_monotone(concrete, curve_pdb_heuristic(pyramid));
  CHECK(report.rules_checked > 0);
  CHECK(report.ok());
}

TEST_CASE("curve spec validation") {
  CurveSpec spec;
  spec.k2 = 9;
  CHECK_THROWS_AS(spec.validate(), SpecError);
  CHECK_THROWS_AS(curve_problem(Image(2, 2), CurveSpec{}), GeometryError);
  const CurveSpec fitted = CurveSpec::for_image(Image(64, 64), 4);
  CHECK(fitted.k2 == 8);
  CHECK((1 << fitted.L) * fitted.k2 >= 64 * std::sqrt(2.0));
}
