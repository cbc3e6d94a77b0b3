#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ld/abstraction.hpp"
#include "ld/derivation.hpp"
#include "ld/problem.hpp"
#include "ld/problems/image.hpp"

namespace ld {

/// Parameters of the almost-straight curve model.
struct CurveSpec {
  int k1 = 4;
  int k2 = 8;
  /// Maximum composition depth.
  int L = 3;
  double lambda = 1.0;
  double mu = 16.0;

  /// Defaults with L chosen so 2^L k2 covers the image diagonal.
  static CurveSpec for_image(const Image& img, int k1 = 4);
  /// Throws SpecError unless 1 <= k1, k2 = 2 k1, 0 <= L <= 20, lambda >= 0, mu >= 0.
  void validate() const;
};

/// Sum over rasterized pixels of 1 - m |sin phi|, where m = min(1, |grad|/255)
/// and phi is the angle between the gradient and the segment. Symmetric in
/// (a, b). Throws GeometryError unless k1 <= |a-b| <= k2.
Weight seg_cost(const GradientField& grad, Pixel a, Pixel b, const CurveSpec& spec);
Weight seg_cost(const Image& img, Pixel a, Pixel b, const CurveSpec& spec);

/// mu sin^2(t) for the angle t at b between ab and bc. Throws GeometryError
/// when t < pi/2 or a segment is degenerate.
Weight shape_cost(Pixel a, Pixel b, Pixel c, double mu);

/// Lower bound of mu sin^2(t) over a in A, b in B, c in C for boxes of side
/// 2^level (box coordinates), among triples with t >= pi/2; empty when no
/// triple qualifies.
std::optional<Weight> shape_bound(Pixel A, Pixel B, Pixel C, int level, double mu);

/// Statements `curve(ax,ay,bx,by,i)` and `goal`. Axioms are base segments,
/// compositions join equal-depth curves sharing an endpoint, and every curve
/// derives `goal` with the signed weight w - lambda 2^i. The goal priority
/// offset is lambda 2^L so KLD stays monotone.
Problem curve_problem(const Image& img, const CurveSpec& spec);

/// Box abstraction `curve(a,b,i) -> curve(a>>i, b>>i, i)` and the grounded
/// abstract problem (compositions weighted by shape_bound).
struct CurvePyramid {
  AbstractionMap map;
  Problem abstract;
};

CurvePyramid curve_pyramid(const Problem& concrete, const Image& img, const CurveSpec& spec,
                           std::size_t statement_budget = 5'000'000);

/// Pattern-database heuristic of the pyramid for A*LD on the concrete problem.
Heuristic curve_pdb_heuristic(const CurvePyramid& pyramid);

/// Points of the curve in a goal derivation, in order.
std::vector<Pixel> curve_points(const Derivation& goal_derivation, const StatementRegistry& registry);

/// Two-level step image split by the line through p and q.
Image gen_step_image(int width, int height, Pixel p, Pixel q, std::uint8_t low = 0, std::uint8_t high = 255);

/// Draws the polyline in red.
RgbImage curve_overlay(const Image& img, const std::vector<Pixel>& points);

}  // namespace ld
