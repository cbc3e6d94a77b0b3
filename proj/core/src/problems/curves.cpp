#include "ld/problems/curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ld/errors.hpp"
#include "ld/problem_tools.hpp"

namespace ld {

namespace {

constexpr double kMaxGradient = 255.0;

std::int64_t dot(Pixel u, Pixel v) { return static_cast<std::int64_t>(u.x) * v.x + static_cast<std::int64_t>(u.y) * v.y; }
std::int64_t cross(Pixel u, Pixel v) {
  return static_cast<std::int64_t>(u.x) * v.y - static_cast<std::int64_t>(u.y) * v.x;
}
Pixel minus(Pixel a, Pixel b) { return {a.x - b.x, a.y - b.y}; }

// Exact shape cost for u = b - a, v = c - b, given dot(u, v) >= 0.
Weight exact_shape(Pixel u, Pixel v, double mu) {
  const double c = static_cast<double>(cross(u, v));
  return mu * (c * c) / (static_cast<double>(dot(u, u)) * static_cast<double>(dot(v, v)));
}

struct AngleInterval {
  double lo, hi;
};

// Directions of the difference vectors b - a for a in box A, b in box B.
std::optional<AngleInterval> direction_interval(Pixel A, Pixel B, int level) {
  const int s = 1 << level;
  const int xlo = (B.x - A.x) * s - (s - 1), xhi = (B.x - A.x) * s + (s - 1);
  const int ylo = (B.y - A.y) * s - (s - 1), yhi = (B.y - A.y) * s + (s - 1);
  if (xlo <= 0 && 0 <= xhi && ylo <= 0 && 0 <= yhi) return std::nullopt;
  const double mid = std::atan2(0.5 * (ylo + yhi), 0.5 * (xlo + xhi));
  double lo = 0, hi = 0;
  for (int x : {xlo, xhi})
    for (int y : {ylo, yhi}) {
      const double delta = std::remainder(std::atan2(y, x) - mid, 2 * std::numbers::pi);
      lo = std::min(lo, delta);
      hi = std::max(hi, delta);
    }
  return AngleInterval{mid + lo, mid + hi};
}

}  // namespace

CurveSpec CurveSpec::for_image(const Image& img, int k1) {
  CurveSpec spec;
  spec.k1 = k1;
  spec.k2 = 2 * k1;
  const double diagonal = std::hypot(img.width(), img.height());
  spec.L = std::max(0, static_cast<int>(std::ceil(std::log2(diagonal / spec.k2))));
  return spec;
}

void CurveSpec::validate() const {
  if (k1 < 1 || k2 != 2 * k1) throw SpecError("curves: need k1 >= 1 and k2 = 2 k1");
  if (L < 0 || L > 20) throw SpecError("curves: L must be in [0, 20]");
  if (!(lambda >= 0) || !(mu >= 0)) throw SpecError("curves: lambda and mu must be non-negative");
}

Weight seg_cost(const GradientField& grad, Pixel a, Pixel b, const CurveSpec& spec) {
  const std::int64_t len2 = dot(minus(b, a), minus(b, a));
  if (len2 < static_cast<std::int64_t>(spec.k1) * spec.k1 || len2 > static_cast<std::int64_t>(spec.k2) * spec.k2)
    throw GeometryError("seg_cost: segment length outside [k1, k2]");
  const Pixel dir = minus(b, a);
  const double len = std::sqrt(static_cast<double>(len2));
  Weight total = 0;
  for (Pixel p : rasterize(a, b)) {
    const double m = grad.magnitude(p.x, p.y);
    if (m == 0) {
      total += 1.0;
      continue;
    }
    const double sin_phi = std::abs(grad.gx(p.x, p.y) * dir.y - grad.gy(p.x, p.y) * dir.x) / (m * len);
    total += 1.0 - std::min(1.0, m / kMaxGradient) * sin_phi;
  }
  return total;
}

Weight seg_cost(const Image& img, Pixel a, Pixel b, const CurveSpec& spec) {
  return seg_cost(GradientField(img), a, b, spec);
}

Weight shape_cost(Pixel a, Pixel b, Pixel c, double mu) {
  const Pixel u = minus(b, a), v = minus(c, b);
  if (dot(u, u) == 0 || dot(v, v) == 0) throw GeometryError("shape_cost: degenerate segment");
  if (dot(u, v) < 0) throw GeometryError("shape_cost: angle at b is below pi/2");
  return exact_shape(u, v, mu);
}

std::optional<Weight> shape_bound(Pixel A, Pixel B, Pixel C, int level, double mu) {
  if (level == 0) {
    const Pixel u = minus(B, A), v = minus(C, B);
    if (dot(u, u) == 0 || dot(v, v) == 0 || dot(u, v) < 0) return std::nullopt;
    return exact_shape(u, v, mu);
  }
  const auto u = direction_interval(A, B, level);
  const auto v = direction_interval(B, C, level);
  if (!u || !v) return 0.0;
  // Turn angles fill [v.lo - u.hi, v.hi - u.lo]; take its distance from 0 mod 2 pi.
  const double lo = v->lo - u->hi, hi = v->hi - u->lo;
  const double center = std::remainder(0.5 * (lo + hi), 2 * std::numbers::pi);
  const double d = std::max(0.0, std::abs(center) - 0.5 * (hi - lo));
  if (d > std::numbers::pi / 2 + 1e-9) return std::nullopt;
  const double s = std::sin(std::min(d, std::numbers::pi / 2));
  return mu * s * s * (1 - 1e-9);
}

namespace {

// Shared state of the concrete and the abstract curve problems. With
// `coarsen` set, statements at depth i are between boxes of side 2^i.
struct CurveModel {
  CurveSpec spec;
  int width = 0, height = 0;
  bool coarsen = false;
  std::shared_ptr<StatementRegistry> registry;
  LabelId curve = 0;
  Statement goal;

  Statement statement(Pixel a, Pixel b, int i) const {
    const std::int32_t args[] = {a.x, a.y, b.x, b.y, i};
    return registry->intern(curve, args);
  }
  std::size_t slot(Pixel p, int i) const {
    return (static_cast<std::size_t>(i) * height + p.y) * width + p.x;
  }
};

class CurveExpander : public Expander {
 public:
  explicit CurveExpander(std::shared_ptr<const CurveModel> m)
      : m_(std::move(m)),
        by_start_(static_cast<std::size_t>(m_->width) * m_->height * (m_->spec.L + 1)),
        by_end_(by_start_.size()) {}

  void expand(Statement s, const SolutionSet&, std::vector<Rule>& out) override {
    if (s == m_->goal) return;
    const auto args = m_->registry->args(s);
    const Pixel a{args[0], args[1]}, b{args[2], args[3]};
    const int i = args[4];
    Rule g;
    g.antecedents.push_back(s);
    g.conclusion = m_->goal;
    g.weight = WeightFn::signed_additive(-m_->spec.lambda * std::ldexp(1.0, i));
    g.tag = "goal";
    out.push_back(g);
    if (i >= m_->spec.L) return;
    by_start_[m_->slot(a, i)].push_back({b, s});
    by_end_[m_->slot(b, i)].push_back({a, s});
    // s = curve(a,b,i) first: curve(a,b,i), curve(b,c,i) -> curve(a,c,i+1).
    for (const End& e : by_start_[m_->slot(b, i)]) compose(a, b, e.point, s, e.statement, i, out);
    // s second: curve(x,a,i), curve(a,b,i) -> curve(x,b,i+1).
    for (const End& e : by_end_[m_->slot(a, i)]) compose(e.point, a, b, e.statement, s, i, out);
  }

 private:
  struct End {
    Pixel point;
    Statement statement;
  };

  void compose(Pixel a, Pixel b, Pixel c, Statement first, Statement second, int i, std::vector<Rule>& out) {
    const std::optional<Weight> v = shape_bound(a, b, c, m_->coarsen ? i : 0, m_->spec.mu);
    if (!v) return;
    const Pixel from = m_->coarsen ? Pixel{a.x >> 1, a.y >> 1} : a;
    const Pixel to = m_->coarsen ? Pixel{c.x >> 1, c.y >> 1} : c;
    out.push_back(make_rule({first, second}, m_->statement(from, to, i + 1), *v));
    out.back().tag = "compose";
  }

  std::shared_ptr<const CurveModel> m_;
  std::vector<std::vector<End>> by_start_;
  std::vector<std::vector<End>> by_end_;
};

std::shared_ptr<CurveModel> make_model(const Image& img, const CurveSpec& spec, bool coarsen) {
  spec.validate();
  if (img.width() < 1 || img.height() < 1 ||
      std::hypot(img.width() - 1, img.height() - 1) < static_cast<double>(spec.k1))
    throw GeometryError("curves: image too small for k1");
  auto m = std::make_shared<CurveModel>();
  m->spec = spec;
  m->width = img.width();
  m->height = img.height();
  m->coarsen = coarsen;
  m->registry = std::make_shared<StatementRegistry>();
  m->curve = m->registry->label_id("curve");
  m->goal = m->registry->intern("goal");
  return m;
}

Problem make_curve_problem(const std::shared_ptr<CurveModel>& m, const Image& img) {
  const GradientField grad(img);
  const CurveSpec& spec = m->spec;
  std::vector<Rule> axioms;
  const int k2 = spec.k2;
  for (int ay = 0; ay < img.height(); ++ay)
    for (int ax = 0; ax < img.width(); ++ax)
      for (int by = std::max(0, ay - k2); by <= std::min(img.height() - 1, ay + k2); ++by)
        for (int bx = std::max(0, ax - k2); bx <= std::min(img.width() - 1, ax + k2); ++bx) {
          const std::int64_t d2 = dot(minus({bx, by}, {ax, ay}), minus({bx, by}, {ax, ay}));
          if (d2 < static_cast<std::int64_t>(spec.k1) * spec.k1 || d2 > static_cast<std::int64_t>(k2) * k2) continue;
          axioms.push_back(make_axiom(m->statement({ax, ay}, {bx, by}, 0), seg_cost(grad, {ax, ay}, {bx, by}, spec)));
          axioms.back().tag = "segment";
        }
  std::shared_ptr<const CurveModel> shared = m;
  Problem p = Problem::implicit(m->registry, std::move(axioms),
                                [shared] { return std::make_unique<CurveExpander>(shared); }, m->goal);
  p.set_goal_priority_offset(spec.lambda * std::ldexp(1.0, spec.L));
  p.set_max_arity(2);
  return p;
}

}  // namespace

Problem curve_problem(const Image& img, const CurveSpec& spec) { return make_curve_problem(make_model(img, spec, false), img); }

CurvePyramid curve_pyramid(const Problem& concrete, const Image& img, const CurveSpec& spec,
                           std::size_t statement_budget) {
  auto m = make_model(img, spec, true);
  Problem abstract = ground(make_curve_problem(m, img), statement_budget);
  const LabelId curve = m->curve;
  const LabelId concrete_curve = concrete.registry().label_id("curve");
  const Statement goal = m->goal;
  AbstractionMap map = AbstractionMap::from_keys(
      concrete.registry_ptr(), m->registry,
      [curve, concrete_curve, goal](const StatementRegistry& src, Statement s, StatementRegistry& dst) {
        if (src.label_of(s) != concrete_curve) return goal;
        const auto a = src.args(s);
        const int i = a[4];
        const std::int32_t key[] = {a[0] >> i, a[1] >> i, a[2] >> i, a[3] >> i, i};
        return dst.intern(curve, key);
      });
  return {std::move(map), std::move(abstract)};
}

Heuristic curve_pdb_heuristic(const CurvePyramid& pyramid) {
  auto db = std::make_shared<const PatternDatabase>(build_pdb(pyramid.abstract));
  return pdb_heuristic(db, pyramid.map, AbsentEntry::kPrune);
}

namespace {

void collect(const Derivation& d, const StatementRegistry& reg, std::vector<Pixel>& out) {
  if (d.children.empty()) {
    const auto a = reg.args(d.conclusion());
    if (out.empty()) out.push_back({a[0], a[1]});
    out.push_back({a[2], a[3]});
    return;
  }
  for (const Derivation& child : d.children) collect(child, reg, out);
}

}  // namespace

std::vector<Pixel> curve_points(const Derivation& goal_derivation, const StatementRegistry& registry) {
  std::vector<Pixel> out;
  if (goal_derivation.children.empty()) throw MalformedDerivation("goal derivation has no curve");
  collect(goal_derivation.children[0], registry, out);
  return out;
}

Image gen_step_image(int width, int height, Pixel p, Pixel q, std::uint8_t low, std::uint8_t high) {
  Image img(width, height);
  const Pixel dir = minus(q, p);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) img.set(x, y, cross(dir, minus({x, y}, p)) > 0 ? high : low);
  return img;
}

RgbImage curve_overlay(const Image& img, const std::vector<Pixel>& points) {
  RgbImage out(img);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) draw_segment(out, points[i], points[i + 1], {255, 0, 0});
  return out;
}

}  // namespace ld
