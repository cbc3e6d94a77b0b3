#include "ld/problems/convex.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>

#include "ld/engine.hpp"
#include "ld/errors.hpp"

namespace ld {

namespace {

constexpr double kConvexTolerance = 1e-9;
constexpr double kMaxGradient = 255.0;

// 2 cos(2 pi / N), snapped to an integer when it is one (N = 3, 4, 6).
double turn_coefficient(int N) {
  const double q = 2.0 * std::cos(2.0 * std::numbers::pi / N);
  const double nearest = std::round(q);
  return std::abs(q - nearest) < 1e-12 ? nearest : q;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double unit(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace

void ConvexSpec::validate() const {
  if (N < 3) throw SpecError("convex: N must be at least 3");
  if (R < 1) throw SpecError("convex: R must be positive");
  if (D.size() != static_cast<std::size_t>(N) * R * R) throw SpecError("convex: cost table must have N*R*R entries");
  for (Weight w : D)
    if (!(w >= 0) || !std::isfinite(w)) throw SpecError("convex: costs must be finite and non-negative");
}

Pixel convex_point(Pixel center, int N, int i, int r) {
  const double theta = 2.0 * std::numbers::pi * i / N;
  return {center.x + static_cast<int>(std::lround(r * std::cos(theta))),
          center.y + static_cast<int>(std::lround(r * std::sin(theta)))};
}

ConvexSpec convex_data_cost(const Image& img, Pixel center, int N, int R) {
  if (N < 3 || R < 1) throw SpecError("convex: need N >= 3 and R >= 1");
  if (center.x - (R - 1) < 0 || center.y - (R - 1) < 0 || center.x + (R - 1) >= img.width() ||
      center.y + (R - 1) >= img.height())
    throw GeometryError("convex: ball of radius R around the center leaves the image");
  const GradientField grad(img);
  ConvexSpec spec{N, R, center, {}};
  spec.D.resize(static_cast<std::size_t>(N) * R * R);
  for (int i = 0; i < N; ++i)
    for (int a = 0; a < R; ++a)
      for (int b = 0; b < R; ++b) {
        Weight total = 0;
        for (Pixel p : rasterize(convex_point(center, N, i, a), convex_point(center, N, (i + 1) % N, b)))
          total += std::max(0.0, kMaxGradient - grad.magnitude(p.x, p.y));
        spec.D[(static_cast<std::size_t>(i) * R + a) * R + b] = total;
      }
  return spec;
}

ConvexSpec random_convex_spec(int N, int R, std::uint64_t seed, int max_cost) {
  ConvexSpec spec{N, R, {0, 0}, {}};
  std::mt19937_64 gen(splitmix64(seed));
  spec.D.resize(static_cast<std::size_t>(N) * R * R);
  for (Weight& w : spec.D) w = static_cast<Weight>(gen() % static_cast<std::uint64_t>(max_cost + 1));
  return spec;
}

// The turn (p_i - p_{i-1}) x (p_{i+1} - p_i) equals sin(2pi/N) times
// r_i r_{i+1} + r_{i-1} (r_i - q r_{i+1}) with q = 2 cos(2pi/N).
bool convexity_C(int r_prev, int r, int r_next, int N) {
  const double q = turn_coefficient(N);
  const double turn = static_cast<double>(r) * r_next + r_prev * (r - q * r_next);
  return turn >= -kConvexTolerance;
}

bool convexity_Ck(int s_prev, int s, int s_next, int k, int N) {
  const int size = 1 << k;
  const int lo[3] = {s_prev * size, s * size, s_next * size};
  for (int corner = 0; corner < 8; ++corner) {
    const int a = lo[0] + (corner & 1 ? size - 1 : 0);
    const int b = lo[1] + (corner & 2 ? size - 1 : 0);
    const int c = lo[2] + (corner & 4 ? size - 1 : 0);
    if (convexity_C(a, b, c, N)) return true;
  }
  return false;
}

bool convexity_Ck_exhaustive(int s_prev, int s, int s_next, int k, int N) {
  const int size = 1 << k;
  for (int a = s_prev * size; a < (s_prev + 1) * size; ++a)
    for (int b = s * size; b < (s + 1) * size; ++b)
      for (int c = s_next * size; c < (s_next + 1) * size; ++c)
        if (convexity_C(a, b, c, N)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// ConvexLevel

ConvexLevel::ConvexLevel(int N, int k, int Rk, std::vector<Weight> costs, std::shared_ptr<StatementRegistry> next)
    : N_(N), k_(k), Rk_(Rk), costs_(std::move(costs)), registry_(std::make_shared<StatementRegistry>()),
      next_(std::move(next)) {
  convex_label_ = registry_->label_id("convex");
  goal_ = registry_->intern("goal");
  if (next_) {
    next_label_ = next_->label_id("convex");
    next_goal_ = next_->intern("goal");
  }
  convex_.resize(static_cast<std::size_t>(Rk) * Rk * Rk);
  for (int a = 0; a < Rk; ++a)
    for (int b = 0; b < Rk; ++b)
      for (int c = 0; c < Rk; ++c)
        convex_[(static_cast<std::size_t>(a) * Rk + b) * Rk + c] = convexity_Ck(a, b, c, k, N) ? 1 : 0;
}

Statement ConvexLevel::statement(int i, int a, int b, int c, int d) const {
  const std::int32_t args[] = {i, a, b, c, d};
  return registry_->intern(convex_label_, args);
}

std::optional<Statement> ConvexLevel::find(int i, int a, int b, int c, int d) const {
  const std::int32_t args[] = {i, a, b, c, d};
  return registry_->find(convex_label_, args);
}

std::vector<Rule> ConvexLevel::axioms() const {
  std::vector<Rule> out;
  out.reserve(static_cast<std::size_t>(Rk_) * Rk_);
  for (int a = 0; a < Rk_; ++a)
    for (int b = 0; b < Rk_; ++b) {
      out.push_back(make_axiom(statement(1, a, b, a, b), cost(0, a, b)));
      out.back().tag = "start";
    }
  return out;
}

void ConvexLevel::extend(Statement s, std::vector<Rule>& out) const {
  if (s == goal_) return;
  const auto args = registry_->args(s);
  const int i = args[0], a = args[1], b = args[2], c = args[3], d = args[4];
  if (i < N_) {
    for (int e = 0; e < Rk_; ++e) {
      if (!convex(c, d, e)) continue;
      out.push_back(make_rule({s}, statement(i + 1, a, b, d, e), cost(i, d, e)));
      out.back().tag = "extend";
    }
  } else if (d == a && convex(c, a, b)) {
    out.push_back(make_rule({s}, goal_, 0));
    out.back().tag = "close";
  }
}

void ConvexLevel::rules_using(Statement b, const DerivedWeight&, std::vector<Rule>& out) const { extend(b, out); }

void ConvexLevel::rules_deriving(Statement c, const DerivedWeight& derived, std::vector<Rule>& out) const {
  auto is_derived = [&](std::optional<Statement> s) { return s && derived(*s).has_value(); };
  if (c == goal_) {
    for (int a = 0; a < Rk_; ++a)
      for (int b = 0; b < Rk_; ++b)
        for (int x = 0; x < Rk_; ++x) {
          if (!convex(x, a, b)) continue;
          auto s = find(N_, a, b, x, a);
          if (!is_derived(s)) continue;
          out.push_back(make_rule({*s}, goal_, 0));
          out.back().tag = "close";
        }
    return;
  }
  const auto args = registry_->args(c);
  const int i = args[0], a = args[1], b = args[2], p = args[3], d = args[4];
  if (i == 1) {
    if (a == p && b == d) {
      out.push_back(make_axiom(c, cost(0, a, b)));
      out.back().tag = "start";
    }
    return;
  }
  for (int x = 0; x < Rk_; ++x) {
    if (!convex(x, p, d)) continue;
    auto s = find(i - 1, a, b, x, p);
    if (!is_derived(s)) continue;
    out.push_back(make_rule({*s}, c, cost(i - 1, p, d)));
    out.back().tag = "extend";
  }
}

void ConvexLevel::preimage(Statement abstract, std::vector<Statement>& out) const {
  if (abstract == next_goal_) {
    out.push_back(goal_);
    return;
  }
  const auto args = next_->args(abstract);
  const int i = args[0];
  for (int bits = 0; bits < 16; ++bits) {
    const int a = 2 * args[1] + (bits & 1), b = 2 * args[2] + (bits >> 1 & 1);
    const int c = 2 * args[3] + (bits >> 2 & 1), d = 2 * args[4] + (bits >> 3 & 1);
    out.push_back(statement(i, a, b, c, d));
  }
}

Statement ConvexLevel::abstract(Statement s) const {
  if (s == goal_) return next_goal_;
  const auto args = registry_->args(s);
  const std::int32_t up[] = {args[0], args[1] >> 1, args[2] >> 1, args[3] >> 1, args[4] >> 1};
  return next_->intern(next_label_, up);
}

namespace {

class ConvexExpander : public Expander {
 public:
  explicit ConvexExpander(std::shared_ptr<const ConvexLevel> level) : level_(std::move(level)) {}
  void expand(Statement b, const SolutionSet& weighted, std::vector<Rule>& out) override {
    level_->rules_using(b, [&](Statement s) { return weighted.weight_of(s); }, out);
  }

 private:
  std::shared_ptr<const ConvexLevel> level_;
};

}  // namespace

Problem ConvexLevel::problem() const {
  auto self = shared_from_this();
  Problem p = Problem::implicit(registry_, axioms(), [self] { return std::make_unique<ConvexExpander>(self); }, goal_);
  p.set_max_arity(1);
  return p;
}

Problem convex_problem(const ConvexSpec& spec) {
  spec.validate();
  auto level = std::make_shared<ConvexLevel>(spec.N, 0, spec.R, spec.D, nullptr);
  return level->problem();
}

Hierarchy convex_hierarchy(const ConvexSpec& spec, int L) {
  spec.validate();
  if (!std::has_single_bit(static_cast<unsigned>(spec.R))) throw SpecError("convex hierarchy: R must be a power of two");
  const int log_r = std::countr_zero(static_cast<unsigned>(spec.R));
  if (L < 1 || L > std::max(1, log_r))
    throw SpecError("convex hierarchy: need 1 <= L <= log2(R), got L=" + std::to_string(L));

  std::vector<std::vector<Weight>> costs(static_cast<std::size_t>(L));
  costs[0] = spec.D;
  for (int k = 1; k < L; ++k) {
    const int fine = spec.R >> (k - 1), coarse = spec.R >> k;
    auto& out = costs[k];
    out.assign(static_cast<std::size_t>(spec.N) * coarse * coarse, kInfinity);
    const auto& in = costs[k - 1];
    for (int i = 0; i < spec.N; ++i)
      for (int a = 0; a < fine; ++a)
        for (int b = 0; b < fine; ++b) {
          Weight& slot = out[(static_cast<std::size_t>(i) * coarse + (a >> 1)) * coarse + (b >> 1)];
          slot = std::min(slot, in[(static_cast<std::size_t>(i) * fine + a) * fine + b]);
        }
  }

  Hierarchy h;
  h.levels.resize(static_cast<std::size_t>(L));
  std::shared_ptr<StatementRegistry> next;
  for (int k = L - 1; k >= 0; --k) {
    auto level = std::make_shared<ConvexLevel>(spec.N, k, spec.R >> k, std::move(costs[k]), next);
    next = level->registry_ptr();
    h.levels[static_cast<std::size_t>(k)] = level;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Oracles

std::vector<int> convex_radii(const Derivation& goal_derivation, const StatementRegistry& registry, int N) {
  std::vector<int> radii(static_cast<std::size_t>(N), 0);
  const Derivation* d = &goal_derivation;
  while (!d->children.empty()) {
    d = &d->children[0];
    const auto args = registry.args(d->conclusion());
    const int i = args[0];
    if (i < N) radii[static_cast<std::size_t>(i)] = args[4];
    if (i == 1) radii[0] = args[1];
  }
  return radii;
}

Weight convex_energy(const ConvexSpec& spec, const std::vector<int>& radii) {
  Weight total = 0;
  for (int i = 0; i < spec.N; ++i)
    total += spec.cost(i, radii[static_cast<std::size_t>(i)], radii[static_cast<std::size_t>((i + 1) % spec.N)]);
  return total;
}

bool is_convex_hypothesis(const std::vector<int>& radii, int N) {
  for (int i = 0; i < N; ++i) {
    const int prev = radii[static_cast<std::size_t>((i + N - 1) % N)];
    const int next = radii[static_cast<std::size_t>((i + 1) % N)];
    if (!convexity_C(prev, radii[static_cast<std::size_t>(i)], next, N)) return false;
  }
  return true;
}

std::size_t convex_dp_budget_bytes() {
  std::size_t mb = 1024;
  if (const char* env = std::getenv(kConvexDpBudgetEnv)) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') mb = static_cast<std::size_t>(v);
  }
  return mb << 20;
}

namespace {

// Largest r_{i-1} that keeps (r_{i-1}, d, e) convex; the admissible set is
// always a prefix because the turn is linear in r_{i-1} and >= 0 at 0.
std::vector<int> convex_prefix_bounds(int R, int N) {
  std::vector<int> bound(static_cast<std::size_t>(R) * R, -1);
  for (int d = 0; d < R; ++d)
    for (int e = 0; e < R; ++e) {
      int c = 0;
      while (c < R && convexity_C(c, d, e, N)) ++c;
      bound[static_cast<std::size_t>(d) * R + e] = c - 1;
    }
  return bound;
}

}  // namespace

std::optional<ConvexSolution> convex_dp(const ConvexSpec& spec, std::size_t memory_budget_bytes) {
  spec.validate();
  const int N = spec.N, R = spec.R;
  const std::size_t layer = static_cast<std::size_t>(R) * R;
  const std::size_t needed = (static_cast<std::size_t>(N) + 3) * layer * sizeof(Weight) + layer * sizeof(int);
  if (needed > memory_budget_bytes)
    throw BudgetExceeded("convex_dp needs " + std::to_string(needed >> 20) + " MiB, budget is " +
                         std::to_string(memory_budget_bytes >> 20) + " MiB (set " + kConvexDpBudgetEnv + ")");
  const std::vector<int> bound = convex_prefix_bounds(R, N);
  for (int d = 0; d < R; ++d)
    for (int e = 0; e < R; ++e)
      for (int c = 0; c < R; ++c)
        if (convexity_C(c, d, e, N) != (c <= bound[static_cast<std::size_t>(d) * R + e]))
          throw Error("convexity predicate is not a prefix in r_{i-1}");

  // layers[i][c * R + d] = B(i, r0, r1, c, d) for one (r0, r1).
  auto run = [&](int r0, int r1, std::vector<std::vector<Weight>>* keep) {
    std::vector<Weight> cur(layer, kInfinity), next(layer), prefix(layer);
    cur[static_cast<std::size_t>(r0) * R + r1] = spec.cost(0, r0, r1);
    if (keep) keep->push_back(cur);
    for (int i = 1; i < N; ++i) {
      // prefix[d * R + c] = min over c' <= c of cur[c' * R + d]
      for (int d = 0; d < R; ++d) {
        Weight m = kInfinity;
        for (int c = 0; c < R; ++c) {
          m = std::min(m, cur[static_cast<std::size_t>(c) * R + d]);
          prefix[static_cast<std::size_t>(d) * R + c] = m;
        }
      }
      for (int d = 0; d < R; ++d)
        for (int e = 0; e < R; ++e) {
          const Weight best = prefix[static_cast<std::size_t>(d) * R + bound[static_cast<std::size_t>(d) * R + e]];
          next[static_cast<std::size_t>(d) * R + e] = best == kInfinity ? kInfinity : best + spec.cost(i, d, e);
        }
      std::swap(cur, next);
      if (keep) keep->push_back(cur);
    }
    Weight best = kInfinity;
    for (int c = 0; c < R; ++c)
      if (convexity_C(c, r0, r1, N)) best = std::min(best, cur[static_cast<std::size_t>(c) * R + r0]);
    return best;
  };

  Weight best = kInfinity;
  int best_r0 = -1, best_r1 = -1;
  for (int r0 = 0; r0 < R; ++r0)
    for (int r1 = 0; r1 < R; ++r1) {
      const Weight w = run(r0, r1, nullptr);
      if (w < best) best = w, best_r0 = r0, best_r1 = r1;
    }
  if (best == kInfinity) return std::nullopt;

  std::vector<std::vector<Weight>> layers;
  run(best_r0, best_r1, &layers);
  ConvexSolution sol{best, std::vector<int>(static_cast<std::size_t>(N))};
  sol.radii[0] = best_r0;
  int d = best_r0, c = -1;  // state (r_i, r_{i+1}) of layer i, starting at i = N-1
  for (int x = 0; x < R && c < 0; ++x)
    if (convexity_C(x, best_r0, best_r1, N) && layers[N - 1][static_cast<std::size_t>(x) * R + best_r0] == best) c = x;
  // Walk back: layers[i-1] holds B(i, ..., r_{i-1}, r_i).
  for (int i = N - 1; i >= 1; --i) {
    sol.radii[static_cast<std::size_t>(i)] = c;
    if (i == 1) break;
    int prev = -1;
    for (int x = 0; x < R && prev < 0; ++x)
      if (convexity_C(x, c, d, N) && layers[i - 1][static_cast<std::size_t>(x) * R + c] + spec.cost(i, c, d) ==
                                         layers[i][static_cast<std::size_t>(c) * R + d])
        prev = x;
    d = c;
    c = prev;
  }
  return sol;
}

std::optional<ConvexSolution> convex_bruteforce(const ConvexSpec& spec) {
  spec.validate();
  const int N = spec.N, R = spec.R;
  if (N * std::log10(static_cast<double>(R)) > 6.0 + 1e-12) throw BudgetExceeded("convex_bruteforce needs R^N <= 1e6");
  std::vector<int> radii(static_cast<std::size_t>(N), 0);
  std::optional<ConvexSolution> best;
  for (;;) {
    if (is_convex_hypothesis(radii, N)) {
      const Weight e = convex_energy(spec, radii);
      if (!best || e < best->energy) best = ConvexSolution{e, radii};
    }
    int pos = 0;
    while (pos < N && ++radii[static_cast<std::size_t>(pos)] == R) radii[static_cast<std::size_t>(pos++)] = 0;
    if (pos == N) break;
  }
  return best;
}

ConvexMethod ConvexMethod::parse(std::string_view name) {
  if (name == "dp") return {Kind::kDp, 0};
  if (name == "kld") return {Kind::kKld, 0};
  if (name == "hald") return {Kind::kHald, 0};
  constexpr std::string_view prefix = "astar-pdb:";
  if (name.starts_with(prefix)) {
    const std::string digits(name.substr(prefix.size()));
    char* end = nullptr;
    const long k = std::strtol(digits.c_str(), &end, 10);
    if (!digits.empty() && *end == '\0' && k >= 1 && k <= 30) return {Kind::kAstarPdb, static_cast<int>(k)};
  }
  throw InputError("unknown algorithm '" + std::string(name) + "' (expected dp, kld, astar-pdb:<k> or hald)");
}

std::string ConvexMethod::name() const {
  switch (kind) {
    case Kind::kDp: return "dp";
    case Kind::kKld: return "kld";
    case Kind::kAstarPdb: return "astar-pdb:" + std::to_string(pdb_level);
    case Kind::kHald: return "hald";
  }
  return "?";
}

ConvexRun solve_convex(const ConvexSpec& spec, const ConvexMethod& method, int levels) {
  ConvexRun run;
  auto from_engine = [&](const RunResult& r, const Problem& p) {
    run.expansions = r.stats.expansions;
    run.pushes = r.stats.pushes;
    if (!r.goal_derived) return;
    run.solution = ConvexSolution{*r.solution.goal_weight,
                                  convex_radii(get_derivation(r.solution, p.goal()), p.registry(), spec.N)};
  };
  switch (method.kind) {
    case ConvexMethod::Kind::kDp:
      run.solution = convex_dp(spec);
      break;
    case ConvexMethod::Kind::kKld: {
      const Problem p = convex_problem(spec);
      from_engine(kld(p), p);
      break;
    }
    case ConvexMethod::Kind::kAstarPdb: {
      const Hierarchy h = convex_hierarchy(spec, method.pdb_level + 1);
      const LevelPdb pdb = level_pdb(h, static_cast<std::size_t>(method.pdb_level));
      const Problem p = h.level(0).problem();
      from_engine(astar_ld(p, pdb.heuristic), p);
      break;
    }
    case ConvexMethod::Kind::kHald: {
      const Hierarchy h = convex_hierarchy(spec, levels);
      const HaldResult r = run_hald(h);
      run.expansions = r.total_expansions;
      run.pushes = r.stats.pushes;
      if (r.goal_derived)
        run.solution = ConvexSolution{r.goal_weight, convex_radii(*r.goal_derivation, h.level(0).registry(), spec.N)};
      break;
    }
  }
  return run;
}

// ---------------------------------------------------------------------------
// Synthetic data

Image gen_circle_image(const CircleSpec& spec) {
  if (spec.R < 1) throw SpecError("circle image: R must be positive");
  if (!(spec.sigma >= 0)) throw SpecError("circle image: sigma must be non-negative");
  const int side = 2 * spec.R + 1;
  std::mt19937_64 gen(splitmix64(spec.seed));
  const double radius = spec.R * (0.4 + 0.3 * unit(gen));
  const double cx = spec.R + (unit(gen) - 0.5) * 0.2 * spec.R;
  const double cy = spec.R + (unit(gen) - 0.5) * 0.2 * spec.R;
  Image img(side, side);
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) {
      // Box-Muller, spelled out so images do not depend on the standard library.
      const double u1 = unit(gen), u2 = unit(gen);
      const double z = std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
      const bool inside = (x - cx) * (x - cx) + (y - cy) * (y - cy) <= radius * radius;
      const double v = (inside ? kCircleInside : kCircleOutside) + spec.sigma * z;
      img.set(x, y, static_cast<std::uint8_t>(std::clamp(std::lround(v), 0l, 255l)));
    }
  return img;
}

RgbImage convex_overlay(const Image& img, Pixel center, const std::vector<int>& radii) {
  RgbImage out(img);
  const int N = static_cast<int>(radii.size());
  for (int i = 0; i < N; ++i)
    draw_segment(out, convex_point(center, N, i, radii[static_cast<std::size_t>(i)]),
                 convex_point(center, N, (i + 1) % N, radii[static_cast<std::size_t>((i + 1) % N)]), {255, 0, 0});
  return out;
}

}  // namespace ld
