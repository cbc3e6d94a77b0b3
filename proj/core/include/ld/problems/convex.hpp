#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ld/derivation.hpp"
#include "ld/hald.hpp"
#include "ld/problem.hpp"
#include "ld/problems/image.hpp"

namespace ld {

/// Convex boundary around a reference point: radii r_0..r_{N-1} in [0, R-1]
/// at angles 2*pi*i/N, with energy sum_i D(i, r_i, r_{i+1}) (r_N = r_0).
struct ConvexSpec {
  int N = 0;
  int R = 0;
  Pixel center;
  /// D(i, a, b) at index (i * R + a) * R + b.
  std::vector<Weight> D;

  Weight cost(int i, int a, int b) const { return D[(static_cast<std::size_t>(i) * R + a) * R + b]; }
  /// Throws SpecError on bad sizes or negative / non-finite costs.
  void validate() const;
};

/// Sum over the rasterized segment pixels of max(0, 255 - |grad I|).
/// Throws GeometryError when the radius-R ball around `center` leaves the image.
ConvexSpec convex_data_cost(const Image& img, Pixel center, int N, int R);

/// Integer costs uniform in [0, max_cost], for tests and benchmarks.
ConvexSpec random_convex_spec(int N, int R, std::uint64_t seed, int max_cost = 20);

/// Boundary point of radius `r` at angle index `i`.
Pixel convex_point(Pixel center, int N, int i, int r);

/// Left (or straight) turn at the middle of three consecutive samples.
bool convexity_C(int r_prev, int r, int r_next, int N);

/// Some integer triple in the three ranges [s*2^k, (s+1)*2^k - 1] is convex.
/// Evaluated at the 8 range corners.
bool convexity_Ck(int s_prev, int s, int s_next, int k, int N);

/// Same predicate by exhaustive search over the ranges (test oracle).
bool convexity_Ck_exhaustive(int s_prev, int s, int s_next, int k, int N);

/// One level of the range hierarchy: radii are ranges of 2^k integers, costs
/// are minima over contained pairs. Level 0 is the concrete problem.
class ConvexLevel : public HierarchyLevel, public std::enable_shared_from_this<ConvexLevel> {
 public:
  /// `costs` holds D^k (N x Rk x Rk); `next` is the registry of level k+1 (null on top).
  ConvexLevel(int N, int k, int Rk, std::vector<Weight> costs, std::shared_ptr<StatementRegistry> next);

  const std::shared_ptr<StatementRegistry>& registry_ptr() const override { return registry_; }
  Statement goal() const override { return goal_; }
  std::vector<Rule> axioms() const override;
  void rules_using(Statement b, const DerivedWeight& derived, std::vector<Rule>& out) const override;
  void rules_deriving(Statement c, const DerivedWeight& derived, std::vector<Rule>& out) const override;
  void preimage(Statement abstract, std::vector<Statement>& out) const override;
  Statement abstract(Statement s) const override;
  Problem problem() const override;

  int level() const { return k_; }
  int ranges() const { return Rk_; }
  Weight cost(int i, int a, int b) const { return costs_[(static_cast<std::size_t>(i) * Rk_ + a) * Rk_ + b]; }
  bool convex(int a, int b, int c) const { return convex_[(static_cast<std::size_t>(a) * Rk_ + b) * Rk_ + c] != 0; }
  const std::vector<Weight>& costs() const { return costs_; }

  /// `convex(i, r_0, r_1, r_{i-1}, r_i)`.
  Statement statement(int i, int a, int b, int c, int d) const;
  std::optional<Statement> find(int i, int a, int b, int c, int d) const;

 private:
  void extend(Statement s, std::vector<Rule>& out) const;

  int N_, k_, Rk_;
  std::vector<Weight> costs_;
  std::vector<std::uint8_t> convex_;
  std::shared_ptr<StatementRegistry> registry_;
  std::shared_ptr<StatementRegistry> next_;
  LabelId convex_label_ = 0;
  Statement goal_;
  Statement next_goal_;
  LabelId next_label_ = 0;
};

/// Concrete problem: statements `convex(i,r0,r1,r_{i-1},r_i)` and `goal`.
Problem convex_problem(const ConvexSpec& spec);

/// Levels 0..L-1 of the range hierarchy. R must be a power of two and
/// 1 <= L <= max(1, log2 R).
Hierarchy convex_hierarchy(const ConvexSpec& spec, int L);

struct ConvexSolution {
  Weight energy = kInfinity;
  std::vector<int> radii;
};

/// Radii of a goal derivation of the concrete problem.
std::vector<int> convex_radii(const Derivation& goal_derivation, const StatementRegistry& registry, int N);

/// Energy of a hypothesis, summed in angle order.
Weight convex_energy(const ConvexSpec& spec, const std::vector<int>& radii);
/// True when every sample (wraparound included) is locally convex.
bool is_convex_hypothesis(const std::vector<int>& radii, int N);

/// Environment variable holding the memory budget of convex_dp in MiB.
inline constexpr const char* kConvexDpBudgetEnv = "LD_CONVEX_DP_MEMORY_MB";
/// Budget from the environment (default 1024 MiB).
std::size_t convex_dp_budget_bytes();

/// Dynamic programming over (r0, r1, r_{i-1}, r_i); exact. Throws
/// BudgetExceeded when its tables exceed `memory_budget_bytes`.
std::optional<ConvexSolution> convex_dp(const ConvexSpec& spec, std::size_t memory_budget_bytes = convex_dp_budget_bytes());

/// Enumerates every hypothesis; requires R^N <= 1e6.
std::optional<ConvexSolution> convex_bruteforce(const ConvexSpec& spec);

/// Solver choice for convex problems: `dp`, `kld`, `astar-pdb:<k>` (A*LD with
/// the pattern database of hierarchy level k) or `hald`.
struct ConvexMethod {
  enum class Kind { kDp, kKld, kAstarPdb, kHald };
  Kind kind = Kind::kHald;
  int pdb_level = 0;

  /// Throws InputError on an unknown name.
  static ConvexMethod parse(std::string_view name);
  std::string name() const;
};

struct ConvexRun {
  std::optional<ConvexSolution> solution;
  std::uint64_t expansions = 0;
  std::uint64_t pushes = 0;
};

/// Runs one method. `levels` is the hierarchy depth for `hald`; `astar-pdb:k`
/// builds k+1 levels. DP reports no expansions.
ConvexRun solve_convex(const ConvexSpec& spec, const ConvexMethod& method, int levels);

struct CircleSpec {
  int R = 32;
  double sigma = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::uint8_t kCircleInside = 64;
inline constexpr std::uint8_t kCircleOutside = 192;

/// (2R+1)-square image with a disc of radius in [0.4R, 0.7R) near the center
/// plus clamped Gaussian noise of deviation sigma. Deterministic in the seed.
Image gen_circle_image(const CircleSpec& spec);

/// Draws the boundary of `radii` in red over `img`.
RgbImage convex_overlay(const Image& img, Pixel center, const std::vector<int>& radii);

}  // namespace ld
