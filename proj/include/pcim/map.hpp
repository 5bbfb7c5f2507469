#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pcim/interval.hpp"
#include "pcim/rational.hpp"

namespace pcim {

struct AffineBranch {
  Rational slope;
  Rational intercept;

  Rational operator()(const Rational& x) const { return slope * x + intercept; }
};

// A piecewise contracting interval map on X = [c0, cN]: interior cut points
// c1 < ... < c{N-1} split X into N contraction pieces, one affine branch per
// piece. X1 and XN are half-closed unless the matching open_ends flag
// adjoins c0 / cN to the discontinuity set.
struct PCIMDefinition {
  ClosedInterval domain;
  std::vector<Rational> cut_points;
  std::vector<AffineBranch> branches;
  std::array<bool, 2> open_ends{false, false};
  std::string name;
};

struct SeparationViolation {
  int piece_a = 0;
  int piece_b = 0;
  ClosedInterval overlap;
};

// Outcome of the pairwise disjointness check on branch image closures.
struct SeparationResult {
  std::vector<ClosedInterval> images;  // images[i-1] = closure of f(X_i)
  std::optional<SeparationViolation> violation;

  bool separated() const { return !violation.has_value(); }
};

struct OneSidedLimits {
  std::optional<Rational> left;
  std::optional<Rational> right;
};

class ValidatedPCIM {
 public:
  const PCIMDefinition& definition() const { return def_; }
  const ClosedInterval& domain() const { return def_.domain; }
  int piece_count() const { return static_cast<int>(def_.branches.size()); }
  const AffineBranch& branch(int piece) const { return def_.branches[piece - 1]; }

  // lambda = max_i |a_i|
  const Rational& contraction_rate() const { return lambda_; }

  // Delta: interior cuts plus any adjoined endpoints, sorted.
  const std::vector<Rational>& delta() const { return delta_; }
  bool on_delta(const Rational& x) const;

  // D: every defined one-sided limit of f at points of Delta, sorted and
  // deduplicated.
  const std::vector<Rational>& one_sided_limit_set() const { return limits_; }

  const SeparationResult& separation() const { return separation_; }

  // Closure of piece i (1-based): [boundary(i-1), boundary(i)].
  ClosedInterval piece_closure(int piece) const;
  // Membership in the piece as a set, honoring open/half-closed ends.
  bool piece_contains(int piece, const Rational& x) const;

 private:
  friend ValidatedPCIM validate_pcim(const PCIMDefinition& def);

  PCIMDefinition def_;
  Rational lambda_;
  std::vector<Rational> delta_;
  std::vector<Rational> limits_;
  SeparationResult separation_;
};

// Checks every definition invariant (ordered cuts, nonzero contracting
// slopes, images inside X), computes lambda and D, and precomputes the
// separation certificate.
ValidatedPCIM validate_pcim(const PCIMDefinition& def);

// Index of the piece containing x, or nullopt when x lies on Delta (f is
// undefined there). Throws OutOfDomain for x outside X.
std::optional<int> piece_index(const ValidatedPCIM& map, const Rational& x);

// f(x). Throws OnCutPoint when x lies on Delta, OutOfDomain outside X.
Rational evaluate(const ValidatedPCIM& map, const Rational& x);

const SeparationResult& check_separation(const ValidatedPCIM& map);

// Both one-sided limits of f at a cut point c; an endpoint adjoined to
// Delta has only the inward limit. Throws NotACutPoint.
OneSidedLimits one_sided_limits(const ValidatedPCIM& map, const Rational& c);

struct DeltaEscape {
  Rational point;  // the element of D whose orbit reaches Delta
  long step = 0;   // f^step(point) lies on Delta
};

// Finite-horizon certificate for the hypothesis D within X-tilde.
struct DomainCheck {
  long horizon = 0;
  std::optional<DeltaEscape> failure;

  bool verified() const { return !failure.has_value(); }
};

// Iterates every d in D exactly for `horizon` steps, reporting the first
// exact landing on Delta. A VerifiedUpTo outcome is a finite certificate,
// not a proof.
DomainCheck check_D_in_Xtilde(const ValidatedPCIM& map, long horizon);

// Two-piece family: domain [0,1], cut (1-delta)/lambda, branches
// (lambda, delta) and (lambda, delta-1). Requires 0 < lambda < 1,
// 0 < delta < 1 and lambda + delta > 1; always satisfies the separation
// property.
PCIMDefinition contracted_rotation(const Rational& lambda, const Rational& delta);

inline constexpr long kDefaultHorizon = 10000;
inline constexpr long kMaxHorizon = 10000000;

}  // namespace pcim
