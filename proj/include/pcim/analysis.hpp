#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcim/atoms.hpp"
#include "pcim/map.hpp"
#include "pcim/symbolic.hpp"

namespace pcim {

// Union of generation-n atom carriers: the outer cover Lambda_n of the
// attractor. total_length measures the merged union exactly.
struct AttractorCover {
  int generation = 0;
  std::vector<ClosedInterval> intervals;
  Rational total_length;
  Rational max_diam;
};

AttractorCover approximate_attractor(const ValidatedPCIM& map, int n,
                                     const AtomOptions& opts = {});

struct CantorCandidate {
  Rational seed;
  int alpha = 0;
  std::vector<Atom> cover;  // deep atoms the orbit tail visits
  std::optional<AffineFit> fit;
};

struct BasicPieceReport {
  std::vector<PeriodicOrbit> periodic_orbits;
  std::vector<CantorCandidate> cantor_candidates;
  std::vector<std::string> notes;

  int n1() const { return static_cast<int>(periodic_orbits.size()); }
  int n2() const { return static_cast<int>(cantor_candidates.size()); }
};

inline constexpr int kDefaultSeedDepth = 8;

// Classifies the orbit of every seed (default: midpoints of generation
// seed_depth atoms) and deduplicates the resulting basic pieces. Seeds
// whose orbits hit Delta are skipped with a note.
BasicPieceReport find_basic_pieces(const ValidatedPCIM& map, std::vector<Rational> seeds,
                                   long steps, int n_max,
                                   int seed_depth = kDefaultSeedDepth,
                                   const AtomOptions& opts = {});

// Number of generation-n atoms meeting the piece (exact for periodic
// orbits; via the stored deep cover for Cantor candidates).
std::uint64_t atoms_on_piece(const ValidatedPCIM& map, const PeriodicOrbit& piece, int n,
                             const AtomOptions& opts = {});
std::uint64_t atoms_on_piece(const ValidatedPCIM& map, const CantorCandidate& piece,
                             int n, const AtomOptions& opts = {});

struct DimensionRow {
  int n = 0;
  Rational epsilon;             // lambda^n * diam(X)
  std::uint64_t atom_count = 0;
  double d = 0.0;               // log(#A_n) / log(1/epsilon_n)
};

struct DimensionEstimate {
  std::vector<DimensionRow> rows;
};

// The paper's upper-bound witness for the box dimension: the atoms of
// generation n form an epsilon_n-cover of cardinality #A_n.
DimensionEstimate box_dimension_estimate(const ValidatedPCIM& map, int n_max,
                                         const AtomOptions& opts = {});

struct SpanningSet {
  int n = 0;
  Rational epsilon;
  int n0 = 0;  // minimal generation >= n with max atom diameter < epsilon
  std::vector<ClosedInterval> components;  // kept components, one per representative
  std::vector<Rational> representatives;
};

inline constexpr int kDefaultSafetyDepth = 10;

// Finite (n,epsilon)-spanning set: generation-n0 atoms are split at the
// exact Delta-preimages of order < n; one representative is emitted per
// component that meets the depth-(n0+safety) attractor cover.
SpanningSet spanning_set(const ValidatedPCIM& map, int n, const Rational& epsilon,
                         int safety_depth = kDefaultSafetyDepth,
                         const AtomOptions& opts = {});

struct EntropyRow {
  int n = 0;
  std::uint64_t r_upper = 0;        // #A_{n+n0}, an upper bound for r_n(eps, .)
  double rate = 0.0;                // log(r_upper) / n
  std::uint64_t affine_bound = 0;   // n(N-1) + #A_{n0}
};

struct EntropyEstimate {
  Rational epsilon;
  int n0 = 0;
  std::uint64_t atoms_at_n0 = 0;
  std::vector<EntropyRow> rows;
};

// Bowen-entropy estimate sequence; requires epsilon below the minimal gap
// between distinct cut points so that deep atoms hold at most one of them.
EntropyEstimate entropy_estimate(const ValidatedPCIM& map, const Rational& epsilon,
                                 int n_max, const AtomOptions& opts = {});

struct PseudoInvariance {
  struct Witness {
    Rational point;
    std::optional<Rational> image;
    std::string note;
  };
  std::optional<Witness> witness;

  bool holds() const { return !witness.has_value(); }
};

// S is pseudo-invariant when every x in S off Delta maps into S and every
// x in S on Delta has at least one one-sided limit in S.
PseudoInvariance check_pseudo_invariant(const ValidatedPCIM& map,
                                        const std::vector<Rational>& S);

// ---- parameter sweeps ---------------------------------------------------

struct GridSpec {
  std::string param;
  Rational lo, hi;
  int steps = 0;
};

// "delta=51/100:99/100:49" -> 49 evenly spaced rational values
GridSpec parse_grid_spec(const std::string& text);

struct SweepBudget {
  long steps = 2000;  // orbit length per cell
  int n_max = 50;     // complexity / atom depth per cell
};

struct SweepCell {
  enum class Kind { Periodic, CantorLike, Undetermined, Invalid };

  std::vector<std::pair<std::string, Rational>> params;
  Kind kind = Kind::Undetermined;
  int period = 0;  // Periodic cells
  int alpha = 0;   // CantorLike cells
  std::optional<AffineFit> fit;
  std::vector<Rational> orbit;  // Periodic cells
  std::uint64_t atom_count = 0;
  double runtime_s = 0.0;
  std::string detail;
};

const char* sweep_kind_name(SweepCell::Kind kind);

// Named family builders available to sweeps (currently
// "contracted_rotation" with parameters lambda, delta).
PCIMDefinition build_family(const std::string& family,
                            const std::vector<std::pair<std::string, Rational>>& params);

// One row per grid cell, in grid order regardless of worker count.
// Per-cell failures become Invalid/Undetermined rows, never aborts.
std::vector<SweepCell> parameter_sweep(
    const std::string& family,
    const std::vector<std::pair<std::string, Rational>>& fixed, const GridSpec& grid,
    const SweepBudget& budget, int workers = 1);

}  // namespace pcim
