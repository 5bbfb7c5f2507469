#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcim/map.hpp"

namespace pcim {

// Atom A_{i1...in} = F_{in} o ... o F_{i1}(X) with F_i(A) = closure of
// f(A intersect X_i). The code stores i1...in as raw bytes.
struct Atom {
  ClosedInterval carrier;
  std::string code;

  int generation() const { return static_cast<int>(code.size()); }
  bool operator==(const Atom&) const = default;
};

// All atoms of one generation, sorted by (carrier.lo, carrier.hi, code).
struct AtomSet {
  int generation = 0;
  std::vector<Atom> atoms;

  std::size_t size() const { return atoms.size(); }
};

inline constexpr int kDefaultDepthCap = 64;
inline constexpr int kBruteForceCap = 12;

struct AtomOptions {
  int max_depth = kDefaultDepthCap;
  int workers = 1;
};

// Closure of f(A intersect X_i); nullopt when the intersection is empty or
// a single point on an open side of the piece.
std::optional<ClosedInterval> atom_image(const ValidatedPCIM& map, int piece,
                                         const ClosedInterval& A);

// Generation-by-generation expansion holding only the current generation;
// generation 0 is the whole domain with the empty code.
class AtomStream {
 public:
  explicit AtomStream(const ValidatedPCIM& map, int workers = 1);

  int generation() const { return generation_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  void advance();
  Rational max_diameter() const;

 private:
  const ValidatedPCIM* map_;
  int workers_;
  int generation_ = 0;
  std::vector<Atom> atoms_;
};

// Incremental construction: generation k+1 atoms are the nonempty images
// F_i(A) over A in generation k, with i appended to the code. Deterministic
// output for any worker count.
AtomSet atoms_generation(const ValidatedPCIM& map, int n, const AtomOptions& opts = {});

// Independent oracle: enumerates all N^n codes and composes the operators
// from X directly. Cost N^n, hence the tight default cap.
AtomSet atoms_bruteforce(const ValidatedPCIM& map, int n, int cap = kBruteForceCap);

// #A_n for n = 1..n_max from one incremental sweep (counts distinct codes;
// under the separation property codes and carriers are in bijection).
std::vector<std::uint64_t> atom_counts(const ValidatedPCIM& map, int n_max,
                                       const AtomOptions& opts = {});

// Largest carrier diameter per generation, 1..n_max.
std::vector<Rational> max_diameters(const ValidatedPCIM& map, int n_max,
                                    const AtomOptions& opts = {});

struct LocateResult {
  std::vector<Atom> chain;                 // generations 1..k
  std::optional<int> not_in_cover_at;      // first generation with no atom containing x

  bool complete() const { return !not_in_cover_at.has_value(); }
};

// The unique nested chain of atoms containing x, one per generation up to
// n. Requires the separation property (uniqueness fails without it).
LocateResult locate_point(const ValidatedPCIM& map, const Rational& x, int n,
                          const AtomOptions& opts = {});

// Points of A that land exactly on Delta within < n steps, found by exact
// pullback of Delta through the branch inverses. Sorted ascending.
std::vector<Rational> cut_points(const ValidatedPCIM& map, const ClosedInterval& A,
                                 int n);

// Closures of the connected components of A minus the given interior cut
// points (cuts at the endpoints of A separate nothing).
std::vector<ClosedInterval> split_components(const ClosedInterval& A,
                                             const std::vector<Rational>& cuts);

}  // namespace pcim
