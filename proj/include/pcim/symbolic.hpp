#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pcim/map.hpp"

namespace pcim {

// Symbol sequence of an orbit. symbols[t] stores the 1-based piece index of
// f^t(x) as a raw byte; `hit` records the first exact landing on Delta, in
// which case the recorded prefix stops there.
struct Itinerary {
  std::string symbols;
  struct HitDelta {
    long step = 0;
    Rational cut;
  };
  std::optional<HitDelta> hit;
  int alphabet = 0;  // N of the generating map

  bool completed() const { return !hit.has_value(); }
  long length() const { return static_cast<long>(symbols.size()); }
};

Itinerary itinerary(const ValidatedPCIM& map, const Rational& x, long steps);

// Human-readable word: "121" for alphabets up to 9 symbols, dot separated
// ("1.2.12") beyond that.
std::string format_word(std::string_view word, int alphabet);

// Distinct length-n factors of the recorded prefix (a finite-prefix
// under-approximation of the factor set of the infinite itinerary).
std::set<std::string> word_set(const Itinerary& itin, int n);

struct AffineFit {
  int m0 = 0;
  int alpha = 0;
  std::int64_t beta = 0;

  bool operator==(const AffineFit&) const = default;
};

struct Undetermined {
  std::string reason;
};

// p(1..n_max) over a completed itinerary prefix, with the eventually-affine
// fit when one is stable.
struct ComplexityProfile {
  std::vector<std::uint64_t> values;  // values[k] = p(k+1)
  std::optional<AffineFit> affine_fit;
  long horizon_T = 0;
  int alphabet = 0;

  int n_max() const { return static_cast<int>(values.size()); }
  std::uint64_t p(int n) const { return values[n - 1]; }
};

inline constexpr int kDefaultConfirmWindow = 8;

ComplexityProfile complexity_profile(const Itinerary& itin, int n_max,
                                     int confirm_window = kDefaultConfirmWindow);

// Smallest m0 whose first differences stay constant through n_max with at
// least confirm_window+1 confirmations; alpha outside {0,...,N-1} raises
// AlphaOutOfRange, beta outside the theorem range yields Undetermined.
std::variant<AffineFit, Undetermined> detect_affine(const ComplexityProfile& profile,
                                                    int confirm_window);

// Exactly verified cycle: points pairwise distinct, each off Delta, mapped
// cyclically onto each other. Stored in orbit order starting at the
// smallest point.
struct PeriodicOrbit {
  std::vector<Rational> points;

  int period() const { return static_cast<int>(points.size()); }
  bool operator==(const PeriodicOrbit& other) const;  // as point sets
};

struct CantorEvidence {
  int alpha = 0;  // detected complexity slope, >= 1
};

struct OmegaClass {
  std::variant<PeriodicOrbit, CantorEvidence, Undetermined> kind;

  const PeriodicOrbit* periodic() const { return std::get_if<PeriodicOrbit>(&kind); }
  const CantorEvidence* cantor() const { return std::get_if<CantorEvidence>(&kind); }
  const Undetermined* undetermined() const { return std::get_if<Undetermined>(&kind); }
};

// Builds the cycle whose itinerary repeats `word` by solving the fixed
// point of the branch composition; nullopt when the candidate fails exact
// verification (wrong pieces or a cut-point hit).
std::optional<PeriodicOrbit> verify_cycle_word(const ValidatedPCIM& map,
                                               std::string_view word);

// Exact repeat scan over the orbit of x (Brent cycle detection, at most
// ~3*budget evaluations). nullopt if no exact cycle occurs within budget
// or the orbit hits Delta.
std::optional<PeriodicOrbit> find_exact_cycle(const ValidatedPCIM& map,
                                              const Rational& x, long budget);

struct ClassifyDetail {
  OmegaClass cls;
  Itinerary itin;
  std::optional<ComplexityProfile> profile;
};

// Orbit classification: exact repeat first, then candidate cycles solved
// from the itinerary tail, then the complexity slope. An exact verified
// cycle always wins; periodic-looking evidence without a certificate is
// Undetermined. Throws LeftXtilde when the orbit of x hits Delta.
OmegaClass classify_omega(const ValidatedPCIM& map, const Rational& x, long steps,
                          int n_max);
ClassifyDetail classify_detail(const ValidatedPCIM& map, const Rational& x, long steps,
                               int n_max);

}  // namespace pcim
