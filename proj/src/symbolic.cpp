#include "pcim/symbolic.hpp"

#include <algorithm>
#include <unordered_set>

#include "pcim/errors.hpp"

namespace pcim {

Itinerary itinerary(const ValidatedPCIM& map, const Rational& x, long steps) {
  if (steps < 1) raise(Errc::BadParameters, "itinerary needs at least one step");
  Itinerary result;
  result.alphabet = map.piece_count();
  result.symbols.reserve(static_cast<std::size_t>(steps));
  Rational point = x;
  for (long t = 0; t < steps; ++t) {
    std::optional<int> piece = piece_index(map, point);
    if (!piece) {
      result.hit = Itinerary::HitDelta{t, point};
      return result;
    }
    result.symbols.push_back(static_cast<char>(*piece));
    if (t + 1 < steps) point = map.branch(*piece)(point);
  }
  return result;
}

std::string format_word(std::string_view word, int alphabet) {
  std::string out;
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (alphabet > 9 && k > 0) out += '.';
    out += std::to_string(static_cast<int>(word[k]));
  }
  return out;
}

std::set<std::string> word_set(const Itinerary& itin, int n) {
  if (!itin.completed())
    raise(Errc::ItineraryLeftXtilde,
          "itinerary leaves X-tilde at step " + std::to_string(itin.hit->step));
  if (n < 1 || n > itin.length())
    raise(Errc::PrefixTooShort, "word length " + std::to_string(n) +
                                    " exceeds recorded prefix of length " +
                                    std::to_string(itin.length()));
  std::set<std::string> words;
  const std::string& s = itin.symbols;
  for (std::size_t t = 0; t + n <= s.size(); ++t) words.insert(s.substr(t, n));
  return words;
}

ComplexityProfile complexity_profile(const Itinerary& itin, int n_max,
                                     int confirm_window) {
  if (!itin.completed())
    raise(Errc::ItineraryLeftXtilde,
          "itinerary leaves X-tilde at step " + std::to_string(itin.hit->step));
  if (n_max < 1) raise(Errc::BadParameters, "n_max must be positive");
  if (confirm_window < 1) raise(Errc::BadParameters, "confirm window must be positive");
  if (itin.length() < static_cast<long>(n_max) + confirm_window + 1)
    raise(Errc::PrefixTooShort,
          "prefix of length " + std::to_string(itin.length()) +
              " is below n_max + stabilization margin = " +
              std::to_string(n_max + confirm_window + 1));

  ComplexityProfile profile;
  profile.horizon_T = itin.length();
  profile.alphabet = itin.alphabet;
  profile.values.reserve(static_cast<std::size_t>(n_max));
  const std::string& s = itin.symbols;
  for (int n = 1; n <= n_max; ++n) {
    std::unordered_set<std::string_view> seen;
    for (std::size_t t = 0; t + n <= s.size(); ++t)
      seen.insert(std::string_view(s).substr(t, n));
    profile.values.push_back(seen.size());
  }

  if (n_max >= confirm_window + 2) {
    try {
      auto fit = detect_affine(profile, confirm_window);
      if (auto* f = std::get_if<AffineFit>(&fit)) profile.affine_fit = *f;
    } catch (const PcimError& e) {
      if (e.code() != Errc::AlphaOutOfRange) throw;
      // out-of-range slope is not a theorem fit; leave the profile bare
    }
  }
  return profile;
}

std::variant<AffineFit, Undetermined> detect_affine(const ComplexityProfile& profile,
                                                    int confirm_window) {
  const int n_max = profile.n_max();
  if (confirm_window < 1) raise(Errc::BadParameters, "confirm window must be positive");
  if (n_max < confirm_window + 2)
    raise(Errc::PrefixTooShort, "profile needs n_max >= confirm_window + 2");
  if (profile.alphabet < 1)
    raise(Errc::MalformedDefinition, "profile carries no alphabet size");

  // d(n) = p(n+1) - p(n), n = 1..n_max-1
  std::vector<std::int64_t> diff(static_cast<std::size_t>(n_max - 1));
  for (int n = 1; n < n_max; ++n)
    diff[n - 1] = static_cast<std::int64_t>(profile.p(n + 1)) -
                  static_cast<std::int64_t>(profile.p(n));

  const std::int64_t alpha = diff[n_max - 2];
  int m0 = 1;
  for (int n = n_max - 1; n >= 1; --n) {
    if (diff[n - 1] != alpha) {
      m0 = n + 1;
      break;
    }
  }
  if (m0 + confirm_window > n_max - 1)
    return Undetermined{"first differences are not constant over a full confirm window"};

  if (alpha < 0 || alpha > profile.alphabet - 1)
    raise(Errc::AlphaOutOfRange,
          "fitted slope " + std::to_string(alpha) + " outside {0,...," +
              std::to_string(profile.alphabet - 1) +
              "}; the affine law requires the separation property");

  const std::int64_t beta =
      static_cast<std::int64_t>(profile.p(m0)) - alpha * static_cast<std::int64_t>(m0);
  if (beta < 1) return Undetermined{"fitted beta below 1, outside the theorem range"};
  if (beta > 1 + static_cast<std::int64_t>(m0) * (profile.alphabet - 1 - alpha))
    return Undetermined{"fitted beta above the theorem bound for the detected m0"};
  return AffineFit{m0, static_cast<int>(alpha), beta};
}

bool PeriodicOrbit::operator==(const PeriodicOrbit& other) const {
  if (points.size() != other.points.size()) return false;
  std::vector<Rational> a = points, b = other.points;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

namespace {

PeriodicOrbit canonical_cycle(std::vector<Rational> points) {
  auto min_it = std::min_element(points.begin(), points.end());
  std::rotate(points.begin(), min_it, points.end());
  return PeriodicOrbit{std::move(points)};
}

// exact cyclic verification: distinct points, each off Delta, f mapping
// each to the next
bool verify_orbit(const ValidatedPCIM& map, const std::vector<Rational>& points) {
  if (points.empty()) return false;
  for (std::size_t k = 0; k < points.size(); ++k) {
    std::optional<int> piece;
    try {
      piece = piece_index(map, points[k]);
    } catch (const PcimError&) {
      return false;
    }
    if (!piece) return false;
    if (map.branch(*piece)(points[k]) != points[(k + 1) % points.size()]) return false;
  }
  std::vector<Rational> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

}  // namespace

std::optional<PeriodicOrbit> verify_cycle_word(const ValidatedPCIM& map,
                                               std::string_view word) {
  if (word.empty()) return std::nullopt;
  for (char c : word)
    if (c < 1 || c > map.piece_count())
      raise(Errc::BadParameters, "cycle word contains an invalid piece index");

  // composition g = f_{w_{p-1}} o ... o f_{w_0}, accumulated left to right
  Rational slope = 1, intercept = 0;
  for (char c : word) {
    const AffineBranch& br = map.branch(c);
    intercept = br.slope * intercept + br.intercept;
    slope = br.slope * slope;
  }
  // |slope| <= lambda^p < 1, so the fixed point is unique
  Rational fixed = intercept / (1 - slope);
  if (!map.domain().contains(fixed)) return std::nullopt;

  std::vector<Rational> points;
  points.reserve(word.size());
  Rational y = fixed;
  for (char c : word) {
    if (!map.piece_contains(c, y)) return std::nullopt;
    points.push_back(y);
    y = map.branch(c)(y);
  }
  if (y != fixed) return std::nullopt;  // cannot happen for the exact fixed point

  // reduce to the minimal period: first return of the starting point
  auto repeat = std::find(points.begin() + 1, points.end(), fixed);
  if (repeat != points.end())
    points.erase(repeat, points.end());
  if (!verify_orbit(map, points)) return std::nullopt;
  return canonical_cycle(std::move(points));
}

std::optional<PeriodicOrbit> find_exact_cycle(const ValidatedPCIM& map,
                                              const Rational& x, long budget) {
  auto step = [&map](Rational& v) -> bool {
    std::optional<int> piece = piece_index(map, v);
    if (!piece) return false;
    v = map.branch(*piece)(v);
    return true;
  };

  // Brent: compare against saved tortoise over power-of-two windows
  Rational tortoise = x;
  Rational hare = x;
  if (!step(hare)) return std::nullopt;
  long power = 1, lam = 1, steps = 1;
  while (tortoise != hare) {
    if (power == lam) {
      tortoise = hare;
      power *= 2;
      lam = 0;
    }
    if (steps >= budget) return std::nullopt;
    if (!step(hare)) return std::nullopt;
    ++steps;
    ++lam;
  }

  // find the cycle start, then collect lam points
  tortoise = x;
  hare = x;
  for (long i = 0; i < lam; ++i)
    if (!step(hare)) return std::nullopt;
  while (tortoise != hare) {
    if (!step(tortoise) || !step(hare)) return std::nullopt;
  }
  std::vector<Rational> points;
  points.reserve(static_cast<std::size_t>(lam));
  Rational y = tortoise;
  for (long i = 0; i < lam; ++i) {
    points.push_back(y);
    if (!step(y)) return std::nullopt;
  }
  if (!verify_orbit(map, points)) return std::nullopt;
  return canonical_cycle(std::move(points));
}

namespace {

// smallest p <= max_p such that the last `window` symbols are p-periodic,
// with at least two full periods of evidence
std::optional<int> tail_period(const std::string& symbols, long window, int max_p) {
  const long T = static_cast<long>(symbols.size());
  window = std::min(window, T);
  const long start = T - window;
  for (int p = 1; p <= max_p; ++p) {
    if (2L * p > window) break;
    bool periodic = true;
    for (long j = start; j + p < T; ++j) {
      if (symbols[j] != symbols[j + p]) {
        periodic = false;
        break;
      }
    }
    if (periodic) return p;
  }
  return std::nullopt;
}

}  // namespace

ClassifyDetail classify_detail(const ValidatedPCIM& map, const Rational& x, long steps,
                               int n_max) {
  if (!map.separation().separated())
    raise(Errc::SeparationRequired,
          "orbit classification relies on the affine complexity law, which needs the "
          "separation property");
  if (n_max < kDefaultConfirmWindow + 2)
    raise(Errc::BadParameters,
          "n_max must be at least " + std::to_string(kDefaultConfirmWindow + 2));

  ClassifyDetail out;
  out.itin = itinerary(map, x, steps);
  if (!out.itin.completed())
    raise(Errc::LeftXtilde, "orbit of " + to_string(x) + " lands on the cut point " +
                                to_string(out.itin.hit->cut) + " at step " +
                                std::to_string(out.itin.hit->step));

  if (auto cycle = find_exact_cycle(map, x, steps)) {
    out.cls.kind = std::move(*cycle);
    return out;
  }

  ComplexityProfile profile = complexity_profile(out.itin, n_max);
  std::optional<AffineFit> fit;
  std::string no_fit_reason;
  bool alpha_out = false;
  try {
    auto fitted = detect_affine(profile, kDefaultConfirmWindow);
    if (auto* f = std::get_if<AffineFit>(&fitted))
      fit = *f;
    else
      no_fit_reason = std::get<Undetermined>(fitted).reason;
  } catch (const PcimError& e) {
    if (e.code() != Errc::AlphaOutOfRange) throw;
    alpha_out = true;
  }

  // candidate periods: smallest exact period of the tail window, plus the
  // complexity plateau value when the slope is zero
  const long T = out.itin.length();
  const int p_cap = static_cast<int>(
      std::min<long>(std::max(64L, 4L * n_max), std::max(1L, T / 4)));
  std::optional<int> scanned = tail_period(out.itin.symbols, std::max(256L, 3L * p_cap), p_cap);
  std::vector<int> candidates;
  if (scanned) candidates.push_back(*scanned);
  if (fit && fit->alpha == 0) {
    int plateau = static_cast<int>(profile.p(n_max));
    if (plateau >= 1 && plateau <= static_cast<int>(T) &&
        (!scanned || *scanned != plateau))
      candidates.push_back(plateau);
  }
  std::sort(candidates.begin(), candidates.end());
  for (int p : candidates) {
    std::string word = out.itin.symbols.substr(static_cast<std::size_t>(T - p));
    if (auto orbit = verify_cycle_word(map, word)) {
      out.cls.kind = std::move(*orbit);
      out.profile = std::move(profile);
      return out;
    }
  }

  const bool periodic_evidence = scanned.has_value() || (fit && fit->alpha == 0);
  if (fit && fit->alpha >= 1 && !periodic_evidence) {
    out.cls.kind = CantorEvidence{fit->alpha};
  } else if (periodic_evidence) {
    out.cls.kind =
        Undetermined{"periodic shadowing evidence without an exact cycle certificate"};
  } else if (alpha_out) {
    out.cls.kind = Undetermined{"complexity slope outside the theorem range"};
  } else {
    out.cls.kind = Undetermined{no_fit_reason.empty()
                                    ? std::string("no stable complexity fit within budget")
                                    : no_fit_reason};
  }
  out.profile = std::move(profile);
  return out;
}

OmegaClass classify_omega(const ValidatedPCIM& map, const Rational& x, long steps,
                          int n_max) {
  return classify_detail(map, x, steps, n_max).cls;
}

}  // namespace pcim
