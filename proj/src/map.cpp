#include "pcim/map.hpp"

#include <algorithm>

#include "pcim/errors.hpp"

namespace pcim {

namespace {

Rational boundary(const PCIMDefinition& def, int i) {
  // boundary(0) = c0, boundary(N) = cN, boundary(i) = c_i in between
  const int n_cuts = static_cast<int>(def.cut_points.size());
  if (i == 0) return def.domain.lo;
  if (i == n_cuts + 1) return def.domain.hi;
  return def.cut_points[i - 1];
}

}  // namespace

ClosedInterval ValidatedPCIM::piece_closure(int piece) const {
  return ClosedInterval(boundary(def_, piece - 1), boundary(def_, piece));
}

bool ValidatedPCIM::piece_contains(int piece, const Rational& x) const {
  const ClosedInterval closure = piece_closure(piece);
  if (x < closure.lo || x > closure.hi) return false;
  if (x == closure.lo) {
    // left end is closed only for X1 when c0 is not adjoined to Delta
    return piece == 1 && !def_.open_ends[0];
  }
  if (x == closure.hi) {
    return piece == piece_count() && !def_.open_ends[1];
  }
  return true;
}

bool ValidatedPCIM::on_delta(const Rational& x) const {
  return std::binary_search(delta_.begin(), delta_.end(), x);
}

ValidatedPCIM validate_pcim(const PCIMDefinition& def) {
  const std::size_t n_branches = def.branches.size();
  if (n_branches == 0) raise(Errc::MalformedDefinition, "map has no branches");
  if (def.cut_points.size() + 1 != n_branches)
    raise(Errc::MalformedDefinition,
          "expected " + std::to_string(def.cut_points.size() + 1) + " branches for " +
              std::to_string(def.cut_points.size()) + " cut points, got " +
              std::to_string(n_branches));
  if (n_branches > 250) raise(Errc::MalformedDefinition, "more than 250 pieces");

  if (!(def.domain.lo < def.domain.hi))
    raise(Errc::UnorderedCuts, "domain endpoints are not strictly ordered");
  Rational prev = def.domain.lo;
  for (std::size_t j = 0; j < def.cut_points.size(); ++j) {
    if (!(prev < def.cut_points[j]))
      raise(Errc::UnorderedCuts, "cut point #" + std::to_string(j + 1) + " (" +
                                     to_string(def.cut_points[j]) +
                                     ") does not increase strictly");
    prev = def.cut_points[j];
  }
  if (!(prev < def.domain.hi))
    raise(Errc::UnorderedCuts, "last cut point is not below the right domain endpoint");

  ValidatedPCIM map;
  map.def_ = def;

  Rational lambda = 0;
  for (std::size_t i = 0; i < n_branches; ++i) {
    const AffineBranch& br = def.branches[i];
    if (br.slope == 0)
      raise(Errc::ZeroSlope, "branch #" + std::to_string(i + 1) + " has zero slope");
    Rational a = abs(br.slope);
    if (a >= 1)
      raise(Errc::NotAContraction, "branch #" + std::to_string(i + 1) + " has |slope| = " +
                                       to_string(a) + " >= 1");
    lambda = std::max(lambda, a);
  }
  map.lambda_ = lambda;

  // branch image closures, checked against X
  SeparationResult sep;
  for (int i = 1; i <= static_cast<int>(n_branches); ++i) {
    const ClosedInterval piece(boundary(def, i - 1), boundary(def, i));
    const AffineBranch& br = def.branches[i - 1];
    Rational u = br(piece.lo), v = br(piece.hi);
    if (u > v) std::swap(u, v);
    ClosedInterval image(u, v);
    if (!def.domain.contains(image))
      raise(Errc::ImageEscapesDomain, "closure of branch image of piece #" +
                                          std::to_string(i) + " is " + to_string(image) +
                                          ", outside X = " + to_string(def.domain));
    sep.images.push_back(std::move(image));
  }
  for (std::size_t a = 0; a < sep.images.size() && !sep.violation; ++a) {
    for (std::size_t b = a + 1; b < sep.images.size(); ++b) {
      if (auto overlap = intersect(sep.images[a], sep.images[b])) {
        sep.violation = SeparationViolation{static_cast<int>(a + 1),
                                            static_cast<int>(b + 1), *overlap};
        break;
      }
    }
  }
  map.separation_ = std::move(sep);

  map.delta_ = def.cut_points;
  if (def.open_ends[0]) map.delta_.insert(map.delta_.begin(), def.domain.lo);
  if (def.open_ends[1]) map.delta_.push_back(def.domain.hi);

  std::vector<Rational> limits;
  for (const Rational& c : map.delta_) {
    OneSidedLimits lim = one_sided_limits(map, c);
    if (lim.left) limits.push_back(*lim.left);
    if (lim.right) limits.push_back(*lim.right);
  }
  std::sort(limits.begin(), limits.end());
  limits.erase(std::unique(limits.begin(), limits.end()), limits.end());
  map.limits_ = std::move(limits);

  return map;
}

std::optional<int> piece_index(const ValidatedPCIM& map, const Rational& x) {
  const PCIMDefinition& def = map.definition();
  if (!def.domain.contains(x))
    raise(Errc::OutOfDomain, to_string(x) + " is outside X = " + to_string(def.domain));
  if (x == def.domain.lo) {
    if (def.open_ends[0]) return std::nullopt;
    return 1;
  }
  if (x == def.domain.hi) {
    if (def.open_ends[1]) return std::nullopt;
    return map.piece_count();
  }
  const auto& cuts = def.cut_points;
  auto it = std::lower_bound(cuts.begin(), cuts.end(), x);
  if (it != cuts.end() && *it == x) return std::nullopt;
  return static_cast<int>(it - cuts.begin()) + 1;
}

Rational evaluate(const ValidatedPCIM& map, const Rational& x) {
  std::optional<int> piece = piece_index(map, x);
  if (!piece)
    raise(Errc::OnCutPoint, "f is undefined on the cut point " + to_string(x));
  return map.branch(*piece)(x);
}

const SeparationResult& check_separation(const ValidatedPCIM& map) {
  return map.separation();
}

OneSidedLimits one_sided_limits(const ValidatedPCIM& map, const Rational& c) {
  if (!map.on_delta(c))
    raise(Errc::NotACutPoint, to_string(c) + " is not a cut point of the map");
  const PCIMDefinition& def = map.definition();
  OneSidedLimits result;
  if (c > def.domain.lo) {
    // piece left of c: the one whose closure ends at c
    const auto& cuts = def.cut_points;
    auto it = std::lower_bound(cuts.begin(), cuts.end(), c);
    int piece = (it != cuts.end() && *it == c) ? static_cast<int>(it - cuts.begin()) + 1
                                               : map.piece_count();
    result.left = map.branch(piece)(c);
  }
  if (c < def.domain.hi) {
    const auto& cuts = def.cut_points;
    auto it = std::lower_bound(cuts.begin(), cuts.end(), c);
    int piece = (it != cuts.end() && *it == c) ? static_cast<int>(it - cuts.begin()) + 2 : 1;
    result.right = map.branch(piece)(c);
  }
  return result;
}

DomainCheck check_D_in_Xtilde(const ValidatedPCIM& map, long horizon) {
  if (horizon < 0) raise(Errc::BadParameters, "negative horizon");
  DomainCheck result;
  result.horizon = horizon;
  for (const Rational& d : map.one_sided_limit_set()) {
    Rational x = d;
    for (long t = 0; t <= horizon; ++t) {
      std::optional<int> piece = piece_index(map, x);
      if (!piece) {
        result.failure = DeltaEscape{d, t};
        return result;
      }
      if (t < horizon) x = map.branch(*piece)(x);
    }
  }
  return result;
}

PCIMDefinition contracted_rotation(const Rational& lambda, const Rational& delta) {
  if (!(lambda > 0 && lambda < 1))
    raise(Errc::BadParameters, "lambda must lie in (0,1), got " + to_string(lambda));
  if (!(delta > 0 && delta < 1))
    raise(Errc::BadParameters, "delta must lie in (0,1), got " + to_string(delta));
  if (!(lambda + delta > 1))
    raise(Errc::BadParameters,
          "lambda + delta must exceed 1 (otherwise the map is a single contraction)");
  PCIMDefinition def;
  def.domain = ClosedInterval(rat(0), rat(1));
  def.cut_points = {Rational((1 - delta) / lambda)};
  def.branches = {AffineBranch{lambda, delta}, AffineBranch{lambda, delta - 1}};
  return def;
}

}  // namespace pcim
