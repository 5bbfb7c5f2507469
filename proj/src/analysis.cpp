#include "pcim/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <thread>

#include "pcim/errors.hpp"

namespace pcim {

namespace {

void require_separated(const ValidatedPCIM& map, const char* what) {
  if (map.separation().separated()) return;
  const auto& v = *map.separation().violation;
  raise(Errc::SeparationRequired,
        std::string(what) + " requires the separation property; image closures of pieces " +
            std::to_string(v.piece_a) + " and " + std::to_string(v.piece_b) +
            " overlap in " + to_string(v.overlap));
}

// sorted, pairwise disjoint intervals: does any of them meet `target`?
bool meets_any(const std::vector<ClosedInterval>& sorted, const ClosedInterval& target) {
  auto it = std::partition_point(sorted.begin(), sorted.end(),
                                 [&](const ClosedInterval& c) { return c.hi < target.lo; });
  return it != sorted.end() && it->lo <= target.hi;
}

bool orbit_avoids_delta(const ValidatedPCIM& map, const Rational& x, int steps) {
  Rational point = x;
  for (int t = 0; t < steps; ++t) {
    std::optional<int> piece = piece_index(map, point);
    if (!piece) return false;
    if (t + 1 < steps) point = map.branch(*piece)(point);
  }
  return true;
}

}  // namespace

AttractorCover approximate_attractor(const ValidatedPCIM& map, int n,
                                     const AtomOptions& opts) {
  AtomSet gen = atoms_generation(map, n, opts);
  AttractorCover cover;
  cover.generation = n;
  cover.total_length = 0;
  cover.max_diam = 0;
  cover.intervals.reserve(gen.atoms.size());
  for (const Atom& a : gen.atoms) {
    cover.intervals.push_back(a.carrier);
    cover.max_diam = std::max(cover.max_diam, a.carrier.diameter());
  }
  // measure of the merged union (carriers may repeat or overlap when the
  // separation property fails)
  Rational merged_hi;
  bool open = false;
  for (const ClosedInterval& c : cover.intervals) {
    if (!open) {
      cover.total_length += c.diameter();
      merged_hi = c.hi;
      open = true;
    } else if (c.lo > merged_hi) {
      cover.total_length += c.diameter();
      merged_hi = c.hi;
    } else if (c.hi > merged_hi) {
      cover.total_length += c.hi - merged_hi;
      merged_hi = c.hi;
    }
  }
  return cover;
}

BasicPieceReport find_basic_pieces(const ValidatedPCIM& map, std::vector<Rational> seeds,
                                   long steps, int n_max, int seed_depth,
                                   const AtomOptions& opts) {
  require_separated(map, "basic piece discovery");
  if (seeds.empty()) {
    AtomSet gen = atoms_generation(map, seed_depth, opts);
    seeds.reserve(gen.atoms.size());
    for (const Atom& a : gen.atoms) seeds.push_back(a.carrier.midpoint());
  }

  BasicPieceReport report;
  std::vector<std::vector<std::string>> cantor_signatures;
  std::optional<AtomSet> cover_gen;  // built lazily for Cantor candidates

  for (const Rational& seed : seeds) {
    ClassifyDetail detail;
    try {
      detail = classify_detail(map, seed, steps, n_max);
    } catch (const PcimError& e) {
      if (e.code() == Errc::LeftXtilde) {
        report.notes.push_back("seed " + to_string(seed) + " skipped: " + e.what());
        continue;
      }
      throw;
    }

    if (const PeriodicOrbit* orbit = detail.cls.periodic()) {
      if (std::find(report.periodic_orbits.begin(), report.periodic_orbits.end(),
                    *orbit) == report.periodic_orbits.end())
        report.periodic_orbits.push_back(*orbit);
      continue;
    }
    if (const CantorEvidence* cantor = detail.cls.cantor()) {
      const long tail_start = detail.itin.length() / 2;
      Itinerary tail;
      tail.symbols = detail.itin.symbols.substr(static_cast<std::size_t>(tail_start));
      tail.alphabet = detail.itin.alphabet;
      const int depth = std::min<int>(seed_depth, static_cast<int>(tail.length()));
      std::set<std::string> codes = word_set(tail, depth);

      if (!cover_gen || cover_gen->generation != depth)
        cover_gen = atoms_generation(map, depth, opts);
      std::vector<Atom> cover;
      std::vector<std::string> signature(codes.begin(), codes.end());
      for (const Atom& a : cover_gen->atoms)
        if (codes.count(a.code)) cover.push_back(a);

      if (std::find(cantor_signatures.begin(), cantor_signatures.end(), signature) ==
          cantor_signatures.end()) {
        cantor_signatures.push_back(std::move(signature));
        CantorCandidate candidate{seed, cantor->alpha, std::move(cover), std::nullopt};
        if (detail.profile) candidate.fit = detail.profile->affine_fit;
        report.cantor_candidates.push_back(std::move(candidate));
      }
      continue;
    }
    report.notes.push_back("seed " + to_string(seed) + " undetermined: " +
                           detail.cls.undetermined()->reason);
  }
  return report;
}

std::uint64_t atoms_on_piece(const ValidatedPCIM& map, const PeriodicOrbit& piece, int n,
                             const AtomOptions& opts) {
  require_separated(map, "atom counting per basic piece");
  AtomSet gen = atoms_generation(map, n, opts);
  std::set<std::size_t> hit;
  for (const Rational& point : piece.points) {
    auto it = std::partition_point(gen.atoms.begin(), gen.atoms.end(),
                                   [&](const Atom& a) { return a.carrier.hi < point; });
    if (it != gen.atoms.end() && it->carrier.contains(point))
      hit.insert(static_cast<std::size_t>(it - gen.atoms.begin()));
  }
  return hit.size();
}

std::uint64_t atoms_on_piece(const ValidatedPCIM& map, const CantorCandidate& piece,
                             int n, const AtomOptions& opts) {
  require_separated(map, "atom counting per basic piece");
  AtomSet gen = atoms_generation(map, n, opts);
  std::vector<ClosedInterval> cover;
  cover.reserve(piece.cover.size());
  for (const Atom& a : piece.cover) cover.push_back(a.carrier);
  std::uint64_t count = 0;
  for (const Atom& a : gen.atoms)
    if (meets_any(cover, a.carrier)) ++count;
  return count;
}

DimensionEstimate box_dimension_estimate(const ValidatedPCIM& map, int n_max,
                                         const AtomOptions& opts) {
  require_separated(map, "the box dimension estimate");
  if (n_max < 1) raise(Errc::BadParameters, "n_max must be >= 1");
  const Rational& lambda = map.contraction_rate();
  if (lambda >= 1)
    raise(Errc::LambdaDegenerate, "contraction rate " + to_string(lambda) + " >= 1");

  const std::vector<std::uint64_t> counts = atom_counts(map, n_max, opts);
  const Rational diam = map.domain().diameter();
  const double log_inv_lambda = -log_rational(lambda);
  const double log_inv_diam = -log_rational(diam);

  DimensionEstimate estimate;
  estimate.rows.reserve(static_cast<std::size_t>(n_max));
  Rational eps = diam;
  for (int n = 1; n <= n_max; ++n) {
    eps *= lambda;  // lambda^n * diam(X)
    const double denom = static_cast<double>(n) * log_inv_lambda + log_inv_diam;
    const double d = denom > 0
                         ? std::log(static_cast<double>(counts[n - 1])) / denom
                         : std::numeric_limits<double>::quiet_NaN();
    estimate.rows.push_back(DimensionRow{n, eps, counts[n - 1], d});
  }
  return estimate;
}

SpanningSet spanning_set(const ValidatedPCIM& map, int n, const Rational& epsilon,
                         int safety_depth, const AtomOptions& opts) {
  require_separated(map, "spanning set construction");
  if (n < 1) raise(Errc::BadParameters, "n must be >= 1");
  if (epsilon <= 0) raise(Errc::BadParameters, "epsilon must be positive");

  SpanningSet result;
  result.n = n;
  result.epsilon = epsilon;

  // minimal n0 >= n with every generation-n0 atom of diameter < epsilon
  AtomStream stream(map, opts.workers);
  const int cap = opts.max_depth + n;
  std::vector<Atom> base;
  while (true) {
    stream.advance();
    if (stream.generation() >= n && stream.max_diameter() < epsilon) {
      result.n0 = stream.generation();
      base = stream.atoms();
      break;
    }
    if (stream.generation() > cap)
      raise(Errc::DepthOverflow,
            "no generation below the depth cap has max atom diameter < epsilon");
  }
  while (stream.generation() < result.n0 + safety_depth) stream.advance();
  std::vector<ClosedInterval> deep;
  deep.reserve(stream.atoms().size());
  for (const Atom& a : stream.atoms()) deep.push_back(a.carrier);

  for (const Atom& atom : base) {
    const std::vector<Rational> cuts = cut_points(map, atom.carrier, n);
    for (const ClosedInterval& component : split_components(atom.carrier, cuts)) {
      if (!meets_any(deep, component)) continue;
      // interior points of a component avoid Delta for all of the first n
      // steps by construction; the halving loop is a safety net
      Rational rep = component.midpoint();
      int tries = 0;
      while (!orbit_avoids_delta(map, rep, n)) {
        if (++tries > 64)
          raise(Errc::RepresentativeOnDeltaPreimage,
                "component " + to_string(component) + " exhausted while avoiding Delta");
        rep = (rep + component.hi) / 2;
      }
      result.components.push_back(component);
      result.representatives.push_back(std::move(rep));
    }
  }
  return result;
}

EntropyEstimate entropy_estimate(const ValidatedPCIM& map, const Rational& epsilon,
                                 int n_max, const AtomOptions& opts) {
  require_separated(map, "the entropy estimate");
  if (n_max < 1) raise(Errc::BadParameters, "n_max must be >= 1");
  if (epsilon <= 0) raise(Errc::BadParameters, "epsilon must be positive");
  const auto& delta = map.delta();
  if (delta.size() >= 2) {
    Rational min_gap = delta[1] - delta[0];
    for (std::size_t j = 2; j < delta.size(); ++j)
      min_gap = std::min(min_gap, Rational(delta[j] - delta[j - 1]));
    if (epsilon >= min_gap)
      raise(Errc::EpsilonTooLarge, "epsilon must be below the minimal cut gap " +
                                       to_string(min_gap));
  }

  EntropyEstimate estimate;
  estimate.epsilon = epsilon;

  AtomStream stream(map, opts.workers);
  std::vector<std::uint64_t> counts;
  while (true) {
    stream.advance();
    counts.push_back(stream.atoms().size());
    if (stream.max_diameter() < epsilon) {
      estimate.n0 = stream.generation();
      break;
    }
    if (stream.generation() > opts.max_depth)
      raise(Errc::DepthOverflow,
            "no generation below the depth cap has max atom diameter < epsilon");
  }
  estimate.atoms_at_n0 = counts.back();
  while (stream.generation() < estimate.n0 + n_max) {
    stream.advance();
    counts.push_back(stream.atoms().size());
  }

  const std::uint64_t slack = static_cast<std::uint64_t>(map.piece_count() - 1);
  estimate.rows.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    const std::uint64_t r_upper = counts[static_cast<std::size_t>(estimate.n0 + n - 1)];
    estimate.rows.push_back(EntropyRow{
        n, r_upper, std::log(static_cast<double>(r_upper)) / static_cast<double>(n),
        static_cast<std::uint64_t>(n) * slack + estimate.atoms_at_n0});
  }
  return estimate;
}

PseudoInvariance check_pseudo_invariant(const ValidatedPCIM& map,
                                        const std::vector<Rational>& S) {
  std::vector<Rational> sorted = S;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  auto member = [&sorted](const Rational& x) {
    return std::binary_search(sorted.begin(), sorted.end(), x);
  };

  PseudoInvariance result;
  for (const Rational& x : sorted) {
    if (map.on_delta(x)) {
      OneSidedLimits lim = one_sided_limits(map, x);
      const bool ok =
          (lim.left && member(*lim.left)) || (lim.right && member(*lim.right));
      if (!ok) {
        result.witness = PseudoInvariance::Witness{
            x, std::nullopt, "no one-sided limit of f at this cut point belongs to S"};
        return result;
      }
    } else {
      Rational image = evaluate(map, x);
      if (!member(image)) {
        result.witness =
            PseudoInvariance::Witness{x, image, "f(x) does not belong to S"};
        return result;
      }
    }
  }
  return result;
}

// ---- parameter sweeps ---------------------------------------------------

GridSpec parse_grid_spec(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0)
    raise(Errc::BadParameters, "grid spec must look like \"param=lo:hi:steps\", got \"" +
                                   text + "\"");
  GridSpec grid;
  grid.param = text.substr(0, eq);
  const std::string rest = text.substr(eq + 1);
  const auto c1 = rest.find(':');
  const auto c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    raise(Errc::BadParameters, "grid spec must look like \"param=lo:hi:steps\", got \"" +
                                   text + "\"");
  grid.lo = parse_rational(rest.substr(0, c1), "grid lo");
  grid.hi = parse_rational(rest.substr(c1 + 1, c2 - c1 - 1), "grid hi");
  const std::string steps = rest.substr(c2 + 1);
  try {
    grid.steps = std::stoi(steps);
  } catch (const std::exception&) {
    raise(Errc::BadParameters, "grid steps \"" + steps + "\" is not an integer");
  }
  if (grid.steps < 1) raise(Errc::BadParameters, "grid needs at least one step");
  if (grid.lo > grid.hi) raise(Errc::BadParameters, "grid lo exceeds hi");
  if (grid.steps == 1 && grid.lo != grid.hi)
    raise(Errc::BadParameters, "a single-step grid needs lo == hi");
  return grid;
}

PCIMDefinition build_family(const std::string& family,
                            const std::vector<std::pair<std::string, Rational>>& params) {
  if (family == "contracted_rotation") {
    std::optional<Rational> lambda, delta;
    for (const auto& [name, value] : params) {
      if (name == "lambda" && !lambda)
        lambda = value;
      else if (name == "delta" && !delta)
        delta = value;
      else
        raise(Errc::BadParameters,
              "unexpected or repeated parameter \"" + name + "\" for contracted_rotation");
    }
    if (!lambda || !delta)
      raise(Errc::BadParameters, "contracted_rotation needs lambda and delta");
    return contracted_rotation(*lambda, *delta);
  }
  raise(Errc::BadParameters, "unknown family \"" + family + "\"");
}

const char* sweep_kind_name(SweepCell::Kind kind) {
  switch (kind) {
    case SweepCell::Kind::Periodic: return "Periodic";
    case SweepCell::Kind::CantorLike: return "CantorLike";
    case SweepCell::Kind::Undetermined: return "Undetermined";
    case SweepCell::Kind::Invalid: return "Invalid";
  }
  return "Unknown";
}

namespace {

SweepCell run_sweep_cell(const std::string& family,
                         std::vector<std::pair<std::string, Rational>> params,
                         const SweepBudget& budget) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepCell cell;
  cell.params = std::move(params);
  auto finish = [&t0, &cell]() -> SweepCell& {
    cell.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return cell;
  };

  AtomOptions atom_opts;
  atom_opts.max_depth = std::max(kDefaultDepthCap, budget.n_max);

  std::optional<ValidatedPCIM> map;
  try {
    map = validate_pcim(build_family(family, cell.params));
  } catch (const PcimError& e) {
    cell.kind = SweepCell::Kind::Invalid;
    cell.detail = e.what();
    return finish();
  }

  if (!map->separation().separated()) {
    const auto& v = *map->separation().violation;
    cell.kind = SweepCell::Kind::Invalid;
    cell.detail = "separation violated between pieces " + std::to_string(v.piece_a) +
                  " and " + std::to_string(v.piece_b);
    return finish();
  }

  const DomainCheck dc =
      check_D_in_Xtilde(*map, std::min(budget.steps, kDefaultHorizon));
  if (!dc.verified()) {
    cell.kind = SweepCell::Kind::Undetermined;
    cell.detail = "one-sided limit " + to_string(dc.failure->point) +
                  " reaches Delta at step " + std::to_string(dc.failure->step);
    cell.atom_count = atom_counts(*map, budget.n_max, atom_opts).back();
    return finish();
  }

  BasicPieceReport report =
      find_basic_pieces(*map, {}, budget.steps, budget.n_max, /*seed_depth=*/6, atom_opts);
  cell.atom_count = atom_counts(*map, budget.n_max, atom_opts).back();

  if (report.n1() == 1 && report.n2() == 0) {
    cell.kind = SweepCell::Kind::Periodic;
    cell.orbit = report.periodic_orbits.front().points;
    cell.period = report.periodic_orbits.front().period();
    // the cycle point's own itinerary gives the clean (m0, 0, period) fit
    Itinerary it = itinerary(*map, cell.orbit.front(),
                             std::min<long>(budget.steps, 10L * budget.n_max + 1000));
    cell.fit = complexity_profile(it, budget.n_max).affine_fit;
  } else if (report.n1() == 0 && report.n2() == 1) {
    cell.kind = SweepCell::Kind::CantorLike;
    cell.alpha = report.cantor_candidates.front().alpha;
    cell.fit = report.cantor_candidates.front().fit;
  } else if (report.n1() + report.n2() == 0) {
    cell.kind = SweepCell::Kind::Undetermined;
    cell.detail = report.notes.empty() ? "no basic piece certified within budget"
                                       : report.notes.front();
  } else {
    cell.kind = SweepCell::Kind::Undetermined;
    cell.detail = "multiple basic pieces at budget: N1=" + std::to_string(report.n1()) +
                  ", N2=" + std::to_string(report.n2());
  }
  return finish();
}

}  // namespace

std::vector<SweepCell> parameter_sweep(
    const std::string& family,
    const std::vector<std::pair<std::string, Rational>>& fixed, const GridSpec& grid,
    const SweepBudget& budget, int workers) {
  if (budget.steps < budget.n_max + kDefaultConfirmWindow + 1)
    raise(Errc::BadParameters, "sweep budget: steps must be at least n_max + " +
                                   std::to_string(kDefaultConfirmWindow + 1));

  std::vector<std::vector<std::pair<std::string, Rational>>> cells;
  cells.reserve(static_cast<std::size_t>(grid.steps));
  for (int k = 0; k < grid.steps; ++k) {
    Rational value = grid.steps == 1
                         ? grid.lo
                         : Rational(grid.lo + (grid.hi - grid.lo) * k / (grid.steps - 1));
    auto params = fixed;
    params.emplace_back(grid.param, std::move(value));
    cells.push_back(std::move(params));
  }

  std::vector<SweepCell> results(cells.size());
  if (workers <= 1) {
    for (std::size_t k = 0; k < cells.size(); ++k)
      results[k] = run_sweep_cell(family, cells[k], budget);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t n_threads = std::min<std::size_t>(workers, cells.size());
    pool.reserve(n_threads);
    for (std::size_t w = 0; w < n_threads; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t k = next.fetch_add(1);
          if (k >= cells.size()) return;
          results[k] = run_sweep_cell(family, cells[k], budget);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  return results;
}

}  // namespace pcim
