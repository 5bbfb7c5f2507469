#include "pcim/atoms.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <thread>

#include "pcim/errors.hpp"

namespace pcim {

std::optional<ClosedInterval> atom_image(const ValidatedPCIM& map, int piece,
                                         const ClosedInterval& A) {
  const ClosedInterval closure = map.piece_closure(piece);
  Rational lo = std::max(A.lo, closure.lo);
  Rational hi = std::min(A.hi, closure.hi);
  if (lo > hi) return std::nullopt;
  if (lo == hi && !map.piece_contains(piece, lo))
    return std::nullopt;  // single point on an open side of the piece
  const AffineBranch& br = map.branch(piece);
  Rational u = br(lo), v = br(hi);
  if (u > v) std::swap(u, v);
  return ClosedInterval(std::move(u), std::move(v));
}

namespace {

bool atom_order(const Atom& a, const Atom& b) {
  if (a.carrier.lo != b.carrier.lo) return a.carrier.lo < b.carrier.lo;
  if (a.carrier.hi != b.carrier.hi) return a.carrier.hi < b.carrier.hi;
  return a.code < b.code;
}

std::vector<Atom> expand_range(const ValidatedPCIM& map, const std::vector<Atom>& parents,
                               std::size_t begin, std::size_t end) {
  std::vector<Atom> children;
  children.reserve((end - begin) * 2);
  const int n_pieces = map.piece_count();
  for (std::size_t k = begin; k < end; ++k) {
    for (int i = 1; i <= n_pieces; ++i) {
      if (auto image = atom_image(map, i, parents[k].carrier)) {
        // nondegenerate domains under nonzero slopes never produce point atoms
        assert(!image->degenerate());
        children.push_back(Atom{std::move(*image),
                                parents[k].code + static_cast<char>(i)});
      }
    }
  }
  return children;
}

std::vector<Atom> expand(const ValidatedPCIM& map, const std::vector<Atom>& parents,
                         int workers) {
  std::vector<Atom> next;
  if (workers <= 1 || parents.size() < 64) {
    next = expand_range(map, parents, 0, parents.size());
  } else {
    const std::size_t n_chunks = std::min<std::size_t>(workers, parents.size());
    std::vector<std::vector<Atom>> chunks(n_chunks);
    std::vector<std::thread> pool;
    pool.reserve(n_chunks);
    for (std::size_t c = 0; c < n_chunks; ++c) {
      std::size_t begin = parents.size() * c / n_chunks;
      std::size_t end = parents.size() * (c + 1) / n_chunks;
      pool.emplace_back([&, c, begin, end] {
        chunks[c] = expand_range(map, parents, begin, end);
      });
    }
    for (auto& t : pool) t.join();
    for (auto& chunk : chunks)
      next.insert(next.end(), std::make_move_iterator(chunk.begin()),
                  std::make_move_iterator(chunk.end()));
  }
  std::sort(next.begin(), next.end(), atom_order);
  return next;
}

void require_depth(int n, int cap) {
  if (n < 1) raise(Errc::BadParameters, "generation index must be >= 1");
  if (n > cap)
    raise(Errc::DepthOverflow, "generation " + std::to_string(n) +
                                   " exceeds the depth cap " + std::to_string(cap));
}

}  // namespace

AtomStream::AtomStream(const ValidatedPCIM& map, int workers)
    : map_(&map), workers_(workers), atoms_{Atom{map.domain(), ""}} {}

void AtomStream::advance() {
  atoms_ = expand(*map_, atoms_, workers_);
  ++generation_;
}

Rational AtomStream::max_diameter() const {
  Rational best = 0;
  for (const Atom& a : atoms_) best = std::max(best, a.carrier.diameter());
  return best;
}

AtomSet atoms_generation(const ValidatedPCIM& map, int n, const AtomOptions& opts) {
  require_depth(n, opts.max_depth);
  AtomStream stream(map, opts.workers);
  while (stream.generation() < n) stream.advance();
  return AtomSet{n, stream.atoms()};
}

AtomSet atoms_bruteforce(const ValidatedPCIM& map, int n, int cap) {
  require_depth(n, cap);
  const int n_pieces = map.piece_count();
  std::vector<Atom> atoms;
  std::string code(static_cast<std::size_t>(n), static_cast<char>(1));
  while (true) {
    std::optional<ClosedInterval> carrier = map.domain();
    for (char c : code) {
      carrier = atom_image(map, c, *carrier);
      if (!carrier) break;
    }
    if (carrier) atoms.push_back(Atom{std::move(*carrier), code});
    // odometer over {1..N}^n
    int pos = n - 1;
    while (pos >= 0 && code[pos] == static_cast<char>(n_pieces)) {
      code[pos] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++code[pos];
  }
  std::sort(atoms.begin(), atoms.end(), atom_order);
  return AtomSet{n, std::move(atoms)};
}

std::vector<std::uint64_t> atom_counts(const ValidatedPCIM& map, int n_max,
                                       const AtomOptions& opts) {
  require_depth(n_max, opts.max_depth);
  std::vector<std::uint64_t> counts;
  counts.reserve(static_cast<std::size_t>(n_max));
  AtomStream stream(map, opts.workers);
  for (int g = 1; g <= n_max; ++g) {
    stream.advance();
    counts.push_back(stream.atoms().size());
  }
  return counts;
}

std::vector<Rational> max_diameters(const ValidatedPCIM& map, int n_max,
                                    const AtomOptions& opts) {
  require_depth(n_max, opts.max_depth);
  std::vector<Rational> result;
  result.reserve(static_cast<std::size_t>(n_max));
  AtomStream stream(map, opts.workers);
  for (int g = 1; g <= n_max; ++g) {
    stream.advance();
    result.push_back(stream.max_diameter());
  }
  return result;
}

LocateResult locate_point(const ValidatedPCIM& map, const Rational& x, int n,
                          const AtomOptions& opts) {
  if (!map.separation().separated())
    raise(Errc::SeparationRequired,
          "the nested atom chain is unique only under the separation property");
  require_depth(n, opts.max_depth);
  if (!map.domain().contains(x))
    raise(Errc::OutOfDomain, to_string(x) + " is outside X");

  LocateResult result;
  AtomStream stream(map, opts.workers);
  for (int g = 1; g <= n; ++g) {
    stream.advance();
    const auto& current = stream.atoms();
    // carriers are pairwise disjoint here, so at most one can contain x
    auto it = std::partition_point(current.begin(), current.end(),
                                   [&x](const Atom& a) { return a.carrier.hi < x; });
    if (it == current.end() || !it->carrier.contains(x)) {
      result.not_in_cover_at = g;
      return result;
    }
    if (!result.chain.empty())
      assert(result.chain.back().carrier.contains(it->carrier));
    result.chain.push_back(*it);
  }
  return result;
}

std::vector<Rational> cut_points(const ValidatedPCIM& map, const ClosedInterval& A,
                                 int n) {
  if (n < 1) raise(Errc::BadParameters, "cut horizon must be >= 1");
  std::set<Rational> result;
  std::set<Rational> current(map.delta().begin(), map.delta().end());
  for (int t = 0; t < n; ++t) {
    for (const Rational& s : current)
      if (A.contains(s)) result.insert(s);
    if (t + 1 == n) break;
    std::set<Rational> preimages;
    for (const Rational& s : current) {
      for (int i = 1; i <= map.piece_count(); ++i) {
        const AffineBranch& br = map.branch(i);
        Rational x((s - br.intercept) / br.slope);
        if (map.piece_contains(i, x)) preimages.insert(std::move(x));
      }
    }
    current = std::move(preimages);
  }
  return {result.begin(), result.end()};
}

std::vector<ClosedInterval> split_components(const ClosedInterval& A,
                                             const std::vector<Rational>& cuts) {
  std::vector<ClosedInterval> components;
  Rational left = A.lo;
  for (const Rational& c : cuts) {
    if (c <= A.lo || c >= A.hi) continue;  // boundary cuts separate nothing
    components.emplace_back(left, c);
    left = c;
  }
  components.emplace_back(std::move(left), A.hi);
  return components;
}

}  // namespace pcim
