#pragma once

#include "morphic/matrix.hpp"
#include "morphic/perron.hpp"
#include "morphic/word.hpp"

#include <algorithm>
#include <compare>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace morphic {

/// Strongly connected component of the letter graph (edge j -> i when i occurs in σ(j)).
struct Component {
  std::vector<Letter> letters;
  /// gcd of cycle lengths; 0 for a trivial component (one letter, no loop).
  std::size_t period = 0;
  /// True when the component is a single cycle of simple edges (Perron value 1).
  bool cycle = false;
  PerronValue perron;
  /// Indices of components reachable by one edge (excluding itself).
  std::vector<std::size_t> successors;

  bool trivial() const noexcept { return period == 0; }
};

/// Incidence matrix together with its condensation. Components are stored
/// sinks first: every successor of component c has an index smaller than c.
class IncidenceStructure {
 public:
  explicit IncidenceStructure(const Morphism& sigma) : IncidenceStructure(incidence_matrix(sigma)) {}

  explicit IncidenceStructure(Matrix m) : m_(std::move(m)) {
    const std::size_t n = m_.size();
    adj_.assign(n, {});
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        if (m_(i, j) != 0) adj_[j].push_back(i);
    tarjan();
    for (std::size_t c = 0; c < comps_.size(); ++c) analyse(c);
  }

  const Matrix& matrix() const noexcept { return m_; }
  std::size_t size() const noexcept { return m_.size(); }
  const std::vector<Component>& components() const noexcept { return comps_; }
  std::size_t component_of(Letter a) const { return comp_of_.at(a); }
  const std::vector<Letter>& successors(Letter a) const { return adj_.at(a); }

  /// Letters reachable from `from` (including the letters themselves).
  std::vector<bool> reachable(const std::vector<Letter>& from) const {
    std::vector<bool> seen(size(), false);
    std::vector<Letter> stack;
    for (Letter a : from)
      if (!seen[a]) seen[a] = true, stack.push_back(a);
    while (!stack.empty()) {
      Letter a = stack.back();
      stack.pop_back();
      for (Letter b : adj_[a])
        if (!seen[b]) seen[b] = true, stack.push_back(b);
    }
    return seen;
  }

  /// Least common multiple of the periods of the non-trivial components.
  std::size_t period_lcm() const {
    std::size_t r = 1;
    for (const auto& c : comps_)
      if (!c.trivial()) r = std::lcm(r, c.period);
    return r;
  }

  /// Cyclicity class of each letter inside its component (0 for trivial ones).
  std::size_t cyclicity_class(Letter a) const { return phase_.at(a); }

 private:
  void tarjan() {
    const std::size_t n = size();
    std::vector<std::size_t> index(n, SIZE_MAX), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<Letter> stack;
    std::size_t counter = 0;
    comp_of_.assign(n, SIZE_MAX);
    // iterative Tarjan: frames hold (vertex, next edge position)
    for (Letter root = 0; root < n; ++root) {
      if (index[root] != SIZE_MAX) continue;
      std::vector<std::pair<Letter, std::size_t>> frames{{root, 0}};
      index[root] = low[root] = counter++;
      stack.push_back(root);
      on_stack[root] = true;
      while (!frames.empty()) {
        auto& [v, pos] = frames.back();
        if (pos < adj_[v].size()) {
          Letter w = adj_[v][pos++];
          if (index[w] == SIZE_MAX) {
            index[w] = low[w] = counter++;
            stack.push_back(w);
            on_stack[w] = true;
            frames.push_back({w, 0});
          } else if (on_stack[w]) {
            low[v] = std::min(low[v], index[w]);
          }
          continue;
        }
        Letter done = v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
        if (low[done] != index[done]) continue;
        Component comp;
        while (true) {
          Letter w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp_of_[w] = comps_.size();
          comp.letters.push_back(w);
          if (w == done) break;
        }
        std::sort(comp.letters.begin(), comp.letters.end());
        comps_.push_back(std::move(comp));
      }
    }
  }

  void analyse(std::size_t ci) {
    Component& c = comps_[ci];
    phase_.resize(size(), 0);
    // successors and period via BFS levels
    std::vector<std::size_t> succ;
    for (Letter a : c.letters)
      for (Letter b : adj_[a])
        if (comp_of_[b] != ci) succ.push_back(comp_of_[b]);
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    c.successors = std::move(succ);

    std::vector<long long> level(size(), -1);
    std::vector<Letter> queue{c.letters.front()};
    level[c.letters.front()] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      Letter a = queue[qi];
      for (Letter b : adj_[a])
        if (comp_of_[b] == ci && level[b] < 0) level[b] = level[a] + 1, queue.push_back(b);
    }
    long long g = 0;
    bool simple = true;
    for (Letter a : c.letters) {
      std::size_t inside = 0;
      for (Letter b : adj_[a]) {
        if (comp_of_[b] != ci) continue;
        g = std::gcd(g, std::llabs(level[a] + 1 - level[b]));
        inside += 1;
        if (m_(b, a) != 1) simple = false;
      }
      if (inside != 1) simple = false;
    }
    c.period = static_cast<std::size_t>(g);
    for (Letter a : c.letters) phase_[a] = g == 0 ? 0 : static_cast<std::size_t>(level[a] % g);
    if (c.trivial()) {
      c.perron = PerronValue(Rational(0));
    } else if (simple) {
      c.cycle = true;
      c.perron = PerronValue(Rational(1));
    } else {
      std::vector<std::size_t> idx(c.letters.begin(), c.letters.end());
      Matrix sub = m_.restrict(idx);
      if (sub.size() == 1)
        c.perron = PerronValue(Rational(sub(0, 0)));
      else
        c.perron = PerronValue::spectral_radius(sub);
    }
  }

  Matrix m_;
  std::vector<std::vector<Letter>> adj_;
  std::vector<Component> comps_;
  std::vector<std::size_t> comp_of_;
  std::vector<std::size_t> phase_;
};

/// Least k with M^k > 0. Throws NotPrimitive when no k ≤ d²−2d+2 works.
inline std::size_t horn_exponent(const Matrix& m) {
  const std::size_t d = m.size();
  if (d == 0) throw Error(ErrorKind::NotPrimitive, "empty matrix");
  const std::size_t bound = d * d - 2 * d + 2;
  std::vector<char> base(d * d), cur;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) base[i * d + j] = m(i, j) != 0;
  cur = base;
  for (std::size_t k = 1; k <= bound; ++k) {
    if (std::all_of(cur.begin(), cur.end(), [](char c) { return c != 0; })) return k;
    std::vector<char> nx(d * d, 0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t l = 0; l < d; ++l)
        if (cur[i * d + l])
          for (std::size_t j = 0; j < d; ++j)
            if (base[l * d + j]) nx[i * d + j] = 1;
    cur = std::move(nx);
  }
  throw Error(ErrorKind::NotPrimitive, "matrix is not primitive");
}

inline bool is_primitive(const Matrix& m) {
  try {
    horn_exponent(m);
    return true;
  } catch (const Error&) {
    return false;
  }
}

inline bool is_primitive(const Morphism& sigma) { return is_primitive(incidence_matrix(sigma)); }

struct BlockDecomposition {
  /// Blocks listed so that M^r is lower block triangular.
  std::vector<std::vector<Letter>> blocks;
  std::vector<bool> primitive;
  std::size_t r = 1;
};

/// Cyclicity-class partition and exponent r with every diagonal block of
/// M^r primitive or zero.
inline BlockDecomposition block_decomposition(const IncidenceStructure& inc) {
  BlockDecomposition out;
  out.r = inc.period_lcm();
  const auto& comps = inc.components();
  for (std::size_t ci = comps.size(); ci-- > 0;) {
    const Component& c = comps[ci];
    const std::size_t classes = c.trivial() ? 1 : c.period;
    for (std::size_t ph = 0; ph < classes; ++ph) {
      std::vector<Letter> block;
      for (Letter a : c.letters)
        if (inc.cyclicity_class(a) == ph) block.push_back(a);
      out.blocks.push_back(std::move(block));
      out.primitive.push_back(!c.trivial());
    }
  }
  Matrix mr = inc.matrix().pow(out.r);
  std::vector<std::size_t> block_of(inc.size());
  for (std::size_t b = 0; b < out.blocks.size(); ++b)
    for (Letter a : out.blocks[b]) block_of[a] = b;
  for (std::size_t i = 0; i < inc.size(); ++i)
    for (std::size_t j = 0; j < inc.size(); ++j)
      if (mr(i, j) != 0 && block_of[i] < block_of[j])
        throw Error(ErrorKind::InternalConsistency, "block decomposition is not triangular");
  for (std::size_t b = 0; b < out.blocks.size(); ++b) {
    std::vector<std::size_t> idx(out.blocks[b].begin(), out.blocks[b].end());
    Matrix sub = mr.restrict(idx);
    bool zero = true;
    for (std::size_t i = 0; i < sub.size(); ++i)
      for (std::size_t j = 0; j < sub.size(); ++j) zero = zero && sub(i, j) == 0;
    if (out.primitive[b] ? !is_primitive(sub) : !zero)
      throw Error(ErrorKind::InternalConsistency, "diagonal block is neither primitive nor zero");
  }
  return out;
}

struct GrowthType {
  std::size_t d = 0;
  PerronValue theta;

  bool growing() const { return !(d == 0 && theta.exact() && theta.lo() == 1); }
  std::string str() const { return "(" + std::to_string(d) + ", " + theta.str() + ")"; }
};

/// Order on growth types: θ first, then d.
inline std::strong_ordering operator<=>(const GrowthType& a, const GrowthType& b) {
  auto c = compare_perron(a.theta, b.theta);
  if (c != std::strong_ordering::equal) return c;
  return a.d <=> b.d;
}

inline bool operator==(const GrowthType& a, const GrowthType& b) { return (a <=> b) == std::strong_ordering::equal; }

/// Growth types of every letter. θ(b) is the largest Perron value reachable
/// from b and d(b)+1 the most components of value θ(b) met along one path.
inline std::vector<GrowthType> growth_types(const IncidenceStructure& inc) {
  const auto& comps = inc.components();
  std::vector<GrowthType> per_comp(comps.size());
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const Component& c = comps[ci];
    PerronValue theta = c.perron;
    for (std::size_t s : c.successors)
      if (compare_perron(per_comp[s].theta, theta) == std::strong_ordering::greater) theta = per_comp[s].theta;
    std::size_t count = compare_perron(c.perron, theta) == std::strong_ordering::equal ? 1 : 0;
    std::size_t best = 0;
    for (std::size_t s : c.successors)
      if (compare_perron(per_comp[s].theta, theta) == std::strong_ordering::equal)
        best = std::max(best, per_comp[s].d);
    per_comp[ci].theta = theta;
    // stored value is the count of θ-components; converted to d below
    per_comp[ci].d = best + count;
  }
  std::vector<GrowthType> out(inc.size());
  for (Letter a = 0; a < inc.size(); ++a) {
    out[a] = per_comp[inc.component_of(a)];
    out[a].d -= 1;
  }
  return out;
}

inline std::vector<GrowthType> growth_types(const Morphism& sigma) {
  if (sigma.is_erasing()) throw Error(ErrorKind::Erasing, "growth types need a non-erasing morphism");
  return growth_types(IncidenceStructure(sigma));
}

/// Growing letters of a non-erasing endomorphism, decided on the graph alone:
/// b is bounded iff no reachable component is a non-cycle and no path from b
/// meets two cycles.
inline std::vector<bool> growing_letters(const Morphism& sigma) {
  if (sigma.is_erasing()) throw Error(ErrorKind::Erasing, "growth needs a non-erasing morphism");
  IncidenceStructure inc(sigma);
  const auto& comps = inc.components();
  std::vector<bool> grows(comps.size(), false);
  std::vector<bool> has_cycle(comps.size(), false);
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const Component& c = comps[ci];
    bool g = !c.trivial() && !c.cycle;
    bool below = false;
    for (std::size_t s : c.successors) {
      g = g || grows[s];
      below = below || has_cycle[s];
    }
    if (c.cycle && below) g = true;
    grows[ci] = g;
    has_cycle[ci] = c.cycle || below;
  }
  std::vector<bool> out(inc.size());
  for (Letter a = 0; a < inc.size(); ++a) out[a] = grows[inc.component_of(a)];
  return out;
}

namespace detail {

inline Rational round_up(const Rational& q, unsigned bits = 32) {
  BigInt scale = BigInt(1) << bits;
  return Rational(ceil_of(q * scale), scale);
}

inline Rational round_down(const Rational& q, unsigned bits = 32) {
  BigInt scale = BigInt(1) << bits;
  return Rational(floor_of(q * scale), scale);
}

/// Upper bound on max(x)/min(x) for the positive eigenvector x of a
/// primitive matrix A, from the min/max column-ratio bounds on a positive power.
inline Rational eigenvector_ratio(const Matrix& positive_power) {
  const std::size_t d = positive_power.size();
  std::vector<BigInt> col(d);
  for (std::size_t j = 0; j < d; ++j) col[j] = positive_power.column_sum(j);
  std::optional<Rational> max_upper, min_lower;
  for (std::size_t i = 0; i < d; ++i) {
    std::optional<Rational> lo, hi;
    for (std::size_t j = 0; j < d; ++j) {
      Rational v(positive_power(i, j), col[j]);
      if (!lo || v < *lo) lo = v;
      if (!hi || v > *hi) hi = v;
    }
    if (!max_upper || *hi > *max_upper) max_upper = hi;
    if (!min_lower || *lo < *min_lower) min_lower = lo;
  }
  return *max_upper / *min_lower;
}

inline PerronValue tighten(PerronValue v, unsigned bits) {
  return v.refined_to(Rational(1, BigInt(1) << bits));
}

}  // namespace detail

struct PQConstants {
  Rational P;
  Rational Q;
  /// Common growth rate α.
  PerronValue alpha;
  /// Power used internally (lcm of component periods).
  std::size_t r = 1;
};

/// Constants with (1/P)α^k ≤ ⟨σ^k⟩ ≤ |σ^k| ≤ Pα^k and |σ^k| ≤ Q⟨σ^k⟩ for
/// every k ≥ 0. All letters must share one growth type (0, α) with α > 1.
/// Bounds are rounded outward, so the constants are safe but not sharp.
inline PQConstants pq_constants(const Morphism& sigma) {
  if (!sigma.is_endomorphism()) throw Error(ErrorKind::AlphabetMismatch, "pq_constants needs an endomorphism");
  IncidenceStructure inc(sigma);
  auto types = growth_types(sigma);
  for (const auto& t : types)
    if (t.d != 0 || !(t == types.front()))
      throw Error(ErrorKind::PreconditionViolated, "letters do not share a growth type (0, α)");
  PerronValue alpha = types.front().theta;
  if (compare_perron(alpha, PerronValue(Rational(1))) != std::strong_ordering::greater)
    throw Error(ErrorKind::PreconditionViolated, "growth rate must exceed 1");
  alpha = detail::tighten(alpha, 24);
  while (alpha.lo() <= 1) alpha = alpha.refined();

  const std::size_t n = inc.size();
  const std::size_t r = inc.period_lcm();
  const Matrix N = inc.matrix().pow(r);
  PerronValue beta = detail::tighten(alpha.pow(r), 24);
  while (beta.lo() <= 1) beta = beta.refined();
  IncidenceStructure incN(N);

  std::vector<Rational> L(n), U(n);
  const auto& comps = incN.components();
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const Component& c = comps[ci];
    if (c.trivial()) {
      Letter j = c.letters.front();
      Rational lo = 0, hi = 0;
      for (Letter i = 0; i < n; ++i) {
        if (N(i, j) == 0) continue;
        lo += Rational(N(i, j)) * L[i];
        hi += Rational(N(i, j)) * U[i];
      }
      L[j] = detail::round_down(std::min(Rational(1), lo / beta.hi()));
      U[j] = detail::round_up(std::max(Rational(1), hi / beta.lo()));
      continue;
    }
    std::vector<std::size_t> idx(c.letters.begin(), c.letters.end());
    Matrix sub = N.restrict(idx);
    const std::size_t h = horn_exponent(sub);
    const Rational ratio = detail::round_up(detail::eigenvector_ratio(sub.transpose().pow(h)));
    auto order = compare_perron(c.perron, beta);
    if (c.successors.empty()) {
      if (order != std::strong_ordering::equal)
        throw Error(ErrorKind::InternalConsistency, "sink component with growth rate below α");
      for (Letter j : c.letters) {
        L[j] = detail::round_down(1 / ratio);
        U[j] = ratio;
      }
      continue;
    }
    if (order != std::strong_ordering::less)
      throw Error(ErrorKind::InternalConsistency, "non-sink component with growth rate α");
    PerronValue rho = c.perron;
    while (!(rho.hi() < beta.lo())) {
      rho = rho.refined();
      beta = beta.refined();
    }
    Rational gu = 0, gl = 0;
    for (Letter i : c.letters) {
      Rational su = 0, sl = 0;
      for (Letter l = 0; l < n; ++l) {
        if (incN.component_of(l) == ci || N(l, i) == 0) continue;
        su += Rational(N(l, i)) * U[l];
        sl += Rational(N(l, i)) * L[l];
      }
      gu = std::max(gu, su);
      gl = std::max(gl, sl);
    }
    const Rational up = detail::round_up(ratio * (1 + gu / (beta.lo() - rho.hi())));
    const Rational bh = pow_rational(beta.hi(), h);
    const Rational low = detail::round_down(std::min(gl / (bh * beta.hi()), 1 / bh));
    for (Letter j : c.letters) {
      L[j] = low;
      U[j] = up;
    }
  }

  // from powers of σ^r to every power: k = qr + s
  PQConstants out;
  out.alpha = alpha;
  out.r = r;
  out.P = 1;
  out.Q = 1;
  Matrix ms = Matrix::identity(n);
  for (std::size_t s = 0; s < r; ++s) {
    if (s > 0) ms = ms * inc.matrix();
    const Rational alo = pow_rational(alpha.lo(), s), ahi = pow_rational(alpha.hi(), s);
    std::optional<Rational> max_u, min_l;
    for (Letter j = 0; j < n; ++j) {
      Rational su = 0, sl = 0;
      for (Letter i = 0; i < n; ++i) {
        if (ms(i, j) == 0) continue;
        su += Rational(ms(i, j)) * U[i];
        sl += Rational(ms(i, j)) * L[i];
      }
      out.P = std::max(out.P, su / alo);
      out.P = std::max(out.P, ahi / sl);
      if (!max_u || su > *max_u) max_u = su;
      if (!min_l || sl < *min_l) min_l = sl;
    }
    out.Q = std::max(out.Q, *max_u / *min_l);
  }
  out.P = detail::round_up(out.P, 16);
  out.Q = detail::round_up(out.Q, 16);
  return out;
}

}  // namespace morphic
