#pragma once

#include "morphic/bigint.hpp"
#include "morphic/growth.hpp"
#include "morphic/matrix.hpp"
#include "morphic/sequence.hpp"
#include "morphic/word.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace morphic {

/// Language of a morphism: factors of σ^k(b) over all letters b and k ≥ 0.
inline std::set<Word> morphism_language(const Morphism& sigma, std::size_t n) {
  std::set<Word> out;
  for (Letter b = 0; b < sigma.source_size(); ++b) {
    auto part = iterate_language(sigma, Word{b}, n);
    out.insert(part.begin(), part.end());
  }
  return out;
}

namespace detail {

struct WindowSet {
  struct View {
    const Letter* p;
    std::uint64_t h;
  };
  struct Hash {
    std::size_t operator()(const View& v) const noexcept { return static_cast<std::size_t>(v.h); }
  };
  struct Eq {
    std::size_t n;
    bool operator()(const View& a, const View& b) const noexcept { return a.h == b.h && std::equal(a.p, a.p + n, b.p); }
  };
};

}  // namespace detail

/// p_σ(n) = #(length-n factors of the language of σ). For growing σ every
/// such factor sits in σ^j(c) or σ^j(cd) with cd a 2-factor and ⟨σ^j⟩ ≥ n−1,
/// or in some σ^k(b) with k < j, which keeps the words short.
inline std::size_t morphism_complexity(const Morphism& sigma, std::size_t n) {
  if (n <= 2) return morphism_language(sigma, n).size();
  const auto grows = growing_letters(sigma);
  if (std::find(grows.begin(), grows.end(), false) != grows.end()) return morphism_language(sigma, n).size();
  std::vector<Word> words;
  Morphism sj = sigma;
  std::size_t j = 1;
  std::vector<Word> cur(sigma.source_size());
  for (Letter b = 0; b < sigma.source_size(); ++b) cur[b] = {b};
  // σ^k(b) for k < j
  while (sj.min_length() + 1 < n) {
    for (const auto& w : cur) words.push_back(w);
    for (auto& w : cur) w = sigma.apply(w);
    sj = compose(sigma, sj);
    ++j;
  }
  for (const auto& w : cur) words.push_back(w);
  for (Letter c = 0; c < sigma.source_size(); ++c) words.push_back(sj(c));
  for (const Word& cd : morphism_language(sigma, 2)) words.push_back(sj.apply(cd));

  detail::WindowSet::Eq eq{n};
  std::unordered_set<detail::WindowSet::View, detail::WindowSet::Hash, detail::WindowSet::Eq> seen(1024, {}, eq);
  const std::uint64_t B = 1000003ULL;
  std::uint64_t top = 1;
  for (std::size_t i = 1; i < n; ++i) top *= B;
  for (const Word& w : words) {
    if (w.size() < n) continue;
    std::uint64_t h = 0;
    for (std::size_t i = 0; i < n; ++i) h = h * B + w[i] + 1;
    for (std::size_t i = 0;; ++i) {
      seen.insert({w.data() + i, h});
      if (i + n >= w.size()) break;
      h = (h - (w[i] + 1) * top) * B + w[i + n] + 1;
    }
  }
  return seen.size();
}

/// Primitive sub-morphism τ = σ restricted to a closed sub-alphabet.
struct SubMorphism {
  std::vector<Letter> letters;  // in σ's numbering
  Morphism tau;                 // on 0..letters.size()-1
  /// Smallest c with τ^c prolongable; `prolongable_on` is that letter (local numbering).
  std::size_t c = 1;
  Letter prolongable_on = 0;
  /// Largest gap between successive occurrences of a 2-factor.
  std::size_t R = 0;
  /// 2|τ^{c·2d²}|: the a-priori bound on R.
  BigInt R_bound = 0;
  Rational Q = 0;
  std::size_t tau_c_length = 0;
  /// Q·R·|τ^c|.
  Rational K = 0;
};

/// True when every window of length m+|u|−1 inside the given words contains u.
inline bool windows_contain(const std::vector<Word>& words, const Word& u, std::size_t m) {
  const std::size_t L = m + u.size() - 1;
  for (const Word& w : words) {
    if (w.size() < L) continue;
    auto occ = occurrences(w, u);
    // window [i, i+L) holds u iff some occurrence p has i <= p <= i+m-1
    std::size_t last_start = w.size() - L;
    std::size_t covered = 0;  // every window start below `covered` is fine
    for (std::size_t p : occ) {
      if (p > covered + m - 1 && covered <= last_start) return false;
      covered = std::max(covered, p + 1);
    }
    if (covered <= last_start) return false;
  }
  return true;
}

/// R for a primitive τ: the largest distance between successive occurrences
/// of a factor of length 2. Windows of a given length are all found inside
/// τ^j of 2-factors once ⟨τ^j⟩ covers that length.
inline std::size_t compute_R(const Morphism& tau, std::size_t limit = 1 << 16) {
  if (!is_primitive(tau)) throw Error(ErrorKind::NotPrimitive, "R needs a primitive morphism");
  const auto two = morphism_language(tau, 2);
  auto words_for = [&](std::size_t len) {
    Morphism tj = tau;
    while (tj.min_length() + 1 < len) tj = compose(tau, tj);
    std::vector<Word> ws;
    for (const Word& cd : two) ws.push_back(tj.apply(cd));
    return ws;
  };
  std::size_t R = 0;
  for (const Word& u : two) {
    std::size_t hi = 1;
    auto ok = [&](std::size_t m) { return windows_contain(words_for(m + 1), u, m); };
    while (!ok(hi)) {
      if (hi >= limit) throw Error(ErrorKind::BudgetExhausted, "return gap exceeds the search limit");
      hi = std::min(limit, 2 * hi);
    }
    std::size_t lo = 0;
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      (ok(mid) ? hi : lo) = mid;
    }
    R = std::max(R, hi);
  }
  return R;
}

/// Sub-morphism on the given closed letter set, with R, Q and K filled in.
inline SubMorphism analyse_submorphism(const Morphism& sigma, const std::vector<Letter>& letters) {
  SubMorphism sm;
  sm.letters = letters;
  std::vector<Letter> local(sigma.source_size(), static_cast<Letter>(-1));
  for (std::size_t i = 0; i < letters.size(); ++i) local[letters[i]] = static_cast<Letter>(i);
  std::vector<Word> imgs;
  for (Letter a : letters) {
    Word w;
    for (Letter b : sigma(a)) {
      if (local[b] == static_cast<Letter>(-1)) throw Error(ErrorKind::InvalidArgument, "letter set is not closed under the morphism");
      w.push_back(local[b]);
    }
    imgs.push_back(std::move(w));
  }
  sm.tau = Morphism(letters.size(), std::move(imgs));
  const std::size_t d = letters.size();
  // first-letter map: follow it from letter 0 until it cycles
  std::vector<std::size_t> seen_at(d, SIZE_MAX);
  Letter b = 0;
  for (std::size_t step = 0; seen_at[b] == SIZE_MAX; ++step) {
    seen_at[b] = step;
    b = sm.tau(b)[0];
  }
  {
    std::size_t len = 0;
    Letter c = b;
    do {
      c = sm.tau(c)[0];
      ++len;
    } while (c != b);
    sm.c = len;
  }
  sm.prolongable_on = b;
  Morphism tc = power(sm.tau, sm.c);
  if (!is_prolongable(tc, b)) throw Error(ErrorKind::InternalConsistency, "powered sub-morphism is not prolongable");
  sm.tau_c_length = tc.max_length();
  sm.R = compute_R(sm.tau);
  Matrix m = incidence_matrix(tc).pow(2 * d * d);
  BigInt longest = 0;
  for (std::size_t j = 0; j < d; ++j) longest = std::max(longest, m.column_sum(j));
  sm.R_bound = 2 * longest;
  sm.Q = pq_constants(tc).Q;
  sm.K = sm.Q * sm.R * sm.tau_c_length;
  return sm;
}

/// base^exponent, kept symbolic; only compared against small counters.
struct CapExpr {
  BigInt base = 0;
  BigInt exponent = 0;

  /// base^exponent, saturated at 2^64.
  BigInt saturated() const {
    const BigInt limit = BigInt(1) << 64;
    if (base <= 1 || exponent == 0) return exponent == 0 ? BigInt(1) : base;
    BigInt v = 1;
    for (BigInt e = 0; e < exponent; ++e) {
      v *= base;
      if (v >= limit) return limit;
    }
    return v;
  }

  /// True when counter < base^exponent.
  bool exceeds(std::uint64_t counter) const { return BigInt(counter) < saturated(); }

  std::string str() const { return to_string(base) + "^" + to_string(exponent); }
};

struct ConstantSheet {
  /// Power r with every component of σ^r primitive or zero; σ_r = σ^r.
  std::size_t r = 1;
  std::size_t sigma_max = 0, sigma_min = 0;  // |σ_r|, ⟨σ_r⟩
  std::optional<Rational> P, Q;              // of σ_r, when all letters share a growth type
  std::string pq_note;
  std::vector<SubMorphism> subs;
  std::size_t best_sub = 0;
  BigInt K = 0;
  std::optional<std::size_t> p_K1;  // p_σ(K+1)
  std::optional<BigInt> K1;
  std::optional<BigInt> preimage_bound;
  /// Power q of σ_r in use, with |σ_r^q| and K₂ = |σ_r^q|(K+1)K.
  std::size_t power = 1;
  BigInt power_max_length = 0;
  BigInt K2 = 0;
  /// Power at which ⟨σ_r^q⟩ ≥ (K+1)² first holds; 0 when some letter is bounded.
  std::size_t power_target = 1;
  std::optional<CapExpr> cap;
};

/// Primitive sub-morphisms of a growing σ: its sink components, which are
/// primitive once σ has been raised to the lcm of the component periods.
/// Sinks that are plain cycles do not grow and are skipped.
inline std::vector<std::vector<Letter>> primitive_submorphism_alphabets(const Morphism& sigma) {
  IncidenceStructure inc(sigma);
  std::vector<std::vector<Letter>> out;
  for (const auto& c : inc.components()) {
    if (!c.successors.empty() || c.trivial() || c.cycle) continue;
    std::vector<std::size_t> idx(c.letters.begin(), c.letters.end());
    if (is_primitive(inc.matrix().restrict(idx))) out.push_back(c.letters);
  }
  return out;
}

/// Updates the power-dependent entries (K₂ and the cap) for σ_r^q.
inline void set_power(ConstantSheet& sheet, const Morphism& sigma_r, std::size_t q) {
  sheet.power = q;
  Matrix m = incidence_matrix(sigma_r).pow(q);
  BigInt longest = 0;
  for (std::size_t j = 0; j < m.size(); ++j) longest = std::max(longest, m.column_sum(j));
  sheet.power_max_length = longest;
  sheet.K2 = longest * (sheet.K + 1) * sheet.K;
  if (sheet.K1) sheet.cap = CapExpr{*sheet.K1, *sheet.K1 * sheet.K2 + 2};
}

/// Constant sheet for a growing, non-erasing σ_r (σ already raised to r).
inline ConstantSheet compute_constants(const Morphism& sigma_r, std::size_t r = 1,
                                       std::size_t complexity_limit = 200000) {
  ConstantSheet sh;
  sh.r = r;
  sh.sigma_max = sigma_r.max_length();
  sh.sigma_min = sigma_r.min_length();
  auto alphabets = primitive_submorphism_alphabets(sigma_r);
  if (alphabets.empty()) throw Error(ErrorKind::NoPrimitiveSubmorphism, "no primitive sub-morphism");
  std::optional<Rational> bestK;
  for (const auto& letters : alphabets) {
    sh.subs.push_back(analyse_submorphism(sigma_r, letters));
    if (!bestK || sh.subs.back().K < *bestK) {
      bestK = sh.subs.back().K;
      sh.best_sub = sh.subs.size() - 1;
    }
  }
  sh.K = std::max(BigInt(1), ceil_of(*bestK));
  try {
    auto pq = pq_constants(sigma_r);
    sh.P = pq.P;
    sh.Q = pq.Q;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::PreconditionViolated) throw;
    sh.pq_note = e.what();
  }
  if (sh.Q && sh.K + 1 <= complexity_limit) {
    sh.p_K1 = morphism_complexity(sigma_r, static_cast<std::size_t>(sh.K + 1));
    const Rational pre = Rational(*sh.p_K1) * sh.sigma_max * *sh.Q * (sh.K + 1) * (sh.K + 1);
    sh.preimage_bound = ceil_of(pre);
    sh.K1 = ceil_of(4 * Rational(sh.K * sh.K * sh.K) * pre);
  } else if (sh.Q) {
    sh.pq_note = "K+1 too large to enumerate p(K+1)";
  }
  // ⟨σ_r^q⟩ ≥ (K+1)²
  const BigInt goal = (sh.K + 1) * (sh.K + 1);
  Matrix m = incidence_matrix(sigma_r);
  Matrix mq = m;
  std::size_t q = 1;
  const auto grows = growing_letters(sigma_r);
  const bool all_grow = std::find(grows.begin(), grows.end(), false) == grows.end();
  while (all_grow) {
    BigInt shortest = mq.column_sum(0);
    for (std::size_t j = 1; j < mq.size(); ++j) shortest = std::min(shortest, mq.column_sum(j));
    if (shortest >= goal) break;
    mq = mq * m;
    ++q;
  }
  sh.power_target = all_grow ? q : 0;
  set_power(sh, sigma_r, 1);
  return sh;
}

}  // namespace morphic
