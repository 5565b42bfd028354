#pragma once

#include "morphic/error.hpp"
#include "morphic/sequence.hpp"
#include "morphic/system.hpp"
#include "morphic/word.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace morphic {

/// Smallest period of w (|w| when w is primitive and unbordered).
inline std::size_t smallest_period(const Word& w) {
  if (w.empty()) return 0;
  std::vector<std::size_t> pi(w.size(), 0);
  for (std::size_t i = 1; i < w.size(); ++i) {
    std::size_t k = pi[i - 1];
    while (k > 0 && w[i] != w[k]) k = pi[k - 1];
    if (w[i] == w[k]) ++k;
    pi[i] = k;
  }
  return w.size() - pi.back();
}

/// Outcome of the three-condition test for x = z^∞ with z = x[0, p).
///   (1) every φ(B), B ∈ L_{2p}(y), sits in z^∞ at some phase;
///   (2) for BB' ∈ L_{4p}(y) the phase of B' continues the phase of B;
///   (3) the prefix block has phase 0.
/// Phases are taken modulo the primitive root length q of z.
struct PeriodicCheck {
  Word w;      // over A; empty when only a length was given
  Word phi_w;  // φ(w)
  Word z;      // x[0, p)
  std::size_t p = 0;
  std::size_t q = 0;
  std::size_t block_length = 0;  // 2p letters of y
  bool blocks_ok = true;
  bool chain_ok = true;
  bool prefix_ok = true;
  Word bad_block;  // condition (1) counterexample B
  Word bad_pair;   // condition (2) counterexample BB'
  std::size_t prefix_phase = 0;

  bool passed() const { return blocks_ok && chain_ok && prefix_ok; }
  /// 1, 2 or 3 for the first failing condition, 0 when all pass.
  int failed_condition() const { return !blocks_ok ? 1 : !chain_ok ? 2 : !prefix_ok ? 3 : 0; }
};

namespace detail {

/// Phase i in [0, q) with f[k] = root[(i+k) mod q] for all k, if any.
inline std::optional<std::size_t> phase_in(const Word& f, const Word& root) {
  const std::size_t q = root.size();
  for (std::size_t i = 0; i < q; ++i) {
    bool ok = true;
    for (std::size_t k = 0; k < f.size() && ok; ++k) ok = f[k] == root[(i + k) % q];
    if (ok) return i;
  }
  return std::nullopt;
}

}  // namespace detail

/// Runs the checklist for period length p of x. φ must be non-erasing, so
/// |φ(B)| ≥ 2p ≥ q and each phase is unique.
inline PeriodicCheck periodic_check_length(const System& s, std::size_t p) {
  if (p == 0) throw Error(ErrorKind::InvalidArgument, "period length must be positive");
  if (s.phi.is_erasing()) throw Error(ErrorKind::Erasing, "periodic check needs a non-erasing phi");
  PeriodicCheck out;
  out.p = p;
  out.block_length = 2 * p;
  out.z = outer_prefix(s, p);
  out.q = smallest_period(out.z);
  if (p % out.q != 0) out.q = p;  // z is not a proper power
  const Word root(out.z.begin(), out.z.begin() + out.q);
  const std::size_t n = 2 * p;

  const auto pairs = iterate_language(s.sigma, Word{s.start}, 2 * n);
  std::set<Word> blocks;
  for (const Word& bb : pairs) blocks.emplace(bb.begin(), bb.begin() + n);

  std::map<Word, std::size_t> phase;
  for (const Word& b : blocks) {
    auto ph = detail::phase_in(s.phi.apply(b), root);
    if (!ph) {
      out.blocks_ok = false;
      out.bad_block = b;
      return out;
    }
    phase[b] = *ph;
  }
  for (const Word& bb : pairs) {
    const Word b(bb.begin(), bb.begin() + n), b2(bb.begin() + n, bb.end());
    const std::size_t expect = (phase.at(b) + s.phi.apply(b).size()) % out.q;
    if (phase.at(b2) != expect) {
      out.chain_ok = false;
      out.bad_pair = bb;
      return out;
    }
  }
  const Word head = inner_prefix(s, n);
  out.prefix_phase = phase.at(head);
  out.prefix_ok = out.prefix_phase == 0;
  return out;
}

/// The checklist for a given w over A: p = |φ(w)|.
inline PeriodicCheck periodic_check(const System& s, const Word& w) {
  if (w.empty()) throw Error(ErrorKind::InvalidArgument, "periodic check needs a nonempty word");
  Word img = s.phi.apply(w);
  if (img.empty()) throw Error(ErrorKind::Erasing, "phi erases the candidate word");
  PeriodicCheck out = periodic_check_length(s, img.size());
  out.w = w;
  out.phi_w = std::move(img);
  return out;
}

/// Prefix scan for candidate (ultimate) periodicity of x.
struct PeriodicityScan {
  std::size_t scanned = 0;
  /// Smallest period of the whole prefix when it repeats at least four times.
  std::optional<std::size_t> period;
  /// Smallest period of the second half when it repeats at least four times.
  std::optional<std::size_t> tail_period;
  bool suspected() const { return period || tail_period; }
};

inline PeriodicityScan scan_periodicity(const System& s, std::size_t n = 4096) {
  PeriodicityScan out;
  Word x = outer_prefix(s, n);
  out.scanned = x.size();
  if (x.empty()) return out;
  const std::size_t whole = smallest_period(x);
  if (4 * whole <= x.size()) out.period = whole;
  const Word tail(x.begin() + x.size() / 2, x.end());
  const std::size_t t = smallest_period(tail);
  if (4 * t <= tail.size()) out.tail_period = t;
  return out;
}

}  // namespace morphic
