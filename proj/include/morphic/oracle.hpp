#pragma once

// Brute-force scans over finite prefixes. Nothing here is used by the
// decider; tests compare the two.

#include "morphic/bigint.hpp"
#include "morphic/error.hpp"
#include "morphic/sequence.hpp"
#include "morphic/system.hpp"
#include "morphic/word.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace morphic::oracle {

/// x[0, n) read straight off the stream, φ applied letter by letter.
inline Word scan_prefix(const System& s, std::size_t n) {
  Word x;
  if (n == 0) return x;
  FixedPointStream st(s.sigma, s.start);
  std::size_t idle = 0;
  while (x.size() < n) {
    const Word& img = s.phi(st.next());
    idle = img.empty() ? idle + 1 : 0;
    if (idle > 4 * n + 1024) throw Error(ErrorKind::BudgetExhausted, "phi erases the stream");
    for (Letter b : img)
      if (x.size() < n) x.push_back(b);
  }
  return x;
}

struct FactorGap {
  Word u;
  std::size_t occurrences = 0;
  std::size_t first = 0;
  /// Largest distance between successive occurrences (0 if fewer than two).
  std::size_t max_gap = 0;
  std::size_t gap_at = 0;  // start of the occurrence opening that gap
  /// Distance from the last occurrence to the end of the prefix.
  std::size_t trailing = 0;
};

struct OracleReport {
  std::string property = "window uniform recurrence";
  std::size_t prefix_len = 0;
  std::size_t factor_len_max = 0;
  std::optional<BigInt> bound;
  /// True only when some gap exceeds bound·|u|.
  bool conclusive = false;
  std::vector<FactorGap> factors;
  std::vector<FactorGap> violations;
};

/// Gaps of every factor of length ≤ factor_len_max of x[0, prefix_len).
/// A gap or trailing run larger than bound·|u| rules out linear recurrence
/// with that constant; without a bound the report only describes the prefix.
inline OracleReport window_ur_check(const System& s, std::size_t factor_len_max, std::size_t prefix_len,
                                    std::optional<BigInt> bound = std::nullopt) {
  OracleReport rep;
  rep.prefix_len = prefix_len;
  rep.factor_len_max = factor_len_max;
  rep.bound = bound;
  const Word x = scan_prefix(s, prefix_len);
  for (std::size_t len = 1; len <= factor_len_max && len <= x.size(); ++len) {
    std::map<Word, FactorGap> seen;
    std::map<Word, std::size_t> last;
    for (std::size_t i = 0; i + len <= x.size(); ++i) {
      Word u(x.begin() + static_cast<std::ptrdiff_t>(i), x.begin() + static_cast<std::ptrdiff_t>(i + len));
      auto [it, fresh] = seen.try_emplace(u);
      FactorGap& g = it->second;
      if (fresh) {
        g.u = u;
        g.first = i;
      } else {
        const std::size_t gap = i - last[u];
        if (gap > g.max_gap) g.max_gap = gap, g.gap_at = last[u];
      }
      ++g.occurrences;
      last[u] = i;
    }
    for (auto& [u, g] : seen) {
      g.trailing = x.size() - last[u];
      if (bound) {
        const BigInt lim = *bound * BigInt(len);
        if (BigInt(g.max_gap) > lim || BigInt(g.trailing) > lim + BigInt(len)) rep.violations.push_back(g);
      }
      rep.factors.push_back(g);
    }
  }
  rep.conclusive = !rep.violations.empty();
  return rep;
}

/// Return words to u in x[0, prefix_len), in first-appearance order.
inline std::vector<Word> brute_force_return_words(const System& s, const Word& u, std::size_t prefix_len) {
  if (u.empty()) throw Error(ErrorKind::InvalidArgument, "return words need a non-empty word");
  const Word x = scan_prefix(s, prefix_len);
  std::vector<std::size_t> pos;
  for (std::size_t i = 0; i + u.size() <= x.size(); ++i) {
    bool hit = true;
    for (std::size_t k = 0; k < u.size() && hit; ++k) hit = x[i + k] == u[k];
    if (hit) pos.push_back(i);
  }
  if (pos.size() < 2)
    throw Error(ErrorKind::NotEnoughOccurrences, "word occurs " + std::to_string(pos.size()) + " time(s) in the prefix");
  std::vector<Word> out;
  for (std::size_t i = 0; i + 1 < pos.size(); ++i) {
    Word w(x.begin() + static_cast<std::ptrdiff_t>(pos[i]), x.begin() + static_cast<std::ptrdiff_t>(pos[i + 1]));
    bool known = false;
    for (const Word& r : out) known = known || r == w;
    if (!known) out.push_back(std::move(w));
  }
  return out;
}

}  // namespace morphic::oracle
