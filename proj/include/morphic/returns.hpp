#pragma once

#include "morphic/bigint.hpp"
#include "morphic/growth.hpp"
#include "morphic/sequence.hpp"
#include "morphic/system.hpp"
#include "morphic/word.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace morphic {

/// Order in which letters first appear in f^∞(start), for an endomorphism
/// f whose image of `start` begins with `start`. Letters never reached are
/// omitted. Works on first-appearance lists of f^k(c), never on the words.
inline std::vector<Letter> first_appearance_order(const Morphism& f, Letter start) {
  const std::size_t n = f.source_size();
  std::vector<std::vector<Letter>> cur(n);
  for (Letter c = 0; c < n; ++c) cur[c] = {c};
  auto reach = IncidenceStructure(f).reachable({start});
  const std::size_t target = static_cast<std::size_t>(std::count(reach.begin(), reach.end(), true));
  while (cur[start].size() < target) {
    std::vector<std::vector<Letter>> next(n);
    for (Letter c = 0; c < n; ++c) {
      std::vector<bool> seen(n, false);
      for (Letter d : f(c))
        for (Letter e : cur[d])
          if (!seen[e]) seen[e] = true, next[c].push_back(e);
    }
    if (next == cur) break;
    cur = std::move(next);
  }
  return cur[start];
}

/// Renames letters so that order[i] becomes i; letters outside `order` are dropped.
inline Morphism relabel(const Morphism& f, const std::vector<Letter>& order) {
  std::vector<Letter> inv(f.source_size(), static_cast<Letter>(-1));
  for (std::size_t i = 0; i < order.size(); ++i) inv[order[i]] = static_cast<Letter>(i);
  std::vector<Word> imgs;
  for (Letter old : order) {
    Word w;
    for (Letter c : f(old)) {
      if (inv[c] == static_cast<Letter>(-1)) throw Error(ErrorKind::InternalConsistency, "relabel: image leaves the letter set");
      w.push_back(inv[c]);
    }
    imgs.push_back(std::move(w));
  }
  return Morphism(order.size(), std::move(imgs));
}

/// Return words to u seen in a finite prefix, in first-appearance order.
struct ReturnScan {
  std::vector<Word> returns;
  /// D_u prefix: index (0-based) of each complete return in the prefix.
  Word derived;
  std::size_t occurrences = 0;
  /// True only when closure was certified by a substitution argument.
  bool complete = false;
};

/// Return words to the prefix u of `x` found by scanning `x`.
inline ReturnScan return_words_to_word(const Word& x, const Word& u) {
  if (u.empty()) throw Error(ErrorKind::InvalidArgument, "return words need a non-empty word");
  if (!is_prefix(u, x)) throw Error(ErrorKind::PrefixInvalid, "word is not a prefix of the sequence");
  auto occ = occurrences(x, u);
  ReturnScan r;
  r.occurrences = occ.size();
  if (occ.size() < 2)
    throw Error(ErrorKind::BudgetExhausted, "word occurs " + std::to_string(occ.size()) + " time(s) in the scanned prefix");
  std::map<Word, Letter> index;
  for (std::size_t i = 0; i + 1 < occ.size(); ++i) {
    Word w(x.begin() + static_cast<std::ptrdiff_t>(occ[i]), x.begin() + static_cast<std::ptrdiff_t>(occ[i + 1]));
    auto [it, fresh] = index.emplace(w, static_cast<Letter>(r.returns.size()));
    if (fresh) r.returns.push_back(std::move(w));
    r.derived.push_back(it->second);
  }
  return r;
}

/// Splits context[0, len) into return words to u. Both 0 and len must be
/// occurrences of u in `context`; the pieces are looked up in `index`.
inline Word factorize_over_returns(const Word& context, std::size_t len, const Word& u,
                                   const std::map<Word, Letter>& index) {
  auto occ = occurrences(context, u);
  if (occ.empty() || occ.front() != 0 || std::find(occ.begin(), occ.end(), len) == occ.end())
    throw Error(ErrorKind::InternalConsistency, "factorization must start and end at occurrences");
  Word out;
  for (std::size_t i = 0; i + 1 < occ.size() && occ[i] < len; ++i) {
    Word piece(context.begin() + static_cast<std::ptrdiff_t>(occ[i]), context.begin() + static_cast<std::ptrdiff_t>(occ[i + 1]));
    auto it = index.find(piece);
    if (it == index.end()) throw Error(ErrorKind::InternalConsistency, "piece is not a known return word");
    out.push_back(it->second);
  }
  return out;
}

namespace detail {

/// Prefix of y = σ^∞(start) long enough to contain two occurrences of u.
inline Word prefix_with_two_occurrences(const Morphism& sigma, Letter start, const Word& u, std::size_t budget) {
  std::size_t len = std::max<std::size_t>(64, 4 * u.size());
  while (true) {
    Word y = inner_prefix(sigma, start, len);
    if (occurrences(y, u).size() >= 2) return y;
    if (len >= budget)
      throw Error(ErrorKind::BudgetExhausted, "no second occurrence within " + std::to_string(len) + " letters");
    len = std::min(budget, 2 * len);
  }
}

/// Pieces between consecutive occurrences of u in context[0, len]; 0 and len
/// must be occurrences. Unknown pieces are appended to the table.
inline Word split_and_register(const Word& context, std::size_t len, const Word& u, std::map<Word, Letter>& index,
                               std::vector<Word>& table) {
  auto occ = occurrences(context, u);
  if (occ.empty() || occ.front() != 0 || std::find(occ.begin(), occ.end(), len) == occ.end())
    throw Error(ErrorKind::InternalConsistency, "image does not start and end at occurrences");
  Word out;
  for (std::size_t i = 0; i + 1 < occ.size() && occ[i] < len; ++i) {
    Word piece(context.begin() + static_cast<std::ptrdiff_t>(occ[i]), context.begin() + static_cast<std::ptrdiff_t>(occ[i + 1]));
    auto [it, fresh] = index.emplace(piece, static_cast<Letter>(table.size()));
    if (fresh) table.push_back(std::move(piece));
    out.push_back(it->second);
  }
  return out;
}

}  // namespace detail

/// σ_u with Θ_{y,u} σ_u = σ Θ_{y,u}, for a primitive σ prolongable on start.
struct ReturnSubstitution {
  Word u;
  /// Θ_{y,u}: letter i of the return alphabet ↦ returns[i] (first-appearance order).
  std::vector<Word> returns;
  Morphism sigma_u;
};

inline ReturnSubstitution return_substitution(const Morphism& sigma, Letter start, const Word& u,
                                              std::size_t budget = std::size_t{1} << 24) {
  if (!is_primitive(sigma)) throw Error(ErrorKind::NotPrimitive, "return substitution needs a primitive morphism");
  if (!is_prolongable(sigma, start)) throw Error(ErrorKind::NotProlongable, "morphism is not prolongable on the start letter");
  if (u.empty()) throw Error(ErrorKind::PrefixInvalid, "empty word");
  Word y = detail::prefix_with_two_occurrences(sigma, start, u, budget);
  if (!is_prefix(u, y)) throw Error(ErrorKind::PrefixInvalid, "word is not a prefix of the fixed point");
  auto occ = occurrences(y, u);
  std::vector<Word> table{Word(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(occ[1]))};
  std::map<Word, Letter> index{{table[0], 0}};
  std::vector<Word> images;
  for (std::size_t i = 0; i < table.size(); ++i) {
    // σ(w u) starts with σ(u), hence with u; |σ(w)| is an occurrence as well
    Word wu = table[i];
    wu.insert(wu.end(), u.begin(), u.end());
    Word ctx = sigma.apply(wu);
    Word w = table[i];
    images.push_back(detail::split_and_register(ctx, sigma.image_length(w), u, index, table));
  }
  Morphism raw(table.size(), images);
  auto order = first_appearance_order(raw, 0);
  ReturnSubstitution r;
  r.u = u;
  r.sigma_u = relabel(raw, order);
  for (Letter old : order) r.returns.push_back(table[old]);
  // defining equation, letter by letter
  for (Letter i = 0; i < r.returns.size(); ++i) {
    Word lhs;
    for (Letter j : r.sigma_u(i)) lhs.insert(lhs.end(), r.returns[j].begin(), r.returns[j].end());
    if (lhs != sigma.apply(r.returns[i]))
      throw Error(ErrorKind::InternalConsistency, "defining equation fails for return letter " + std::to_string(i + 1));
  }
  return r;
}

/// σ^p(w) = p(w) m(w) s(w) with m(w) the first factor of σ^p(w) whose image
/// under the coding φ is v, i.e. the first element of U = φ^{-1}(v) in it.
struct PMS {
  Word p, m, s;
};

inline PMS pms_decompose(const System& sys, const Morphism& sigma_p, const Word& v, const Word& w) {
  if (v.empty()) throw Error(ErrorKind::InvalidArgument, "empty target word");
  const Word img = sigma_p.apply(w);
  auto occ = occurrences(sys.phi.apply(img), v);
  if (occ.empty()) throw Error(ErrorKind::NoOccurrence, "image contains no preimage of the prefix");
  const auto a = img.begin() + static_cast<std::ptrdiff_t>(occ.front());
  const auto b = a + static_cast<std::ptrdiff_t>(v.size());
  return PMS{Word(img.begin(), a), Word(a, b), Word(b, img.end())};
}

/// Θ(w) for an indexed table of words.
inline Word expand(const std::vector<Word>& table, const Word& w) {
  Word out;
  for (Letter i : w) out.insert(out.end(), table.at(i).begin(), table.at(i).end());
  return out;
}

/// Growing cache of the prefixes of y and x = φ(y), for φ a coding.
class PrefixCache {
 public:
  explicit PrefixCache(const System& s) : sys_(&s), stream_(s.sigma, s.start) {
    if (s.phi.max_length() != 1 || s.phi.min_length() != 1) throw Error(ErrorKind::InvalidArgument, "prefix cache needs a coding");
  }

  void ensure(std::size_t n) {
    while (y_.size() < n) {
      Letter c = stream_.next();
      y_.push_back(c);
      x_.push_back(sys_->phi(c)[0]);
    }
  }

  const Word& inner(std::size_t n) {
    ensure(n);
    return y_;
  }
  const Word& outer(std::size_t n) {
    ensure(n);
    return x_;
  }
  std::size_t size() const noexcept { return y_.size(); }

 private:
  const System* sys_;
  FixedPointStream stream_;
  Word y_, x_;
};

enum class ExitKind { NoSecondOccurrence, LongReturn, TooManyEntries, ClosureViolation, WindowViolation };

inline const char* exit_name(ExitKind k) {
  switch (k) {
    case ExitKind::NoSecondOccurrence: return "no_second_occurrence";
    case ExitKind::LongReturn: return "long_return_word";
    case ExitKind::TooManyEntries: return "too_many_entries";
    case ExitKind::ClosureViolation: return "closure_violation";
    case ExitKind::WindowViolation: return "window_violation";
  }
  return "?";
}

/// Evidence that x is not uniformly recurrent: any uniformly recurrent x
/// would be linearly recurrent with constant K, which the witness contradicts.
struct ExitWitness {
  ExitKind kind = ExitKind::NoSecondOccurrence;
  /// Prefix of x whose returns were being computed.
  Word v;
  /// Inner word involved: the long return word, or the head whose image
  /// lacks an occurrence of v.
  Word word;
  /// Scanned length (first exit) or first occurrence offset (window exit).
  std::size_t position = 0;
  /// Length of the offending return word or image.
  std::size_t length = 0;
  /// The bound that was exceeded.
  BigInt bound = 0;
  std::size_t power = 1;
  std::string detail;
};

/// The current power of σ is too small for the construction.
struct Escalation {
  std::string reason;
};

/// A resource limit was hit before the construction finished.
struct Exhausted {
  std::string reason;
};

struct DescriptorLimits {
  /// Linear-recurrence constant; enables the exits.
  std::optional<BigInt> K;
  /// Bound on the number of entries of a uniformly recurrent x.
  std::optional<BigInt> K1;
  std::size_t max_entries = 20000;
  std::size_t max_word = std::size_t{1} << 24;
  std::size_t scan_budget = std::size_t{1} << 22;
};

/// (σ_U, ψ_u) together with the tables behind them, for u = y[0, n) and
/// U = φ^{-1}(φ(u)) ∩ L(y).
struct Descriptor {
  Word u;
  Word v;
  std::size_t power = 1;
  /// Θ̃: index i ↦ (w, u') in first-appearance order along Δ_U(y).
  std::vector<std::pair<Word, Word>> entries;
  Morphism sigma_U;
  /// Θ_v: return words of x to v in first-appearance order.
  std::vector<Word> returns_x;
  Morphism psi;

  std::string canonical() const {
    std::string s = "sigma_U:";
    for (Letter i = 0; i < sigma_U.source_size(); ++i) {
      s += ' ' + std::to_string(i + 1) + "->";
      for (std::size_t k = 0; k < sigma_U(i).size(); ++k) s += (k ? "," : "") + std::to_string(sigma_U(i)[k] + 1);
    }
    s += " | psi:";
    for (Letter i = 0; i < psi.source_size(); ++i) s += ' ' + std::to_string(i + 1) + "->" + std::to_string(psi(i)[0] + 1);
    return s;
  }
};

using DescriptorResult = std::variant<Descriptor, ExitWitness, Escalation, Exhausted>;

/// Builds the descriptor for the prefix of length n, using σ^p (passed as
/// `sigma_p`) in the p/m/s decomposition. For an entry (w, u') the image
/// σ̃_U(w, u') lists the consecutive U-occurrences of σ^p(wu') from f(h) to
/// |σ^p(w)| + f(u'), where h is the length-n prefix of wu' and f(h) the first
/// occurrence of U inside σ^p(h). The table is the closure of the first entry.
inline DescriptorResult build_descriptor(const System& s, PrefixCache& cache, const Morphism& sigma_p, std::size_t p,
                                         std::size_t n, const DescriptorLimits& lim) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "descriptor needs a non-empty prefix");
  const Word v(cache.outer(n).begin(), cache.outer(n).begin() + static_cast<std::ptrdiff_t>(n));
  const Word u(cache.inner(n).begin(), cache.inner(n).begin() + static_cast<std::ptrdiff_t>(n));

  // first return: second occurrence of v in x
  std::optional<std::size_t> second;
  {
    std::size_t want = std::max<std::size_t>(64, 4 * n);
    std::optional<std::size_t> window;
    if (lim.K) {
      BigInt w = *lim.K * n + n;
      if (w <= lim.scan_budget) window = static_cast<std::size_t>(w);
    }
    while (true) {
      std::size_t len = window ? std::min(want, *window) : want;
      len = std::min(len, lim.scan_budget);
      const Word& x = cache.outer(len);
      Word xs(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(len));
      auto occ = occurrences(xs, v);
      if (occ.size() >= 2) {
        second = occ[1];
        break;
      }
      if (window && len >= *window) {
        ExitWitness e;
        e.kind = ExitKind::NoSecondOccurrence;
        e.v = v;
        e.position = len;
        e.bound = *lim.K * n;
        e.power = p;
        e.detail = "prefix occurs only at position 0 among the first " + std::to_string(len) + " letters of x";
        return e;
      }
      if (len >= lim.scan_budget) return Exhausted{"no second occurrence of the prefix within the scan budget"};
      want = 2 * len;
    }
  }
  if (lim.K && BigInt(*second) > *lim.K * n) {
    ExitWitness e;
    e.kind = ExitKind::LongReturn;
    e.v = v;
    e.word.assign(cache.inner(*second).begin(), cache.inner(*second).begin() + static_cast<std::ptrdiff_t>(*second));
    e.length = *second;
    e.bound = *lim.K * n;
    e.power = p;
    e.detail = "first return word is longer than K|v|";
    return e;
  }

  using Entry = std::pair<Word, Word>;
  const Word& y = cache.inner(*second + n);
  std::vector<Entry> table{{Word(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(*second)),
                            Word(y.begin() + static_cast<std::ptrdiff_t>(*second), y.begin() + static_cast<std::ptrdiff_t>(*second + n))}};
  std::map<Entry, Letter> index{{table[0], 0}};
  std::map<Word, std::size_t> first_occ;

  // f(h): first occurrence of v inside φ(σ^p(h)); nullopt result means an exit
  std::optional<DescriptorResult> failure;
  auto f_of = [&](const Word& h) -> std::optional<std::size_t> {
    if (auto it = first_occ.find(h); it != first_occ.end()) return it->second;
    Word img = s.phi.apply(sigma_p.apply(h));
    auto occ = occurrences(img, v);
    std::optional<std::size_t> f;
    if (!occ.empty()) f = occ.front();
    const bool long_enough = lim.K && BigInt(img.size()) + 1 >= (*lim.K + 1) * n;
    if (long_enough && (!f || BigInt(*f) >= *lim.K * n)) {
      ExitWitness e;
      e.kind = ExitKind::WindowViolation;
      e.v = v;
      e.word = h;
      e.position = f ? *f : img.size();
      e.length = img.size();
      e.bound = (*lim.K + 1) * n - 1;
      e.power = p;
      e.detail = "a factor of x of length (K+1)|v|-1 avoids v";
      failure = e;
      return std::nullopt;
    }
    if (!f) {
      failure = Escalation{"image of a prefix-preimage contains no occurrence of the prefix"};
      return std::nullopt;
    }
    first_occ.emplace(h, *f);
    return f;
  };

  std::vector<Word> images;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const Entry e = table[i];
    Word wu = e.first;
    wu.insert(wu.end(), e.second.begin(), e.second.end());
    const Word head(wu.begin(), wu.begin() + static_cast<std::ptrdiff_t>(n));
    auto fh = f_of(head);
    if (!fh) return *failure;
    auto fu = f_of(e.second);
    if (!fu) return *failure;
    if (sigma_p.image_length(wu) > lim.max_word) return Exhausted{"image length exceeds the word budget"};
    const Word ctx = sigma_p.apply(wu);
    const std::size_t start = *fh, end = sigma_p.image_length(e.first) + *fu;
    if (end <= start) return Escalation{"empty induced image"};
    const Word phictx = s.phi.apply(ctx);
    auto occ = occurrences(phictx, v);
    Word img;
    auto it = std::lower_bound(occ.begin(), occ.end(), start);
    if (it == occ.end() || *it != start) throw Error(ErrorKind::InternalConsistency, "segment start is not an occurrence");
    for (; it != occ.end() && *it < end; ++it) {
      const std::size_t a = *it, b = *(it + 1);
      Entry ne{Word(ctx.begin() + static_cast<std::ptrdiff_t>(a), ctx.begin() + static_cast<std::ptrdiff_t>(b)),
               Word(ctx.begin() + static_cast<std::ptrdiff_t>(b), ctx.begin() + static_cast<std::ptrdiff_t>(b + n))};
      if (lim.K && BigInt(ne.first.size()) > *lim.K * n) {
        ExitWitness w;
        w.kind = ExitKind::LongReturn;
        w.v = v;
        w.word = ne.first;
        w.length = ne.first.size();
        w.bound = *lim.K * n;
        w.power = p;
        w.detail = "return word longer than K|v|";
        return w;
      }
      auto [pos, fresh] = index.emplace(ne, static_cast<Letter>(table.size()));
      if (fresh) {
        table.push_back(std::move(ne));
        if (lim.K1 && BigInt(table.size()) > *lim.K1) {
          ExitWitness w;
          w.kind = ExitKind::TooManyEntries;
          w.v = v;
          w.length = table.size();
          w.bound = *lim.K1;
          w.power = p;
          w.detail = "more induced return words than K1";
          return w;
        }
        if (table.size() > lim.max_entries) return Exhausted{"entry budget exceeded"};
      }
      img.push_back(pos->second);
    }
    images.push_back(std::move(img));
  }

  Morphism raw(table.size(), images);
  if (raw(0).empty() || raw(0)[0] != 0) throw Error(ErrorKind::InternalConsistency, "induced image of the first entry must start with it");
  auto order = first_appearance_order(raw, 0);
  if (order.size() != table.size()) throw Error(ErrorKind::InternalConsistency, "closure contains unreachable entries");
  Descriptor d;
  d.u = u;
  d.v = v;
  d.power = p;
  d.sigma_U = relabel(raw, order);
  std::map<Word, Letter> xindex;
  std::vector<Word> psi_imgs;
  for (Letter old : order) {
    d.entries.push_back(table[old]);
    Word fx = s.phi.apply(table[old].first);
    auto [it, fresh] = xindex.emplace(fx, static_cast<Letter>(d.returns_x.size()));
    if (fresh) d.returns_x.push_back(fx);
    psi_imgs.push_back({it->second});
  }
  d.psi = Morphism(d.returns_x.size(), std::move(psi_imgs));
  return d;
}

/// First n letters of f^∞(first) where f(first) starts with `first`;
/// f(first) = first gives the constant sequence.
inline Word fixed_point_prefix(const Morphism& f, Letter first, std::size_t n) {
  if (f(first).empty() || f(first)[0] != first) throw Error(ErrorKind::NotProlongable, "image does not start with the letter");
  if (f(first).size() == 1) return Word(n, first);
  return inner_prefix(f, first, n);
}

/// D̃_U(y) read off the prefix y[0, len) by scanning for occurrences of v
/// in x; complete pairs only. Returns nullopt if a pair is missing from the
/// table (which would contradict closure).
inline std::optional<Word> induced_sequence_by_scan(const Descriptor& d, PrefixCache& cache, std::size_t len) {
  const std::size_t n = d.v.size();
  std::map<std::pair<Word, Word>, Letter> index;
  for (Letter i = 0; i < d.entries.size(); ++i) index.emplace(d.entries[i], i);
  const Word y(cache.inner(len).begin(), cache.inner(len).begin() + static_cast<std::ptrdiff_t>(len));
  const Word x(cache.outer(len).begin(), cache.outer(len).begin() + static_cast<std::ptrdiff_t>(len));
  auto occ = occurrences(x, d.v);
  Word out;
  for (std::size_t i = 0; i + 1 < occ.size(); ++i) {
    if (occ[i + 1] + n > len) break;
    std::pair<Word, Word> e{Word(y.begin() + static_cast<std::ptrdiff_t>(occ[i]), y.begin() + static_cast<std::ptrdiff_t>(occ[i + 1])),
                            Word(y.begin() + static_cast<std::ptrdiff_t>(occ[i + 1]), y.begin() + static_cast<std::ptrdiff_t>(occ[i + 1] + n))};
    auto it = index.find(e);
    if (it == index.end()) return std::nullopt;
    out.push_back(it->second);
  }
  return out;
}

/// δ_U Θ̃ applied to the first `steps` letters of σ_U^∞(1): a prefix of y.
inline Word delta_reconstruct(const Descriptor& d, std::size_t steps) {
  Word out;
  for (Letter i : fixed_point_prefix(d.sigma_U, 0, steps)) {
    const Word& w = d.entries[i].first;
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

/// Next prefix in the derived chain: Θ_{x,v}(1) v.
inline Word derived_step(const Descriptor& d) {
  Word next = d.returns_x.front();
  next.insert(next.end(), d.v.begin(), d.v.end());
  return next;
}

/// Recomputes σ̃_U(e) for every entry from σ^p and compares with Θ̃ σ_U.
/// Returns an empty string on success, otherwise a description of the first
/// mismatch.
inline std::string check_induced_equation(const System& s, const Morphism& sigma_p, const Descriptor& d) {
  const std::size_t n = d.v.size();
  auto first_occ = [&](const Word& h) -> std::optional<std::size_t> {
    auto occ = occurrences(s.phi.apply(sigma_p.apply(h)), d.v);
    if (occ.empty()) return std::nullopt;
    return occ.front();
  };
  for (Letter i = 0; i < d.entries.size(); ++i) {
    const auto& [w, up] = d.entries[i];
    Word wu = w;
    wu.insert(wu.end(), up.begin(), up.end());
    auto fh = first_occ(Word(wu.begin(), wu.begin() + static_cast<std::ptrdiff_t>(n)));
    auto fu = first_occ(up);
    if (!fh || !fu) return "entry " + std::to_string(i + 1) + ": image lacks an occurrence";
    const Word ctx = sigma_p.apply(wu);
    const std::size_t start = *fh, end = sigma_p.image_length(w) + *fu;
    // Θ̃ σ_U(i) spelled out: concatenated w-parts must equal the segment, and
    // each u-part must follow its w-part inside σ^p(wu')
    Word spelled;
    std::size_t pos = start;
    for (Letter j : d.sigma_U(i)) {
      const auto& [wj, uj] = d.entries.at(j);
      spelled.insert(spelled.end(), wj.begin(), wj.end());
      pos += wj.size();
      if (pos + n > ctx.size() || !std::equal(uj.begin(), uj.end(), ctx.begin() + static_cast<std::ptrdiff_t>(pos)))
        return "entry " + std::to_string(i + 1) + ": u-part does not follow its return word";
    }
    if (end < start || spelled != Word(ctx.begin() + static_cast<std::ptrdiff_t>(start), ctx.begin() + static_cast<std::ptrdiff_t>(end)))
      return "entry " + std::to_string(i + 1) + ": induced image differs from the segment of the σ-image";
    // no occurrence of v strictly inside a return word
    const Word fx = s.phi.apply(ctx);
    auto occ = occurrences(fx, d.v);
    std::size_t expected = start;
    std::size_t k = 0;
    Word img = d.sigma_U(i);
    for (std::size_t o : occ) {
      if (o < start || o > end) continue;
      if (o != expected) return "entry " + std::to_string(i + 1) + ": extra occurrence inside a return word";
      if (k < img.size()) expected += d.entries[img[k++]].first.size();
    }
  }
  return {};
}

}  // namespace morphic
