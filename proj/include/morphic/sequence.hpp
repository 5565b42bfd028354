#pragma once

#include "morphic/system.hpp"
#include "morphic/word.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

namespace morphic {

/// Letter-by-letter generator of σ^∞(a), writing σ(a) = au as
/// a u σ(u) σ²(u) ... and expanding each σ^k(u) depth-first. Memory is
/// O(k·|σ|) for the current k.
class FixedPointStream {
 public:
  FixedPointStream(const Morphism& sigma, Letter start) : sigma_(&sigma), start_(start) {
    if (!is_prolongable(sigma, start)) throw Error(ErrorKind::NotProlongable, "stream needs a prolongable letter");
    u_.assign(sigma(start).begin() + 1, sigma(start).end());
  }

  Letter next() {
    ++emitted_;
    if (emitted_ == 1) return start_;
    while (true) {
      if (frames_.empty()) {
        // begin σ^depth(u)
        frames_.push_back({&u_, 0, depth_});
        ++depth_;
      }
      Frame& f = frames_.back();
      if (f.pos == f.word->size()) {
        frames_.pop_back();
        continue;
      }
      Letter c = (*f.word)[f.pos++];
      if (f.depth == 0) return c;
      const std::size_t d = f.depth - 1;
      frames_.push_back({&(*sigma_)(c), 0, d});
    }
  }

  std::size_t emitted() const noexcept { return emitted_; }

 private:
  struct Frame {
    const Word* word;
    std::size_t pos;
    std::size_t depth;
  };
  const Morphism* sigma_;
  Letter start_;
  Word u_;
  std::vector<Frame> frames_;
  std::size_t depth_ = 0;
  std::size_t emitted_ = 0;
};

/// First n letters of y = σ^∞(start).
inline Word inner_prefix(const Morphism& sigma, Letter start, std::size_t n) {
  Word out;
  out.reserve(n);
  if (n == 0) return out;
  FixedPointStream st(sigma, start);
  while (out.size() < n) out.push_back(st.next());
  return out;
}

inline Word inner_prefix(const System& s, std::size_t n) { return inner_prefix(s.sigma, s.start, n); }

/// First n letters of x = φ(y). Throws BudgetExhausted if φ erases
/// everything for too long (bounded by `max_inner`).
inline Word outer_prefix(const System& s, std::size_t n, std::size_t max_inner = SIZE_MAX) {
  Word out;
  out.reserve(n);
  if (n == 0) return out;
  FixedPointStream st(s.sigma, s.start);
  while (out.size() < n) {
    if (st.emitted() >= max_inner) throw Error(ErrorKind::BudgetExhausted, "outer prefix: inner budget exhausted");
    const Word& img = s.phi(st.next());
    for (Letter b : img) {
      if (out.size() == n) break;
      out.push_back(b);
    }
  }
  return out;
}

enum class Which { Inner, Outer };

inline Word prefix(const System& s, std::size_t n, Which which) {
  return which == Which::Inner ? inner_prefix(s, n) : outer_prefix(s, n);
}

/// Positions i with w[i, i+|u|) = u.
inline std::vector<std::size_t> occurrences(const Word& w, const Word& u) {
  std::vector<std::size_t> out;
  if (u.empty() || u.size() > w.size()) return out;
  auto it = w.begin();
  while (true) {
    it = std::search(it, w.end(), u.begin(), u.end());
    if (it == w.end()) break;
    out.push_back(static_cast<std::size_t>(it - w.begin()));
    ++it;
  }
  return out;
}

inline bool is_factor(const Word& u, const Word& w) {
  return u.empty() || std::search(w.begin(), w.end(), u.begin(), u.end()) != w.end();
}

struct GapResult {
  /// Number of occurrences found.
  std::size_t count = 0;
  /// Largest difference of consecutive occurrences, when count ≥ 2.
  std::optional<std::size_t> gap;
  std::size_t from = 0, to = 0;
};

/// Largest distance between consecutive occurrences of u in w. `gap` is
/// empty when u occurs fewer than twice (the NotEnoughOccurrences signal).
inline GapResult max_gap(const Word& w, const Word& u) {
  GapResult r;
  auto occ = occurrences(w, u);
  r.count = occ.size();
  for (std::size_t i = 1; i < occ.size(); ++i) {
    std::size_t g = occ[i] - occ[i - 1];
    if (!r.gap || g > *r.gap) {
      r.gap = g;
      r.from = occ[i - 1];
      r.to = occ[i];
    }
  }
  return r;
}

namespace detail {

/// Summary of a word w for length-n factors: the word itself while
/// |w| < n, otherwise its length-n factors plus its (n−1)-prefix and suffix.
struct FactorInfo {
  bool is_short = true;
  Word word;  // full word when short
  std::set<Word> factors;
  Word head, tail;

  bool operator==(const FactorInfo& o) const {
    return is_short == o.is_short && word == o.word && factors == o.factors && head == o.head && tail == o.tail;
  }
};

inline FactorInfo info_of_word(const Word& w, std::size_t n) {
  FactorInfo f;
  if (w.size() < n) {
    f.word = w;
    return f;
  }
  f.is_short = false;
  for (std::size_t i = 0; i + n <= w.size(); ++i) f.factors.emplace(w.begin() + i, w.begin() + i + n);
  f.head.assign(w.begin(), w.begin() + (n - 1));
  f.tail.assign(w.end() - (n - 1), w.end());
  return f;
}

inline FactorInfo concat(const FactorInfo& a, const FactorInfo& b, std::size_t n) {
  if (a.is_short && b.is_short) {
    Word w = a.word;
    w.insert(w.end(), b.word.begin(), b.word.end());
    return info_of_word(w, n);
  }
  FactorInfo f;
  f.is_short = false;
  const Word& at = a.is_short ? a.word : a.tail;
  const Word& bh = b.is_short ? b.word : b.head;
  Word mid = at;
  mid.insert(mid.end(), bh.begin(), bh.end());
  // every length-n factor of mid crosses the boundary
  for (std::size_t i = 0; i + n <= mid.size(); ++i) f.factors.emplace(mid.begin() + i, mid.begin() + i + n);
  f.factors.insert(a.factors.begin(), a.factors.end());
  f.factors.insert(b.factors.begin(), b.factors.end());
  if (a.is_short) {
    Word h = a.word;
    h.insert(h.end(), b.head.begin(), b.head.end());
    h.resize(n - 1);
    f.head = std::move(h);
  } else {
    f.head = a.head;
  }
  if (b.is_short) {
    Word t = a.tail;
    t.insert(t.end(), b.word.begin(), b.word.end());
    f.tail.assign(t.end() - (n - 1), t.end());
  } else {
    f.tail = b.tail;
  }
  return f;
}

inline std::string serialize(const std::vector<FactorInfo>& state) {
  std::string s;
  auto put = [&](const Word& w) {
    s += std::to_string(w.size());
    for (Letter c : w) s += ',' + std::to_string(c);
    s += ';';
  };
  for (const auto& f : state) {
    s += f.is_short ? 'S' : 'L';
    put(f.word);
    put(f.head);
    put(f.tail);
    s += std::to_string(f.factors.size()) + ':';
    for (const auto& w : f.factors) put(w);
    s += '|';
  }
  return s;
}

}  // namespace detail

/// Exact set of length-n factors occurring in σ^k(w) for some k ≥ 0.
/// Iterates per-letter summaries of σ^k(b) until the summary vector repeats,
/// so the answer is complete whether or not σ is growing.
inline std::set<Word> iterate_language(const Morphism& sigma, const Word& w, std::size_t n) {
  std::set<Word> out;
  if (n == 0) {
    out.insert(Word{});
    return out;
  }
  const std::size_t m = sigma.source_size();
  std::vector<detail::FactorInfo> state(m);
  for (Letter b = 0; b < m; ++b) state[b] = detail::info_of_word(Word{b}, n);
  std::unordered_set<std::string> seen;
  while (true) {
    if (!seen.insert(detail::serialize(state)).second) break;
    detail::FactorInfo whole = detail::info_of_word(Word{}, n);
    for (Letter c : w) whole = detail::concat(whole, state[c], n);
    if (!whole.is_short) out.insert(whole.factors.begin(), whole.factors.end());
    std::vector<detail::FactorInfo> next(m);
    for (Letter b = 0; b < m; ++b) {
      detail::FactorInfo acc = detail::info_of_word(Word{}, n);
      for (Letter c : sigma(b)) acc = detail::concat(acc, state[c], n);
      next[b] = std::move(acc);
    }
    state = std::move(next);
  }
  return out;
}

/// L_n(y) for y = σ^∞(start).
inline std::set<Word> inner_language(const System& s, std::size_t n) {
  return iterate_language(s.sigma, Word{s.start}, n);
}

/// L_n(x) for x = φ(y); φ must be non-erasing.
inline std::set<Word> outer_language(const System& s, std::size_t n) {
  if (s.phi.is_erasing()) throw Error(ErrorKind::Erasing, "outer language needs a non-erasing phi");
  std::set<Word> out;
  if (n == 0) {
    out.insert(Word{});
    return out;
  }
  for (const Word& v : inner_language(s, n)) {
    Word img = s.phi.apply(v);
    for (std::size_t i = 0; i + n <= img.size(); ++i) out.emplace(img.begin() + i, img.begin() + i + n);
  }
  return out;
}

inline std::set<Word> language(const System& s, std::size_t n, Which which) {
  return which == Which::Inner ? inner_language(s, n) : outer_language(s, n);
}

/// Factor complexity p(n).
inline std::size_t complexity(const System& s, std::size_t n, Which which) { return language(s, n, which).size(); }

}  // namespace morphic
