#pragma once

#include "morphic/error.hpp"
#include "morphic/growth.hpp"
#include "morphic/periodic.hpp"
#include "morphic/sequence.hpp"
#include "morphic/system.hpp"
#include "morphic/word.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace morphic {

/// A growing letter b with σ^ℓ(b) = v b u (right side) or u b v (left side),
/// u a nonempty word of non-growing letters. The words u, σ^ℓ(u), σ^{2ℓ}(u), ...
/// sit next to b in σ^{nℓ}(b) and are eventually periodic; `pumped` is one
/// period of their concatenation, so pumped^n is a factor of y for every n.
struct PumpingWitness {
  Letter b = 0;
  bool right = true;
  std::size_t power = 1;
  Word u;
  std::size_t tail_start = 0;  // first index of the periodic part
  std::size_t period = 1;
  Word pumped;
};

namespace detail {

/// Position of the first (last) growing letter of w.
inline std::optional<std::size_t> growing_end(const Word& w, const std::vector<bool>& grows, bool last) {
  if (last) {
    for (std::size_t i = w.size(); i-- > 0;)
      if (grows[w[i]]) return i;
  } else {
    for (std::size_t i = 0; i < w.size(); ++i)
      if (grows[w[i]]) return i;
  }
  return std::nullopt;
}

}  // namespace detail

/// Decides which case of Pansiot's dichotomy holds. Following the last
/// growing letter of σ(b) gives a map g on growing letters; the non-growing
/// block after g^k(b) gains the suffix of σ(g^{k-1}(b)) at every step, so
/// blocks are unbounded exactly when a cycle of g carries a nonempty suffix
/// (or the mirrored statement for first letters and prefixes). Returns the
/// witness in that case and nullopt when all blocks are bounded.
inline std::optional<PumpingWitness> pansiot_witness(const Morphism& sigma) {
  const auto grows = growing_letters(sigma);
  const std::size_t n = sigma.source_size();
  for (bool right : {true, false}) {
    std::vector<Letter> next(n, 0);
    std::vector<Word> extra(n);  // non-growing part beyond the chosen letter
    for (Letter b = 0; b < n; ++b) {
      if (!grows[b]) continue;
      const Word& img = sigma(b);
      auto pos = detail::growing_end(img, grows, right);
      if (!pos) throw Error(ErrorKind::InternalConsistency, "growing letter without a growing letter in its image");
      next[b] = img[*pos];
      extra[b] = right ? Word(img.begin() + static_cast<std::ptrdiff_t>(*pos) + 1, img.end())
                       : Word(img.begin(), img.begin() + static_cast<std::ptrdiff_t>(*pos));
    }
    for (Letter b = 0; b < n; ++b) {
      if (!grows[b]) continue;
      std::size_t len = 0;
      bool nonempty = false;
      Letter c = b;
      do {
        nonempty = nonempty || !extra[c].empty();
        c = next[c];
        ++len;
      } while (c != b && len <= n);
      if (c != b || !nonempty) continue;
      PumpingWitness pw;
      pw.b = b;
      pw.right = right;
      pw.power = len;
      // T_{k+1} = extra(g^k(b)) σ(T_k) on the right, σ(T_k) extra(g^k(b)) on the left
      Word t;
      c = b;
      for (std::size_t k = 0; k < len; ++k) {
        Word img = sigma.apply(t);
        if (right) {
          Word w = extra[c];
          w.insert(w.end(), img.begin(), img.end());
          t = std::move(w);
        } else {
          img.insert(img.end(), extra[c].begin(), extra[c].end());
          t = std::move(img);
        }
        c = next[c];
      }
      pw.u = t;
      Morphism step = power(sigma, len);
      std::vector<Word> seq;
      std::map<Word, std::size_t> seen;
      Word cur = t;
      while (!seen.count(cur)) {
        seen.emplace(cur, seq.size());
        seq.push_back(cur);
        cur = step.apply(cur);
      }
      pw.tail_start = seen.at(cur);
      pw.period = seq.size() - pw.tail_start;
      for (std::size_t k = 0; k < pw.period; ++k) {
        const Word& piece = seq[right ? pw.tail_start + k : seq.size() - 1 - k];
        pw.pumped.insert(pw.pumped.end(), piece.begin(), piece.end());
      }
      return pw;
    }
  }
  return std::nullopt;
}

/// Recodes y as the sequence of its blocks g c₁…c_m (g growing, cᵢ not
/// growing), each tagged with the growing letter that follows it. Only valid
/// when non-growing blocks are bounded; the result generates the same x and
/// every letter of it is growing. Outer images are φ(g c₁…c_m), so the
/// result usually needs another blow-up to a coding.
inline System block_encode(const System& s, std::size_t max_letters = 4096, std::size_t max_block = 4096) {
  const auto grows = growing_letters(s.sigma);
  const std::size_t n = s.alphabet.size();
  if (!grows[s.start]) throw Error(ErrorKind::PreconditionViolated, "start letter must be growing");
  std::vector<std::size_t> first_growing(n, 0);
  for (Letter b = 0; b < n; ++b)
    if (grows[b]) first_growing[b] = *detail::growing_end(s.sigma(b), grows, false);
  if (first_growing[s.start] != 0) throw Error(ErrorKind::InternalConsistency, "prolongable letter must lead its image");

  // y = a s₀ g₁ ...
  Word key0;
  {
    FixedPointStream st(s.sigma, s.start);
    key0.push_back(st.next());
    while (true) {
      if (key0.size() > max_block) throw Error(ErrorKind::BudgetExhausted, "first non-growing block too long");
      Letter c = st.next();
      key0.push_back(c);
      if (grows[c]) break;
    }
  }

  // letter keys are words g s g'
  std::map<Word, Letter> index{{key0, 0}};
  std::vector<Word> keys{key0};
  std::vector<Word> images;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const Word key = keys[i];
    const Letter g = key.front(), gn = key.back();
    Word w(s.sigma(g).begin() + static_cast<std::ptrdiff_t>(first_growing[g]), s.sigma(g).end());
    for (std::size_t k = 1; k + 1 < key.size(); ++k) {
      const Word& img = s.sigma(key[k]);
      w.insert(w.end(), img.begin(), img.end());
    }
    w.insert(w.end(), s.sigma(gn).begin(), s.sigma(gn).begin() + static_cast<std::ptrdiff_t>(first_growing[gn]));
    const Letter follow = s.sigma(gn)[first_growing[gn]];
    Word img;
    std::size_t a = 0;
    while (a < w.size()) {
      std::size_t b = a + 1;
      while (b < w.size() && !grows[w[b]]) ++b;
      Word nk(w.begin() + static_cast<std::ptrdiff_t>(a), w.begin() + static_cast<std::ptrdiff_t>(b));
      nk.push_back(b < w.size() ? w[b] : follow);
      if (nk.size() > max_block) throw Error(ErrorKind::BudgetExhausted, "non-growing block too long");
      auto [it, fresh] = index.emplace(nk, static_cast<Letter>(keys.size()));
      if (fresh) {
        keys.push_back(std::move(nk));
        if (keys.size() > max_letters) throw Error(ErrorKind::BudgetExhausted, "block alphabet too large");
      }
      img.push_back(it->second);
      a = b;
    }
    images.push_back(std::move(img));
  }

  const bool compact = std::all_of(s.alphabet.tokens().begin(), s.alphabet.tokens().end(),
                                   [](const std::string& t) { return t.size() == 1; });
  Alphabet alpha;
  std::vector<Word> phis;
  for (const Word& key : keys) {
    std::string name = "[";
    for (std::size_t k = 0; k + 1 < key.size(); ++k) name += (k && !compact ? "." : "") + s.alphabet.token(key[k]);
    name += "|" + s.alphabet.token(key.back()) + "]";
    while (alpha.contains(name)) name += "'";
    alpha.add(name);
    phis.push_back(s.phi.apply(Word(key.begin(), key.end() - 1)));
  }
  System out;
  out.name = s.name;
  out.has_phi = true;
  out.alphabet = std::move(alpha);
  out.sigma = Morphism(keys.size(), std::move(images));
  out.target = s.target;
  out.phi = Morphism(s.target.size(), std::move(phis));
  out.start = 0;
  // τ(first block) starts with itself; take a power if it is a single block
  for (std::size_t k = 1; !is_prolongable(out.sigma, 0); ++k) {
    if (k > keys.size()) throw Error(ErrorKind::InternalConsistency, "block encoding is not prolongable");
    out.sigma = compose(out.sigma, out.sigma);
  }
  return out;
}

}  // namespace morphic
