#pragma once

#include "morphic/error.hpp"
#include "morphic/growth.hpp"
#include "morphic/word.hpp"

#include <fstream>
#include <sstream>
#include <optional>
#include <string>
#include <vector>

namespace morphic {

/// Morphic system: x = φ(σ^∞(start)).
struct System {
  Alphabet alphabet;  // inner alphabet A
  Morphism sigma;     // A -> A
  Letter start = 0;
  Alphabet target;    // outer alphabet B
  Morphism phi;       // A -> B
  /// False when no outer morphism was given (φ is the identity).
  bool has_phi = false;
  std::string name;

  static System pure(Alphabet a, Morphism sigma, Letter start, std::string name = {}) {
    System s;
    s.target = a;
    s.phi = Morphism::identity(a.size());
    s.alphabet = std::move(a);
    s.sigma = std::move(sigma);
    s.start = start;
    s.name = std::move(name);
    return s;
  }
};

/// Builds a system from images written as strings of one-character tokens.
inline System make_system(const std::string& letters, const std::vector<std::string>& images, char start,
                          const std::string& targets = {}, const std::vector<std::string>& phi_images = {}) {
  Alphabet a;
  for (char c : letters) a.add(std::string(1, c));
  std::vector<Word> imgs;
  for (const auto& im : images) imgs.push_back(im.empty() ? Word{} : a.parse(im));
  System s = System::pure(a, Morphism(a.size(), imgs), a.at(std::string(1, start)));
  if (!phi_images.empty()) {
    Alphabet b;
    for (char c : targets) b.add(std::string(1, c));
    std::vector<Word> pimgs;
    for (const auto& im : phi_images) pimgs.push_back(im.empty() ? Word{} : b.parse(im));
    s.target = b;
    s.phi = Morphism(b.size(), pimgs);
    s.has_phi = true;
  }
  return s;
}

namespace detail {

struct LineCursor {
  const std::string& source;
  std::size_t line;

  [[noreturn]] void fail(std::size_t col, const std::string& msg) const {
    throw Error(ErrorKind::Parse, source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
};

struct Token {
  std::string text;
  std::size_t col;
};

inline std::vector<Token> split_tokens(const std::string& s, std::size_t offset) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back({s.substr(i, j - i), offset + i + 1});
    i = j;
  }
  return out;
}

inline bool is_empty_word(const std::string& t) { return t == "ε" || t == "eps" || t == "epsilon"; }

/// Letters of an image token list. A token that is not a letter is read as a
/// run of one-character letters, so `a -> ab` and `a -> a b` agree.
inline Word parse_image(const std::vector<Token>& toks, const Alphabet& alpha, const LineCursor& cur) {
  Word w;
  if (toks.size() == 1 && is_empty_word(toks[0].text)) return w;
  for (const auto& t : toks) {
    if (auto l = alpha.find(t.text)) {
      w.push_back(*l);
      continue;
    }
    for (std::size_t k = 0; k < t.text.size(); ++k) {
      auto l = alpha.find(t.text.substr(k, 1));
      if (!l) cur.fail(t.col + k, "unknown letter '" + t.text.substr(k, 1) + "'");
      w.push_back(*l);
    }
  }
  return w;
}

}  // namespace detail

/// Parses the text format:
///
///     alphabet: a b c        # optional, defaults to the sigma left sides
///     start: a
///     sigma:
///       a -> a b
///       b -> c
///       c -> ε
///     target: 0 1            # optional, defaults to the letters used by phi
///     phi:
///       a -> 0 1
///
/// `#` starts a comment. Errors carry `source:line:column`.
inline System parse_system(const std::string& text, const std::string& source = "<input>") {
  struct Rule {
    detail::Token lhs;
    std::vector<detail::Token> rhs;
    std::size_t line;
  };
  enum class Section { Top, Sigma, Phi } section = Section::Top;
  std::vector<detail::Token> alphabet_toks, target_toks;
  std::optional<detail::Token> start_tok;
  std::vector<Rule> sigma_rules, phi_rules;
  bool saw_sigma = false, saw_phi = false, saw_alphabet = false, saw_target = false;
  std::size_t alphabet_line = 0, target_line = 0;

  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    detail::LineCursor cur{source, lineno};
    std::string line = raw.substr(0, raw.find('#'));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto toks = detail::split_tokens(line, 0);
    if (toks.empty()) continue;
    if (auto arrow = line.find("->"); arrow != std::string::npos) {
      if (section == Section::Top) cur.fail(arrow + 1, "rule outside a sigma: or phi: block");
      auto lhs = detail::split_tokens(line.substr(0, arrow), 0);
      if (lhs.size() != 1) cur.fail(lhs.empty() ? 1 : lhs[1].col, "expected exactly one letter before '->'");
      auto rhs = detail::split_tokens(line.substr(arrow + 2), arrow + 2);
      if (rhs.empty()) cur.fail(arrow + 3, "missing image (write ε for the empty word)");
      (section == Section::Sigma ? sigma_rules : phi_rules).push_back({lhs[0], rhs, lineno});
      continue;
    }
    auto colon = line.find(':');
    if (colon == std::string::npos) cur.fail(toks[0].col, "expected 'key:' or a rule 'x -> w'");
    std::string key = line.substr(0, colon);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    auto values = detail::split_tokens(line.substr(colon + 1), colon + 1);
    if (key == "alphabet") {
      if (saw_alphabet) cur.fail(1, "duplicate alphabet line");
      saw_alphabet = true;
      alphabet_line = lineno;
      alphabet_toks = values;
      section = Section::Top;
    } else if (key == "target") {
      if (saw_target) cur.fail(1, "duplicate target line");
      saw_target = true;
      target_line = lineno;
      target_toks = values;
      section = Section::Top;
    } else if (key == "start") {
      if (start_tok) cur.fail(1, "duplicate start line");
      if (values.size() != 1) cur.fail(colon + 2, "start needs exactly one letter");
      start_tok = values[0];
      section = Section::Top;
    } else if (key == "sigma") {
      if (saw_sigma) cur.fail(1, "duplicate sigma block");
      if (!values.empty()) cur.fail(values[0].col, "rules go on the following lines");
      saw_sigma = true;
      section = Section::Sigma;
    } else if (key == "phi") {
      if (saw_phi) cur.fail(1, "duplicate phi block");
      if (!values.empty()) cur.fail(values[0].col, "rules go on the following lines");
      saw_phi = true;
      section = Section::Phi;
    } else {
      cur.fail(toks[0].col, "unknown key '" + key + "'");
    }
  }
  detail::LineCursor end{source, lineno};
  if (!saw_sigma || sigma_rules.empty()) end.fail(1, "missing sigma block");

  System sys;
  sys.name = source;
  auto add_letter = [](Alphabet& a, const detail::Token& t, const detail::LineCursor& cur) {
    if (a.contains(t.text)) cur.fail(t.col, "duplicate letter '" + t.text + "'");
    if (detail::is_empty_word(t.text)) cur.fail(t.col, "'" + t.text + "' is reserved for the empty word");
    a.add(t.text);
  };
  if (saw_alphabet) {
    for (const auto& t : alphabet_toks) add_letter(sys.alphabet, t, {source, alphabet_line});
  } else {
    for (const auto& r : sigma_rules) add_letter(sys.alphabet, r.lhs, {source, r.line});
  }
  if (sys.alphabet.size() == 0) end.fail(1, "empty alphabet");

  auto build = [&](const std::vector<Rule>& rules, const Alphabet& src, const Alphabet& dst, const char* what) {
    std::vector<std::optional<Word>> imgs(src.size());
    for (const auto& r : rules) {
      detail::LineCursor cur{source, r.line};
      auto l = src.find(r.lhs.text);
      if (!l) cur.fail(r.lhs.col, "unknown letter '" + r.lhs.text + "'");
      if (imgs[*l]) cur.fail(r.lhs.col, std::string("second ") + what + " rule for '" + r.lhs.text + "'");
      imgs[*l] = detail::parse_image(r.rhs, dst, cur);
    }
    std::vector<Word> out;
    for (Letter a = 0; a < src.size(); ++a) {
      if (!imgs[a]) end.fail(1, std::string("no ") + what + " rule for '" + src.token(a) + "'");
      out.push_back(*imgs[a]);
    }
    return Morphism(dst.size(), std::move(out));
  };
  sys.sigma = build(sigma_rules, sys.alphabet, sys.alphabet, "sigma");

  if (!start_tok) end.fail(1, "missing start line");
  {
    auto l = sys.alphabet.find(start_tok->text);
    if (!l) end.fail(start_tok->col, "start letter '" + start_tok->text + "' not in alphabet");
    sys.start = *l;
  }

  if (saw_phi) {
    sys.has_phi = true;
    if (saw_target) {
      for (const auto& t : target_toks) add_letter(sys.target, t, {source, target_line});
    } else {
      for (const auto& r : phi_rules) {
        if (r.rhs.size() == 1 && detail::is_empty_word(r.rhs[0].text)) continue;
        for (const auto& t : r.rhs) {
          if (r.rhs.size() == 1) {
            for (std::size_t k = 0; k < t.text.size(); ++k)
              if (!sys.target.contains(t.text.substr(k, 1))) sys.target.add(t.text.substr(k, 1));
          } else if (!sys.target.contains(t.text)) {
            sys.target.add(t.text);
          }
        }
      }
    }
    sys.phi = build(phi_rules, sys.alphabet, sys.target, "phi");
  } else {
    if (saw_target) end.fail(1, "target given without a phi block");
    sys.target = sys.alphabet;
    sys.phi = Morphism::identity(sys.alphabet.size());
  }
  return sys;
}

inline System load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str(), path);
}

inline std::string render_image(const Alphabet& a, const Word& w) { return w.empty() ? "ε" : a.render(w); }

/// Text form accepted by parse_system.
inline std::string to_text(const System& s) {
  auto spaced = [](const Alphabet& a, const Word& w) {
    if (w.empty()) return std::string("ε");
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) out += (i ? " " : "") + a.token(w[i]);
    return out;
  };
  std::string out = "alphabet:";
  for (const auto& t : s.alphabet.tokens()) out += " " + t;
  out += "\nstart: " + s.alphabet.token(s.start) + "\nsigma:\n";
  for (Letter a = 0; a < s.alphabet.size(); ++a)
    out += "  " + s.alphabet.token(a) + " -> " + spaced(s.alphabet, s.sigma(a)) + "\n";
  if (s.has_phi) {
    out += "target:";
    for (const auto& t : s.target.tokens()) out += " " + t;
    out += "\nphi:\n";
    for (Letter a = 0; a < s.alphabet.size(); ++a)
      out += "  " + s.alphabet.token(a) + " -> " + spaced(s.target, s.phi(a)) + "\n";
  }
  return out;
}

/// Letters b whose iterates σ^n(b) are eventually empty.
inline std::vector<bool> mortal_letters(const Morphism& sigma) {
  std::vector<bool> mortal(sigma.source_size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (Letter a = 0; a < sigma.source_size(); ++a) {
      if (mortal[a]) continue;
      const Word& img = sigma(a);
      if (std::all_of(img.begin(), img.end(), [&](Letter c) { return mortal[c]; })) mortal[a] = changed = true;
    }
  }
  return mortal;
}

struct Classification {
  bool non_erasing = false;
  bool coding = false;
  bool endomorphism = false;
  /// Letters a with σ(a) = au, u non-empty and |σ^n(a)| unbounded.
  std::vector<Letter> prolongable_on;
};

inline Classification classify(const Morphism& sigma) {
  Classification c;
  c.non_erasing = !sigma.is_erasing();
  c.coding = sigma.is_coding();
  c.endomorphism = sigma.is_endomorphism();
  if (!c.endomorphism) return c;
  // σ(a) = au gives |σ^{n+1}(a)| = |σ^n(a)| + |σ^n(u)|, unbounded iff u is not mortal
  auto mortal = mortal_letters(sigma);
  for (Letter a = 0; a < sigma.source_size(); ++a) {
    const Word& img = sigma(a);
    if (img.size() < 2 || img[0] != a) continue;
    if (std::any_of(img.begin() + 1, img.end(), [&](Letter b) { return !mortal[b]; })) c.prolongable_on.push_back(a);
  }
  return c;
}

inline bool is_prolongable(const Morphism& sigma, Letter a) {
  auto c = classify(sigma);
  return std::find(c.prolongable_on.begin(), c.prolongable_on.end(), a) != c.prolongable_on.end();
}

/// Throws NotProlongable unless σ is prolongable on the start letter.
inline void require_prolongable(const System& s) {
  if (!s.sigma.is_endomorphism()) throw Error(ErrorKind::AlphabetMismatch, "sigma is not an endomorphism");
  if (s.phi.source_size() != s.alphabet.size())
    throw Error(ErrorKind::AlphabetMismatch, "phi is not defined on the sigma alphabet");
  if (!is_prolongable(s.sigma, s.start))
    throw Error(ErrorKind::NotProlongable,
                "sigma is not prolongable on '" + s.alphabet.token(s.start) + "' (needs σ(a) = au with |σ^n(a)| unbounded)");
}

/// Drops letters that never occur in σ^∞(start), and target letters never used.
inline System restrict_to_reachable(const System& s) {
  const std::size_t n = s.alphabet.size();
  std::vector<bool> seen(n, false);
  std::vector<Letter> stack{s.start};
  seen[s.start] = true;
  while (!stack.empty()) {
    Letter a = stack.back();
    stack.pop_back();
    for (Letter b : s.sigma(a))
      if (!seen[b]) seen[b] = true, stack.push_back(b);
  }
  std::vector<Letter> remap(n, 0);
  Alphabet alpha;
  for (Letter a = 0; a < n; ++a)
    if (seen[a]) remap[a] = alpha.add(s.alphabet.token(a));
  std::vector<bool> used(s.target.size(), false);
  for (Letter a = 0; a < n; ++a)
    if (seen[a])
      for (Letter b : s.phi(a)) used[b] = true;
  std::vector<Letter> tremap(s.target.size(), 0);
  Alphabet target;
  for (Letter b = 0; b < s.target.size(); ++b)
    if (used[b]) tremap[b] = target.add(s.target.token(b));

  std::vector<Word> simg, pimg;
  for (Letter a = 0; a < n; ++a) {
    if (!seen[a]) continue;
    Word w, v;
    for (Letter b : s.sigma(a)) w.push_back(remap[b]);
    for (Letter b : s.phi(a)) v.push_back(tremap[b]);
    simg.push_back(std::move(w));
    pimg.push_back(std::move(v));
  }
  System out;
  out.name = s.name;
  out.has_phi = s.has_phi;
  out.sigma = Morphism(alpha.size(), std::move(simg));
  out.phi = Morphism(target.size(), std::move(pimg));
  out.start = remap[s.start];
  out.alphabet = std::move(alpha);
  out.target = std::move(target);
  return out;
}

struct Normalization {
  System system;
  /// Power of σ used by the blow-up (1 when nothing changed).
  std::size_t power = 1;
  bool blown_up = false;
};

/// Equivalent system whose outer morphism is a coding and whose σ is
/// non-erasing. A non-erasing φ that is not letter-to-letter is handled by
/// splitting each letter a into |φ(a)| copies; erasing inputs are rejected.
inline Normalization normalize_to_coding(const System& input) {
  if (input.sigma.is_erasing())
    throw Error(ErrorKind::NormalizationUnsupported,
                "sigma is erasing; removing erasing letters needs the general reduction, which is not implemented");
  if (input.phi.is_erasing())
    throw Error(ErrorKind::NormalizationUnsupported,
                "phi is erasing; reducing to a coding needs the general reduction, which is not implemented");
  require_prolongable(input);
  const System s = restrict_to_reachable(input);
  Normalization out;
  if (s.phi.max_length() == 1) {
    out.system = s;
    return out;
  }
  const std::size_t n = s.alphabet.size();
  const std::size_t limit = n * (n + 1);
  // Prefer a power where every piece can take at least two letters, so a
  // growing σ stays growing; otherwise the first piece keeps the bulk.
  std::optional<std::size_t> chosen;
  bool even = false;
  for (int pass = 0; pass < 2 && !chosen; ++pass) {
    Morphism tau = s.sigma;
    for (std::size_t k = 1; k <= limit; ++k, tau = compose(s.sigma, tau)) {
      bool ok = true;
      for (Letter a = 0; a < n && ok; ++a) {
        const std::size_t need = pass == 0 ? 2 * s.phi(a).size() : s.phi(a).size() + (a == s.start ? 1 : 0);
        ok = s.phi.image_length(tau(a)) >= need;
      }
      if (ok) {
        chosen = k;
        even = pass == 0;
        break;
      }
    }
  }
  if (chosen) {
    const std::size_t k = *chosen;
    Morphism tau = power(s.sigma, k);
    // letters (a, i) for i < |φ(a)|, numbered consecutively
    std::vector<Letter> first(n + 1, 0);
    for (Letter a = 0; a < n; ++a) first[a + 1] = first[a] + static_cast<Letter>(s.phi(a).size());
    Alphabet alpha;
    for (Letter a = 0; a < n; ++a)
      for (std::size_t i = 0; i < s.phi(a).size(); ++i) {
        std::string tok = s.alphabet.token(a) + "_" + std::to_string(i);
        while (alpha.contains(tok)) tok += "'";
        alpha.add(tok);
      }
    std::vector<Word> simg(first[n]), pimg(first[n]);
    for (Letter a = 0; a < n; ++a) {
      Word blown;
      for (Letter b : tau(a))
        for (Letter i = 0; i < s.phi(b).size(); ++i) blown.push_back(first[b] + i);
      const std::size_t parts = s.phi(a).size();
      std::vector<std::size_t> cut(parts + 1, 0);
      if (even) {
        // near-equal consecutive segments, longer ones first
        for (std::size_t i = 0; i < parts; ++i) cut[i + 1] = cut[i] + blown.size() / parts + (i < blown.size() % parts ? 1 : 0);
      } else {
        // pieces 1..parts-1 take one letter each from the end
        cut[1] = blown.size() - (parts - 1);
        for (std::size_t i = 1; i < parts; ++i) cut[i + 1] = cut[i] + 1;
      }
      for (std::size_t i = 0; i < parts; ++i)
        simg[first[a] + i] = Word(blown.begin() + static_cast<std::ptrdiff_t>(cut[i]), blown.begin() + static_cast<std::ptrdiff_t>(cut[i + 1]));
      for (std::size_t i = 0; i < parts; ++i) pimg[first[a] + i] = {s.phi(a)[i]};
    }
    System r;
    r.name = s.name;
    r.has_phi = true;
    r.alphabet = std::move(alpha);
    r.sigma = Morphism(first[n], std::move(simg));
    r.target = s.target;
    r.phi = Morphism(s.target.size(), std::move(pimg));
    r.start = first[s.start];
    out.system = restrict_to_reachable(r);
    out.power = k;
    out.blown_up = true;
    return out;
  }
  throw Error(ErrorKind::NormalizationUnsupported,
              "no power of sigma up to " + std::to_string(limit) +
                  " admits the letter blow-up; the general reduction is not implemented");
}

}  // namespace morphic
