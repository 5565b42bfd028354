#pragma once

#include "morphic/error.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace morphic {

/// Dense letter index inside one alphabet.
using Letter = std::uint32_t;
using Word = std::vector<Letter>;

/// Ordered finite set of opaque tokens. Index order is the construction order.
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> tokens) {
    for (auto& t : tokens) add(std::move(t));
  }

  /// Alphabet of decimal tokens "1".."n"; used for return-word index alphabets.
  static Alphabet indices(std::size_t n) {
    Alphabet a;
    for (std::size_t i = 1; i <= n; ++i) a.add(std::to_string(i));
    return a;
  }

  Letter add(std::string token) {
    if (token.empty()) throw Error(ErrorKind::InvalidArgument, "empty letter token");
    if (index_.count(token)) throw Error(ErrorKind::InvalidArgument, "duplicate letter '" + token + "'");
    const auto id = static_cast<Letter>(tokens_.size());
    index_.emplace(token, id);
    tokens_.push_back(std::move(token));
    return id;
  }

  std::size_t size() const noexcept { return tokens_.size(); }
  bool contains(std::string_view token) const { return index_.count(std::string(token)) != 0; }

  std::optional<Letter> find(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  Letter at(std::string_view token) const {
    auto l = find(token);
    if (!l) throw Error(ErrorKind::InvalidArgument, "letter '" + std::string(token) + "' not in alphabet");
    return *l;
  }

  const std::string& token(Letter l) const { return tokens_.at(l); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  bool operator==(const Alphabet& o) const { return tokens_ == o.tokens_; }

  /// Renders a word with single-character tokens concatenated and longer tokens space separated.
  std::string render(const Word& w) const {
    bool compact = std::all_of(tokens_.begin(), tokens_.end(), [](const std::string& t) { return t.size() == 1; });
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!compact && i) out += ' ';
      out += token(w[i]);
    }
    return out;
  }

  Word parse(std::string_view text) const {
    Word w;
    std::size_t i = 0;
    bool has_space = text.find(' ') != std::string_view::npos;
    if (has_space) {
      while (i < text.size()) {
        while (i < text.size() && text[i] == ' ') ++i;
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ') ++j;
        if (j > i) w.push_back(at(text.substr(i, j - i)));
        i = j;
      }
      return w;
    }
    if (auto whole = find(text); whole && text.size() > 1) return {*whole};
    for (char c : text) w.push_back(at(std::string(1, c)));
    return w;
  }

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, Letter> index_;
};

inline std::size_t length_of(const Word& w) { return w.size(); }

inline bool is_prefix(const Word& p, const Word& w) {
  return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

/// Letter-to-word map from a source alphabet (by size) into a target alphabet (by size).
class Morphism {
 public:
  Morphism() = default;

  Morphism(std::size_t target_size, std::vector<Word> images)
      : target_size_(target_size), images_(std::move(images)) {
    for (const auto& img : images_)
      for (Letter c : img)
        if (c >= target_size_) throw Error(ErrorKind::InvalidArgument, "image letter outside target alphabet");
  }

  static Morphism identity(std::size_t n) {
    std::vector<Word> imgs(n);
    for (std::size_t i = 0; i < n; ++i) imgs[i] = {static_cast<Letter>(i)};
    return Morphism(n, std::move(imgs));
  }

  std::size_t source_size() const noexcept { return images_.size(); }
  std::size_t target_size() const noexcept { return target_size_; }
  const Word& operator()(Letter c) const { return images_.at(c); }
  const std::vector<Word>& images() const noexcept { return images_; }

  Word apply(const Word& w) const {
    Word out;
    std::size_t total = 0;
    for (Letter c : w) total += images_.at(c).size();
    out.reserve(total);
    for (Letter c : w) {
      const Word& img = images_[c];
      out.insert(out.end(), img.begin(), img.end());
    }
    return out;
  }

  std::size_t image_length(const Word& w) const {
    std::size_t n = 0;
    for (Letter c : w) n += images_.at(c).size();
    return n;
  }

  bool is_endomorphism() const noexcept { return source_size() == target_size_; }

  bool is_erasing() const {
    return std::any_of(images_.begin(), images_.end(), [](const Word& w) { return w.empty(); });
  }

  /// Letter-to-letter and onto.
  bool is_coding() const {
    std::vector<bool> hit(target_size_, false);
    for (const auto& img : images_) {
      if (img.size() != 1) return false;
      hit[img[0]] = true;
    }
    return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
  }

  /// |σ| = max image length.
  std::size_t max_length() const {
    std::size_t m = 0;
    for (const auto& img : images_) m = std::max(m, img.size());
    return m;
  }

  /// ⟨σ⟩ = min image length.
  std::size_t min_length() const {
    if (images_.empty()) return 0;
    std::size_t m = images_[0].size();
    for (const auto& img : images_) m = std::min(m, img.size());
    return m;
  }

  bool operator==(const Morphism& o) const { return target_size_ == o.target_size_ && images_ == o.images_; }

 private:
  std::size_t target_size_ = 0;
  std::vector<Word> images_;
};

/// (f∘g)(c) = f(g(c)).
inline Morphism compose(const Morphism& f, const Morphism& g) {
  if (g.target_size() != f.source_size())
    throw Error(ErrorKind::AlphabetMismatch, "compose: target of g (" + std::to_string(g.target_size()) +
                                                 " letters) differs from source of f (" +
                                                 std::to_string(f.source_size()) + " letters)");
  std::vector<Word> imgs;
  imgs.reserve(g.source_size());
  for (const auto& img : g.images()) imgs.push_back(f.apply(img));
  return Morphism(f.target_size(), std::move(imgs));
}

inline Morphism power(const Morphism& sigma, std::size_t k) {
  if (!sigma.is_endomorphism()) throw Error(ErrorKind::InvalidArgument, "power: morphism is not an endomorphism");
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "power: exponent must be positive");
  Morphism result = sigma;
  Morphism base = sigma;
  std::size_t rest = k - 1;
  // binary powering; σ^a∘σ^b commutes so the order of products is irrelevant
  while (rest) {
    if (rest & 1) result = compose(result, base);
    rest >>= 1;
    if (rest) base = compose(base, base);
  }
  return result;
}

}  // namespace morphic
