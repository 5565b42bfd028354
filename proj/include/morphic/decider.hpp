#pragma once

#include "morphic/bigint.hpp"
#include "morphic/constants.hpp"
#include "morphic/error.hpp"
#include "morphic/growth.hpp"
#include "morphic/nongrowing.hpp"
#include "morphic/periodic.hpp"
#include "morphic/returns.hpp"
#include "morphic/sequence.hpp"
#include "morphic/system.hpp"
#include "morphic/word.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace morphic {

enum class Outcome { UniformlyRecurrent, NotUniformlyRecurrent, Inconclusive };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::UniformlyRecurrent: return "uniformly_recurrent";
    case Outcome::NotUniformlyRecurrent: return "not_uniformly_recurrent";
    case Outcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct DecideOptions {
  /// Descriptors built per power before giving up.
  std::size_t practical_cap = 64;
  std::size_t scan_budget = std::size_t{1} << 22;
  std::size_t max_entries = 20000;
  std::size_t max_word = std::size_t{1} << 24;
  /// Prefix length for the periodicity pre-pass.
  std::size_t periodicity_scan = 4096;
};

/// The system the decision actually runs on, with how it was obtained.
struct Preparation {
  System system;
  /// Power of σ used by the letter blow-up (1 if none).
  std::size_t coding_power = 1;
  bool blown_up = false;
  /// Non-growing blocks were recoded as letters.
  bool block_encoded = false;
  /// σ was replaced by σ^r so that every component is primitive or zero.
  std::size_t r = 1;
  bool growing = true;
};

/// Reachable letters, coding φ, then σ^r. Does not block-encode.
inline Preparation prepare_once(const System& input) {
  Preparation p;
  Normalization norm = normalize_to_coding(input);
  p.coding_power = norm.power;
  p.blown_up = norm.blown_up;
  p.system = std::move(norm.system);
  IncidenceStructure inc(p.system.sigma);
  p.r = block_decomposition(inc).r;
  if (p.r > 1) p.system.sigma = power(p.system.sigma, p.r);
  const auto grows = growing_letters(p.system.sigma);
  p.growing = std::find(grows.begin(), grows.end(), false) == grows.end();
  return p;
}

/// One step of the descriptor iteration, or an event between steps.
struct TraceStep {
  std::string event;  // "descriptor", "escalate", "exit", "repeat", "exhausted", "periodic"
  std::size_t index = 0;
  std::size_t power = 1;
  std::size_t length = 0;  // |u_n|
  std::size_t entries = 0;
  std::size_t returns = 0;
  std::string note;
};

/// Θ_{x,u_n} Π = Θ_{x,u_m} for a repetition (σ_{U_n}, ψ_{u_n}) = (σ_{U_m}, ψ_{u_m});
/// τ = Π^k is primitive and every τ-image starts with the letter 1.
struct RepetitionCertificate {
  std::size_t n = 0, m = 0;  // 1-based chain indices
  std::size_t power = 1;
  std::vector<std::size_t> lengths;  // |u_1|, ..., |u_m|
  std::string canonical;             // shared canonical form
  std::vector<Word> returns_n, returns_m;
  Morphism pi;
  std::size_t k = 1;
  Morphism tau;
};

/// A bound violation found while building the descriptor at chain index `index`.
struct ExitCertificate {
  std::size_t index = 0;
  std::vector<std::size_t> lengths;  // |u_1|, ..., |u_index|
  ExitWitness witness;
  BigInt K = 0;
  std::optional<BigInt> K1;
};

/// x = z^∞ test; `pumping` is set when the period length came from the
/// non-growing branch rather than from the prefix scan.
struct PeriodicCertificate {
  PeriodicCheck check;
  std::optional<PumpingWitness> pumping;
};

using Certificate = std::variant<std::monostate, RepetitionCertificate, ExitCertificate, PeriodicCertificate>;

struct Verdict {
  Outcome outcome = Outcome::Inconclusive;
  /// "repetition", "exit", "periodic", or "none".
  std::string kind = "none";
  std::string reason;
  Certificate certificate;
  Preparation prep;
  std::optional<ConstantSheet> constants;
  std::vector<TraceStep> trace;
  DecideOptions options;
};

namespace detail {

inline std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = hex[h & 15];
  return out;
}

inline TraceStep descriptor_step(const Descriptor& d, std::size_t index) {
  TraceStep t;
  t.event = "descriptor";
  t.index = index;
  t.power = d.power;
  t.length = d.v.size();
  t.entries = d.entries.size();
  t.returns = d.returns_x.size();
  t.note = fnv1a(d.canonical());
  return t;
}

}  // namespace detail

/// F with Θ_coarse F = Θ_fine: each return word to the longer prefix split
/// at the occurrences of the shorter one.
inline Morphism refinement(const Descriptor& coarse, const Descriptor& fine) {
  if (!is_prefix(coarse.v, fine.v)) throw Error(ErrorKind::InternalConsistency, "chain prefixes are not nested");
  std::map<Word, Letter> index;
  for (Letter i = 0; i < coarse.returns_x.size(); ++i) index.emplace(coarse.returns_x[i], i);
  std::vector<Word> imgs;
  for (const Word& r : fine.returns_x) {
    Word ctx = r;
    ctx.insert(ctx.end(), coarse.v.begin(), coarse.v.end());
    imgs.push_back(factorize_over_returns(ctx, r.size(), coarse.v, index));
  }
  return Morphism(coarse.returns_x.size(), std::move(imgs));
}

/// Π = F_n ∘ ... ∘ F_{m-1} over a chain of descriptors (0-based n < m).
inline Morphism connecting_morphism(const std::vector<Descriptor>& chain, std::size_t n, std::size_t m) {
  Morphism pi = refinement(chain.at(n), chain.at(n + 1));
  for (std::size_t j = n + 1; j < m; ++j) pi = compose(pi, refinement(chain.at(j), chain.at(j + 1)));
  return pi;
}

/// Least k ≤ d²−2d+2 with the incidence matrix of Π^k positive.
inline std::optional<std::size_t> primitive_power(const Morphism& pi) {
  if (!pi.is_endomorphism()) return std::nullopt;
  const std::size_t d = pi.source_size();
  const std::size_t bound = d <= 1 ? 1 : d * d - 2 * d + 2;
  const Matrix m = incidence_matrix(pi);
  Matrix mk = m;
  for (std::size_t k = 1; k <= bound; ++k) {
    if (mk.positive()) return k;
    mk = mk * m;
  }
  return std::nullopt;
}

/// Empty on success, otherwise what is wrong with (Π, k, τ) for the given
/// return tables: Θ_n Π = Θ_m letterwise, τ = Π^k positive, τ(i) starts with 1.
inline std::string check_connecting(const std::vector<Word>& returns_n, const std::vector<Word>& returns_m,
                                    const Morphism& pi, std::size_t k, const Morphism& tau) {
  if (returns_n.size() != returns_m.size() || pi.source_size() != returns_m.size() || pi.target_size() != returns_n.size())
    return "return tables and Π have different sizes";
  for (Letter i = 0; i < pi.source_size(); ++i)
    if (expand(returns_n, pi(i)) != returns_m[i]) return "Θ_n Π differs from Θ_m at letter " + std::to_string(i + 1);
  if (k == 0 || !(power(pi, k) == tau)) return "τ is not Π^k";
  if (!incidence_matrix(tau).positive()) return "τ has a zero incidence entry";
  for (Letter i = 0; i < tau.source_size(); ++i)
    if (tau(i).empty() || tau(i)[0] != 0) return "τ(" + std::to_string(i + 1) + ") does not start with 1";
  return {};
}

namespace detail {

inline void set_inconclusive(Verdict& v, std::string reason, bool suspected) {
  v.outcome = Outcome::Inconclusive;
  v.kind = "none";
  v.reason = suspected ? "PeriodicityUnresolved: " + reason : std::move(reason);
}

inline void set_periodic(Verdict& v, PeriodicCheck check, std::optional<PumpingWitness> pw) {
  v.outcome = check.passed() ? Outcome::UniformlyRecurrent : Outcome::NotUniformlyRecurrent;
  v.kind = "periodic";
  v.reason = check.passed() ? "x = z^inf with z = x[0," + std::to_string(check.p) + ")"
                            : "periodicity condition (" + std::to_string(check.failed_condition()) + ") fails";
  TraceStep t;
  t.event = "periodic";
  t.length = check.p;
  t.note = v.reason;
  v.trace.push_back(t);
  v.certificate = PeriodicCertificate{std::move(check), std::move(pw)};
}

/// Period length of x implied by a pumping word: the primitive root of φ(W).
inline std::size_t pumped_period(const System& s, const PumpingWitness& pw) {
  const Word img = s.phi.apply(pw.pumped);
  std::size_t q = smallest_period(img);
  if (img.size() % q != 0) q = img.size();
  return q;
}

}  // namespace detail

namespace detail {

/// Descriptor iteration on a growing σ_r with a coding φ. The power of σ_r
/// starts at 1 and is raised, restarting the chain, whenever the current one
/// is too small for the construction; the theory guarantees success once
/// ⟨σ_r^p⟩ ≥ (K+1)².
inline void growing_pipeline(Verdict& v) {
  const System& S = v.prep.system;
  const DecideOptions& opt = v.options;
  const PeriodicityScan scan = scan_periodicity(S, opt.periodicity_scan);
  if (scan.period) {
    PeriodicCheck check = periodic_check_length(S, *scan.period);
    if (check.passed()) {
      set_periodic(v, std::move(check), std::nullopt);
      return;
    }
  }
  v.constants = compute_constants(S.sigma, v.prep.r);
  ConstantSheet& sh = *v.constants;
  PrefixCache cache(S);
  const std::size_t max_power = std::max<std::size_t>(1, sh.power_target);
  for (std::size_t p = 1; p <= max_power; ++p) {
    const Morphism sp = power(S.sigma, p);
    set_power(sh, S.sigma, p);
    DescriptorLimits lim;
    lim.K = sh.K;
    lim.K1 = sh.K1;
    lim.max_entries = opt.max_entries;
    lim.max_word = opt.max_word;
    lim.scan_budget = opt.scan_budget;
    std::vector<Descriptor> chain;
    std::map<std::string, std::size_t> seen;
    std::vector<std::size_t> lengths;
    std::size_t len = 1;
    bool escalate = false;
    for (std::size_t idx = 1; !escalate; ++idx) {
      if (sh.cap && !sh.cap->exceeds(idx - 1)) {
        v.outcome = Outcome::NotUniformlyRecurrent;
        v.kind = "cap";
        v.reason = std::to_string(idx - 1) + " distinct descriptors reach the bound " + sh.cap->str();
        return;
      }
      if (idx > opt.practical_cap) {
        set_inconclusive(v, "practical cap of " + std::to_string(opt.practical_cap) + " descriptors reached", scan.suspected());
        return;
      }
      lengths.push_back(len);
      DescriptorResult res;
      try {
        res = build_descriptor(S, cache, sp, p, len, lim);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::BudgetExhausted) throw;
        res = Exhausted{e.what()};
      }
      if (auto* d = std::get_if<Descriptor>(&res)) {
        v.trace.push_back(descriptor_step(*d, idx));
        chain.push_back(*d);
        const std::string canon = d->canonical();
        auto [it, fresh] = seen.emplace(canon, idx);
        if (!fresh) {
          const std::size_t n = it->second;
          TraceStep t;
          t.event = "repeat";
          t.index = idx;
          t.power = p;
          t.note = "descriptor " + std::to_string(idx) + " equals descriptor " + std::to_string(n);
          v.trace.push_back(t);
          RepetitionCertificate c;
          c.n = n;
          c.m = idx;
          c.power = p;
          c.lengths = lengths;
          c.canonical = canon;
          c.returns_n = chain[n - 1].returns_x;
          c.returns_m = chain[idx - 1].returns_x;
          c.pi = connecting_morphism(chain, n - 1, idx - 1);
          auto k = primitive_power(c.pi);
          if (!k) {
            set_inconclusive(v, "repeated descriptor but the connecting morphism is not primitive", scan.suspected());
            return;
          }
          c.k = *k;
          c.tau = power(c.pi, c.k);
          if (std::string err = check_connecting(c.returns_n, c.returns_m, c.pi, c.k, c.tau); !err.empty()) {
            set_inconclusive(v, "repeated descriptor but " + err, scan.suspected());
            return;
          }
          v.outcome = Outcome::UniformlyRecurrent;
          v.kind = "repetition";
          v.reason = "descriptors " + std::to_string(n) + " and " + std::to_string(idx) + " coincide";
          v.certificate = std::move(c);
          return;
        }
        len = derived_step(*d).size();
      } else if (auto* e = std::get_if<ExitWitness>(&res)) {
        TraceStep t;
        t.event = "exit";
        t.index = idx;
        t.power = p;
        t.length = len;
        t.note = exit_name(e->kind);
        v.trace.push_back(t);
        v.outcome = Outcome::NotUniformlyRecurrent;
        v.kind = "exit";
        v.reason = e->detail;
        v.certificate = ExitCertificate{idx, lengths, *e, sh.K, sh.K1};
        return;
      } else if (auto* esc = std::get_if<Escalation>(&res)) {
        TraceStep t;
        t.event = "escalate";
        t.index = idx;
        t.power = p;
        t.length = len;
        t.note = esc->reason;
        v.trace.push_back(t);
        escalate = true;
      } else {
        TraceStep t;
        t.event = "exhausted";
        t.index = idx;
        t.power = p;
        t.length = len;
        t.note = std::get<Exhausted>(res).reason;
        v.trace.push_back(t);
        set_inconclusive(v, t.note, scan.suspected());
        return;
      }
    }
  }
  set_inconclusive(v, "no power up to " + std::to_string(max_power) + " completes the descriptor chain", scan.suspected());
}

}  // namespace detail

/// Full decision: normalization, the non-growing branch or the descriptor
/// iteration, with a certificate for every conclusive answer.
inline Verdict decide_uniform_recurrence(const System& input, const DecideOptions& opt = {}) {
  if (opt.practical_cap < 2) throw Error(ErrorKind::InvalidArgument, "practical cap must be at least 2");
  Verdict v;
  v.options = opt;
  v.prep = prepare_once(input);
  if (!v.prep.growing) {
    if (auto pw = pansiot_witness(v.prep.system.sigma)) {
      const std::size_t q = detail::pumped_period(v.prep.system, *pw);
      detail::set_periodic(v, periodic_check_length(v.prep.system, q), std::move(pw));
      return v;
    }
    Preparation enc = prepare_once(block_encode(v.prep.system));
    enc.block_encoded = true;
    if (!enc.growing) throw Error(ErrorKind::InternalConsistency, "block encoding left a non-growing letter");
    v.prep = std::move(enc);
    TraceStep t;
    t.event = "block_encode";
    t.note = std::to_string(v.prep.system.alphabet.size()) + " block letters";
    v.trace.push_back(t);
  }
  detail::growing_pipeline(v);
  return v;
}

/// The preparation decide_uniform_recurrence ends up using, recomputed.
inline Preparation prepare(const System& input) {
  Preparation p = prepare_once(input);
  if (p.growing || pansiot_witness(p.system.sigma)) return p;
  Preparation enc = prepare_once(block_encode(p.system));
  enc.block_encoded = true;
  return enc;
}

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> notes;

  void fail(std::string why) {
    ok = false;
    notes.push_back(std::move(why));
  }
};

namespace detail {

inline bool same(const PeriodicCheck& a, const PeriodicCheck& b) {
  return a.z == b.z && a.p == b.p && a.q == b.q && a.block_length == b.block_length && a.blocks_ok == b.blocks_ok &&
         a.chain_ok == b.chain_ok && a.prefix_ok == b.prefix_ok && a.bad_block == b.bad_block &&
         a.bad_pair == b.bad_pair && a.prefix_phase == b.prefix_phase;
}

inline bool same(const PumpingWitness& a, const PumpingWitness& b) {
  return a.b == b.b && a.right == b.right && a.power == b.power && a.u == b.u && a.tail_start == b.tail_start &&
         a.period == b.period && a.pumped == b.pumped;
}

inline bool same(const ExitWitness& a, const ExitWitness& b) {
  return a.kind == b.kind && a.v == b.v && a.word == b.word && a.position == b.position && a.length == b.length &&
         a.bound == b.bound && a.power == b.power;
}

/// Rebuilds u_1, ..., u_count at power p; the lengths must match `lengths`.
/// Returns the descriptors, or the result that interrupted the chain.
inline std::variant<std::vector<Descriptor>, DescriptorResult> rebuild_chain(const System& S, std::size_t p,
                                                                             const std::vector<std::size_t>& lengths,
                                                                             const DescriptorLimits& lim,
                                                                             VerifyReport& rep) {
  PrefixCache cache(S);
  const Morphism sp = power(S.sigma, p);
  std::vector<Descriptor> chain;
  std::size_t len = 1;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] != len) {
      rep.fail("chain length " + std::to_string(i + 1) + " is " + std::to_string(lengths[i]) + ", expected " + std::to_string(len));
      return chain;
    }
    DescriptorResult r = build_descriptor(S, cache, sp, p, len, lim);
    auto* d = std::get_if<Descriptor>(&r);
    if (!d) return r;
    len = derived_step(*d).size();
    chain.push_back(std::move(*d));
  }
  return chain;
}

inline DescriptorLimits budget_limits(const DecideOptions& o) {
  DescriptorLimits lim;
  lim.max_entries = o.max_entries;
  lim.max_word = o.max_word;
  lim.scan_budget = o.scan_budget;
  return lim;
}

inline void verify_repetition(const Preparation& prep, const Verdict& v, const RepetitionCertificate& c, VerifyReport& rep) {
  if (v.outcome != Outcome::UniformlyRecurrent) rep.fail("a repetition certifies uniform recurrence only");
  if (!(c.n >= 1 && c.n < c.m)) return rep.fail("indices must satisfy 1 <= n < m");
  if (c.lengths.size() != c.m) return rep.fail("expected " + std::to_string(c.m) + " chain lengths");
  if (c.power == 0) return rep.fail("power must be positive");
  auto rebuilt = rebuild_chain(prep.system, c.power, c.lengths, budget_limits(v.options), rep);
  if (!rep.ok) return;
  auto* chain = std::get_if<std::vector<Descriptor>>(&rebuilt);
  if (!chain) return rep.fail("descriptor chain does not complete at the certified power");
  const Descriptor& dn = (*chain)[c.n - 1];
  const Descriptor& dm = (*chain)[c.m - 1];
  if (dn.canonical() != c.canonical) rep.fail("descriptor " + std::to_string(c.n) + " differs: " + dn.canonical());
  if (dm.canonical() != c.canonical) rep.fail("descriptor " + std::to_string(c.m) + " differs: " + dm.canonical());
  if (dn.returns_x != c.returns_n) rep.fail("return table at n differs");
  if (dm.returns_x != c.returns_m) rep.fail("return table at m differs");
  for (const Descriptor* d : {&dn, &dm})
    if (std::string err = check_induced_equation(prep.system, power(prep.system.sigma, c.power), *d); !err.empty())
      rep.fail("induced equation: " + err);
  if (!(connecting_morphism(*chain, c.n - 1, c.m - 1) == c.pi)) rep.fail("Π differs from the recomputed refinement");
  if (std::string err = check_connecting(c.returns_n, c.returns_m, c.pi, c.k, c.tau); !err.empty()) rep.fail(err);
}

inline void verify_exit(const Preparation& prep, const Verdict& v, const ExitCertificate& c, VerifyReport& rep) {
  if (v.outcome != Outcome::NotUniformlyRecurrent) rep.fail("an exit witness certifies non-recurrence only");
  if (c.index == 0 || c.lengths.size() != c.index) return rep.fail("expected " + std::to_string(c.index) + " chain lengths");
  const ConstantSheet sh = compute_constants(prep.system.sigma, prep.r);
  if (sh.K != c.K) rep.fail("K is " + to_string(sh.K) + ", certificate says " + to_string(c.K));
  if (sh.K1 != c.K1) rep.fail("K1 differs from the recomputed value");
  if (!rep.ok) return;
  DescriptorLimits lim = budget_limits(v.options);
  lim.K = sh.K;
  lim.K1 = sh.K1;
  const ExitWitness& w = c.witness;
  std::vector<std::size_t> before(c.lengths.begin(), c.lengths.end() - 1);
  auto rebuilt = rebuild_chain(prep.system, w.power, before, lim, rep);
  if (!rep.ok) return;
  auto* chain = std::get_if<std::vector<Descriptor>>(&rebuilt);
  if (!chain) return rep.fail("chain stops before the certified index");
  const std::size_t len = chain->empty() ? 1 : derived_step(chain->back()).size();
  if (len != c.lengths.back()) return rep.fail("prefix length at the exit differs");
  PrefixCache cache(prep.system);
  DescriptorResult r = build_descriptor(prep.system, cache, power(prep.system.sigma, w.power), w.power, len, lim);
  auto* again = std::get_if<ExitWitness>(&r);
  if (!again || !same(*again, w)) return rep.fail("rebuilding the descriptor does not reproduce the exit");
  const BigInt Kv = c.K * BigInt(w.v.size());
  const Word& x = cache.outer(std::max(w.position, w.v.size()));
  if (!std::equal(w.v.begin(), w.v.end(), x.begin())) rep.fail("v is not a prefix of x");
  switch (w.kind) {
    case ExitKind::NoSecondOccurrence: {
      if (BigInt(w.position) < Kv + BigInt(w.v.size())) rep.fail("scanned window shorter than (K+1)|v|");
      const Word xs(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(w.position));
      if (occurrences(xs, w.v).size() != 1) rep.fail("v occurs again inside the scanned window");
      break;
    }
    case ExitKind::LongReturn: {
      if (BigInt(w.word.size()) <= Kv) rep.fail("return word is not longer than K|v|");
      Word ctx = prep.system.phi.apply(w.word);
      ctx.insert(ctx.end(), w.v.begin(), w.v.end());
      auto occ = occurrences(ctx, w.v);
      if (occ.size() != 2 || occ[0] != 0 || occ[1] != w.word.size()) rep.fail("word is not a return word to v");
      break;
    }
    case ExitKind::WindowViolation: {
      const Word img = prep.system.phi.apply(power(prep.system.sigma, w.power).apply(w.word));
      if (BigInt(img.size()) + 1 < Kv + BigInt(w.v.size())) rep.fail("image shorter than (K+1)|v|-1");
      auto occ = occurrences(img, w.v);
      if (!occ.empty() && BigInt(occ.front()) < Kv) rep.fail("image has an occurrence of v before K|v|");
      break;
    }
    case ExitKind::TooManyEntries:
      if (!c.K1 || BigInt(w.length) <= *c.K1) rep.fail("entry count does not exceed K1");
      break;
    case ExitKind::ClosureViolation:
      rep.fail("closure violations are internal errors, not certificates");
      break;
  }
}

inline void verify_periodic(const Preparation& prep, const Verdict& v, const PeriodicCertificate& c, VerifyReport& rep) {
  const PeriodicCheck again = periodic_check_length(prep.system, c.check.p);
  if (!same(again, c.check)) rep.fail("periodicity checklist differs when recomputed");
  const Outcome expect = again.passed() ? Outcome::UniformlyRecurrent : Outcome::NotUniformlyRecurrent;
  if (v.outcome != expect) rep.fail("outcome does not follow from the checklist");
  if (c.pumping) {
    auto pw = pansiot_witness(prep.system.sigma);
    if (!pw || !same(*pw, *c.pumping)) rep.fail("pumping witness differs when recomputed");
    else if (pumped_period(prep.system, *pw) != c.check.p) rep.fail("period length is not the root of the pumped word");
  } else if (!again.passed()) {
    rep.fail("a failed checklist without a pumping word does not refute recurrence");
  }
}

}  // namespace detail

/// Re-derives the verdict's evidence from the input system alone.
inline VerifyReport verify_certificate(const System& input, const Verdict& v) {
  VerifyReport rep;
  Preparation prep;
  try {
    prep = prepare(input);
  } catch (const Error& e) {
    rep.fail(std::string("preparation failed: ") + e.what());
    return rep;
  }
  if (to_text(prep.system) != to_text(v.prep.system) || prep.r != v.prep.r || prep.block_encoded != v.prep.block_encoded ||
      prep.blown_up != v.prep.blown_up || prep.coding_power != v.prep.coding_power) {
    rep.fail("prepared system differs from the recomputed one");
    return rep;
  }
  try {
    if (auto* c = std::get_if<RepetitionCertificate>(&v.certificate)) {
      if (v.kind != "repetition") rep.fail("kind does not match the certificate");
      detail::verify_repetition(prep, v, *c, rep);
    } else if (auto* c = std::get_if<ExitCertificate>(&v.certificate)) {
      if (v.kind != "exit") rep.fail("kind does not match the certificate");
      detail::verify_exit(prep, v, *c, rep);
    } else if (auto* c = std::get_if<PeriodicCertificate>(&v.certificate)) {
      if (v.kind != "periodic") rep.fail("kind does not match the certificate");
      detail::verify_periodic(prep, v, *c, rep);
    } else if (v.outcome == Outcome::Inconclusive) {
      rep.notes.push_back("inconclusive verdicts carry no certificate");
    } else {
      // the theoretical cap: only a full re-run can confirm it
      Verdict again = decide_uniform_recurrence(input, v.options);
      if (again.outcome != v.outcome || again.kind != v.kind) rep.fail("re-running the decision gives a different outcome");
    }
  } catch (const Error& e) {
    rep.fail(std::string("verification error: ") + e.what());
  }
  if (rep.ok) rep.notes.push_back("certificate verified");
  return rep;
}

/// Descriptor for the prefix of length n without the early exits, at the
/// least power p ≤ max_power where the construction completes.
inline std::variant<Descriptor, std::string> descriptor_at(const Preparation& prep, std::size_t n, const DecideOptions& opt,
                                                            std::size_t max_power = 8) {
  if (!prep.growing) return std::string("descriptors need a growing system");
  PrefixCache cache(prep.system);
  const DescriptorLimits lim = detail::budget_limits(opt);
  std::string last;
  for (std::size_t p = 1; p <= max_power; ++p) {
    DescriptorResult r = build_descriptor(prep.system, cache, power(prep.system.sigma, p), p, n, lim);
    if (auto* d = std::get_if<Descriptor>(&r)) return std::move(*d);
    if (auto* e = std::get_if<Escalation>(&r)) last = e->reason;
    else if (auto* x = std::get_if<Exhausted>(&r)) return x->reason;
    else return std::string("unexpected exit");
  }
  return "no power up to " + std::to_string(max_power) + " works: " + last;
}

/// u_1, u_2, ... with their descriptors, at the least power that carries the
/// whole chain. Stops early (with `stopped` set) when no power does.
struct DerivedChain {
  std::vector<Descriptor> chain;
  std::size_t power = 1;
  std::string stopped;
};

inline DerivedChain derive_chain(const Preparation& prep, std::size_t depth, const DecideOptions& opt,
                                 std::size_t max_power = 8) {
  DerivedChain out;
  if (!prep.growing) {
    out.stopped = "descriptors need a growing system";
    return out;
  }
  const DescriptorLimits lim = detail::budget_limits(opt);
  for (std::size_t p = 1; p <= max_power; ++p) {
    PrefixCache cache(prep.system);
    const Morphism sp = power(prep.system.sigma, p);
    std::vector<Descriptor> chain;
    std::size_t len = 1;
    std::string why;
    while (chain.size() < depth) {
      DescriptorResult r = build_descriptor(prep.system, cache, sp, p, len, lim);
      auto* d = std::get_if<Descriptor>(&r);
      if (!d) {
        why = std::holds_alternative<Escalation>(r) ? std::get<Escalation>(r).reason
              : std::holds_alternative<Exhausted>(r) ? std::get<Exhausted>(r).reason
                                                     : "unexpected exit";
        break;
      }
      len = derived_step(*d).size();
      chain.push_back(std::move(*d));
    }
    if (chain.size() == depth || p == max_power) {
      out.chain = std::move(chain);
      out.power = p;
      if (out.chain.size() < depth) out.stopped = why;
      return out;
    }
  }
  return out;
}

}  // namespace morphic
