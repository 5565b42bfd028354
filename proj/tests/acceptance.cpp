// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "support.hpp"
#include "tamper.hpp"

#include "morphic/report.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace morphic;
namespace ts = testing_support;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// Collects failures of one criterion; the first few are printed.
struct Check {
  std::vector<std::string> failures;
  std::vector<std::string> facts;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& s) { facts.push_back(s); }
};

struct Decided {
  std::string name;
  System input;
  Verdict verdict;
  double secs = 0;
};

/// Every corpus system decided once, shared by several criteria.
const std::vector<Decided>& corpus_verdicts() {
  static const std::vector<Decided> all = [] {
    std::vector<Decided> out;
    for (const char* sub : {"primitive", "other"})
      for (const auto& path : ts::corpus(sub)) {
        Decided d;
        d.name = std::string(sub) + "/" + path.filename().string();
        d.input = load_system(path.string());
        const auto t0 = Clock::now();
        d.verdict = decide_uniform_recurrence(d.input);
        d.secs = seconds_since(t0);
        out.push_back(std::move(d));
      }
    return out;
  }();
  return all;
}

template <class T>
std::string str(const T& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

// 1. The 001/1 system is refuted, and a direct scan shows its gaps growing.
static void criterion_nonur(Check& c) {
  const System s = ts::chacon_nonur();
  const auto t0 = Clock::now();
  const Verdict v = decide_uniform_recurrence(s);
  const VerifyReport rep = verify_certificate(s, v);
  const double secs = seconds_since(t0);
  c.expect(v.outcome == Outcome::NotUniformlyRecurrent, "verdict is " + std::string(outcome_name(v.outcome)));
  c.expect(rep.ok, "certificate does not verify");
  c.expect(secs < 5.0, "took " + str(secs) + "s");

  // gaps of "0" at increasing prefix lengths; each scan must beat the previous gap
  std::size_t previous = 0;
  for (std::size_t n : {100u, 1000u, 10000u}) {
    const auto r = oracle::window_ur_check(s, 1, n, BigInt(previous));
    const oracle::FactorGap* zero = nullptr;
    for (const auto& g : r.factors)
      if (g.u == Word{0}) zero = &g;
    c.expect(zero != nullptr, "no occurrence of 0 in " + str(n) + " letters");
    if (!zero) return;
    if (previous) c.expect(r.conclusive, "no violation of the bound " + str(previous) + " in " + str(n) + " letters");
    c.expect(zero->max_gap > previous, "gap of 0 did not grow at " + str(n));
    previous = zero->max_gap;
  }
  c.note("gap of 0 within 10^4 letters: " + str(previous) + ", " + str(secs) + "s");
}

// 2. Primitive systems get a verified repetition certificate.
static void criterion_primitive(Check& c) {
  std::size_t good = 0, total = 0;
  double worst = 0;
  for (const Decided& d : corpus_verdicts()) {
    if (d.name.rfind("primitive/", 0) != 0) continue;
    ++total;
    const auto t0 = Clock::now();
    const VerifyReport rep = verify_certificate(d.input, d.verdict);
    const double secs = d.secs + seconds_since(t0);
    worst = std::max(worst, secs);
    const auto* cert = std::get_if<RepetitionCertificate>(&d.verdict.certificate);
    const bool ok = d.verdict.outcome == Outcome::UniformlyRecurrent && cert && cert->n < cert->m && cert->m <= 64 &&
                    rep.ok && secs < 60.0;
    c.expect(ok, d.name + ": " + d.verdict.reason);
    good += ok;
  }
  c.expect(good >= 15, "only " + str(good) + " primitive systems certified");
  c.note(str(good) + "/" + str(total) + " certified, slowest " + str(worst) + "s");
}

// 3. The non-growing branch on a b^omega with two codings.
static void criterion_nongrowing(Check& c) {
  struct Case {
    const char* file;
    Outcome expected;
  };
  for (const Case& k : {Case{"other/ab_b_constant.txt", Outcome::UniformlyRecurrent},
                        Case{"other/ab_b_identity.txt", Outcome::NotUniformlyRecurrent}}) {
    const System s = ts::load(k.file);
    const auto t0 = Clock::now();
    const Verdict v = decide_uniform_recurrence(s);
    const bool verified = verify_certificate(s, v).ok;
    const double secs = seconds_since(t0);
    c.expect(v.outcome == k.expected, std::string(k.file) + ": " + outcome_name(v.outcome));
    c.expect(v.kind == "periodic", std::string(k.file) + ": certificate kind " + v.kind);
    c.expect(verified, std::string(k.file) + ": certificate does not verify");
    c.expect(secs < 5.0, std::string(k.file) + ": took " + str(secs) + "s");
  }
}

// 4. Defining equations and reconstruction identities on every descriptor.
static void criterion_identities(Check& c) {
  std::size_t descriptors = 0, substitutions = 0;
  for (const Decided& d : corpus_verdicts()) {
    const Preparation& prep = d.verdict.prep;
    if (!prep.growing) continue;
    const System& S = prep.system;
    const auto* rc = std::get_if<RepetitionCertificate>(&d.verdict.certificate);
    const DerivedChain ch = derive_chain(prep, rc ? rc->m : 4, d.verdict.options);
    const bool pure = !S.has_phi && is_primitive(S.sigma);
    PrefixCache cache(S);
    for (const Descriptor& ds : ch.chain) {
      ++descriptors;
      const std::string at = d.name + " |u|=" + str(ds.u.size()) + ": ";
      const std::string eq = check_induced_equation(S, power(S.sigma, ds.power), ds);
      c.expect(eq.empty(), at + eq);

      const Word rebuilt = delta_reconstruct(ds, 1000);
      const Word& y = cache.inner(rebuilt.size());
      c.expect(std::equal(rebuilt.begin(), rebuilt.end(), y.begin()), at + "delta reconstruction is not a prefix of y");

      const std::size_t len = std::max<std::size_t>(1000, 40 * ds.u.size());
      const auto scanned = induced_sequence_by_scan(ds, cache, len);
      c.expect(scanned.has_value(), at + "scan meets a pair outside the table");
      if (scanned) {
        c.expect(!scanned->empty(), at + "no complete return in the scanned prefix");
        c.expect(*scanned == fixed_point_prefix(ds.sigma_U, 0, scanned->size()),
                 at + "scanned induced sequence differs from the fixed point of sigma_U");
      }

      if (pure) {
        try {
          const ReturnSubstitution r = return_substitution(S.sigma, S.start, ds.u);
          ++substitutions;
          bool ok = r.returns == ds.returns_x;
          for (Letter i = 0; ok && i < r.returns.size(); ++i) ok = expand(r.returns, r.sigma_u(i)) == S.sigma.apply(r.returns[i]);
          c.expect(ok, at + "return substitution equation fails");
        } catch (const Error& e) {
          c.expect(false, at + e.what());
        }
      }
    }
  }
  c.expect(descriptors > 0, "no descriptors checked");
  c.note(str(descriptors) + " descriptors, " + str(substitutions) + " return substitutions");
}

// 5. Descriptor return tables against the brute-force scan, |u| <= 8.
static void criterion_oracle(Check& c) {
  std::size_t compared = 0, systems = 0;
  const std::size_t scan = 100000;
  for (const Decided& d : corpus_verdicts()) {
    const Preparation& prep = d.verdict.prep;
    if (!prep.growing) continue;
    ++systems;
    for (std::size_t n = 1; n <= 8; ++n) {
      const auto r = descriptor_at(prep, n, d.verdict.options);
      const Word v = outer_prefix(d.input, n);
      std::optional<std::vector<Word>> brute;
      try {
        brute = oracle::brute_force_return_words(d.input, v, scan);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotEnoughOccurrences) throw;
      }
      const auto* ds = std::get_if<Descriptor>(&r);
      const std::string at = d.name + " |u|=" + str(n) + ": ";
      if (!ds || !brute) {
        // x[0, n) recurring at most once in 10^5 letters must also defeat the construction
        c.expect(!ds && !brute, at + (ds ? "descriptor built but the scan sees one occurrence" : "no descriptor"));
        continue;
      }
      ++compared;
      std::vector<Word> mine;
      for (const Word& w : ds->returns_x) mine.push_back(w);
      c.expect(mine == *brute, at + str(mine.size()) + " returns vs " + str(brute->size()) + " by scanning");
    }
  }
  c.note(str(compared) + " prefixes over " + str(systems) + " systems");
}

// 6. The quantitative bounds on every system certified by repetition.
static void criterion_bounds(Check& c) {
  std::size_t systems = 0, factors = 0;
  for (const Decided& d : corpus_verdicts()) {
    const auto* rc = std::get_if<RepetitionCertificate>(&d.verdict.certificate);
    if (!rc || !d.verdict.constants) continue;
    ++systems;
    const ConstantSheet& sh = *d.verdict.constants;
    const System& S = d.verdict.prep.system;
    const BigInt K = sh.K;

    // return words to every factor u of x with |u| <= 12
    const Word x = outer_prefix(S, 100000);
    for (std::size_t n = 1; n <= 12; ++n) {
      std::map<Word, std::size_t> last;
      std::map<Word, std::set<Word>> returns;
      for (std::size_t i = 0; i + n <= x.size(); ++i) {
        Word u(x.begin() + i, x.begin() + i + n);
        auto it = last.find(u);
        if (it != last.end()) returns[u].emplace(x.begin() + it->second, x.begin() + i);
        last[u] = i;
      }
      for (const auto& [u, rs] : returns) {
        ++factors;
        c.expect(BigInt(rs.size()) <= 4 * K * K * K, d.name + ": too many return words to a factor of length " + str(n));
        for (const Word& r : rs)
          c.expect(BigInt(r.size()) * K >= BigInt(n) && BigInt(r.size()) <= K * BigInt(n),
                   d.name + ": return word of length " + str(r.size()) + " to a factor of length " + str(n));
      }
    }

    // p_x(n) <= (K+1) n
    for (std::size_t n = 1; n <= 20; ++n) {
      const std::size_t p = complexity(S, n, Which::Outer);
      c.expect(BigInt(p) <= (K + 1) * BigInt(n), d.name + ": p_x(" + str(n) + ") = " + str(p));
    }

    // entries <= K1 and |sigma_U(i)| <= K2 along the certified chain
    const DerivedChain ch = derive_chain(d.verdict.prep, rc->m, d.verdict.options);
    ConstantSheet at = sh;
    for (const Descriptor& ds : ch.chain) {
      set_power(at, S.sigma, ds.power);
      if (at.K1) c.expect(BigInt(ds.entries.size()) <= *at.K1, d.name + ": entries exceed K1");
      for (Letter i = 0; i < ds.sigma_U.source_size(); ++i)
        c.expect(BigInt(ds.sigma_U(i).size()) <= at.K2, d.name + ": |sigma_U(" + str(i + 1) + ")| exceeds K2");
    }

    // preimage counts of factors of x
    if (sh.preimage_bound)
      for (std::size_t n = 1; n <= 10; ++n) {
        std::map<Word, std::size_t> count;
        for (const Word& w : language(S, n, Which::Inner)) ++count[S.phi.apply(w)];
        for (const auto& [u, k] : count)
          c.expect(BigInt(k) <= *sh.preimage_bound, d.name + ": " + str(k) + " preimages of a factor of length " + str(n));
      }
  }

  // R_tau <= 2|tau^{2d^2}| on two-letter primitive substitutions
  std::size_t two_letter = 0;
  for (const Decided& d : corpus_verdicts()) {
    const System& S = d.input;
    if (S.alphabet.size() != 2 || !is_primitive(S.sigma) || !is_prolongable(S.sigma, S.start)) continue;
    ++two_letter;
    const std::size_t R = compute_R(S.sigma);
    const Matrix m = incidence_matrix(S.sigma).pow(8);
    const BigInt bound = 2 * std::max(m.column_sum(0), m.column_sum(1));
    c.expect(BigInt(R) <= bound, d.name + ": R = " + str(R) + " exceeds " + to_string(bound));
  }
  c.expect(systems > 0, "no certified systems");
  c.note(str(systems) + " systems, " + str(factors) + " factors, " + str(two_letter) + " two-letter R checks");
}

namespace {

Morphism random_morphism(std::mt19937& rng, std::size_t n, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<Letter> letter(0, static_cast<Letter>(n - 1));
  std::vector<Word> imgs(n);
  for (auto& w : imgs) {
    w.resize(len(rng));
    for (auto& a : w) a = letter(rng);
  }
  return Morphism(n, std::move(imgs));
}

Rational rpow(const Rational& q, std::size_t k) {
  Rational r = 1;
  for (std::size_t i = 0; i < k; ++i) r *= q;
  return r;
}

}  // namespace

// 7. Growth analysis against plain iteration on random endomorphisms.
static void criterion_growth(Check& c) {
  std::mt19937 rng(20240917);
  std::size_t horn = 0, pq = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 3);
    const Morphism s = random_morphism(rng, n, 3);
    const std::string at = "morphism " + str(t) + ": ";
    const Matrix m = incidence_matrix(s);
    const auto types = growth_types(s);
    const auto grows = growing_letters(s);

    // lengths |s^k(b)| by iterating images (no matrices) up to k = 64
    std::vector<std::vector<BigInt>> L(n, std::vector<BigInt>(65));
    for (Letter b = 0; b < n; ++b) L[b][0] = 1;
    for (std::size_t k = 1; k <= 64; ++k)
      for (Letter b = 0; b < n; ++b) {
        BigInt total = 0;
        for (Letter a : s(b)) total += L[a][k - 1];
        L[b][k] = total;
      }
    for (Letter b = 0; b < n; ++b) {
      c.expect(grows[b] == types[b].growing(), at + "growing flag disagrees with the growth type");
      c.expect(grows[b] == (L[b][64] > L[b][32]), at + "growing flag disagrees with iteration");
      if (!grows[b]) continue;
      const double est = (std::log(static_cast<double>(L[b][60])) - std::log(static_cast<double>(L[b][36]))) / 24.0 -
                         static_cast<double>(types[b].d) * std::log(60.0 / 36.0) / 24.0;
      const double theta = types[b].theta.refined_to(Rational(1, 1000000)).approx();
      c.expect(std::abs(est - std::log(theta)) < 0.02, at + "growth rate " + str(theta) + " vs observed " + str(std::exp(est)));
    }

    if (is_primitive(m)) {
      ++horn;
      const std::size_t k = horn_exponent(m);
      c.expect(k <= n * n - 2 * n + 2, at + "horn exponent above the bound");
      c.expect(m.pow(k).positive() && (k == 1 || !m.pow(k - 1).positive()), at + "horn exponent not minimal");
    }

    PQConstants q;
    try {
      q = pq_constants(s);
    } catch (const Error& e) {
      c.expect(e.kind() == ErrorKind::PreconditionViolated, at + e.what());
      continue;
    }
    ++pq;
    for (std::size_t k = 0; k <= 30; ++k) {
      BigInt hi = 0, lo = L[0][k];
      for (Letter b = 0; b < n; ++b) hi = std::max(hi, L[b][k]), lo = std::min(lo, L[b][k]);
      c.expect(Rational(hi) <= q.P * rpow(q.alpha.hi(), k), at + "|s^k| > P alpha^k at k=" + str(k));
      c.expect(rpow(q.alpha.lo(), k) <= q.P * Rational(lo), at + "<s^k> < alpha^k / P at k=" + str(k));
      c.expect(Rational(hi) <= q.Q * Rational(lo), at + "|s^k| > Q <s^k> at k=" + str(k));
    }
  }
  c.expect(horn >= 10, "only " + str(horn) + " primitive samples");
  c.expect(pq >= 10, "only " + str(pq) + " samples with a common growth type");
  c.note("50 morphisms, " + str(horn) + " primitive, " + str(pq) + " with P and Q");
}

// 8. Determinism, verification of every certificate, and tamper detection.
static void criterion_certificates(Check& c) {
  std::size_t verified = 0;
  std::map<std::string, std::size_t> caught, tried;
  for (const Decided& d : corpus_verdicts()) {
    const std::string first = to_json(d.verdict).dump();
    const std::string second = to_json(decide_uniform_recurrence(d.input)).dump();
    c.expect(first == second, d.name + ": JSON differs between runs");
    c.expect(d.verdict.outcome != Outcome::Inconclusive, d.name + ": inconclusive (" + d.verdict.reason + ")");
    const VerifyReport rep = verify_certificate(d.input, d.verdict);
    c.expect(rep.ok, d.name + ": certificate does not verify");
    verified += rep.ok;
    for (const auto& t : ts::tamperings()) {
      auto bad = t.apply(d.verdict);
      if (!bad) continue;
      ++tried[t.name];
      const bool rejected = !verify_certificate(d.input, *bad).ok;
      caught[t.name] += rejected;
      c.expect(rejected, d.name + ": tampering '" + t.name + "' accepted");
    }
  }
  std::size_t kinds = 0;
  for (const auto& t : ts::tamperings()) {
    c.expect(tried[t.name] > 0, "tampering '" + t.name + "' never applicable");
    kinds += tried[t.name] > 0 && caught[t.name] == tried[t.name];
  }
  c.expect(kinds >= 10, "only " + str(kinds) + " tampering kinds rejected");
  std::size_t attempts = 0;
  for (const auto& [k, v] : tried) attempts += v;
  c.note(str(verified) + "/" + str(corpus_verdicts().size()) + " verified, " + str(attempts) + " tampered copies over " +
         str(kinds) + " kinds rejected");
}

int main() {
  struct Criterion {
    const char* title;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> all{
      {"001/1 refuted with a growing-gap scan", criterion_nonur},
      {"primitive corpus certified by repetition", criterion_primitive},
      {"non-growing branch on a b^omega", criterion_nongrowing},
      {"descriptor identities", criterion_identities},
      {"return tables match the brute-force oracle", criterion_oracle},
      {"recurrence bounds", criterion_bounds},
      {"growth analysis on random morphisms", criterion_growth},
      {"determinism, verification, tampering", criterion_certificates},
  };
  bool all_ok = true;
  for (std::size_t i = 0; i < all.size(); ++i) {
    Check c;
    const auto t0 = Clock::now();
    try {
      all[i].run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const bool ok = c.failures.empty();
    all_ok = all_ok && ok;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << all[i].title;
    for (const auto& f : c.facts) std::cout << " [" << f << "]";
    std::cout << " (" << std::fixed << std::setprecision(1) << seconds_since(t0) << "s)\n";
    for (std::size_t k = 0; k < c.failures.size() && k < 8; ++k) std::cout << "    " << c.failures[k] << '\n';
    if (c.failures.size() > 8) std::cout << "    ... " << c.failures.size() - 8 << " more\n";
    std::cout.unsetf(std::ios::fixed);
  }
  return all_ok ? 0 : 1;
}
