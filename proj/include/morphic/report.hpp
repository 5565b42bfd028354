#pragma once

// JSON and text renderings of verdicts, constant sheets and descriptors.

#include "morphic/decider.hpp"
#include "morphic/growth.hpp"

#include <json.hpp>

#include <sstream>
#include <string>

namespace morphic {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json index_word(const Word& w) {
  Json a = Json::array();
  for (Letter c : w) a.push_back(c + 1);
  return a;
}

inline Json index_morphism(const Morphism& f) {
  Json a = Json::array();
  for (const Word& w : f.images()) a.push_back(index_word(w));
  return a;
}

inline Json words(const Alphabet& alpha, const std::vector<Word>& ws) {
  Json a = Json::array();
  for (const Word& w : ws) a.push_back(alpha.render(w));
  return a;
}

inline Json optional_big(const std::optional<BigInt>& v) { return v ? Json(to_string(*v)) : Json(nullptr); }
inline Json optional_rat(const std::optional<Rational>& v) { return v ? Json(to_string(*v)) : Json(nullptr); }

}  // namespace detail

inline Json to_json(const ConstantSheet& sh, const Alphabet& alpha) {
  Json subs = Json::array();
  for (const SubMorphism& sm : sh.subs) {
    std::vector<std::string> letters;
    for (Letter a : sm.letters) letters.push_back(alpha.token(a));
    subs.push_back(Json{{"letters", letters},
                        {"c", sm.c},
                        {"R", sm.R},
                        {"R_bound", to_string(sm.R_bound)},
                        {"Q", to_string(sm.Q)},
                        {"tau_c_length", sm.tau_c_length},
                        {"K", to_string(sm.K)}});
  }
  Json j{{"r", sh.r},
         {"sigma_max", sh.sigma_max},
         {"sigma_min", sh.sigma_min},
         {"P", detail::optional_rat(sh.P)},
         {"Q", detail::optional_rat(sh.Q)},
         {"submorphisms", subs},
         {"best_submorphism", sh.best_sub + 1},
         {"K", to_string(sh.K)},
         {"p_K1", sh.p_K1 ? Json(*sh.p_K1) : Json(nullptr)},
         {"K1", detail::optional_big(sh.K1)},
         {"preimage_bound", detail::optional_big(sh.preimage_bound)},
         {"power", sh.power},
         {"power_max_length", to_string(sh.power_max_length)},
         {"K2", to_string(sh.K2)},
         {"power_target", sh.power_target},
         {"cap", sh.cap ? Json(sh.cap->str()) : Json(nullptr)}};
  if (!sh.pq_note.empty()) j["note"] = sh.pq_note;
  return j;
}

inline Json to_json(const Descriptor& d, const System& s) {
  Json entries = Json::array();
  for (const auto& [w, up] : d.entries) entries.push_back(Json::array({s.alphabet.render(w), s.alphabet.render(up)}));
  return Json{{"length", d.v.size()},
              {"u", s.alphabet.render(d.u)},
              {"v", s.target.render(d.v)},
              {"power", d.power},
              {"entries", entries},
              {"sigma_U", detail::index_morphism(d.sigma_U)},
              {"returns", detail::words(s.target, d.returns_x)},
              {"psi", detail::index_morphism(d.psi)},
              {"canonical", d.canonical()}};
}

inline Json to_json(const PeriodicCheck& c, const System& s) {
  Json j{{"p", c.p},
         {"z", s.target.render(c.z)},
         {"root_length", c.q},
         {"block_length", c.block_length},
         {"condition_1", c.blocks_ok},
         {"condition_2", c.chain_ok},
         {"condition_3", c.prefix_ok},
         {"prefix_phase", c.prefix_phase}};
  if (!c.w.empty()) {
    j["w"] = s.alphabet.render(c.w);
    j["phi_w"] = s.target.render(c.phi_w);
  }
  if (!c.blocks_ok) j["bad_block"] = s.alphabet.render(c.bad_block);
  if (!c.chain_ok) j["bad_pair"] = s.alphabet.render(c.bad_pair);
  return j;
}

inline Json to_json(const Verdict& v) {
  const System& S = v.prep.system;
  Json cert;
  if (auto* c = std::get_if<RepetitionCertificate>(&v.certificate)) {
    cert = Json{{"type", "repetition"},
                {"n", c->n},
                {"m", c->m},
                {"power", c->power},
                {"lengths", c->lengths},
                {"descriptor", c->canonical},
                {"returns_n", detail::words(S.target, c->returns_n)},
                {"returns_m", detail::words(S.target, c->returns_m)},
                {"pi", detail::index_morphism(c->pi)},
                {"k", c->k},
                {"tau", detail::index_morphism(c->tau)}};
  } else if (auto* c = std::get_if<ExitCertificate>(&v.certificate)) {
    const ExitWitness& w = c->witness;
    cert = Json{{"type", "exit"},
                {"exit", exit_name(w.kind)},
                {"index", c->index},
                {"lengths", c->lengths},
                {"power", w.power},
                {"v", S.target.render(w.v)},
                {"word", S.alphabet.render(w.word)},
                {"position", w.position},
                {"length", w.length},
                {"bound", to_string(w.bound)},
                {"K", to_string(c->K)},
                {"K1", detail::optional_big(c->K1)},
                {"detail", w.detail}};
  } else if (auto* c = std::get_if<PeriodicCertificate>(&v.certificate)) {
    cert = Json{{"type", "periodic"}, {"checklist", to_json(c->check, S)}};
    if (c->pumping) {
      const PumpingWitness& pw = *c->pumping;
      cert["pumping"] = Json{{"letter", S.alphabet.token(pw.b)},
                             {"side", pw.right ? "right" : "left"},
                             {"power", pw.power},
                             {"u", S.alphabet.render(pw.u)},
                             {"tail_start", pw.tail_start},
                             {"period", pw.period},
                             {"pumped", S.alphabet.render(pw.pumped)}};
    }
  } else {
    cert = nullptr;
  }
  Json trace = Json::array();
  for (const TraceStep& t : v.trace) {
    Json s{{"event", t.event}, {"index", t.index}, {"power", t.power}, {"length", t.length}};
    if (t.event == "descriptor") {
      s["entries"] = t.entries;
      s["returns"] = t.returns;
    }
    s["note"] = t.note;
    trace.push_back(s);
  }
  return Json{{"format", 1},
              {"system", S.name},
              {"verdict", outcome_name(v.outcome)},
              {"kind", v.kind},
              {"reason", v.reason},
              {"certificate", cert},
              {"constants", v.constants ? to_json(*v.constants, S.alphabet) : Json(nullptr)},
              {"trace", trace},
              {"preparation", Json{{"coding_power", v.prep.coding_power},
                                   {"blown_up", v.prep.blown_up},
                                   {"block_encoded", v.prep.block_encoded},
                                   {"r", v.prep.r},
                                   {"system", to_text(S)}}},
              {"options", Json{{"cap", v.options.practical_cap},
                               {"budget", v.options.scan_budget},
                               {"max_entries", v.options.max_entries},
                               {"max_word", v.options.max_word},
                               {"periodicity_scan", v.options.periodicity_scan}}}};
}

/// Human-readable summary of a verdict.
inline std::string to_text(const Verdict& v) {
  const System& S = v.prep.system;
  std::ostringstream os;
  const char* label = v.outcome == Outcome::UniformlyRecurrent      ? "uniformly recurrent"
                      : v.outcome == Outcome::NotUniformlyRecurrent ? "NOT uniformly recurrent"
                                                                    : "inconclusive";
  os << (S.name.empty() ? std::string("system") : S.name) << ": " << label << '\n';
  os << "  reason: " << v.reason << '\n';
  if (v.prep.blown_up || v.prep.block_encoded || v.prep.r > 1)
    os << "  prepared: r=" << v.prep.r << (v.prep.blown_up ? ", letters blown up" : "")
       << (v.prep.block_encoded ? ", non-growing blocks encoded" : "") << ", " << S.alphabet.size() << " letters\n";
  if (v.constants) os << "  K=" << to_string(v.constants->K) << '\n';
  if (auto* c = std::get_if<RepetitionCertificate>(&v.certificate)) {
    os << "  repetition: descriptors " << c->n << " and " << c->m << " at power " << c->power << '\n';
    os << "  tau = Pi^" << c->k << " on " << c->tau.source_size() << " letters, positive, images start with 1\n";
  } else if (auto* c = std::get_if<ExitCertificate>(&v.certificate)) {
    const ExitWitness& w = c->witness;
    os << "  witness: " << exit_name(w.kind) << " at descriptor " << c->index << ", v = " << S.target.render(w.v) << '\n';
    if (!w.word.empty()) os << "  word: " << S.alphabet.render(w.word) << '\n';
    os << "  position=" << w.position << " length=" << w.length << " bound=" << to_string(w.bound) << '\n';
  } else if (auto* c = std::get_if<PeriodicCertificate>(&v.certificate)) {
    const PeriodicCheck& k = c->check;
    os << "  z = " << S.target.render(k.z) << " (p=" << k.p << ", root " << k.q << ")\n";
    os << "  conditions: (1) " << (k.blocks_ok ? "ok" : "FAIL") << "  (2) " << (k.chain_ok ? "ok" : "FAIL") << "  (3) "
       << (k.prefix_ok ? "ok" : "FAIL") << '\n';
    if (!k.blocks_ok) os << "  block " << S.alphabet.render(k.bad_block) << " maps outside z^inf\n";
    if (!k.chain_ok) os << "  blocks " << S.alphabet.render(k.bad_pair) << " break the phase chain\n";
    if (c->pumping)
      os << "  pumping: " << S.alphabet.token(c->pumping->b) << " with u = " << S.alphabet.render(c->pumping->u)
         << ", pumped word " << S.alphabet.render(c->pumping->pumped) << '\n';
  }
  return os.str();
}

}  // namespace morphic
