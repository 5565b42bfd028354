// morphic: command-line front end for the uniform recurrence decider.

#include "morphic/morphic.hpp"
#include "morphic/report.hpp"

#include <CLI11.hpp>

#include <functional>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace morphic;

namespace {

/// Output and exit status of one command on one file.
struct FileResult {
  std::string out;
  std::string err;
  int code = 0;
};

int exit_code_for(const Error& e) { return e.kind() == ErrorKind::InternalConsistency ? 2 : 1; }

/// Runs `body` on one file, mapping errors to exit codes 1 and 2.
FileResult guarded(const std::string& path, const std::function<void(const System&, std::ostream&)>& body) {
  FileResult r;
  std::ostringstream os;
  try {
    System s = load_system(path);
    if (s.name.empty()) s.name = path;
    body(s, os);
  } catch (const Error& e) {
    r.err = path + ": " + e.what() + "\n";
    r.code = exit_code_for(e);
  } catch (const std::exception& e) {
    r.err = path + ": internal error: " + e.what() + "\n";
    r.code = 2;
  }
  r.out = os.str();
  return r;
}

/// Processes files concurrently and prints results in input order.
int run_files(const std::vector<std::string>& files, const std::function<void(const System&, std::ostream&)>& body) {
  std::vector<std::future<FileResult>> jobs;
  for (const auto& f : files) jobs.push_back(std::async(std::launch::async, [&body, f] { return guarded(f, body); }));
  int code = 0;
  for (auto& j : jobs) {
    FileResult r = j.get();
    std::cout << r.out;
    std::cerr << r.err;
    code = std::max(code, r.code);
  }
  std::cout.flush();
  return code;
}

void print_decide(const System& s, std::ostream& os, const DecideOptions& opt, bool json, bool verify) {
  Verdict v = decide_uniform_recurrence(s, opt);
  std::optional<VerifyReport> rep;
  if (verify) rep = verify_certificate(s, v);
  if (json) {
    Json j = to_json(v);
    if (rep) j["verification"] = Json{{"ok", rep->ok}, {"notes", rep->notes}};
    os << j.dump(2) << '\n';
    return;
  }
  os << to_text(v);
  if (rep) {
    os << "  verification: " << (rep->ok ? "ok" : "FAILED") << '\n';
    for (const auto& n : rep->notes) os << "    " << n << '\n';
  }
}

void print_classify(const System& s, std::ostream& os) {
  const Classification c = classify(s.sigma);
  os << "system: " << s.name << '\n';
  os << "  letters: " << s.alphabet.size() << ", start " << s.alphabet.token(s.start) << '\n';
  os << "  non-erasing: " << (c.non_erasing ? "yes" : "no") << ", coding: " << (c.coding ? "yes" : "no")
     << ", phi coding: " << (s.phi.is_coding() ? "yes" : "no") << '\n';
  os << "  prolongable on:";
  for (Letter a : c.prolongable_on) os << ' ' << s.alphabet.token(a);
  os << '\n';
  IncidenceStructure inc(s.sigma);
  const auto types = growth_types(inc);
  const auto grows = growing_letters(s.sigma);
  os << "  growth types:\n";
  for (Letter a = 0; a < s.alphabet.size(); ++a)
    os << "    " << s.alphabet.token(a) << "  " << types[a].str() << (grows[a] ? "  growing" : "  non-growing") << '\n';
  const bool all = std::find(grows.begin(), grows.end(), false) == grows.end();
  os << "  sigma is " << (all ? "growing" : "not growing") << '\n';
  const BlockDecomposition bd = block_decomposition(inc);
  os << "  block decomposition (r = " << bd.r << "):\n";
  for (std::size_t i = 0; i < bd.blocks.size(); ++i) {
    os << "    {";
    for (std::size_t k = 0; k < bd.blocks[i].size(); ++k) os << (k ? " " : "") << s.alphabet.token(bd.blocks[i][k]);
    os << "}  " << (bd.primitive[i] ? "primitive" : "zero") << '\n';
  }
}

void print_constants(const System& s, std::ostream& os, bool json) {
  Preparation prep = prepare(s);
  if (!prep.growing) throw Error(ErrorKind::PreconditionViolated, "constants need a growing system after preparation");
  ConstantSheet sh = compute_constants(prep.system.sigma, prep.r);
  Json j = to_json(sh, prep.system.alphabet);
  if (json) {
    os << j.dump(2) << '\n';
    return;
  }
  os << "system: " << s.name << '\n';
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "submorphisms") continue;
    os << "  " << it.key() << " = " << (it->is_string() ? it->get<std::string>() : it->dump()) << '\n';
  }
  for (const auto& sub : j["submorphisms"]) os << "  submorphism " << sub.dump() << '\n';
}

void print_return_words(const System& s, std::ostream& os, const std::string& tokens, const DecideOptions& opt) {
  Preparation prep = prepare(s);
  const Word u = prep.system.target.parse(tokens);
  if (u.empty()) throw Error(ErrorKind::InvalidArgument, "empty word");
  PrefixCache cache(prep.system);
  const Word& x = cache.outer(u.size());
  if (!std::equal(u.begin(), u.end(), x.begin()))
    throw Error(ErrorKind::PrefixInvalid, "'" + tokens + "' is not a prefix of x");
  auto r = descriptor_at(prep, u.size(), opt);
  if (auto* msg = std::get_if<std::string>(&r)) throw Error(ErrorKind::BudgetExhausted, *msg);
  const Descriptor& d = std::get<Descriptor>(r);
  os << "return words to " << prep.system.target.render(u) << ":\n";
  for (std::size_t i = 0; i < d.returns_x.size(); ++i)
    os << i + 1 << ": " << prep.system.target.render(d.returns_x[i]) << '\n';
}

void print_derive(const System& s, std::ostream& os, std::size_t depth, const DecideOptions& opt, bool json) {
  Preparation prep = prepare(s);
  DerivedChain dc = derive_chain(prep, depth, opt);
  if (json) {
    Json arr = Json::array();
    for (const auto& d : dc.chain) arr.push_back(to_json(d, prep.system));
    Json j{{"format", 1}, {"system", s.name}, {"power", dc.power}, {"chain", arr}};
    if (!dc.stopped.empty()) j["stopped"] = dc.stopped;
    os << j.dump(2) << '\n';
    return;
  }
  os << "system: " << s.name << " (power " << dc.power << ")\n";
  for (std::size_t i = 0; i < dc.chain.size(); ++i) {
    const Descriptor& d = dc.chain[i];
    os << "u_" << i + 1 << " = " << prep.system.target.render(d.v) << "  (|u| = " << d.v.size() << ", " << d.entries.size()
       << " entries, " << d.returns_x.size() << " return words)\n";
    os << "    " << d.canonical() << '\n';
  }
  if (!dc.stopped.empty()) os << "stopped: " << dc.stopped << '\n';
}

void print_periodic(const System& s, std::ostream& os, const std::string& tokens, bool json) {
  const System r = restrict_to_reachable(s);
  require_prolongable(r);
  const Word w = r.alphabet.parse(tokens);
  PeriodicCheck c = periodic_check(r, w);
  if (json) {
    os << to_json(c, r).dump(2) << '\n';
    return;
  }
  os << "system: " << s.name << '\n';
  os << "  w = " << r.alphabet.render(w) << ", phi(w) = " << r.target.render(c.phi_w) << ", z = x[0," << c.p
     << ") = " << r.target.render(c.z) << '\n';
  os << "  (1) blocks of length " << c.block_length << " inside z^inf: " << (c.blocks_ok ? "ok" : "FAIL") << '\n';
  if (!c.blocks_ok) os << "      counterexample " << r.alphabet.render(c.bad_block) << '\n';
  os << "  (2) phases chain across adjacent blocks: " << (c.chain_ok ? "ok" : c.blocks_ok ? "FAIL" : "not reached") << '\n';
  if (!c.chain_ok) os << "      counterexample " << r.alphabet.render(c.bad_pair) << '\n';
  os << "  (3) prefix block at phase 0: "
     << (c.blocks_ok && c.chain_ok ? (c.prefix_ok ? "ok" : "FAIL") : "not reached") << '\n';
  os << "  x = z^inf: " << (c.passed() ? "yes" : "no") << '\n';
}

void print_oracle(const System& s, std::ostream& os, std::size_t max_factor, std::size_t prefix,
                  const std::optional<std::string>& bound) {
  std::optional<BigInt> b;
  if (bound) b = BigInt(*bound);
  auto rep = oracle::window_ur_check(s, max_factor, prefix, b);
  os << "system: " << s.name << " (prefix " << rep.prefix_len << ")\n";
  for (std::size_t len = 1; len <= max_factor; ++len) {
    std::size_t count = 0, gap = 0, once = 0;
    for (const auto& f : rep.factors) {
      if (f.u.size() != len) continue;
      ++count;
      gap = std::max(gap, f.max_gap);
      once += f.occurrences == 1;
    }
    if (!count) break;
    os << "  n=" << len << "  factors=" << count << "  max gap=" << gap << "  seen once=" << once << '\n';
  }
  if (rep.conclusive) {
    const auto& f = rep.violations.front();
    os << "  violation: " << s.target.render(f.u) << " gap " << f.max_gap << " at " << f.gap_at << ", trailing "
       << f.trailing << " (bound " << to_string(*b) << "|u|)\n";
    os << "  conclusive: not linearly recurrent with this constant\n";
  } else {
    os << "  no violation; a finite scan cannot prove uniform recurrence\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decide uniform recurrence of morphic sequences"};
  app.require_subcommand(1);
  DecideOptions opt;
  std::vector<std::string> files;
  bool json = false, verify = false;

  auto* decide = app.add_subcommand("decide-ur", "run the full decision procedure");
  decide->add_option("files", files, "system files")->required()->check(CLI::ExistingFile);
  decide->add_option("--cap", opt.practical_cap, "practical cap on descriptors per power")->check(CLI::Range(2, 1 << 20));
  decide->add_option("--budget", opt.scan_budget, "scan budget in letters")->check(CLI::PositiveNumber);
  decide->add_flag("--json", json, "emit JSON");
  decide->add_flag("--verify", verify, "re-verify the certificate");

  auto* cls = app.add_subcommand("classify", "growth types and block decomposition");
  cls->add_option("files", files, "system files")->required()->check(CLI::ExistingFile);

  std::string word;
  auto* rw = app.add_subcommand("return-words", "return words to a prefix of x");
  rw->add_option("files", files, "system files")->required()->check(CLI::ExistingFile);
  rw->add_option("--word", word, "prefix of x")->required();
  rw->add_option("--budget", opt.scan_budget, "scan budget in letters")->check(CLI::PositiveNumber);

  std::size_t depth = 4;
  auto* der = app.add_subcommand("derive", "the chain u_n with its descriptors");
  der->add_option("files", files, "system files")->required()->check(CLI::ExistingFile);
  der->add_option("--depth", depth, "number of descriptors")->required()->check(CLI::Range(1, 64));
  der->add_flag("--json", json, "emit JSON");

  auto* cst = app.add_subcommand("constants", "the constant sheet");
  cst->add_option("files", files, "system files")->required()->check(CLI::ExistingFile);
  cst->add_flag("--json", json, "emit JSON");

  auto* per = app.add_subcommand("periodic-check", "test x = z^inf for a candidate period word");
  per->add_option("files", files, "system files")->required()->check(CLI::ExistingFile);
  per->add_option("--word", word, "word over the alphabet of sigma")->required();
  per->add_flag("--json", json, "emit JSON");

  std::size_t max_factor = 8, prefix = 10000;
  std::optional<std::string> bound;
  auto* orc = app.add_subcommand("oracle", "brute-force gap scan of a prefix");
  orc->add_option("files", files, "system files")->required()->check(CLI::ExistingFile);
  orc->add_option("--max-factor", max_factor, "longest factor length")->required()->check(CLI::Range(1, 64));
  orc->add_option("--prefix", prefix, "prefix length")->required()->check(CLI::PositiveNumber);
  orc->add_option("--bound", bound, "linear constant K; gaps above K|u| are reported as violations")
      ->check([](const std::string& v) {
        const bool digits = !v.empty() && std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; });
        return digits ? std::string() : std::string("must be a non-negative integer");
      });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*decide) return run_files(files, [&](const System& s, std::ostream& os) { print_decide(s, os, opt, json, verify); });
  if (*cls) return run_files(files, print_classify);
  if (*rw) return run_files(files, [&](const System& s, std::ostream& os) { print_return_words(s, os, word, opt); });
  if (*der) return run_files(files, [&](const System& s, std::ostream& os) { print_derive(s, os, depth, opt, json); });
  if (*cst) return run_files(files, [&](const System& s, std::ostream& os) { print_constants(s, os, json); });
  if (*per) return run_files(files, [&](const System& s, std::ostream& os) { print_periodic(s, os, word, json); });
  if (*orc)
    return run_files(files, [&](const System& s, std::ostream& os) { print_oracle(s, os, max_factor, prefix, bound); });
  return 1;
}
