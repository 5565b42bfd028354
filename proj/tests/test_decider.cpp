#include "support.hpp"
#include "tamper.hpp"

#include "morphic/report.hpp"

#include <catch_amalgamated.hpp>

using namespace morphic;

namespace {

Verdict decide_file(const std::string& rel) { return decide_uniform_recurrence(testing_support::load(rel)); }

}  // namespace

TEST_CASE("001/1 is not uniformly recurrent", "[decider]") {
  const System s = testing_support::chacon_nonur();
  const Verdict v = decide_uniform_recurrence(s);
  CHECK(v.outcome == Outcome::NotUniformlyRecurrent);
  CHECK(v.kind == "periodic");
  auto* c = std::get_if<PeriodicCertificate>(&v.certificate);
  REQUIRE(c);
  REQUIRE(c->pumping);
  CHECK(c->check.failed_condition() == 1);
  CHECK(verify_certificate(s, v).ok);
}

TEST_CASE("Thue-Morse repeats a descriptor", "[decider]") {
  const System s = testing_support::thue_morse();
  const Verdict v = decide_uniform_recurrence(s);
  CHECK(v.outcome == Outcome::UniformlyRecurrent);
  auto* c = std::get_if<RepetitionCertificate>(&v.certificate);
  REQUIRE(c);
  CHECK(c->n < c->m);
  CHECK(c->m <= 64);
  CHECK(incidence_matrix(c->tau).positive());
  for (Letter i = 0; i < c->tau.source_size(); ++i) CHECK(c->tau(i).front() == 0);
  CHECK(verify_certificate(s, v).ok);
}

TEST_CASE("constant coding of a b^omega is periodic", "[decider]") {
  const Verdict v = decide_file("other/ab_b_constant.txt");
  CHECK(v.outcome == Outcome::UniformlyRecurrent);
  CHECK(v.kind == "periodic");
  const Verdict id = decide_file("other/ab_b_identity.txt");
  CHECK(id.outcome == Outcome::NotUniformlyRecurrent);
}

TEST_CASE("early exit for a b^omega with growing b", "[decider]") {
  const Verdict v = decide_file("other/ab_bb.txt");
  CHECK(v.outcome == Outcome::NotUniformlyRecurrent);
  auto* c = std::get_if<ExitCertificate>(&v.certificate);
  REQUIRE(c);
  CHECK(c->witness.kind == ExitKind::NoSecondOccurrence);
  CHECK(verify_certificate(testing_support::load("other/ab_bb.txt"), v).ok);
}

TEST_CASE("bounded non-growing blocks are encoded", "[decider]") {
  for (const char* name : {"other/chacon.txt", "other/abaca.txt"}) {
    const Verdict v = decide_file(name);
    INFO(name);
    CHECK(v.outcome == Outcome::UniformlyRecurrent);
    CHECK(v.prep.block_encoded);
    CHECK(v.kind == "repetition");
  }
}

TEST_CASE("every primitive corpus system is uniformly recurrent", "[decider]") {
  for (const auto& path : testing_support::corpus("primitive")) {
    const System s = load_system(path.string());
    const Verdict v = decide_uniform_recurrence(s);
    INFO(path.filename().string() << ": " << v.reason);
    CHECK(v.outcome == Outcome::UniformlyRecurrent);
    const VerifyReport rep = verify_certificate(s, v);
    CHECK(rep.ok);
  }
}

TEST_CASE("verdicts are deterministic", "[decider]") {
  for (const char* name : {"primitive/rudin_shapiro.txt", "other/ab_bb.txt", "other/chacon.txt"}) {
    const System s = testing_support::load(name);
    CHECK(to_json(decide_uniform_recurrence(s)).dump() == to_json(decide_uniform_recurrence(s)).dump());
  }
}

TEST_CASE("tampered certificates are rejected", "[decider]") {
  const std::vector<std::string> files{"primitive/thue_morse.txt", "other/ab_bb.txt", "other/ab_b_constant.txt",
                                       "other/nonur_001.txt"};
  std::map<std::string, int> applied;
  for (const auto& f : files) {
    const System s = testing_support::load(f);
    const Verdict v = decide_uniform_recurrence(s);
    REQUIRE(verify_certificate(s, v).ok);
    for (const auto& t : testing_support::tamperings()) {
      auto bad = t.apply(v);
      if (!bad) continue;
      ++applied[t.name];
      INFO(f << ": " << t.name);
      CHECK_FALSE(verify_certificate(s, *bad).ok);
    }
  }
  for (const auto& t : testing_support::tamperings()) {
    INFO(t.name);
    CHECK(applied[t.name] > 0);
  }
}

TEST_CASE("a small practical cap gives an inconclusive verdict", "[decider]") {
  DecideOptions opt;
  opt.practical_cap = 2;
  const Verdict v = decide_uniform_recurrence(testing_support::load("primitive/random4.txt"), opt);
  CHECK(v.outcome == Outcome::Inconclusive);
  CHECK(std::holds_alternative<std::monostate>(v.certificate));
  CHECK_FALSE(v.reason.empty());
}

TEST_CASE("erasing input is rejected", "[decider]") {
  const System s = make_system("ab", {"", "ab"}, 'b');
  CHECK_THROWS_AS(decide_uniform_recurrence(s), Error);
}

TEST_CASE("JSON envelope", "[decider]") {
  const Json j = to_json(decide_uniform_recurrence(testing_support::fibonacci()));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"format", "system", "verdict", "kind", "reason", "certificate", "constants",
                                         "trace", "preparation", "options"});
  CHECK(j["verdict"] == "uniformly_recurrent");
  CHECK(j["certificate"]["type"] == "repetition");
  CHECK(Json::parse(j.dump()) == j);
}
