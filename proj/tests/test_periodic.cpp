#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace morphic;
using testing_support::w;

namespace {

// Longest run of non-growing letters in y[0, n).
std::size_t longest_bounded_run(const System& s, std::size_t n) {
  const auto grows = growing_letters(s.sigma);
  std::size_t best = 0, run = 0;
  for (Letter c : inner_prefix(s, n)) {
    run = grows[c] ? 0 : run + 1;
    best = std::max(best, run);
  }
  return best;
}

}  // namespace

TEST_CASE("smallest period", "[periodic]") {
  const System tm = testing_support::thue_morse();
  CHECK(smallest_period(w(tm, "0101010")) == 2);
  CHECK(smallest_period(w(tm, "0110")) == 3);
  CHECK(smallest_period(w(tm, "000")) == 1);
  CHECK(smallest_period(w(tm, "01")) == 2);
  CHECK(smallest_period(Word{}) == 0);
}

TEST_CASE("checklist on constant images", "[periodic]") {
  const System s = testing_support::load("other/ab_b_constant.txt");
  const PeriodicCheck c = periodic_check(s, w(s, "b"));
  CHECK(c.p == 1);
  CHECK(c.q == 1);
  CHECK(c.passed());
  CHECK(c.failed_condition() == 0);
}

TEST_CASE("checklist rejects 001/1", "[periodic]") {
  const System s = testing_support::chacon_nonur();
  const PeriodicCheck c = periodic_check(s, w(s, "1"));
  CHECK_FALSE(c.passed());
  // y has the block 00, which cannot sit inside 1^∞
  CHECK(c.failed_condition() == 1);
  CHECK(c.bad_block.size() == 2);
  CHECK(std::count(c.bad_block.begin(), c.bad_block.end(), 0) > 0);
}

TEST_CASE("checklist on periodic sequences", "[periodic]") {
  const System s = testing_support::load("other/aba_bab.txt");
  const PeriodicCheck c = periodic_check_length(s, 2);
  CHECK(c.passed());
  CHECK(s.alphabet.render(c.z) == "ab");
  // length 4 describes the same sequence, with root length 2
  const PeriodicCheck c4 = periodic_check_length(s, 4);
  CHECK(c4.passed());
  CHECK(c4.q == 2);
  // a wrong period fails
  CHECK_FALSE(periodic_check_length(s, 3).passed());

  const System id = testing_support::load("other/ab_b_identity.txt");
  const PeriodicCheck bad = periodic_check(id, w(id, "b"));
  CHECK(bad.failed_condition() == 1);
}

TEST_CASE("an eventually periodic x fails the checklist", "[periodic]") {
  // y = a b^∞ with φ(a) = 10, φ(b) = 01: x = 1 0 (01)^∞ has period 2 only after its first letter
  const System s = make_system("ab", {"ab", "b"}, 'a', "01", {"10", "01"});
  const PeriodicCheck c = periodic_check_length(s, 2);
  CHECK_FALSE(c.passed());
  CHECK(c.failed_condition() != 0);
}

TEST_CASE("periodicity scan", "[periodic]") {
  const auto p = scan_periodicity(testing_support::load("other/periodic_ab.txt"), 1024);
  REQUIRE(p.period);
  CHECK(*p.period == 2);
  CHECK_FALSE(scan_periodicity(testing_support::thue_morse(), 4096).suspected());
}

TEST_CASE("pansiot dichotomy", "[periodic]") {
  const auto ab = pansiot_witness(testing_support::load("other/ab_b_constant.txt").sigma);
  REQUIRE(ab);
  CHECK(ab->b == 0);
  CHECK(ab->u == Word{1});
  CHECK(ab->pumped == Word{1});

  const System ch = testing_support::chacon_nonur();
  const auto c = pansiot_witness(ch.sigma);
  REQUIRE(c);
  CHECK(c->b == 0);
  CHECK(ch.alphabet.render(c->u) == "1");
  CHECK(ch.alphabet.render(c->pumped) == "1");

  // a -> ab, b -> c, c -> b: y = a (bc)^∞, so the non-growing blocks are unbounded
  const System cyc = make_system("abc", {"ab", "c", "b"}, 'a');
  const auto cw = pansiot_witness(cyc.sigma);
  REQUIRE(cw);
  CHECK(cyc.alphabet.render(cw->pumped).size() == 2);
  CHECK(longest_bounded_run(cyc, 1000) == 999);

  // 0 -> 0010, 1 -> 1: blocks of 1 stay short
  const System chacon = testing_support::load("other/chacon.txt");
  CHECK_FALSE(pansiot_witness(chacon.sigma));
  CHECK(longest_bounded_run(chacon, 100000) == 1);
  const System abaca = testing_support::load("other/abaca.txt");
  CHECK_FALSE(pansiot_witness(abaca.sigma));
  CHECK(longest_bounded_run(abaca, 100000) == 1);
}

TEST_CASE("pumped words occur with every power", "[periodic]") {
  for (const char* name : {"other/ab_b_constant.txt", "other/nonur_001.txt", "other/ab_b_identity.txt"}) {
    const System s = testing_support::load(name);
    const auto pw = pansiot_witness(s.sigma);
    REQUIRE(pw);
    const Word y = inner_prefix(s, 50000);
    Word pumped;
    for (int k = 1; k <= 8; ++k) {
      pumped.insert(pumped.end(), pw->pumped.begin(), pw->pumped.end());
      CHECK(is_factor(pumped, y));
    }
  }
}

TEST_CASE("block encoding keeps x and makes every letter grow", "[periodic]") {
  for (const char* name : {"other/chacon.txt", "other/abaca.txt"}) {
    const System s = testing_support::load(name);
    const Preparation once = prepare_once(s);
    REQUIRE_FALSE(once.growing);
    const System enc = block_encode(once.system);
    INFO(name);
    CHECK(outer_prefix(enc, 20000) == outer_prefix(s, 20000));
    const Preparation full = prepare(s);
    CHECK(full.block_encoded);
    CHECK(full.growing);
    CHECK(outer_prefix(full.system, 20000) == outer_prefix(s, 20000));
  }
}
