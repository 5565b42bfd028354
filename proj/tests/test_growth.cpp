#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace morphic;

namespace {

Matrix grid(std::vector<std::vector<int>> rows) {
  Matrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  return m;
}

// Random non-erasing endomorphism on n letters, images of length 1..max_len.
Morphism random_morphism(std::mt19937& rng, std::size_t n, std::size_t max_len = 3) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<Letter> letter(0, static_cast<Letter>(n - 1));
  std::vector<Word> imgs(n);
  for (auto& w : imgs) {
    w.resize(len(rng));
    for (auto& c : w) c = letter(rng);
  }
  return Morphism(n, std::move(imgs));
}

std::vector<BigInt> lengths(const Morphism& s, Letter b, std::size_t steps) {
  const Matrix m = incidence_matrix(s);
  std::vector<BigInt> v(s.source_size(), 0), out;
  v[b] = 1;
  for (std::size_t k = 0; k <= steps; ++k) {
    BigInt total = 0;
    for (const auto& x : v) total += x;
    out.push_back(total);
    std::vector<BigInt> nx(v.size(), 0);
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) nx[i] += m(i, j) * v[j];
    v = std::move(nx);
  }
  return out;
}

Rational rpow(const Rational& x, std::size_t k) {
  Rational r = 1;
  for (std::size_t i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

TEST_CASE("incidence matrices", "[growth]") {
  CHECK(incidence_matrix(testing_support::fibonacci().sigma) == grid({{1, 1}, {1, 0}}));
  CHECK(incidence_matrix(testing_support::chacon_nonur().sigma) == grid({{2, 0}, {1, 1}}));
  const IncidenceStructure id(Morphism::identity(3));
  CHECK(id.matrix() == Matrix::identity(3));
  REQUIRE(id.components().size() == 3);
  for (const auto& c : id.components()) CHECK(c.period == 1);
}

TEST_CASE("column sums of M^k are image lengths", "[growth]") {
  std::mt19937 rng(7);
  for (int t = 0; t < 20; ++t) {
    const Morphism s = random_morphism(rng, 2 + t % 3);
    const Matrix m = incidence_matrix(s);
    Morphism sk = s;
    Matrix mk = m;
    for (std::size_t k = 1; k <= 10; ++k) {
      for (Letter j = 0; j < s.source_size(); ++j) CHECK(mk.column_sum(j) == BigInt(sk(j).size()));
      sk = compose(s, sk);
      mk = mk * m;
    }
  }
}

TEST_CASE("horn exponent", "[growth]") {
  CHECK(horn_exponent(grid({{1, 1}, {1, 0}})) == 2);
  CHECK(horn_exponent(grid({{2}})) == 1);
  CHECK_THROWS_AS(horn_exponent(grid({{0, 1}, {1, 0}})), Error);
}

TEST_CASE("block decompositions", "[growth]") {
  const auto fib = block_decomposition(IncidenceStructure(testing_support::fibonacci().sigma));
  CHECK(fib.blocks.size() == 1);
  CHECK(fib.r == 1);
  CHECK(fib.primitive == std::vector<bool>{true});

  const auto ch = block_decomposition(IncidenceStructure(testing_support::chacon_nonur().sigma));
  CHECK(ch.blocks.size() == 2);
  CHECK(ch.r == 1);

  const auto swap = block_decomposition(IncidenceStructure(Morphism(2, {Word{1}, Word{0}})));
  CHECK(swap.r == 2);
  CHECK(swap.blocks.size() == 2);
  for (const auto& b : swap.blocks) CHECK(b.size() == 1);
}

TEST_CASE("growth type examples", "[growth]") {
  const auto ch = growth_types(testing_support::chacon_nonur().sigma);
  CHECK(ch[1].d == 0);
  CHECK(ch[1].theta == PerronValue(Rational(1)));
  CHECK_FALSE(ch[1].growing());
  CHECK(ch[0].d == 0);
  CHECK(ch[0].theta == PerronValue(Rational(2)));
  CHECK(ch[0].growing());

  const auto fib = growth_types(testing_support::fibonacci().sigma);
  for (const auto& g : fib) {
    CHECK(g.d == 0);
    const PerronValue t = g.theta.refined_to(Rational(1, 1000));
    CHECK(t.lo() >= Rational(161, 100));
    CHECK(t.hi() <= Rational(162, 100));
  }

  const auto poly = growth_types(Morphism(2, {Word{0, 1}, Word{1}}));
  CHECK(poly[1].d == 0);
  CHECK_FALSE(poly[1].growing());
  CHECK(poly[0].d == 1);
  CHECK(poly[0].theta == PerronValue(Rational(1)));
  CHECK(poly[0].growing());
}

TEST_CASE("compare_perron", "[growth]") {
  const PerronValue golden = PerronValue::spectral_radius(grid({{1, 1}, {1, 0}}));
  CHECK(compare_perron(golden, golden) == std::strong_ordering::equal);
  CHECK(compare_perron(PerronValue::spectral_radius(grid({{2}})), golden) == std::strong_ordering::greater);
  CHECK(compare_perron(golden, PerronValue::spectral_radius(grid({{0, 1}, {1, 1}}))) == std::strong_ordering::equal);
  // golden^2 is the Perron value of M^2
  CHECK(golden.pow(2) == PerronValue::spectral_radius(grid({{2, 1}, {1, 1}})));
}

TEST_CASE("pq constants", "[growth]") {
  const auto two = pq_constants(Morphism(1, {Word{0, 0}}));
  CHECK(two.P == 1);
  CHECK(two.Q == 1);

  const Morphism fib = testing_support::fibonacci().sigma;
  const auto f = pq_constants(fib);
  CHECK(f.Q >= 2);
  Morphism fk = fib;
  for (int k = 1; k <= 20; ++k, fk = compose(fib, fk)) CHECK(Rational(fk.max_length()) <= f.Q * fk.min_length());

  const auto tm = pq_constants(testing_support::thue_morse().sigma);
  CHECK(tm.Q >= 1);

  CHECK_THROWS_AS(pq_constants(testing_support::chacon_nonur().sigma), Error);
}

TEST_CASE("random endomorphisms: growth types match iteration", "[growth]") {
  std::mt19937 rng(2024);
  for (int t = 0; t < 50; ++t) {
    const Morphism s = random_morphism(rng, 2 + t % 3);
    const auto types = growth_types(s);
    const auto grows = growing_letters(s);
    for (Letter b = 0; b < s.source_size(); ++b) {
      INFO("trial " << t << " letter " << b << " type " << types[b].str());
      const auto L = lengths(s, b, 64);
      CHECK(grows[b] == types[b].growing());
      CHECK(grows[b] == (L[64] > L[32]));
      if (!grows[b]) continue;
      // log L_n = n log θ + d log n + O(1); compare over 24 steps, a multiple of every period ≤ 4
      const double est = (std::log(static_cast<double>(L[60])) - std::log(static_cast<double>(L[36]))) / 24.0 -
                         static_cast<double>(types[b].d) * std::log(60.0 / 36.0) / 24.0;
      CHECK(std::abs(est - std::log(types[b].theta.refined_to(Rational(1, 1000000)).approx())) < 0.02);
    }
  }
}

TEST_CASE("growth type of a power", "[growth]") {
  std::mt19937 rng(99);
  for (int t = 0; t < 15; ++t) {
    const Morphism s = random_morphism(rng, 2 + t % 3);
    const auto base = growth_types(s);
    const auto sq = growth_types(power(s, 3));
    for (Letter b = 0; b < s.source_size(); ++b) {
      CHECK(sq[b].d == base[b].d);
      CHECK(sq[b].theta == base[b].theta.pow(3));
    }
  }
}

TEST_CASE("random primitive matrices: horn exponent is minimal", "[growth]") {
  std::mt19937 rng(5);
  int seen = 0;
  for (int t = 0; t < 400 && seen < 40; ++t) {
    const Morphism s = random_morphism(rng, 2 + t % 3, 2);
    const Matrix m = incidence_matrix(s);
    if (!is_primitive(m)) continue;
    ++seen;
    const std::size_t k = horn_exponent(m);
    const std::size_t d = m.size();
    CHECK(k <= d * d - 2 * d + 2);
    CHECK(m.pow(k).positive());
    if (k > 1) CHECK_FALSE(m.pow(k - 1).positive());
  }
  CHECK(seen >= 20);
}

TEST_CASE("random morphisms: pq inequalities for k up to 30", "[growth]") {
  std::mt19937 rng(11);
  int seen = 0;
  for (int t = 0; t < 300 && seen < 25; ++t) {
    const Morphism s = random_morphism(rng, 2 + t % 3);
    PQConstants pq;
    try {
      pq = pq_constants(s);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::PreconditionViolated);
      continue;
    }
    ++seen;
    const Matrix m = incidence_matrix(s);
    Matrix mk = Matrix::identity(m.size());
    for (std::size_t k = 0; k <= 30; ++k, mk = mk * m) {
      BigInt hi = 0, lo = -1;
      for (std::size_t j = 0; j < m.size(); ++j) {
        const BigInt c = mk.column_sum(j);
        hi = std::max(hi, c);
        lo = lo < 0 ? c : std::min(lo, c);
      }
      INFO("trial " << t << " k=" << k);
      CHECK(Rational(hi) <= pq.P * rpow(pq.alpha.hi(), k));
      CHECK(rpow(pq.alpha.lo(), k) <= pq.P * Rational(lo));
      CHECK(Rational(hi) <= pq.Q * Rational(lo));
    }
  }
  CHECK(seen >= 10);
}
