#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rla/fmb.hpp"

using namespace rla;
using namespace rla::test;

namespace {

using F2 = Fp<2>;

// Heisenberg p = 2 in PBW index order: 1, a, b, ab, c, ac, bc, abc.
std::vector<EnvElement<F2>> known_basis(const EnvAlgebra<F2>& A) {
  auto m = [&](int i) { return A.monomial(i); };
  return {m(0), m(1), m(2), m(3), EnvElement<F2>(m(3) + m(4)), m(5), m(6), m(7)};
}

// Closure test written against the rewriting oracle and plain scans.
bool oracle_accepts(const EnvAlgebra<F2>& A, const std::vector<EnvElement<F2>>& B) {
  WordRewriter<F2> W(A.lie());
  auto member = [&](const EnvElement<F2>& v) {
    return std::any_of(B.begin(), B.end(), [&](const auto& b) { return equal<F2>(b, v); });
  };
  if (!member(A.one())) return false;
  if (rref<F2>(rows_to_matrix<F2>(std::span<const Vec<F2>>(B), A.dim())).rank() != A.dim()) return false;
  for (const auto& x : B)
    for (const auto& y : B) {
      auto xy = W.product(A, x, y);
      if (!is_zero_vec<F2>(xy) && !member(xy)) return false;
    }
  return true;  // independent of full size with 1 inside: B \ {1} spans ω iff each is in ω
}

template <class S>
bool same_set(std::vector<EnvElement<S>> a, std::vector<EnvElement<S>> b) {
  std::sort(a.begin(), a.end(), support_less<S>);
  std::sort(b.begin(), b.end(), support_less<S>);
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal<S>(a[i], b[i])) return false;
  return true;
}

}  // namespace

TEST_SUITE("fmb") {

TEST_CASE("verifier on the characteristic 2 example") {
  Analysis<F2> an(heisenberg<F2>());
  auto B = known_basis(an.env);
  auto rep = is_fm_basis(an, B);
  CHECK(rep.ok());
  CHECK(rep.audits_ok());

  B[4] = an.env.monomial(4);  // c instead of ab + c
  rep = is_fm_basis(an, B);
  CHECK_FALSE(rep.ok());
  bool cited = false;
  for (const auto& v : rep.violations)
    if (v.i == 2 && v.j == 1) cited = equal<F2>(v.product, EnvElement<F2>(an.env.monomial(3) + an.env.monomial(4)));
  CHECK(cited);

  auto C = known_basis(an.env);
  C[0] = EnvElement<F2>(an.env.monomial(0) + an.env.monomial(7));
  CHECK_FALSE(is_fm_basis(an, C).contains_one);
  C.pop_back();
  CHECK_THROWS_AS(is_fm_basis(an, C), Error);
}

TEST_CASE("verifier agrees with an independent closure check on every single-element perturbation") {
  Analysis<F2> an(heisenberg<F2>());
  const auto base = known_basis(an.env);
  int accepted = 0;
  for (int pos = 0; pos < 8; ++pos)
    for (int mask = 1; mask < 128; ++mask) {
      auto B = base;
      for (int k = 0; k < 7; ++k)
        if (mask >> k & 1) B[static_cast<std::size_t>(pos)][k + 1] += F2(1);
      auto rep = is_fm_basis(an, B);
      bool expect = oracle_accepts(an.env, B);
      CHECK(rep.ok() == expect);
      if (rep.ok()) {
        ++accepted;
        CHECK(rep.audits_ok());
      } else if (rep.independent && rep.contains_one) {
        CHECK_FALSE(rep.violations.empty());
      }
    }
  // Adding a*b*c to a generator keeps the set closed: a*b*c annihilates
  // every element of ω on both sides.
  auto B = base;
  B[1] += an.env.monomial(7);
  CHECK(is_fm_basis(an, B).ok());
  CHECK(accepted > 0);
}

TEST_CASE("audits hold on every accepted basis") {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 20; ++k) {
    auto L = random_flag_algebra<Fp<3>>(1 + k % 3, rng, true);
    Analysis<Fp<3>> an(L);
    auto B = monomial_fmb(an.env, decompose(L));
    auto rep = is_fm_basis(an, B);
    CHECK(rep.ok());
    CHECK(rep.audits_ok());
  }
  for (int k = 0; k < 20; ++k) {
    auto L = random_flag_algebra<F2>(1 + k % 4, rng, true);
    Analysis<F2> an(L);
    auto rep = is_fm_basis(an, monomial_fmb(an.env, decompose(L)));
    CHECK(rep.ok());
    CHECK(rep.audits_ok());
  }
}

TEST_CASE("generator obstruction") {
  using F3 = Fp<3>;
  {
    Analysis<F3> an(powerful_xz<F3>());
    auto r = lemma2_check(an.env, *an.grading, minimal_generators(an));
    CHECK(r.commutators_in_omega3);
    CHECK(r.products_outside_omega3);
    CHECK(r.squares_meet_products_trivially);
    CHECK(r.all());
  }
  {
    Analysis<F2> an(heisenberg<F2>());
    auto r = lemma2_check(an.env, *an.grading, minimal_generators(an));
    CHECK_FALSE(r.commutators_in_omega3);
    CHECK_FALSE(r.all());
  }
  {
    Analysis<F2> an(powerful_p2<F2>());
    REQUIRE(an.report.is_powerful);
    auto r = lemma2_check(an.env, *an.grading, minimal_generators(an));
    CHECK(r.commutators_in_omega3);
    CHECK_FALSE(r.products_outside_omega3);  // y*y = y^[2] = 0
    CHECK_FALSE(r.all());
  }
  {
    Analysis<F3> an(powerful_xz<F3>());
    auto gens = minimal_generators(an);
    gens.pop_back();
    CHECK_THROWS_AS(lemma2_check(an.env, *an.grading, gens), Error);
    gens = minimal_generators(an);
    gens[1] = an.env.embed(vec<F3>({0, 0, 1}));
    CHECK_THROWS_AS(lemma2_check(an.env, *an.grading, gens), Error);
  }
}

TEST_CASE("class two in odd characteristic") {
  using F3 = Fp<3>;
  {
    Analysis<F3> an(heisenberg<F3>());
    auto ev = theorem3_check(an);
    CHECK(ev.applies);
    REQUIRE(ev.witness.has_value());
    CHECK(equal<F3>(ev.witness->first, vec<F3>({1, 0, 0})));
    CHECK(equal<F3>(ev.witness->second, vec<F3>({0, 1, 0})));
    CHECK_FALSE(an.filtration.L_power(1).contains(ev.witness_bracket));
    CHECK(ev.identity_holds);
  }
  CHECK_FALSE(theorem3_check(Analysis<F2>(heisenberg<F2>())).applies);
  CHECK_FALSE(theorem3_check(Analysis<F3>(abelian_zero<F3>(2))).applies);
  {
    Analysis<F3> an(powerful_xz<F3>());
    auto ev = theorem3_check(an);
    CHECK(ev.applies);
    CHECK(ev.powerful);
    CHECK_FALSE(ev.witness.has_value());
    REQUIRE(ev.lemma2.has_value());
    CHECK(ev.lemma2->all());
  }
}

TEST_CASE("search examples") {
  {
    Analysis<F2> an(heisenberg<F2>());
    auto res = search_fmb(an);
    CHECK(res.certificate.kind == CertificateKind::FoundBasis);
    CHECK(same_set(res.certificate.basis, known_basis(an.env)));
    CHECK(res.certificate.summary == "{1, a, b, a*b, a*b + c, a*c, b*c, a*b*c}");
  }
  {
    Analysis<F2> an(abelian_zero<F2>(2));
    auto res = search_fmb(an);
    CHECK(res.certificate.summary == "{1, x, y, x*y}");
  }
  {
    Analysis<F2> an(abelian_zero<F2>(1));
    CHECK(search_fmb(an).certificate.summary == "{1, x}");
  }
}

TEST_CASE("exhaustive enumeration contains the example basis") {
  Analysis<F2> an(heisenberg<F2>());
  SearchBudget b;
  b.collect_all = true;
  auto res = search_fmb(an, b);
  CHECK(res.certificate.kind == CertificateKind::FoundBasis);
  bool seen = false;
  for (const auto& B : res.solutions) {
    CHECK(is_fm_basis(an, B).ok());
    if (same_set(B, known_basis(an.env))) seen = true;
  }
  CHECK(seen);
  CHECK(res.solutions.size() > 1);
}

TEST_CASE("search is deterministic across thread counts") {
  std::mt19937_64 rng(47);
  std::vector<RestrictedLieAlgebra<F2>> algebras{heisenberg<F2>(), powerful_p2<F2>()};
  auto elliptic = heisenberg<F2>();
  elliptic.set_pmap(0, vec<F2>({0, 0, 1}));
  elliptic.set_pmap(1, vec<F2>({0, 0, 1}));
  algebras.push_back(elliptic);
  for (int k = 0; k < 4; ++k) algebras.push_back(random_flag_algebra<F2>(3, rng));
  for (const auto& L : algebras) {
    Analysis<F2> an(L);
    for (bool all : {false, true}) {
      SearchBudget one, many;
      one.collect_all = many.collect_all = all;
      many.threads = 3;
      auto r1 = search_fmb(an, one), r3 = search_fmb(an, many);
      CHECK(r1.certificate.kind == r3.certificate.kind);
      CHECK(r1.certificate.search->nodes == r3.certificate.search->nodes);
      CHECK(r1.certificate.search->trace_digest == r3.certificate.search->trace_digest);
      REQUIRE(r1.solutions.size() == r3.solutions.size());
      for (std::size_t i = 0; i < r1.solutions.size(); ++i) CHECK(same_set(r1.solutions[i], r3.solutions[i]));
    }
  }
}

TEST_CASE("search budget") {
  Analysis<F2> an(heisenberg<F2>());
  SearchBudget b;
  b.max_nodes = 3;
  auto res = search_fmb(an, b);
  CHECK(res.certificate.kind == CertificateKind::Inconclusive);
  CHECK(res.certificate.search->nodes == 3);
  auto full = search_fmb(an);
  b.max_nodes = full.certificate.search->nodes;
  CHECK(search_fmb(an, b).certificate.kind == CertificateKind::FoundBasis);
  b.max_nodes -= 1;
  CHECK(search_fmb(an, b).certificate.kind == CertificateKind::Inconclusive);
}

TEST_CASE("search finds nothing when a nonexistence theorem applies") {
  // Class two, p = 3: the search must come back empty or run out of budget,
  // never with a basis.
  using F3 = Fp<3>;
  Analysis<F3> an(heisenberg<F3>());
  SearchBudget b;
  b.max_nodes = 200000;
  auto res = search_fmb(an, b);
  CHECK(res.certificate.kind != CertificateKind::FoundBasis);
}

TEST_CASE("decide") {
  using R = RatFunc<2>;
  using F3 = Fp<3>;
  CHECK(decide(Analysis<R>(l_alpha<R>(R::t()))).kind == CertificateKind::NoBasis_Theorem1);
  {
    Analysis<R> an(l_alpha<R>(R::t() * R::t()));
    auto c = decide(an);
    CHECK(c.kind == CertificateKind::FoundBasis);
    CHECK(is_fm_basis(an, c.basis).ok());
  }
  {
    Analysis<F2> an(l_alpha<F2>(F2(1)));
    auto c = decide(an);
    CHECK(c.kind == CertificateKind::FoundBasis);
    CHECK(c.route == "abelian");
    CHECK(is_fm_basis(an, c.basis).ok());
  }
  CHECK(decide(Analysis<F3>(heisenberg<F3>())).kind == CertificateKind::NoBasis_Theorem3);
  {
    auto c = decide(Analysis<F2>(heisenberg<F2>()));
    CHECK(c.kind == CertificateKind::FoundBasis);
    CHECK(c.route == "search");
  }
  {
    Analysis<F3> an(powerful_xz<F3>());
    CHECK(decide(an).kind == CertificateKind::NoBasis_Theorem3);
    DecideOptions o;
    o.only = Route::Lemma2;
    CHECK(decide(an, o).kind == CertificateKind::NoBasis_Lemma2);
  }
  RestrictedLieAlgebra<F3> T({"x"});
  T.set_pmap(0, vec<F3>({1}));
  CHECK_THROWS_AS(decide(Analysis<F3>(T)), Error);
}

template <class S>
void routes_agree(const RestrictedLieAlgebra<S>& L) {
  Analysis<S> an(L);
  bool found = false, none = false;
  for (Route r : {Route::Abelian, Route::ExampleShape, Route::Theorem3, Route::Lemma2, Route::Search}) {
    DecideOptions o;
    o.only = r;
    o.budget.max_nodes = 100000;
    auto c = decide(an, o);
    if (c.kind == CertificateKind::FoundBasis) {
      found = true;
      CHECK(is_fm_basis(an, c.basis).ok());
    } else if (c.kind != CertificateKind::Inconclusive) {
      none = true;
    }
  }
  CHECK_FALSE((found && none));
}

TEST_CASE("forced routes never contradict each other") {
  routes_agree(heisenberg<F2>());
  routes_agree(powerful_p2<F2>());
  routes_agree(l_alpha<F2>(F2(1)));
  routes_agree(abelian_zero<F2>(3));
  routes_agree(heisenberg<Fp<3>>());
  routes_agree(powerful_xz<Fp<3>>());
  routes_agree(l_alpha<RatFunc<2>>(RatFunc<2>::t()));
  routes_agree(l_alpha<RatFunc<2>>(RatFunc<2>::t() * RatFunc<2>::t()));
  std::mt19937_64 rng(53);
  for (int k = 0; k < 6; ++k) routes_agree(random_flag_algebra<F2>(3, rng));
}

}  // TEST_SUITE

TEST_SUITE("fmb") {

TEST_CASE("search agrees with brute force on small algebras over F_2") {
  std::vector<RestrictedLieAlgebra<F2>> algebras{heisenberg<F2>(), abelian_zero<F2>(2), l_alpha<F2>(F2(1))};
  auto elliptic = heisenberg<F2>();
  elliptic.set_pmap(0, vec<F2>({0, 0, 1}));
  elliptic.set_pmap(1, vec<F2>({0, 0, 1}));
  algebras.push_back(elliptic);
  auto half = heisenberg<F2>();
  half.set_pmap(0, vec<F2>({0, 0, 1}));
  algebras.push_back(half);
  std::mt19937_64 rng(59);
  for (int k = 0; k < 10; ++k) algebras.push_back(random_flag_algebra<F2>(3, rng));
  for (const auto& L : algebras) {
    Analysis<F2> an(L);
    int d = an.grading->layer_dims[1];
    if (d > 2) continue;  // keep the brute force small
    auto c = search_fmb(an).certificate;
    REQUIRE(c.definite());
    CHECK((c.kind == CertificateKind::FoundBasis) == brute_force_fmb_exists(an.env, d));
  }
}

}  // TEST_SUITE
