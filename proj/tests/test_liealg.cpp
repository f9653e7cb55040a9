#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rla/pmap.hpp"

using namespace rla;
using namespace rla::test;

TEST_SUITE("liealg") {

TEST_CASE("validate accepts the standard examples") {
  CHECK(validate(heisenberg<Fp<2>>()).ok());
  CHECK(validate(heisenberg<Fp<3>>()).ok());
  CHECK(validate(powerful_xz<Fp<3>>()).ok());
  CHECK(validate(l_alpha<RatFunc<2>>(RatFunc<2>::t())).ok());
}

TEST_CASE("validate reports the violated axiom") {
  auto L = heisenberg<Fp<2>>();
  L.set_bracket(0, 2, vec<Fp<2>>({1, 0, 0}));  // [a,c] = a
  auto rep = validate(L);
  CHECK_FALSE(rep.ok());
  bool jacobi = false, restricted = false;
  for (const auto& v : rep.violations) {
    if (v.axiom == "jacobi") {
      jacobi = true;
      CHECK(v.at == std::vector<int>{0, 1, 2});
    }
    if (v.axiom == "restrictedness") restricted = true;
  }
  CHECK(jacobi);
  CHECK(restricted);

  // p = 3: ad(x)^3 = 0 but a nonzero central x^[3] is fine; a noncentral one is not
  auto M = heisenberg<Fp<3>>();
  M.set_pmap(0, vec<Fp<3>>({0, 1, 0}));  // x^[3] = y, but ad(y) != 0 = ad(x)^3
  CHECK_FALSE(validate(M).ok());
  CHECK_THROWS_AS(M.set_bracket(1, 1, vec<Fp<3>>({0, 0, 1})), Error);
}

TEST_CASE("bracket is the bilinear alternating extension") {
  using F2 = Fp<2>;
  auto L = heisenberg<F2>();
  CHECK(equal<F2>(L.bracket(vec<F2>({1, 0, 0}), vec<F2>({0, 1, 0})), vec<F2>({0, 0, 1})));
  CHECK(equal<F2>(L.bracket(vec<F2>({1, 1, 0}), vec<F2>({1, 1, 0})), vec<F2>({0, 0, 0})));
  CHECK(equal<F2>(L.bracket(vec<F2>({1, 1, 0}), vec<F2>({1, 0, 0})), vec<F2>({0, 0, 1})));
  CHECK_THROWS_AS(L.bracket(vec<F2>({1, 0}), vec<F2>({1, 0, 0})), Error);

  std::mt19937_64 rng(5);
  using F5 = Fp<5>;
  for (int t = 0; t < 30; ++t) {
    auto M = random_flag_algebra<F5>(4, rng);
    LieElement<F5> u(4), v(4);
    for (int i = 0; i < 4; ++i) u[i] = random_scalar<F5>(rng), v[i] = random_scalar<F5>(rng);
    CHECK(equal<F5>(M.bracket(u, v), bracket_by_expansion(M, u, v)));
    CHECK(equal<F5>(M.bracket(u, v), Vec<F5>(-M.bracket(v, u))));
  }
}

TEST_CASE("p-map of arbitrary elements") {
  using F2 = Fp<2>;
  EnvAlgebra<F2> H(heisenberg<F2>());
  CHECK(equal<F2>(pmap(H, vec<F2>({1, 1, 0})), vec<F2>({0, 0, 1})));
  for (int i = 0; i < 3; ++i) CHECK(is_zero_vec<F2>(pmap(H, H.lie().basis_vector(i))));

  using R = RatFunc<2>;
  R t = R::t();
  EnvAlgebra<R> La(l_alpha<R>(t));
  std::mt19937_64 rng(9);
  for (int k = 0; k < 20; ++k) {
    R k1 = random_scalar<R>(rng), k2 = random_scalar<R>(rng), k3 = random_scalar<R>(rng);
    LieElement<R> u(3);
    u << k1, k2, k3;
    LieElement<R> expect = LieElement<R>::Zero(3);
    expect[2] = k1 * k1 * t + k2 * k2;
    CHECK(equal<R>(pmap(La, u), expect));
  }
}

template <class S>
void pmap_properties(const RestrictedLieAlgebra<S>& L, std::mt19937_64& rng) {
  EnvAlgebra<S> A(L);
  const int n = L.dim();
  for (int i = 0; i < n; ++i) CHECK(equal<S>(pmap(A, L.basis_vector(i)), L.basis_pmap(i)));
  for (int k = 0; k < 15; ++k) {
    LieElement<S> u(n), v(n);
    for (int i = 0; i < n; ++i) u[i] = random_scalar<S>(rng), v[i] = random_scalar<S>(rng);
    S lam = random_scalar<S>(rng);
    CHECK(equal<S>(pmap(A, LieElement<S>(lam * u)), LieElement<S>(frobenius(lam) * pmap(A, u))));
    if (L.is_abelian())
      CHECK(equal<S>(pmap(A, LieElement<S>(u + v)), LieElement<S>(pmap(A, u) + pmap(A, v))));
  }
}

TEST_CASE("p-map is p-semilinear, additive on abelian algebras") {
  std::mt19937_64 rng(13);
  pmap_properties(heisenberg<Fp<2>>(), rng);
  pmap_properties(powerful_xz<Fp<3>>(), rng);
  pmap_properties(l_alpha<RatFunc<2>>(RatFunc<2>::t()), rng);
  pmap_properties(l_alpha<RatFunc<3>>(RatFunc<3>::t()), rng);
  for (int k = 0; k < 5; ++k) pmap_properties(random_flag_algebra<Fp<3>>(3, rng), rng);
  for (int k = 0; k < 5; ++k) pmap_properties(random_flag_algebra<Fp<5>>(3, rng, true), rng);
}

TEST_CASE("exponent") {
  using F2 = Fp<2>;
  EnvAlgebra<F2> H(heisenberg<F2>());
  CHECK(exponent(H, vec<F2>({0, 0, 0})) == 0);
  CHECK(exponent(H, vec<F2>({1, 0, 0})) == 1);
  CHECK(exponent(H, vec<F2>({1, 1, 0})) == 2);  // (a+b)^[2] = c

  using R = RatFunc<2>;
  EnvAlgebra<R> La(l_alpha<R>(R::t()));
  CHECK(exponent(La, La.lie().basis_vector(0)) == 2);

  RestrictedLieAlgebra<Fp<3>> T({"x"});
  T.set_pmap(0, vec<Fp<3>>({1}));  // x^[3] = x, a torus
  EnvAlgebra<Fp<3>> TA(T);
  CHECK_THROWS_AS(exponent(TA, vec<Fp<3>>({1})), Error);
}

TEST_CASE("rebase preserves the algebra") {
  using F3 = Fp<3>;
  auto L = powerful_xz<F3>();
  EnvAlgebra<F3> A(L);
  Mat<F3> P(3, 3);
  P << F3(1), F3(0), F3(0), F3(1), F3(1), F3(0), F3(2), F3(0), F3(1);
  auto M = rebase(A, P, {"u", "v", "w"});
  CHECK(validate(M).ok());
  EnvAlgebra<F3> B(M);
  Mat<F3> Q = inverse<F3>(P);
  auto back = rebase(B, Q, {"x", "y", "z"});
  CHECK(back == L);
}

}  // TEST_SUITE
