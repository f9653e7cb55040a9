#pragma once

// Small algebras shared by the unit tests, built directly from tables.

#include <random>
#include <string>
#include <vector>

#include "rla/liealg.hpp"

namespace rla::test {

template <class S>
LieElement<S> vec(std::initializer_list<long long> xs) {
  LieElement<S> v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (long long x : xs) v[i++] = S(x);
  return v;
}

/// [a,b] = c, everything else zero.
template <class S>
RestrictedLieAlgebra<S> heisenberg() {
  RestrictedLieAlgebra<S> L({"a", "b", "c"});
  L.set_bracket(0, 1, vec<S>({0, 0, 1}));
  return L;
}

/// Abelian, zero p-map.
template <class S>
RestrictedLieAlgebra<S> abelian_zero(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('x' + i % 3)) + (i >= 3 ? std::to_string(i) : ""));
  return RestrictedLieAlgebra<S>(names);
}

/// x^[p] = alpha z, y^[p] = z, z^[p] = 0, abelian.
template <class S>
RestrictedLieAlgebra<S> l_alpha(const S& alpha) {
  RestrictedLieAlgebra<S> L({"x", "y", "z"});
  LieElement<S> v = LieElement<S>::Zero(3);
  v[2] = alpha;
  L.set_pmap(0, v);
  L.set_pmap(1, vec<S>({0, 0, 1}));
  return L;
}

/// [x,y] = z, x^[p] = z (powerful when p > 2).
template <class S>
RestrictedLieAlgebra<S> powerful_xz() {
  RestrictedLieAlgebra<S> L({"x", "y", "z"});
  L.set_bracket(0, 1, vec<S>({0, 0, 1}));
  L.set_pmap(0, vec<S>({0, 0, 1}));
  return L;
}

/// p = 2: [x,y] = w, x^[2] = v, v^[2] = w (powerful: [L,L] ⊆ L^[4]).
template <class S>
RestrictedLieAlgebra<S> powerful_p2() {
  RestrictedLieAlgebra<S> L({"x", "y", "v", "w"});
  L.set_bracket(0, 1, vec<S>({0, 0, 0, 1}));
  L.set_pmap(0, vec<S>({0, 0, 1, 0}));
  L.set_pmap(2, vec<S>({0, 0, 0, 1}));
  return L;
}

/// Random restricted Lie algebra with brackets and p-map strictly raising
/// the basis index; only tables passing validate() are returned, so the
/// result is p-nilpotent by construction.
template <class S>
RestrictedLieAlgebra<S> random_flag_algebra(int n, std::mt19937_64& rng, bool abelian = false,
                                            int density_percent = 50) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("e" + std::to_string(i + 1));
  auto coin = [&] { return static_cast<int>(rng() % 100) < density_percent; };
  auto rnd = [&] { return S(static_cast<long long>(rng() % S::characteristic)); };
  while (true) {
    RestrictedLieAlgebra<S> L(names);
    for (int i = 0; i < n; ++i) {
      LieElement<S> pm = LieElement<S>::Zero(n);
      for (int k = i + 1; k < n; ++k)
        if (coin()) pm[k] = rnd();
      L.set_pmap(i, pm);
      if (abelian) continue;
      for (int j = i + 1; j < n; ++j) {
        LieElement<S> br = LieElement<S>::Zero(n);
        for (int k = j + 1; k < n; ++k)
          if (coin()) br[k] = rnd();
        L.set_bracket(i, j, br);
      }
    }
    if (validate(L).ok()) return L;
  }
}

}  // namespace rla::test
