#pragma once

// The p-map on arbitrary elements, computed as the associative p-th power of
// the embedded element in u(L).

#include <string>

#include "rla/env.hpp"
#include "rla/error.hpp"
#include "rla/liealg.hpp"

namespace rla {

template <class S>
LieElement<S> pmap(const EnvAlgebra<S>& A, const LieElement<S>& u) {
  auto w = A.project_to_L(A.power(A.embed(u), static_cast<unsigned long long>(S::characteristic)));
  if (!w)
    throw Error(ErrorKind::InternalInconsistency,
                "associative p-th power of a Lie element is not in L");
  return *w;
}

/// u^{[p]^k}.
template <class S>
LieElement<S> pmap_iterate(const EnvAlgebra<S>& A, LieElement<S> u, int k) {
  for (int i = 0; i < k; ++i) u = pmap(A, u);
  return u;
}

/// Least k with u^{[p]^k} = 0; e(0) = 0.
template <class S>
int exponent(const EnvAlgebra<S>& A, LieElement<S> u) {
  const int bound = A.lie_dim();
  for (int k = 0; k <= bound; ++k) {
    if (is_zero_vec<S>(u)) return k;
    u = pmap(A, u);
  }
  throw Error(ErrorKind::NotPNilpotent, "element is not p-nilpotent");
}

/// The same algebra presented in the basis given by the columns of `basis`
/// (which must be invertible). Names are taken from `names`.
template <class S>
RestrictedLieAlgebra<S> rebase(const EnvAlgebra<S>& A, const Mat<S>& basis,
                               std::vector<std::string> names) {
  const RestrictedLieAlgebra<S>& L = A.lie();
  const int n = L.dim();
  if (basis.rows() != n || basis.cols() != n || static_cast<int>(names.size()) != n)
    throw Error(ErrorKind::DimensionMismatch, "rebase");
  if (rref<S>(basis).rank() != n) throw Error(ErrorKind::DimensionMismatch, "rebase: singular basis");
  auto coords = [&](const LieElement<S>& v) {
    auto x = solve<S>(basis, v);
    return *x;
  };
  RestrictedLieAlgebra<S> out(std::move(names));
  for (int i = 0; i < n; ++i) {
    LieElement<S> bi = basis.col(i);
    for (int j = i + 1; j < n; ++j) {
      LieElement<S> bj = basis.col(j);
      out.set_bracket(i, j, coords(L.bracket(bi, bj)));
    }
    out.set_pmap(i, coords(pmap(A, bi)));
  }
  return out;
}

}  // namespace rla
