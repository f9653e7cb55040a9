#pragma once

// Abelian p-nilpotent algebras: cyclic decomposition over F_p, the
// truncated-polynomial basis of u(L) it yields, and the three-dimensional
// criterion x^[p] = alpha z, y^[p] = z, z^[p] = 0 over a non-perfect field.

#include <optional>
#include <string>
#include <vector>

#include "rla/env.hpp"
#include "rla/error.hpp"
#include "rla/linalg.hpp"
#include "rla/liealg.hpp"
#include "rla/pmap.hpp"

namespace rla {

template <class S>
struct CyclicDecomposition {
  std::vector<LieElement<S>> generators;
  std::vector<int> exponents;  // nonincreasing
};

namespace detail {

template <class S>
Mat<S> matrix_power(const Mat<S>& T, int k) {
  Mat<S> r = Mat<S>::Identity(T.rows(), T.cols());
  for (int i = 0; i < k; ++i) r = T * r;
  return r;
}

template <class S>
Subspace<S> column_kernel(const Mat<S>& M) {
  return Subspace<S>::span(Mat<S>(kernel<S>(M).transpose()));
}

}  // namespace detail

/// Over F_p the p-map of an abelian algebra is a linear nilpotent operator T
/// (its matrix is the p-map table). Blocks are read off from the kernels of
/// T^k, largest first: at level k pick the lowest-index echelon vectors of
/// ker T^k completing ker T^{k-1} + T(ker T^{k+1}).
template <class S>
CyclicDecomposition<S> decompose(const RestrictedLieAlgebra<S>& L) {
  if (!L.is_abelian()) throw Error(ErrorKind::NotAbelian, "decompose needs an abelian algebra");
  if constexpr (!S::is_prime_field) {
    throw Error(ErrorKind::NotPrimeField, "cyclic decomposition is implemented over F_p only");
  } else {
    const int n = L.dim();
    const Mat<S>& T = L.pmap_table();
    std::vector<Subspace<S>> ker{Subspace<S>(n)};  // ker[k] = ker T^k
    int top = 0;
    while (ker.back().dim() < n) {
      if (top == n) throw Error(ErrorKind::NotPNilpotent, "p-map is not nilpotent");
      ++top;
      ker.push_back(detail::column_kernel<S>(detail::matrix_power<S>(T, top)));
      if (ker.back().dim() == ker[ker.size() - 2].dim())
        throw Error(ErrorKind::NotPNilpotent, "p-map is not nilpotent");
    }
    CyclicDecomposition<S> dec;
    for (int k = top; k >= 1; --k) {
      EchelonBuilder<S> eb(n);
      const Subspace<S>& below = ker[static_cast<std::size_t>(k - 1)];
      for (int r = 0; r < below.dim(); ++r) eb.add(below.basis_vector(r));
      if (k < top) {
        const Subspace<S>& above = ker[static_cast<std::size_t>(k + 1)];
        for (int r = 0; r < above.dim(); ++r) eb.add(T * above.basis_vector(r));
      }
      const Subspace<S>& here = ker[static_cast<std::size_t>(k)];
      for (int r = 0; r < here.dim(); ++r)
        if (eb.add(here.basis_vector(r))) {
          dec.generators.push_back(here.basis_vector(r));
          dec.exponents.push_back(k);
        }
    }
    return dec;
  }
}

/// Spanning vectors g, g^[p], ..., g^{[p]^{e-1}} of every block, in order.
template <class S>
std::vector<LieElement<S>> block_vectors(const EnvAlgebra<S>& A, const CyclicDecomposition<S>& dec) {
  std::vector<LieElement<S>> out;
  for (std::size_t i = 0; i < dec.generators.size(); ++i) {
    LieElement<S> g = dec.generators[i];
    for (int k = 0; k < dec.exponents[i]; ++k) {
      out.push_back(g);
      g = pmap(A, g);
    }
  }
  return out;
}

/// The blocks are cyclic of the stated exponents and their sum is direct
/// and all of L.
template <class S>
bool is_valid_decomposition(const EnvAlgebra<S>& A, const CyclicDecomposition<S>& dec) {
  if (dec.generators.size() != dec.exponents.size()) return false;
  for (std::size_t i = 0; i < dec.generators.size(); ++i)
    if (exponent(A, dec.generators[i]) != dec.exponents[i]) return false;
  auto vs = block_vectors(A, dec);
  if (static_cast<int>(vs.size()) != A.lie_dim()) return false;
  return Subspace<S>::span(std::span<const Vec<S>>(vs), A.lie_dim()).dim() == A.lie_dim();
}

/// Exponent tuples a with 0 <= a_i < p^{e_i}, first coordinate fastest.
template <class S>
std::vector<std::vector<int>> truncated_exponents(const CyclicDecomposition<S>& dec) {
  std::vector<int> bound;
  for (int e : dec.exponents) {
    int b = 1;
    for (int k = 0; k < e; ++k) b *= S::characteristic;
    bound.push_back(b);
  }
  std::vector<std::vector<int>> out;
  std::vector<int> a(bound.size(), 0);
  while (true) {
    out.push_back(a);
    std::size_t k = 0;
    while (k < a.size() && ++a[k] == bound[k]) a[k++] = 0;
    if (k == a.size()) break;
  }
  return out;
}

/// All monomials g_1^{a_1} ... g_k^{a_k}, 0 <= a_i < p^{e_i}, as elements of
/// u(L); the order follows truncated_exponents, so 1 comes first.
template <class S>
std::vector<EnvElement<S>> monomial_fmb(const EnvAlgebra<S>& A, const CyclicDecomposition<S>& dec) {
  std::vector<EnvElement<S>> gens;
  for (const auto& g : dec.generators) gens.push_back(A.embed(g));
  std::vector<EnvElement<S>> out;
  for (const auto& a : truncated_exponents(dec)) {
    EnvElement<S> m = A.one();
    for (std::size_t i = 0; i < a.size(); ++i)
      m = A.mul(m, A.power(gens[i], static_cast<unsigned long long>(a[i])));
    out.push_back(std::move(m));
  }
  return out;
}

/// Number of monomial pairs whose product disagrees with
/// F[X_1..X_k]/(X_i^{p^{e_i}}): X^a X^b = X^{a+b}, or 0 past a bound.
template <class S>
int truncated_polynomial_mismatches(const EnvAlgebra<S>& A, const CyclicDecomposition<S>& dec) {
  auto expos = truncated_exponents(dec);
  auto basis = monomial_fmb(A, dec);
  std::vector<int> bound;
  for (int e : dec.exponents) {
    int b = 1;
    for (int k = 0; k < e; ++k) b *= S::characteristic;
    bound.push_back(b);
  }
  auto position = [&](const std::vector<int>& a) {
    int idx = 0, radix = 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
      idx += a[i] * radix;
      radix *= bound[i];
    }
    return idx;
  };
  int bad = 0;
  for (std::size_t x = 0; x < expos.size(); ++x)
    for (std::size_t y = 0; y < expos.size(); ++y) {
      std::vector<int> s(expos[x].size());
      bool vanishes = false;
      for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = expos[x][i] + expos[y][i];
        if (s[i] >= bound[i]) vanishes = true;
      }
      EnvElement<S> prod = A.mul(basis[x], basis[y]);
      bool ok = vanishes ? is_zero_vec<S>(prod)
                         : equal<S>(prod, basis[static_cast<std::size_t>(position(s))]);
      if (!ok) ++bad;
    }
  return bad;
}

// ---------------------------------------------------------------------------

template <class S>
struct ExampleShapeDecision {
  bool has_decomposition = false;
  int x = 0, y = 1, z = 2;  // basis indices matched to the pattern
  S alpha;
  std::optional<S> root;                           // alpha = root^p
  std::optional<CyclicDecomposition<S>> decomposition;  // <y> + <x - root*y>
  std::string reason;
};

/// Matches x^[p] = alpha z, y^[p] = z, z^[p] = 0 on an abelian three-dimensional
/// algebra (any assignment of basis vectors to x, y, z; the first match in
/// index order is used).
template <class S>
ExampleShapeDecision<S> example_shape_criterion(const RestrictedLieAlgebra<S>& L) {
  if (!L.is_abelian() || L.dim() != 3)
    throw Error(ErrorKind::ShapeMismatch, "expected an abelian algebra of dimension 3");
  const int p = S::characteristic;
  auto multiple_of = [&](const LieElement<S>& v, int z) -> std::optional<S> {
    for (int i = 0; i < 3; ++i)
      if (i != z && !v[i].is_zero()) return std::nullopt;
    return v[z];
  };
  for (int z = 0; z < 3; ++z) {
    if (!is_zero_vec<S>(L.basis_pmap(z))) continue;
    for (int y = 0; y < 3; ++y) {
      if (y == z) continue;
      auto c = multiple_of(L.basis_pmap(y), z);
      if (!c || !(*c == S(1))) continue;
      const int x = 3 - y - z;
      auto alpha = multiple_of(L.basis_pmap(x), z);
      if (!alpha) continue;
      ExampleShapeDecision<S> d;
      d.x = x;
      d.y = y;
      d.z = z;
      d.alpha = *alpha;
      d.root = pth_root(*alpha);
      d.has_decomposition = d.root.has_value();
      if (d.has_decomposition) {
        LieElement<S> gy = L.basis_vector(y);
        LieElement<S> gx = L.basis_vector(x) - *d.root * gy;
        d.decomposition = CyclicDecomposition<S>{{gy, gx}, {2, 1}};
        const std::string a(detail::unparen(to_string(*alpha))), r(detail::unparen(to_string(*d.root)));
        d.reason = a + " = (" + r + ")^" + std::to_string(p) + "; L = <" + L.name(y) + ">_p + <" + L.name(x) +
                   " - (" + r + ")*" + L.name(y) + ">_p";
      } else {
        const std::string a(detail::unparen(to_string(*alpha)));
        d.reason = a + " is not a p-th power in " + S::field_name() + ": b^[p] = (k1^p*(" + a + ") + k2^p)*" +
                   L.name(z) +
                   " = 0 forces k1 = k2 = 0, so L is not a sum of cyclic restricted subalgebras";
      }
      return d;
    }
  }
  throw Error(ErrorKind::ShapeMismatch, "p-map does not match x^[p] = a*z, y^[p] = z, z^[p] = 0");
}

}  // namespace rla
