#pragma once

// Structure theory of a restricted Lie algebra: lower central series,
// restricted subalgebras generated by p-power images, the dimension
// subalgebras D_m(L) = sum_{i p^j >= m} gamma_i(L)^{[p]^j}, heights, and the
// induced grading of u(L) by PBW monomials in a height-adapted basis.

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rla/env.hpp"
#include "rla/linalg.hpp"
#include "rla/liealg.hpp"
#include "rla/pmap.hpp"

namespace rla {

/// Smallest subspace containing `gens` that is closed under the bracket and
/// the p-map. Saturation over an echelon basis: it suffices to add brackets
/// of basis pairs and p-th powers of basis vectors.
template <class S>
Subspace<S> restricted_closure(const EnvAlgebra<S>& A, std::span<const LieElement<S>> gens) {
  const RestrictedLieAlgebra<S>& L = A.lie();
  EchelonBuilder<S> eb(L.dim());
  std::vector<LieElement<S>> basis;
  auto push = [&](const LieElement<S>& v) {
    if (eb.add(v)) basis.push_back(v);
  };
  for (const auto& g : gens) push(g);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) push(L.bracket(basis[i], basis[j]));
    push(pmap(A, LieElement<S>(basis[i])));
  }
  return eb.subspace();
}

template <class S>
Subspace<S> restricted_closure(const EnvAlgebra<S>& A, const Subspace<S>& V) {
  std::vector<LieElement<S>> gens;
  for (int i = 0; i < V.dim(); ++i) gens.push_back(V.basis_vector(i));
  return restricted_closure(A, std::span<const LieElement<S>>(gens));
}

/// gamma_1 = L, gamma_{i+1} = [gamma_i, L]; ends at 0 or at the first
/// repeated term.
template <class S>
std::vector<Subspace<S>> lower_central_series(const RestrictedLieAlgebra<S>& L) {
  const int n = L.dim();
  std::vector<Subspace<S>> chain{Subspace<S>::full(n)};
  while (!chain.back().is_zero()) {
    const Subspace<S>& g = chain.back();
    std::vector<Vec<S>> brs;
    for (int a = 0; a < g.dim(); ++a)
      for (int k = 0; k < n; ++k) brs.push_back(L.bracket(g.basis_vector(a), L.basis_vector(k)));
    Subspace<S> next = Subspace<S>::span(std::span<const Vec<S>>(brs), n);
    if (next == g) break;
    chain.push_back(std::move(next));
  }
  return chain;
}

namespace detail {

// Every element of V when the field is finite; otherwise the grid
// S_pts^{dim V} in coordinates of V's basis, which is enough to span the
// image of a polynomial map of degree < |S_pts| in each coordinate.
template <class S>
std::vector<LieElement<S>> grid_points(const Subspace<S>& V, int degree_bound) {
  std::vector<S> pts = sample_points<S>(degree_bound + 1);
  const int d = V.dim();
  std::vector<LieElement<S>> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    LieElement<S> v = LieElement<S>::Zero(V.ambient_dim());
    for (int k = 0; k < d; ++k)
      if (!pts[idx[static_cast<std::size_t>(k)]].is_zero()) v += pts[idx[static_cast<std::size_t>(k)]] * V.basis_vector(k);
    out.push_back(std::move(v));
    int k = 0;
    while (k < d && ++idx[static_cast<std::size_t>(k)] == pts.size()) idx[static_cast<std::size_t>(k++)] = 0;
    if (k == d) break;
  }
  return out;
}

}  // namespace detail

/// For j = 0, 1, ..., the restricted subalgebra generated by
/// { x^{[p]^j} : x in V }. Stops after the first zero term, or after
/// `max_j` when the images never vanish.
template <class S>
std::vector<Subspace<S>> pth_power_subalgebras(const EnvAlgebra<S>& A, const Subspace<S>& V, int max_j) {
  std::vector<Subspace<S>> out{restricted_closure(A, V)};
  if (V.is_zero()) return out;
  if constexpr (S::is_prime_field) {
    std::vector<LieElement<S>> pts = detail::grid_points(V, 0);
    for (int j = 1; j <= max_j; ++j) {
      for (auto& x : pts) x = pmap(A, x);
      out.push_back(restricted_closure(A, std::span<const LieElement<S>>(pts)));
      if (out.back().is_zero()) break;
    }
  } else {
    long long deg = 1;
    for (int j = 1; j <= max_j; ++j) {
      deg *= S::characteristic;
      std::vector<LieElement<S>> pts = detail::grid_points(V, static_cast<int>(deg));
      for (auto& x : pts) x = pmap_iterate(A, x, j);
      out.push_back(restricted_closure(A, std::span<const LieElement<S>>(pts)));
      if (out.back().is_zero()) break;
    }
  }
  return out;
}

template <class S>
struct FiltrationData {
  std::vector<Subspace<S>> gamma;                    // gamma[i-1] = gamma_i(L)
  std::vector<std::vector<Subspace<S>>> pth_powers;  // pth_powers[i-1][j] = gamma_i^{[p]^j}
  std::vector<Subspace<S>> dim_subalgebras;          // [m-1] = D_m(L), ends with 0 when p-nilpotent
  Mat<S> adapted_basis;                              // columns, ascending height
  std::vector<int> heights;                          // height of each adapted basis column
  bool p_nilpotent = false;

  /// D_m for any m >= 1 (0 beyond the recorded chain when p-nilpotent).
  const Subspace<S>& D(int m) const {
    std::size_t k = static_cast<std::size_t>(std::max(m, 1) - 1);
    return k < dim_subalgebras.size() ? dim_subalgebras[k] : dim_subalgebras.back();
  }
  /// L^{[p]^j}.
  Subspace<S> L_power(int j) const {
    const auto& row = pth_powers.front();
    if (j < static_cast<int>(row.size())) return row[static_cast<std::size_t>(j)];
    return Subspace<S>(row.front().ambient_dim());
  }
  /// Largest m with v in D_m; nullopt for v = 0.
  std::optional<int> height(const LieElement<S>& v) const {
    if (is_zero_vec<S>(v)) return std::nullopt;
    int h = 0;
    for (std::size_t m = 0; m < dim_subalgebras.size(); ++m)
      if (dim_subalgebras[m].contains(v)) h = static_cast<int>(m) + 1;
    return h;
  }
};

/// D_m(L) from the sum formula, plus a height-adapted basis built from the
/// deepest subalgebra outwards.
template <class S>
FiltrationData<S> dimension_subalgebras(const EnvAlgebra<S>& A) {
  const RestrictedLieAlgebra<S>& L = A.lie();
  const int n = L.dim();
  const int p = S::characteristic;
  FiltrationData<S> F;
  F.gamma = lower_central_series(L);
  const bool nilpotent = F.gamma.back().is_zero();
  const int max_j = n + 1;
  bool vanishing = nilpotent;
  for (const auto& g : F.gamma) {
    F.pth_powers.push_back(pth_power_subalgebras(A, g, max_j));
    if (!F.pth_powers.back().back().is_zero()) vanishing = false;
  }
  F.p_nilpotent = vanishing;

  // A term gamma_i^{[p]^j} counts towards D_m for m <= i p^j; chains that
  // never vanished count for every m.
  long long max_weight = 1;
  for (std::size_t i = 0; i < F.pth_powers.size(); ++i) {
    long long weight = static_cast<long long>(i) + 1;
    for (std::size_t j = 0; j < F.pth_powers[i].size(); ++j, weight *= p)
      if (!F.pth_powers[i][j].is_zero()) max_weight = std::max(max_weight, weight);
  }
  for (long long m = 1; m <= max_weight + 1; ++m) {
    Subspace<S> D(n);
    for (std::size_t i = 0; i < F.pth_powers.size(); ++i) {
      long long weight = static_cast<long long>(i) + 1;
      for (std::size_t j = 0; j < F.pth_powers[i].size(); ++j, weight *= p)
        if (weight >= m) D = sum(D, F.pth_powers[i][j]);
      if (!vanishing) D = sum(D, F.pth_powers[i].back());
    }
    F.dim_subalgebras.push_back(D);
    if (D.is_zero()) break;
  }

  // Adapted basis: for m from deepest to 1, extend an echelon basis of
  // D_{m+1} to one of D_m.
  EchelonBuilder<S> eb(n);
  std::vector<std::pair<int, LieElement<S>>> picked;
  for (int m = static_cast<int>(F.dim_subalgebras.size()); m >= 1; --m) {
    const Subspace<S>& D = F.dim_subalgebras[static_cast<std::size_t>(m - 1)];
    for (int r = 0; r < D.dim(); ++r)
      if (eb.add(D.basis_vector(r))) picked.emplace_back(m, D.basis_vector(r));
  }
  std::stable_sort(picked.begin(), picked.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  F.adapted_basis = Mat<S>::Zero(n, static_cast<Eigen::Index>(picked.size()));
  for (std::size_t k = 0; k < picked.size(); ++k) {
    F.adapted_basis.col(static_cast<Eigen::Index>(k)) = picked[k].second;
    F.heights.push_back(picked[k].first);
  }
  return F;
}

// ---------------------------------------------------------------------------
// Grading of u(L) by monomials y^a = y_1^{a_1} ... y_n^{a_n} in the adapted
// basis, weight(a) = sum a_i nu(y_i). Then omega^k is spanned by the y^a of
// weight >= k, and those of weight exactly k are a basis modulo omega^{k+1}.

template <class S>
struct OmegaGrading {
  Mat<S> Y;                // columns y^a in PBW coordinates
  Mat<S> Yinv;             // PBW coordinates -> graded coordinates
  std::vector<int> weight; // weight of each y^a, indexed like PBW monomials
  int max_weight = 0;
  std::vector<Subspace<S>> chain;  // chain[k-1] = omega^k, ends with 0
  std::vector<int> layer_dims;     // layer_dims[k] = dim omega^k / omega^{k+1}

  Vec<S> to_graded(const Vec<S>& v) const { return Yinv * v; }
  Vec<S> from_graded(const Vec<S>& g) const { return Y * g; }

  /// Least weight in the support of v's graded coordinates (-1 for 0).
  int layer(const Vec<S>& v) const {
    Vec<S> g = to_graded(v);
    int best = -1;
    for (Eigen::Index i = 0; i < g.size(); ++i)
      if (!g[i].is_zero() && (best < 0 || weight[static_cast<std::size_t>(i)] < best))
        best = weight[static_cast<std::size_t>(i)];
    return best;
  }

  const Subspace<S>& omega(int k) const {
    std::size_t i = static_cast<std::size_t>(std::max(k, 1) - 1);
    return i < chain.size() ? chain[i] : chain.back();
  }
};

template <class S>
OmegaGrading<S> omega_powers_fast(const EnvAlgebra<S>& A, const FiltrationData<S>& F) {
  if (!F.p_nilpotent) throw Error(ErrorKind::NotPNilpotent, "grading needs a p-nilpotent algebra");
  const int n = A.lie_dim();
  const int N = A.dim();
  OmegaGrading<S> G;
  G.Y = Mat<S>::Zero(N, N);
  G.weight.assign(static_cast<std::size_t>(N), 0);
  std::vector<EnvElement<S>> gens;
  for (int i = 0; i < n; ++i) gens.push_back(A.embed(F.adapted_basis.col(i)));
  for (int a = 0; a < N; ++a) {
    auto e = A.exponents(a);
    EnvElement<S> y = A.one();
    int w = 0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k) {
        y = A.mul(y, gens[static_cast<std::size_t>(i)]);
        w += F.heights[static_cast<std::size_t>(i)];
      }
    G.Y.col(a) = y;
    G.weight[static_cast<std::size_t>(a)] = w;
    G.max_weight = std::max(G.max_weight, w);
  }
  G.Yinv = inverse<S>(G.Y);
  G.layer_dims.assign(static_cast<std::size_t>(G.max_weight) + 1, 0);
  for (int w : G.weight) ++G.layer_dims[static_cast<std::size_t>(w)];
  for (int k = 1; k <= G.max_weight + 1; ++k) {
    std::vector<Vec<S>> cols;
    for (int a = 0; a < N; ++a)
      if (G.weight[static_cast<std::size_t>(a)] >= k) cols.push_back(G.Y.col(a));
    G.chain.push_back(Subspace<S>::span(std::span<const Vec<S>>(cols), N));
  }
  return G;
}

// ---------------------------------------------------------------------------

template <class S>
struct StructReport {
  bool is_abelian = false;
  std::optional<int> nilpotency_class;  // nullopt when not nilpotent
  bool is_p_nilpotent = false;
  bool is_powerful = false;
  Mat<S> minimal_generators;  // columns: lifts of a basis of L / D_2(L)
};

template <class S>
StructReport<S> predicates(const EnvAlgebra<S>& A, const FiltrationData<S>& F) {
  StructReport<S> r;
  r.is_abelian = A.lie().is_abelian();
  if (F.gamma.back().is_zero()) {
    int c = static_cast<int>(F.gamma.size()) - 1;
    r.nilpotency_class = c;
  }
  r.is_p_nilpotent = F.p_nilpotent;
  const Subspace<S> derived = F.gamma.size() > 1 ? F.gamma[1] : Subspace<S>(A.lie_dim());
  const int j = S::characteristic == 2 ? 2 : 1;
  r.is_powerful = F.L_power(j).contains(derived);
  int gens = 0;
  while (gens < static_cast<int>(F.heights.size()) && F.heights[static_cast<std::size_t>(gens)] == 1) ++gens;
  r.minimal_generators = F.adapted_basis.leftCols(gens);
  return r;
}

/// Everything downstream needs about one algebra.
template <class S>
struct Analysis {
  explicit Analysis(RestrictedLieAlgebra<S> L)
      : env(std::move(L)), filtration(dimension_subalgebras(env)), report(predicates(env, filtration)) {
    if (filtration.p_nilpotent) grading = omega_powers_fast(env, filtration);
  }
  const RestrictedLieAlgebra<S>& lie() const { return env.lie(); }

  EnvAlgebra<S> env;
  FiltrationData<S> filtration;
  StructReport<S> report;
  std::optional<OmegaGrading<S>> grading;
};

}  // namespace rla
