#pragma once

// The restricted enveloping algebra u(L) in its PBW basis
//   x_1^{e_1} ... x_n^{e_n},  0 <= e_i < p,
// indexed in mixed radix with x_1 least significant. Elements are dense
// coordinate vectors of length p^n, which makes their representation
// canonical.

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rla/error.hpp"
#include "rla/field.hpp"
#include "rla/liealg.hpp"
#include "rla/linalg.hpp"

namespace rla {

template <class S>
using EnvElement = Vec<S>;

template <class S>
std::size_t hash_vec(const Vec<S>& v) {
  std::size_t h = 1469598103934665603ULL;
  for (Eigen::Index i = 0; i < v.size(); ++i) h = (h ^ hash_value(v[i])) * 1099511628211ULL;
  return h;
}

template <class S>
struct VecHash {
  std::size_t operator()(const Vec<S>& v) const { return hash_vec<S>(v); }
};
template <class S>
struct VecEq {
  bool operator()(const Vec<S>& a, const Vec<S>& b) const { return equal<S>(a, b); }
};

template <class S>
class EnvAlgebra {
 public:
  static constexpr int p = S::characteristic;
  /// Above this dimension only the generator table is kept.
  static constexpr int kFullTableLimit = 1024;

  explicit EnvAlgebra(RestrictedLieAlgebra<S> L) : L_(std::move(L)) {
    n_ = L_.dim();
    N_ = 1;
    radix_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      radix_[static_cast<std::size_t>(i)] = N_;
      if (N_ > (1 << 22) / p) throw Error(ErrorKind::Unsupported, "u(L) too large");
      N_ *= p;
    }
    build_generator_table();
    if (N_ <= kFullTableLimit) build_full_table();
  }

  const RestrictedLieAlgebra<S>& lie() const { return L_; }
  int lie_dim() const { return n_; }
  int dim() const { return N_; }

  // -- monomials ------------------------------------------------------------

  std::vector<int> exponents(int idx) const {
    std::vector<int> e(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      e[static_cast<std::size_t>(i)] = idx % p;
      idx /= p;
    }
    return e;
  }
  int index_of(const std::vector<int>& e) const {
    int idx = 0;
    for (int i = 0; i < n_; ++i) idx += e[static_cast<std::size_t>(i)] * radix_[static_cast<std::size_t>(i)];
    return idx;
  }
  int degree(int idx) const {
    int d = 0;
    for (int e : exponents(idx)) d += e;
    return d;
  }
  int generator_index(int i) const { return radix_[static_cast<std::size_t>(i)]; }

  EnvElement<S> zero() const { return EnvElement<S>::Zero(N_); }
  EnvElement<S> one() const { return unit_vector<S>(N_, 0); }
  EnvElement<S> monomial(int idx) const { return unit_vector<S>(N_, idx); }

  // -- L inside u(L) --------------------------------------------------------

  EnvElement<S> embed(const LieElement<S>& u) const {
    if (u.size() != n_) throw Error(ErrorKind::DimensionMismatch, "embed");
    EnvElement<S> r = zero();
    for (int i = 0; i < n_; ++i) r[generator_index(i)] = u[i];
    return r;
  }

  /// The Lie element when every term is a single generator, else nullopt.
  std::optional<LieElement<S>> project_to_L(const EnvElement<S>& a) const {
    check(a);
    LieElement<S> u = LieElement<S>::Zero(n_);
    for (int idx = 0; idx < N_; ++idx) {
      if (a[idx].is_zero()) continue;
      auto e = exponents(idx);
      int gen = -1, deg = 0;
      for (int i = 0; i < n_; ++i) {
        deg += e[static_cast<std::size_t>(i)];
        if (e[static_cast<std::size_t>(i)] == 1) gen = i;
      }
      if (deg != 1) return std::nullopt;
      u[gen] = a[idx];
    }
    return u;
  }

  // -- products -------------------------------------------------------------

  /// a · x_j.
  EnvElement<S> mul_generator(const EnvElement<S>& a, int j) const {
    check(a);
    EnvElement<S> r = zero();
    for (int m = 0; m < N_; ++m)
      if (!a[m].is_zero()) axpy(r, a[m], gen_table_[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)]);
    return r;
  }

  EnvElement<S> mul(const EnvElement<S>& a, const EnvElement<S>& b) const {
    check(a);
    check(b);
    EnvElement<S> r = zero();
    if (!full_.empty()) {
      std::vector<int> sa, sb;
      for (int i = 0; i < N_; ++i) {
        if (!a[i].is_zero()) sa.push_back(i);
        if (!b[i].is_zero()) sb.push_back(i);
      }
      for (int i : sa)
        for (int j : sb) axpy(r, a[i] * b[j], full_[static_cast<std::size_t>(i) * N_ + j]);
      return r;
    }
    for (int m = 0; m < N_; ++m) {
      if (b[m].is_zero()) continue;
      EnvElement<S> v = a;
      auto e = exponents(m);
      for (int i = 0; i < n_; ++i)
        for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k) v = mul_generator(v, i);
      r += b[m] * v;
    }
    return r;
  }

  /// Product of two PBW monomials.
  EnvElement<S> mul_monomials(int i, int j) const {
    if (!full_.empty()) {
      EnvElement<S> r = zero();
      axpy(r, S(1), full_[static_cast<std::size_t>(i) * N_ + j]);
      return r;
    }
    return mul(monomial(i), monomial(j));
  }

  EnvElement<S> power(EnvElement<S> a, unsigned long long k) const {
    check(a);
    EnvElement<S> r = one();
    while (k) {
      if (k & 1u) r = mul(r, a);
      k >>= 1u;
      if (k) a = mul(a, a);
    }
    return r;
  }

  /// ω(L) = span of the nonunit PBW monomials.
  bool in_augmentation_ideal(const EnvElement<S>& a) const { return a[0].is_zero(); }

 private:
  using SparseCol = std::vector<std::pair<int, S>>;

  void check(const EnvElement<S>& a) const {
    if (a.size() != N_) throw Error(ErrorKind::DimensionMismatch, "element is not in this u(L)");
  }
  static void axpy(EnvElement<S>& r, const S& s, const SparseCol& col) {
    for (const auto& [k, c] : col) r[k] += s * c;
  }
  static SparseCol sparse(const EnvElement<S>& v) {
    SparseCol c;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (!v[i].is_zero()) c.emplace_back(static_cast<int>(i), v[i]);
    return c;
  }

  // m · x_j by straightening, memoized. For m with largest occurring index k:
  //   k <  j : append x_j
  //   k == j : raise the exponent; x_j^p is replaced by x_j^[p]
  //   k >  j : m = m'' x_k, so m x_j = (m'' x_j) x_k + m'' [x_k, x_j]
  EnvElement<S> right_gen(int m, int j) {
    auto& slot = memo_[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)];
    if (state_[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] == 2) {
      EnvElement<S> r = zero();
      axpy(r, S(1), slot);
      return r;
    }
    if (state_[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] == 1)
      throw Error(ErrorKind::InternalInconsistency, "straightening did not terminate");
    state_[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] = 1;

    auto e = exponents(m);
    int k = -1;
    for (int i = n_ - 1; i >= 0; --i)
      if (e[static_cast<std::size_t>(i)] > 0) {
        k = i;
        break;
      }
    EnvElement<S> r = zero();
    if (k < j) {
      e[static_cast<std::size_t>(j)] = 1;
      r[index_of(e)] = S(1);
    } else if (k == j) {
      if (e[static_cast<std::size_t>(j)] + 1 < p) {
        e[static_cast<std::size_t>(j)] += 1;
        r[index_of(e)] = S(1);
      } else {
        e[static_cast<std::size_t>(j)] = 0;
        int mp = index_of(e);
        LieElement<S> pi = L_.basis_pmap(j);
        for (int l = 0; l < n_; ++l)
          if (!pi[l].is_zero()) r += pi[l] * right_gen(mp, l);
      }
    } else {
      e[static_cast<std::size_t>(k)] -= 1;
      int mpp = index_of(e);
      EnvElement<S> t = right_gen(mpp, j);
      for (int q = 0; q < N_; ++q)
        if (!t[q].is_zero()) r += t[q] * right_gen(q, k);
      LieElement<S> c = L_.basis_bracket(k, j);
      for (int l = 0; l < n_; ++l)
        if (!c[l].is_zero()) r += c[l] * right_gen(mpp, l);
    }
    slot = sparse(r);
    state_[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] = 2;
    return r;
  }

  void build_generator_table() {
    memo_.assign(static_cast<std::size_t>(n_), std::vector<SparseCol>(static_cast<std::size_t>(N_)));
    state_.assign(static_cast<std::size_t>(n_), std::vector<std::uint8_t>(static_cast<std::size_t>(N_), 0));
    for (int m = 0; m < N_; ++m)
      for (int j = 0; j < n_; ++j) right_gen(m, j);
    gen_table_ = std::move(memo_);
    memo_.clear();
    state_.clear();
  }

  // full_[i*N + j] = (monomial i)(monomial j), folded over the generator word of j.
  void build_full_table() {
    full_.assign(static_cast<std::size_t>(N_) * N_, {});
    for (int i = 0; i < N_; ++i) {
      full_[static_cast<std::size_t>(i) * N_] = {{i, S(1)}};
      for (int j = 1; j < N_; ++j) {
        auto e = exponents(j);
        int last = n_ - 1;
        while (e[static_cast<std::size_t>(last)] == 0) --last;
        e[static_cast<std::size_t>(last)] -= 1;
        const SparseCol& prev = full_[static_cast<std::size_t>(i) * N_ + index_of(e)];
        EnvElement<S> r = zero();
        for (const auto& [q, c] : prev) axpy(r, c, gen_table_[static_cast<std::size_t>(last)][static_cast<std::size_t>(q)]);
        full_[static_cast<std::size_t>(i) * N_ + j] = sparse(r);
      }
    }
  }

  RestrictedLieAlgebra<S> L_;
  int n_ = 0;
  int N_ = 1;
  std::vector<int> radix_;
  std::vector<std::vector<SparseCol>> memo_;
  std::vector<std::vector<std::uint8_t>> state_;
  std::vector<std::vector<SparseCol>> gen_table_;  // [j][m] = m · x_j
  std::vector<SparseCol> full_;
};

/// ω(L)^m by definition: W_1 = span of nonunit monomials and
/// W_{m+1} = span{ g w : g nonunit monomial, w in a basis of W_m }.
/// The returned chain ends with the zero subspace.
template <class S>
std::vector<Subspace<S>> omega_powers_oracle(const EnvAlgebra<S>& A) {
  const int N = A.dim();
  std::vector<Subspace<S>> chain;
  Mat<S> w1 = Mat<S>::Zero(N - 1, N);
  for (int i = 1; i < N; ++i) w1(i - 1, i) = S(1);
  chain.push_back(Subspace<S>::span(w1));
  for (int step = 0; step <= N; ++step) {
    const Subspace<S>& cur = chain.back();
    if (cur.is_zero()) return chain;
    std::vector<Vec<S>> prods;
    for (int g = 1; g < N; ++g)
      for (int k = 0; k < cur.dim(); ++k) {
        Vec<S> v = A.mul(A.monomial(g), cur.basis_vector(k));
        if (!is_zero_vec<S>(v)) prods.push_back(std::move(v));
      }
    Subspace<S> next = Subspace<S>::span(std::span<const Vec<S>>(prods), N);
    if (next == cur) throw Error(ErrorKind::NotPNilpotent, "ω(L) powers stabilize at a nonzero subspace");
    chain.push_back(std::move(next));
  }
  throw Error(ErrorKind::NotPNilpotent, "ω(L) powers do not reach 0");
}

// -- text rendering -----------------------------------------------------------

template <class S>
std::string render_monomial(const EnvAlgebra<S>& A, int idx) {
  if (idx == 0) return "1";
  auto e = A.exponents(idx);
  std::string s;
  for (int i = 0; i < A.lie_dim(); ++i) {
    int k = e[static_cast<std::size_t>(i)];
    if (k == 0) continue;
    if (!s.empty()) s += "*";
    s += A.lie().name(i);
    if (k > 1) s += "^" + std::to_string(k);
  }
  return s;
}

/// Terms in PBW index order, e.g. "a*b + c", "2*x^2 + (t)*z"; "0" for zero.
template <class S>
std::string render(const EnvAlgebra<S>& A, const EnvElement<S>& a) {
  std::string s;
  for (int idx = 0; idx < A.dim(); ++idx) {
    if (a[idx].is_zero()) continue;
    if (!s.empty()) s += " + ";
    std::string mono = render_monomial(A, idx);
    if (a[idx] == S(1))
      s += mono;
    else if (idx == 0)
      s += to_string(a[idx]);
    else
      s += to_string(a[idx]) + "*" + mono;
  }
  return s.empty() ? "0" : s;
}

template <class S>
std::string render_lie(const RestrictedLieAlgebra<S>& L, const LieElement<S>& u) {
  std::string s;
  for (int i = 0; i < L.dim(); ++i) {
    if (u[i].is_zero()) continue;
    if (!s.empty()) s += " + ";
    if (u[i] == S(1))
      s += L.name(i);
    else
      s += to_string(u[i]) + "*" + L.name(i);
  }
  return s.empty() ? "0" : s;
}

}  // namespace rla
