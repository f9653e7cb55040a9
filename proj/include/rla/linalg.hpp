#pragma once

// Exact linear algebra over a FieldScalar: reduced row echelon forms and the
// subspace lattice. Subspaces are stored canonically (RREF rows), so equality
// of subspaces is equality of matrices.

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

#include "rla/error.hpp"
#include "rla/field.hpp"

namespace rla {

template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <class S>
bool is_zero_vec(const Vec<S>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) return false;
  return true;
}

template <class S>
bool equal(const Mat<S>& a, const Mat<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!(a(i, j) == b(i, j))) return false;
  return true;
}

template <class S>
bool equal(const Vec<S>& a, const Vec<S>& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

template <class S>
Vec<S> unit_vector(int n, int i) {
  Vec<S> v = Vec<S>::Zero(n);
  v[i] = S(1);
  return v;
}

template <class S>
Mat<S> rows_to_matrix(std::span<const Vec<S>> rows, int ambient) {
  Mat<S> m = Mat<S>::Zero(static_cast<Eigen::Index>(rows.size()), ambient);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != ambient)
      throw Error(ErrorKind::DimensionMismatch, "row length differs from ambient dimension");
    m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return m;
}

template <class S>
struct Rref {
  Mat<S> rows;              // nonzero rows only, reduced
  std::vector<int> pivots;  // strictly increasing pivot columns
  int rank() const { return static_cast<int>(pivots.size()); }
};

namespace detail {

template <class S>
Rref<S> rref_dense(Mat<S> m) {
  const Eigen::Index nr = m.rows(), nc = m.cols();
  std::vector<int> pivots;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < nc && r < nr; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = r; i < nr; ++i)
      if (!m(i, c).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r) m.row(piv).swap(m.row(r));
    S inv = m(r, c).inverse();
    if (!(inv == S(1)))
      for (Eigen::Index j = c; j < nc; ++j) m(r, j) = m(r, j) * inv;
    for (Eigen::Index i = 0; i < nr; ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      S f = m(i, c);
      for (Eigen::Index j = c; j < nc; ++j)
        if (!m(r, j).is_zero()) m(i, j) = m(i, j) - f * m(r, j);
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return {m.topRows(r), std::move(pivots)};
}

// Rows packed into 64-bit words; elimination by XOR.
inline Rref<Fp<2>> rref_gf2(const Mat<Fp<2>>& m) {
  using S = Fp<2>;
  const int nr = static_cast<int>(m.rows()), nc = static_cast<int>(m.cols());
  const int words = (nc + 63) / 64;
  std::vector<std::uint64_t> bits(static_cast<std::size_t>(nr) * words, 0);
  auto row = [&](int i) { return bits.data() + static_cast<std::size_t>(i) * words; };
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j)
      if (!m(i, j).is_zero()) row(i)[j / 64] |= std::uint64_t{1} << (j % 64);
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < nc && r < nr; ++c) {
    const std::uint64_t mask = std::uint64_t{1} << (c % 64);
    const int w = c / 64;
    int piv = -1;
    for (int i = r; i < nr; ++i)
      if (row(i)[w] & mask) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int k = 0; k < words; ++k) std::swap(row(piv)[k], row(r)[k]);
    for (int i = 0; i < nr; ++i)
      if (i != r && (row(i)[w] & mask))
        for (int k = w; k < words; ++k) row(i)[k] ^= row(r)[k];
    pivots.push_back(c);
    ++r;
  }
  Mat<S> out = Mat<S>::Zero(r, nc);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < nc; ++j)
      if (row(i)[j / 64] >> (j % 64) & 1u) out(i, j) = S(1);
  return {std::move(out), std::move(pivots)};
}

}  // namespace detail

/// Reduced row echelon form of the row space of `m`.
template <class S>
Rref<S> rref(const Mat<S>& m) {
  if constexpr (std::is_same_v<S, Fp<2>>)
    return detail::rref_gf2(m);
  else
    return detail::rref_dense<S>(m);
}

/// Basis (as columns) of { x : m x = 0 }.
template <class S>
Mat<S> kernel(const Mat<S>& m) {
  const int nc = static_cast<int>(m.cols());
  Rref<S> r = rref<S>(m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(nc), false);
  for (int c : r.pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  Mat<S> ker = Mat<S>::Zero(nc, nc - r.rank());
  int k = 0;
  for (int f = 0; f < nc; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    ker(f, k) = S(1);
    for (int i = 0; i < r.rank(); ++i) ker(r.pivots[static_cast<std::size_t>(i)], k) = -r.rows(i, f);
    ++k;
  }
  return ker;
}

/// One solution of a x = b, or nullopt when the system is inconsistent.
template <class S>
std::optional<Vec<S>> solve(const Mat<S>& a, const Vec<S>& b) {
  if (b.size() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "solve: rhs length");
  Mat<S> aug(a.rows(), a.cols() + 1);
  aug << a, b;
  Rref<S> r = rref<S>(aug);
  Vec<S> x = Vec<S>::Zero(a.cols());
  for (int i = 0; i < r.rank(); ++i) {
    int c = r.pivots[static_cast<std::size_t>(i)];
    if (c == a.cols()) return std::nullopt;
    x[c] = r.rows(i, a.cols());
  }
  return x;
}

/// Inverse of a square matrix; throws if singular.
template <class S>
Mat<S> inverse(const Mat<S>& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw Error(ErrorKind::DimensionMismatch, "inverse of a non-square matrix");
  Mat<S> aug(n, 2 * n);
  aug << a, Mat<S>::Identity(n, n);
  Rref<S> r = rref<S>(aug);
  if (r.rank() < n || r.pivots[static_cast<std::size_t>(n - 1)] != n - 1)
    throw Error(ErrorKind::DivisionByZero, "singular matrix");
  return r.rows.rightCols(n);
}

template <class S>
class Subspace {
 public:
  explicit Subspace(int ambient = 0) : ambient_(ambient), rows_(0, ambient) {}

  /// Row space of `m`.
  static Subspace span(const Mat<S>& m) {
    Subspace s(static_cast<int>(m.cols()));
    Rref<S> r = rref<S>(m);
    s.rows_ = std::move(r.rows);
    s.pivots_ = std::move(r.pivots);
    return s;
  }
  static Subspace span(std::span<const Vec<S>> vs, int ambient) {
    return span(rows_to_matrix<S>(vs, ambient));
  }
  static Subspace full(int ambient) { return span(Mat<S>::Identity(ambient, ambient)); }

  int ambient_dim() const { return ambient_; }
  int dim() const { return static_cast<int>(pivots_.size()); }
  bool is_zero() const { return pivots_.empty(); }
  const Mat<S>& basis() const { return rows_; }
  Vec<S> basis_vector(int i) const { return rows_.row(i).transpose(); }
  const std::vector<int>& pivots() const { return pivots_; }

  /// Residual of v after elimination against the basis; zero iff v ∈ this.
  Vec<S> reduce(Vec<S> v) const {
    check(v);
    for (int i = 0; i < dim(); ++i) {
      S f = v[pivots_[static_cast<std::size_t>(i)]];
      if (!f.is_zero()) v -= f * rows_.row(i).transpose();
    }
    return v;
  }
  bool contains(const Vec<S>& v) const { return is_zero_vec<S>(reduce(v)); }
  bool contains(const Subspace& other) const {
    for (int i = 0; i < other.dim(); ++i)
      if (!contains(other.basis_vector(i))) return false;
    return true;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && equal<S>(a.rows_, b.rows_);
  }

 private:
  void check(const Vec<S>& v) const {
    if (v.size() != ambient_)
      throw Error(ErrorKind::DimensionMismatch, "vector length differs from ambient dimension");
  }
  int ambient_;
  Mat<S> rows_;
  std::vector<int> pivots_;
};

template <class S>
Subspace<S> sum(const Subspace<S>& u, const Subspace<S>& v) {
  if (u.ambient_dim() != v.ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "sum");
  Mat<S> m(u.dim() + v.dim(), u.ambient_dim());
  m << u.basis(), v.basis();
  return Subspace<S>::span(m);
}

/// U ∩ V from the left kernel of the stacked basis matrix [U; V].
template <class S>
Subspace<S> intersect(const Subspace<S>& u, const Subspace<S>& v) {
  if (u.ambient_dim() != v.ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "intersect");
  if (u.is_zero() || v.is_zero()) return Subspace<S>(u.ambient_dim());
  Mat<S> m(u.dim() + v.dim(), u.ambient_dim());
  m << u.basis(), v.basis();
  Mat<S> left = kernel<S>(m.transpose());
  Mat<S> rows = left.topRows(u.dim()).transpose() * u.basis();
  return Subspace<S>::span(rows);
}

template <class S>
bool contains(const Subspace<S>& u, const Vec<S>& v) {
  return u.contains(v);
}

/// Incremental independence test: keeps an echelon basis and reports whether
/// each added vector enlarged the span.
template <class S>
class EchelonBuilder {
 public:
  explicit EchelonBuilder(int ambient) : ambient_(ambient) {}

  bool add(Vec<S> v) {
    v = reduce(std::move(v));
    int piv = -1;
    for (int j = 0; j < ambient_; ++j)
      if (!v[j].is_zero()) {
        piv = j;
        break;
      }
    if (piv < 0) return false;
    v *= v[piv].inverse();
    rows_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
  }
  Vec<S> reduce(Vec<S> v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      S f = v[pivots_[i]];
      if (!f.is_zero()) v -= f * rows_[i];
    }
    return v;
  }
  bool contains(const Vec<S>& v) const { return is_zero_vec<S>(reduce(v)); }
  int dim() const { return static_cast<int>(rows_.size()); }
  Subspace<S> subspace() const {
    return Subspace<S>::span(std::span<const Vec<S>>(rows_), ambient_);
  }

 private:
  int ambient_;
  std::vector<Vec<S>> rows_;
  std::vector<int> pivots_;
};

}  // namespace rla
