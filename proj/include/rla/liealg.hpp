#pragma once

// Restricted Lie algebras given by structure constants and the p-map on a
// basis.

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "rla/error.hpp"
#include "rla/field.hpp"
#include "rla/linalg.hpp"

namespace rla {

/// Coordinates of an element of L in the algebra's basis.
template <class S>
using LieElement = Vec<S>;

template <class S>
class RestrictedLieAlgebra {
 public:
  static constexpr int p = S::characteristic;
  using Scalar = S;

  RestrictedLieAlgebra() = default;

  /// Zero bracket and zero p-map on the named basis.
  explicit RestrictedLieAlgebra(std::vector<std::string> names)
      : names_(std::move(names)), pmap_(Mat<S>::Zero(dim(), dim())) {
    ad_.assign(names_.size(), Mat<S>::Zero(dim(), dim()));
  }

  int dim() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int i) const { return names_[static_cast<std::size_t>(i)]; }
  std::optional<int> index_of(const std::string& name) const {
    for (int i = 0; i < dim(); ++i)
      if (names_[static_cast<std::size_t>(i)] == name) return i;
    return std::nullopt;
  }

  /// [x_i, x_j] = v; also sets [x_j, x_i] = -v. Requires i != j.
  void set_bracket(int i, int j, const LieElement<S>& v) {
    if (i == j) throw Error(ErrorKind::ValidationError, "self-bracket of a basis vector must be zero");
    check(v);
    ad_[static_cast<std::size_t>(i)].col(j) = v;
    ad_[static_cast<std::size_t>(j)].col(i) = -v;
  }
  void set_pmap(int i, const LieElement<S>& v) {
    check(v);
    pmap_.col(i) = v;
  }

  LieElement<S> basis_bracket(int i, int j) const { return ad_[static_cast<std::size_t>(i)].col(j); }
  LieElement<S> basis_pmap(int i) const { return pmap_.col(i); }

  /// ad(x_i) as a matrix acting on coordinate columns.
  const Mat<S>& ad_basis(int i) const { return ad_[static_cast<std::size_t>(i)]; }
  /// Columns are x_i^[p].
  const Mat<S>& pmap_table() const { return pmap_; }

  Mat<S> ad(const LieElement<S>& u) const {
    check(u);
    Mat<S> m = Mat<S>::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i)
      if (!u[i].is_zero()) m += u[i] * ad_[static_cast<std::size_t>(i)];
    return m;
  }

  LieElement<S> bracket(const LieElement<S>& u, const LieElement<S>& v) const {
    check(v);
    return ad(u) * v;
  }

  bool is_abelian() const {
    for (const auto& m : ad_)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
          if (!m(i, j).is_zero()) return false;
    return true;
  }

  LieElement<S> basis_vector(int i) const { return unit_vector<S>(dim(), i); }

  friend bool operator==(const RestrictedLieAlgebra& a, const RestrictedLieAlgebra& b) {
    if (a.names_ != b.names_ || !equal<S>(a.pmap_, b.pmap_)) return false;
    for (std::size_t i = 0; i < a.ad_.size(); ++i)
      if (!equal<S>(a.ad_[i], b.ad_[i])) return false;
    return true;
  }

 private:
  void check(const LieElement<S>& v) const {
    if (v.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "element length differs from dim L");
  }

  std::vector<std::string> names_;
  std::vector<Mat<S>> ad_;
  Mat<S> pmap_;
};

struct Violation {
  std::string axiom;    // "antisymmetry", "jacobi", "restrictedness"
  std::vector<int> at;  // violating basis indices
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks antisymmetry closure, Jacobi on basis triples and
/// ad(x_i^[p]) = ad(x_i)^p for every basis vector.
template <class S>
ValidationReport validate(const RestrictedLieAlgebra<S>& L) {
  ValidationReport rep;
  const int n = L.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      LieElement<S> s = L.basis_bracket(i, j) + L.basis_bracket(j, i);
      if (!is_zero_vec<S>(s) || (i == j && !is_zero_vec<S>(L.basis_bracket(i, i))))
        rep.violations.push_back({"antisymmetry", {i, j}, "[x_i,x_j] + [x_j,x_i] != 0"});
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        auto xi = L.basis_vector(i), xj = L.basis_vector(j), xk = L.basis_vector(k);
        LieElement<S> jac = L.bracket(xi, L.bracket(xj, xk)) + L.bracket(xj, L.bracket(xk, xi)) +
                            L.bracket(xk, L.bracket(xi, xj));
        if (!is_zero_vec<S>(jac))
          rep.violations.push_back({"jacobi", {i, j, k},
                                    "Jacobi identity fails on (" + L.name(i) + ", " + L.name(j) + ", " +
                                        L.name(k) + ")"});
      }
  for (int i = 0; i < n; ++i) {
    Mat<S> lhs = L.ad(L.basis_pmap(i));
    Mat<S> rhs = Mat<S>::Identity(n, n);
    for (int k = 0; k < RestrictedLieAlgebra<S>::p; ++k) rhs = L.ad_basis(i) * rhs;
    if (!equal<S>(lhs, rhs))
      rep.violations.push_back(
          {"restrictedness", {i}, "ad(" + L.name(i) + "^[p]) != ad(" + L.name(i) + ")^p"});
  }
  return rep;
}

template <class S>
void require_valid(const RestrictedLieAlgebra<S>& L) {
  ValidationReport r = validate(L);
  if (!r.ok()) throw Error(ErrorKind::ValidationError, r.violations.front().detail);
}

}  // namespace rla
