#pragma once

// Independent reference computations used only by tests.

#include <functional>
#include <map>
#include <vector>

#include "rla/env.hpp"
#include "rla/liealg.hpp"

namespace rla::test {

/// Normal form in u(L) by rewriting words: repeatedly take the leftmost
/// adjacent inversion x_k x_j (k > j) and replace it by x_j x_k + [x_k, x_j],
/// or the leftmost run of p equal letters x_j^p and replace it by x_j^[p].
/// Knows nothing about the memo tables of EnvAlgebra.
template <class S>
class WordRewriter {
 public:
  using Word = std::vector<int>;
  using Poly = std::map<Word, S>;

  explicit WordRewriter(const RestrictedLieAlgebra<S>& L) : L_(L) {}

  Poly normalize(Poly in) const {
    Poly done;
    while (!in.empty()) {
      auto it = in.begin();
      Word w = it->first;
      S c = it->second;
      in.erase(it);
      if (c.is_zero()) continue;
      bool rewritten = false;
      for (std::size_t i = 0; i + 1 < w.size() && !rewritten; ++i) {
        if (w[i] > w[i + 1]) {
          Word sw = w;
          std::swap(sw[i], sw[i + 1]);
          add(in, sw, c);
          LieElement<S> br = L_.basis_bracket(w[i], w[i + 1]);
          for (int l = 0; l < L_.dim(); ++l) {
            if (br[l].is_zero()) continue;
            Word r(w.begin(), w.begin() + static_cast<long>(i));
            r.push_back(l);
            r.insert(r.end(), w.begin() + static_cast<long>(i) + 2, w.end());
            add(in, r, c * br[l]);
          }
          rewritten = true;
        }
      }
      const int p = S::characteristic;
      for (std::size_t i = 0; i + p <= w.size() && !rewritten; ++i) {
        bool run = true;
        for (int k = 1; k < p; ++k) run = run && w[i + static_cast<std::size_t>(k)] == w[i];
        if (!run) continue;
        LieElement<S> pm = L_.basis_pmap(w[i]);
        for (int l = 0; l < L_.dim(); ++l) {
          if (pm[l].is_zero()) continue;
          Word r(w.begin(), w.begin() + static_cast<long>(i));
          r.push_back(l);
          r.insert(r.end(), w.begin() + static_cast<long>(i) + p, w.end());
          add(in, r, c * pm[l]);
        }
        rewritten = true;
      }
      if (!rewritten) add(done, w, c);
    }
    return done;
  }

  /// Dense PBW coordinates of a normalized polynomial.
  EnvElement<S> to_vec(const EnvAlgebra<S>& A, const Poly& poly) const {
    EnvElement<S> v = A.zero();
    for (const auto& [w, c] : poly) {
      std::vector<int> e(static_cast<std::size_t>(L_.dim()), 0);
      for (int g : w) ++e[static_cast<std::size_t>(g)];
      v[A.index_of(e)] += c;
    }
    return v;
  }

  Word word_of(const EnvAlgebra<S>& A, int idx) const {
    Word w;
    auto e = A.exponents(idx);
    for (int i = 0; i < L_.dim(); ++i)
      for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k) w.push_back(i);
    return w;
  }

  EnvElement<S> product(const EnvAlgebra<S>& A, const EnvElement<S>& a, const EnvElement<S>& b) const {
    Poly acc;
    for (int i = 0; i < A.dim(); ++i) {
      if (a[i].is_zero()) continue;
      for (int j = 0; j < A.dim(); ++j) {
        if (b[j].is_zero()) continue;
        Word w = word_of(A, i);
        Word wj = word_of(A, j);
        w.insert(w.end(), wj.begin(), wj.end());
        add(acc, w, a[i] * b[j]);
      }
    }
    return to_vec(A, normalize(acc));
  }

 private:
  static void add(Poly& poly, const Word& w, const S& c) {
    auto [it, inserted] = poly.emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) poly.erase(it);
    }
  }
  const RestrictedLieAlgebra<S>& L_;
};

/// Bilinear expansion of the bracket straight from the table.
template <class S>
LieElement<S> bracket_by_expansion(const RestrictedLieAlgebra<S>& L, const LieElement<S>& u,
                                   const LieElement<S>& v) {
  LieElement<S> r = LieElement<S>::Zero(L.dim());
  for (int i = 0; i < L.dim(); ++i)
    for (int j = 0; j < L.dim(); ++j)
      if (i != j) r += (u[i] * v[j]) * L.basis_bracket(i, j);
  return r;
}

}  // namespace rla::test

namespace rla::test {

/// Existence of an f.m. basis containing 1, by trying every set of d
/// elements of ω as generators (d = dim ω/ω^2) and closing under products.
/// Only for tiny u(L) over F_2.
inline bool brute_force_fmb_exists(const EnvAlgebra<Fp<2>>& A, int d) {
  using F2 = Fp<2>;
  const int N = A.dim();
  std::vector<EnvElement<F2>> omega;
  for (long long mask = 1; mask < (1LL << (N - 1)); ++mask) {
    EnvElement<F2> v = A.zero();
    for (int k = 0; k < N - 1; ++k)
      if (mask >> k & 1) v[k + 1] = F2(1);
    omega.push_back(v);
  }
  std::vector<std::size_t> pick(static_cast<std::size_t>(d));
  auto closes = [&]() {
    std::vector<EnvElement<F2>> words;
    auto known = [&](const EnvElement<F2>& v) {
      for (const auto& w : words)
        if (equal<F2>(w, v)) return true;
      return false;
    };
    for (std::size_t g : pick)
      if (!known(omega[g])) words.push_back(omega[g]);
    for (std::size_t q = 0; q < words.size(); ++q)
      for (std::size_t g : pick) {
        EnvElement<F2> w = A.mul(words[q], omega[g]);
        if (is_zero_vec<F2>(w) || known(w)) continue;
        words.push_back(w);
        if (static_cast<int>(words.size()) > N - 1) return false;
      }
    if (static_cast<int>(words.size()) != N - 1) return false;
    words.push_back(A.one());
    return rref<F2>(rows_to_matrix<F2>(std::span<const Vec<F2>>(words), N)).rank() == N;
  };
  std::function<bool(std::size_t, int)> rec = [&](std::size_t start, int depth) {
    if (depth == d) return closes();
    for (std::size_t i = start; i < omega.size(); ++i) {
      pick[static_cast<std::size_t>(depth)] = i;
      if (rec(i + 1, depth + 1)) return true;
    }
    return false;
  };
  return rec(0, 0);
}

}  // namespace rla::test
