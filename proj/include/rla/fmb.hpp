#pragma once

// Filtered multiplicative bases of u(L): the verifier, the obstruction
// checks that certify nonexistence, a complete layered search for small
// u(L), and the decision pipeline combining them.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rla/abelian.hpp"
#include "rla/env.hpp"
#include "rla/error.hpp"
#include "rla/filtration.hpp"
#include "rla/linalg.hpp"

namespace rla {

enum class CertificateKind {
  FoundBasis,
  NoBasis_Theorem1,
  NoBasis_Lemma2,
  NoBasis_Theorem3,
  NoBasis_Exhausted,
  Inconclusive,
};

inline std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::FoundBasis: return "FoundBasis";
    case CertificateKind::NoBasis_Theorem1: return "NoBasis_Theorem1";
    case CertificateKind::NoBasis_Lemma2: return "NoBasis_Lemma2";
    case CertificateKind::NoBasis_Theorem3: return "NoBasis_Theorem3";
    case CertificateKind::NoBasis_Exhausted: return "NoBasis_Exhausted";
    case CertificateKind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

/// "{1, a, b, a*b + c}".
template <class S>
std::string render_set(const EnvAlgebra<S>& A, const std::vector<EnvElement<S>>& B) {
  std::string s = "{";
  for (std::size_t i = 0; i < B.size(); ++i) s += (i ? ", " : "") + render(A, B[i]);
  return s + "}";
}

/// Deterministic order on elements: compare the lists of (PBW index,
/// coefficient) over the support, so 1 < a < b < a*b < a*b + c < ...
template <class S>
bool support_less(const EnvElement<S>& u, const EnvElement<S>& v) {
  const Eigen::Index n = u.size();
  Eigen::Index i = 0, j = 0;
  while (true) {
    while (i < n && u[i].is_zero()) ++i;
    while (j < n && v[j].is_zero()) ++j;
    if (i == n || j == n) return i == n && j < n;
    if (i != j) return i < j;
    if (!(u[i] == v[j])) {
      std::string a = to_string(u[i]), b = to_string(v[j]);
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    }
    ++i;
    ++j;
  }
}

// ---------------------------------------------------------------------------
// Verifier

template <class S>
struct ProductViolation {
  int i = 0, j = 0;        // positions in the candidate
  EnvElement<S> product;   // b_i b_j, neither 0 nor in B
};

/// b_i ≡ b_j mod ω^k although neither lies in ω^k.
struct CongruenceCollision {
  int i = 0, j = 0, k = 0;
};

template <class S>
struct VerifyReport {
  int size = 0;
  bool contains_one = false;
  bool independent = false;
  bool spans_omega = false;  // B ∩ ω spans ω
  std::vector<ProductViolation<S>> violations;
  std::vector<int> filtration_failures;  // n with B ∩ ω^n not a basis of ω^n
  std::vector<CongruenceCollision> congruence_collisions;

  bool ok() const { return contains_one && independent && spans_omega && violations.empty(); }
  bool audits_ok() const { return filtration_failures.empty() && congruence_collisions.empty(); }
};

/// Checks that B has p^n independent elements including 1, that every
/// product b_i b_j is 0 or literally an element of B, and that B ∩ ω spans
/// ω. Every violating ordered pair is listed. The filtration properties
/// (B ∩ ω^n a basis of ω^n; elements outside ω^k pairwise incongruent mod
/// ω^k) are audited alongside.
template <class S>
VerifyReport<S> is_fm_basis(const EnvAlgebra<S>& A, const OmegaGrading<S>& G,
                            const std::vector<EnvElement<S>>& B) {
  const int N = A.dim();
  if (static_cast<int>(B.size()) != N)
    throw Error(ErrorKind::SizeMismatch,
                "candidate has " + std::to_string(B.size()) + " elements, u(L) has dimension " + std::to_string(N));
  for (const auto& b : B)
    if (b.size() != N) throw Error(ErrorKind::DimensionMismatch, "candidate element is not in this u(L)");
  VerifyReport<S> r;
  r.size = N;
  std::unordered_map<EnvElement<S>, int, VecHash<S>, VecEq<S>> index;
  for (int i = 0; i < N; ++i) index.emplace(B[static_cast<std::size_t>(i)], i);
  r.contains_one = index.count(A.one()) > 0;
  r.independent = Subspace<S>::span(std::span<const Vec<S>>(B), N).dim() == N;

  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      EnvElement<S> prod = A.mul(B[static_cast<std::size_t>(i)], B[static_cast<std::size_t>(j)]);
      if (!is_zero_vec<S>(prod) && !index.count(prod)) r.violations.push_back({i, j, std::move(prod)});
    }

  std::vector<int> layer(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) layer[static_cast<std::size_t>(i)] = G.layer(B[static_cast<std::size_t>(i)]);
  for (int n = 1; n <= G.max_weight + 1; ++n) {
    std::vector<Vec<S>> inside;
    for (int i = 0; i < N; ++i)
      if (layer[static_cast<std::size_t>(i)] >= n) inside.push_back(B[static_cast<std::size_t>(i)]);
    int rank = Subspace<S>::span(std::span<const Vec<S>>(inside), N).dim();
    bool ok = rank == static_cast<int>(inside.size()) && rank == G.omega(n).dim();
    if (n == 1) r.spans_omega = Subspace<S>::span(std::span<const Vec<S>>(inside), N) == G.omega(1);
    if (!ok) r.filtration_failures.push_back(n);
  }
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      int li = layer[static_cast<std::size_t>(i)], lj = layer[static_cast<std::size_t>(j)];
      if (li < 0 || lj < 0) continue;  // zero elements are caught by independence
      EnvElement<S> diff = B[static_cast<std::size_t>(i)] - B[static_cast<std::size_t>(j)];
      int ld = G.layer(diff);
      int k = std::max(li, lj) + 1;
      if (ld < 0 || ld >= k) r.congruence_collisions.push_back({i, j, k});
    }
  return r;
}

template <class S>
VerifyReport<S> is_fm_basis(const Analysis<S>& an, const std::vector<EnvElement<S>>& B) {
  if (!an.grading) throw Error(ErrorKind::NotPNilpotent, "verification needs a p-nilpotent algebra");
  return is_fm_basis(an.env, *an.grading, B);
}

// ---------------------------------------------------------------------------
// Obstruction for a generating set of ω with all products of two
// generators nonzero and commuting modulo ω^3.

struct Lemma2Report {
  bool commutators_in_omega3 = false;      // [u_i,u_j] ∈ ω^3
  bool products_outside_omega3 = false;    // u_i u_j ∉ ω^3
  bool squares_meet_products_trivially = false;  // span{u_iu_j, i<j} ∩ span{u_i^2} = 0 mod ω^3
  std::vector<std::string> failures;
  bool all() const { return commutators_in_omega3 && products_outside_omega3 && squares_meet_products_trivially; }
};

namespace detail {

// Graded coordinates with weight >= k dropped: the class modulo ω^k.
template <class S>
Vec<S> mod_omega(const OmegaGrading<S>& G, const Vec<S>& v, int k) {
  Vec<S> g = G.to_graded(v);
  for (Eigen::Index i = 0; i < g.size(); ++i)
    if (G.weight[static_cast<std::size_t>(i)] >= k) g[i] = S(0);
  return g;
}

}  // namespace detail

/// Evaluates the three conditions in ω/ω^3. Throws NotMinimalGenerating
/// unless the generators lie in ω and form a basis modulo ω^2.
template <class S>
Lemma2Report lemma2_check(const EnvAlgebra<S>& A, const OmegaGrading<S>& G, const std::vector<EnvElement<S>>& u) {
  const int N = A.dim();
  const int n = static_cast<int>(u.size());
  {
    EchelonBuilder<S> eb(N);
    bool ok = n == G.layer_dims.at(1);
    for (const auto& g : u) {
      if (g.size() != N || !A.in_augmentation_ideal(g)) ok = false;
      if (ok && !eb.add(detail::mod_omega(G, g, 2))) ok = false;
    }
    if (!ok) throw Error(ErrorKind::NotMinimalGenerating, "elements are not a minimal generating set of ω(L)");
  }
  auto name = [&](int i) { return render(A, u[static_cast<std::size_t>(i)]); };
  Lemma2Report r;
  r.commutators_in_omega3 = r.products_outside_omega3 = true;
  std::vector<Vec<S>> prods, squares;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      EnvElement<S> uij = A.mul(u[static_cast<std::size_t>(i)], u[static_cast<std::size_t>(j)]);
      Vec<S> cls = detail::mod_omega(G, uij, 3);
      if (is_zero_vec<S>(cls)) {
        r.products_outside_omega3 = false;
        r.failures.push_back("(" + name(i) + ")*(" + name(j) + ") lies in ω^3");
      }
      if (i == j) squares.push_back(cls);
      if (i < j) {
        prods.push_back(cls);
        EnvElement<S> uji = A.mul(u[static_cast<std::size_t>(j)], u[static_cast<std::size_t>(i)]);
        if (!is_zero_vec<S>(detail::mod_omega(G, EnvElement<S>(uij - uji), 3))) {
          r.commutators_in_omega3 = false;
          r.failures.push_back("[" + name(i) + ", " + name(j) + "] is not in ω^3");
        }
      }
    }
  Subspace<S> P = Subspace<S>::span(std::span<const Vec<S>>(prods), N);
  Subspace<S> Q = Subspace<S>::span(std::span<const Vec<S>>(squares), N);
  r.squares_meet_products_trivially = intersect(P, Q).is_zero();
  if (!r.squares_meet_products_trivially)
    r.failures.push_back("products u_i*u_j (i<j) and squares u_i^2 share a nonzero class modulo ω^3");
  return r;
}

/// The adapted height-one basis vectors, embedded in u(L).
template <class S>
std::vector<EnvElement<S>> minimal_generators(const Analysis<S>& an) {
  std::vector<EnvElement<S>> u;
  const Mat<S>& M = an.report.minimal_generators;
  for (Eigen::Index c = 0; c < M.cols(); ++c) u.push_back(an.env.embed(M.col(c)));
  return u;
}

// ---------------------------------------------------------------------------
// Nilpotency class two in odd characteristic.

template <class S>
struct Theorem3Evidence {
  bool applies = false;  // p > 2 and class 2
  int p = S::characteristic;
  std::optional<int> nilpotency_class;
  bool powerful = false;
  // height-one pair (u_r, u_s) with [u_r, u_s] outside L^[p]; absent when L is powerful
  std::optional<std::pair<LieElement<S>, LieElement<S>>> witness;
  LieElement<S> witness_bracket;
  // u_s^2 u_r - 2 u_s u_r u_s + u_r u_s^2 on the witness (or first generator) pair
  bool identity_holds = true;
  std::optional<Lemma2Report> lemma2;  // recorded for powerful inputs
};

template <class S>
Theorem3Evidence<S> theorem3_check(const Analysis<S>& an) {
  Theorem3Evidence<S> ev;
  ev.nilpotency_class = an.report.nilpotency_class;
  ev.powerful = an.report.is_powerful;
  ev.applies = S::characteristic > 2 && an.report.nilpotency_class == 2;
  if (!ev.applies) return ev;
  const auto& L = an.lie();
  const Mat<S>& U = an.report.minimal_generators;
  const Subspace<S> Lp = an.filtration.L_power(1);
  for (Eigen::Index r = 0; r < U.cols() && !ev.witness; ++r)
    for (Eigen::Index s = r + 1; s < U.cols() && !ev.witness; ++s) {
      LieElement<S> c = L.bracket(U.col(r), U.col(s));
      if (!Lp.contains(c)) {
        ev.witness = std::make_pair(LieElement<S>(U.col(r)), LieElement<S>(U.col(s)));
        ev.witness_bracket = c;
      }
    }
  std::optional<std::pair<LieElement<S>, LieElement<S>>> pair = ev.witness;
  if (!pair && U.cols() >= 2) pair = std::make_pair(LieElement<S>(U.col(0)), LieElement<S>(U.col(1)));
  if (pair) {
    const auto& A = an.env;
    EnvElement<S> ur = A.embed(pair->first), us = A.embed(pair->second);
    EnvElement<S> us2 = A.mul(us, us);
    EnvElement<S> id = A.mul(us2, ur) - S(2) * A.mul(A.mul(us, ur), us) + A.mul(ur, us2);
    ev.identity_holds = is_zero_vec<S>(id);
  }
  if (ev.powerful && an.grading) ev.lemma2 = lemma2_check(an.env, *an.grading, minimal_generators(an));
  return ev;
}

// ---------------------------------------------------------------------------
// Layered search.
//
// If B is an f.m. basis with 1 ∈ B, then B ∩ ω is exactly the set of nonzero
// products of the generators B \ ω^2, which are d_1 elements independent
// modulo ω^2. The search therefore chooses only those generators: first
// their classes modulo ω^2 (leading parts), then their weight-k graded
// coordinates for k = 2, 3, ... . After weight k is fixed the products are
// known modulo ω^{k+1}; any two that agree there without vanishing must be
// equal, so for every layer j <= k the distinct nonzero classes of layer j
// must number exactly d_j and be independent modulo ω^{j+1}. At the top
// weight the check is exact and the words with 1 form the basis.

struct SearchBudget {
  long long max_nodes = 5'000'000;
  int threads = 1;
  bool collect_all = false;  // enumerate every solution instead of stopping at the first
};

struct SearchStats {
  long long nodes = 0;
  long long budget = 0;
  long long branches = 0;  // leading-part choices
  long long solutions = 0;
  int threads = 1;
  std::uint64_t trace_digest = 0;
};

template <class S>
struct Certificate {
  CertificateKind kind = CertificateKind::Inconclusive;
  std::string route;    // which pipeline step produced it
  std::string summary;  // one line for humans
  std::vector<EnvElement<S>> basis;
  std::optional<VerifyReport<S>> verification;
  std::optional<CyclicDecomposition<S>> decomposition;
  std::optional<ExampleShapeDecision<S>> example;
  std::optional<Lemma2Report> lemma2;
  std::optional<Theorem3Evidence<S>> theorem3;
  std::optional<SearchStats> search;
  std::vector<std::string> notes;

  bool definite() const { return kind != CertificateKind::Inconclusive; }
};

template <class S>
struct SearchResult {
  Certificate<S> certificate;
  std::vector<std::vector<EnvElement<S>>> solutions;  // filled when collect_all
};

namespace detail {

inline std::uint64_t fnv(std::uint64_t h, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) {
    h ^= (x >> (8 * i)) & 0xffu;
    h *= 1099511628211ULL;
  }
  return h;
}

template <class S>
class LayeredSearch {
 public:
  static constexpr int kMaxDim = 256;

  LayeredSearch(const EnvAlgebra<S>& A, const OmegaGrading<S>& G) : A_(A), G_(G), N_(A.dim()) {
    W_ = G.max_weight;
    layer_.assign(static_cast<std::size_t>(W_) + 1, {});
    for (int a = 0; a < N_; ++a) layer_[static_cast<std::size_t>(G.weight[static_cast<std::size_t>(a)])].push_back(a);
    d1_ = static_cast<int>(layer_.size() > 1 ? layer_[1].size() : 0);
    total_ = N_ - 1;
    table_.resize(static_cast<std::size_t>(N_) * N_);
    for (int a = 1; a < N_; ++a)
      for (int b = 1; b < N_; ++b) {
        if (wt(a) + wt(b) > W_) continue;
        Vec<S> prod = G.to_graded(A.mul(G.Y.col(a), G.Y.col(b)));
        auto& cell = table_[static_cast<std::size_t>(a) * N_ + b];
        for (int c = 0; c < N_; ++c)
          if (!prod[c].is_zero()) cell.emplace_back(c, prod[c]);
      }
  }

  /// Nonzero leading vectors in lexicographic order, first coordinate most
  /// significant; branches are increasing independent d_1-tuples of them.
  std::vector<std::vector<int>> branches(long long cap) const {
    const int p = S::characteristic;
    long long count = 1;
    for (int i = 0; i < d1_; ++i) count *= p;
    leading_.clear();
    for (long long v = 1; v < count; ++v) {
      Vec<S> x(d1_);
      long long t = v;
      for (int i = d1_ - 1; i >= 0; --i) {
        x[i] = S(t % p);
        t /= p;
      }
      leading_.push_back(std::move(x));
    }
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    extend(cur, out, cap);
    return out;
  }

  struct Outcome {
    long long nodes_to_first = -1;
    long long nodes = 0;
    bool capped = false;
    std::vector<std::vector<Vec<S>>> solutions;  // graded coordinates of B ∩ ω
  };

  Outcome run(const std::vector<int>& branch, long long cap, bool collect_all) const {
    Outcome out;
    std::vector<Vec<S>> gens;
    for (int r = 0; r < d1_; ++r) {
      Vec<S> g = Vec<S>::Zero(N_);
      for (int i = 0; i < d1_; ++i)
        g[layer_[1][static_cast<std::size_t>(i)]] = leading_[static_cast<std::size_t>(branch[static_cast<std::size_t>(r)])][i];
      gens.push_back(std::move(g));
    }
    Ctx ctx{gens, out, cap, collect_all};
    if (!count_node(ctx)) return out;
    stage(ctx, 2);
    return out;
  }

  int lie_dim() const { return A_.lie_dim(); }

 private:
  struct Ctx {
    std::vector<Vec<S>>& gens;
    Outcome& out;
    long long cap;
    bool collect_all;
    bool stop = false;
  };

  int wt(int a) const { return G_.weight[static_cast<std::size_t>(a)]; }

  void extend(std::vector<int>& cur, std::vector<std::vector<int>>& out, long long cap) const {
    if (static_cast<long long>(out.size()) > cap) return;
    if (static_cast<int>(cur.size()) == d1_) {
      out.push_back(cur);
      return;
    }
    int start = cur.empty() ? 0 : cur.back() + 1;
    for (int v = start; v < static_cast<int>(leading_.size()); ++v) {
      EchelonBuilder<S> eb(d1_);
      bool ok = true;
      for (int c : cur) eb.add(leading_[static_cast<std::size_t>(c)]);
      if (!eb.add(leading_[static_cast<std::size_t>(v)])) ok = false;
      if (!ok) continue;
      cur.push_back(v);
      extend(cur, out, cap);
      cur.pop_back();
    }
  }

  bool count_node(Ctx& ctx) const {
    if (ctx.out.nodes >= ctx.cap) {
      ctx.out.capped = true;
      ctx.stop = true;
      return false;
    }
    ++ctx.out.nodes;
    return true;
  }

  /// u*v modulo ω^{k+1}, in graded coordinates.
  Vec<S> mul_trunc(const Vec<S>& u, const Vec<S>& v, int k) const {
    Vec<S> r = Vec<S>::Zero(N_);
    for (int a = 1; a < N_; ++a) {
      if (u[a].is_zero() || wt(a) >= k) continue;
      for (int b = 1; b < N_; ++b) {
        if (v[b].is_zero() || wt(a) + wt(b) > k) continue;
        S s = u[a] * v[b];
        for (const auto& [c, x] : table_[static_cast<std::size_t>(a) * N_ + b])
          if (wt(c) <= k) r[c] += s * x;
      }
    }
    return r;
  }

  Vec<S> truncate(Vec<S> v, int k) const {
    for (int a = 0; a < N_; ++a)
      if (wt(a) > k) v[a] = S(0);
    return v;
  }

  int lowest_weight(const Vec<S>& v) const {
    int best = -1;
    for (int a = 0; a < N_; ++a)
      if (!v[a].is_zero() && (best < 0 || wt(a) < best)) best = wt(a);
    return best;
  }

  /// Distinct nonzero classes of words modulo ω^{k+1}, or nullopt when they
  /// cannot be the layer-≤k part of a basis.
  std::optional<std::vector<Vec<S>>> words(const std::vector<Vec<S>>& gens, int k) const {
    int allowed = 0;
    for (int j = 1; j <= k && j <= W_; ++j) allowed += static_cast<int>(layer_[static_cast<std::size_t>(j)].size());
    std::unordered_set<Vec<S>, VecHash<S>, VecEq<S>> seen;
    std::vector<Vec<S>> vals;
    for (const auto& g : gens) {
      Vec<S> t = truncate(g, k);
      if (seen.insert(t).second) vals.push_back(std::move(t));
    }
    if (static_cast<int>(vals.size()) != d1_) return std::nullopt;
    for (std::size_t q = 0; q < vals.size(); ++q)
      for (const auto& g : gens) {
        Vec<S> w = mul_trunc(vals[q], g, k);
        if (is_zero_vec<S>(w) || !seen.insert(w).second) continue;
        vals.push_back(std::move(w));
        if (static_cast<int>(vals.size()) > allowed) return std::nullopt;
      }
    std::vector<int> count(static_cast<std::size_t>(k) + 1, 0);
    std::vector<EchelonBuilder<S>> lead;
    for (int j = 0; j <= k; ++j) lead.emplace_back(N_);
    for (const auto& v : vals) {
      int j = lowest_weight(v);
      ++count[static_cast<std::size_t>(j)];
      Vec<S> top = Vec<S>::Zero(N_);
      for (int a : layer_[static_cast<std::size_t>(j)]) top[a] = v[a];
      if (!lead[static_cast<std::size_t>(j)].add(top)) return std::nullopt;
    }
    for (int j = 1; j <= k && j <= W_; ++j)
      if (count[static_cast<std::size_t>(j)] != static_cast<int>(layer_[static_cast<std::size_t>(j)].size()))
        return std::nullopt;
    return vals;
  }

  void stage(Ctx& ctx, int k) const {
    if (k > W_) {
      auto vals = words(ctx.gens, W_);
      if (!vals) return;  // only reachable when W_ < 2
      if (ctx.out.nodes_to_first < 0) ctx.out.nodes_to_first = ctx.out.nodes;
      ctx.out.solutions.push_back(std::move(*vals));
      if (!ctx.collect_all) ctx.stop = true;
      return;
    }
    const int p = S::characteristic;
    const auto& coords = layer_[static_cast<std::size_t>(k)];
    const int digits = d1_ * static_cast<int>(coords.size());
    long long total = 1;
    for (int i = 0; i < digits; ++i) {
      if (total > std::numeric_limits<long long>::max() / p) {
        total = std::numeric_limits<long long>::max();
        break;
      }
      total *= p;
    }
    std::vector<int> b(static_cast<std::size_t>(digits));
    for (long long idx = 0; idx < total; ++idx) {
      // modular p-ary Gray code: consecutive indices differ in one digit
      long long t = idx;
      for (int i = digits - 1; i >= 0; --i) {
        b[static_cast<std::size_t>(i)] = static_cast<int>(t % p);
        t /= p;
      }
      for (int i = 0; i < digits; ++i) {
        int g = i == 0 ? b[0] : ((b[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i - 1)]) % p + p) % p;
        ctx.gens[static_cast<std::size_t>(i / static_cast<int>(coords.size()))]
                [coords[static_cast<std::size_t>(i % static_cast<int>(coords.size()))]] = S(g);
      }
      if (!count_node(ctx)) break;
      if (k == W_) {
        if (auto vals = words(ctx.gens, k)) {
          if (ctx.out.nodes_to_first < 0) ctx.out.nodes_to_first = ctx.out.nodes;
          ctx.out.solutions.push_back(std::move(*vals));
          if (!ctx.collect_all) ctx.stop = true;
        }
      } else if (words(ctx.gens, k)) {
        stage(ctx, k + 1);
      }
      if (ctx.stop) break;
    }
    for (auto& g : ctx.gens)
      for (int a : coords) g[a] = S(0);
  }

  const EnvAlgebra<S>& A_;
  const OmegaGrading<S>& G_;
  int N_;
  int W_ = 0;
  int d1_ = 0;
  int total_ = 0;
  std::vector<std::vector<int>> layer_;
  std::vector<std::vector<std::pair<int, S>>> table_;
  mutable std::vector<Vec<S>> leading_;
};

}  // namespace detail

/// Complete search for an f.m. basis containing 1 over a prime field.
/// Nodes are leading-part choices plus per-weight coordinate assignments;
/// reaching `budget.max_nodes` gives Inconclusive. Branches run on up to
/// `budget.threads` threads and are merged as if run in order, so results
/// and node counts do not depend on the thread count.
template <class S>
SearchResult<S> search_fmb(const Analysis<S>& an, const SearchBudget& budget = {}) {
  SearchResult<S> res;
  Certificate<S>& cert = res.certificate;
  cert.route = "search";
  SearchStats stats;
  stats.budget = budget.max_nodes;
  stats.threads = std::max(1, budget.threads);
  if (!an.grading) throw Error(ErrorKind::NotPNilpotent, "search needs a p-nilpotent algebra");
  if constexpr (!S::is_prime_field) {
    cert.summary = "search is implemented over prime fields only";
    cert.search = stats;
    return res;
  } else {
    const auto& A = an.env;
    const auto& G = *an.grading;
    if (A.dim() > detail::LayeredSearch<S>::kMaxDim) {
      cert.summary = "u(L) has dimension " + std::to_string(A.dim()) + ", above the search limit";
      cert.search = stats;
      return res;
    }
    detail::LayeredSearch<S> engine(A, G);
    auto branches = engine.branches(budget.max_nodes);
    stats.branches = static_cast<long long>(branches.size());

    using Outcome = typename detail::LayeredSearch<S>::Outcome;
    std::vector<std::optional<Outcome>> outcomes(branches.size());
    const bool parallel = stats.threads > 1 && branches.size() > 1;
    if (parallel) {
      std::atomic<std::size_t> next{0};
      std::atomic<std::size_t> first_hit{branches.size()};
      auto worker = [&] {
        while (true) {
          std::size_t i = next.fetch_add(1);
          if (i >= branches.size()) return;
          if (!budget.collect_all && i > first_hit.load()) continue;
          outcomes[i] = engine.run(branches[i], budget.max_nodes, budget.collect_all);
          if (outcomes[i]->nodes_to_first >= 0) {
            std::size_t cur = first_hit.load();
            while (i < cur && !first_hit.compare_exchange_weak(cur, i)) {
            }
          }
        }
      };
      std::vector<std::thread> pool;
      for (int t = 0; t < stats.threads; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }

    // Replay in enumeration order.
    long long used = 0;
    bool found = false, out_of_budget = false;
    std::uint64_t digest = 1469598103934665603ULL;
    std::vector<std::vector<Vec<S>>> sols;
    for (std::size_t i = 0; i < branches.size(); ++i) {
      if (!parallel) outcomes[i] = engine.run(branches[i], budget.max_nodes - used, budget.collect_all);
      if (!outcomes[i]) break;  // skipped after an earlier hit
      const Outcome& o = *outcomes[i];
      if (!budget.collect_all && o.nodes_to_first >= 0 && used + o.nodes_to_first <= budget.max_nodes) {
        used += o.nodes_to_first;
        digest = detail::fnv(digest, i);
        digest = detail::fnv(digest, static_cast<std::uint64_t>(o.nodes_to_first));
        sols.push_back(o.solutions.front());
        found = true;
        break;
      }
      if (o.capped || used + o.nodes > budget.max_nodes) {
        used = budget.max_nodes;
        out_of_budget = true;
        break;
      }
      used += o.nodes;
      digest = detail::fnv(digest, i);
      digest = detail::fnv(digest, static_cast<std::uint64_t>(o.nodes));
      for (const auto& s : o.solutions) sols.push_back(s);
    }
    if (static_cast<long long>(branches.size()) > budget.max_nodes) out_of_budget = true;
    found = found || !sols.empty();

    for (const auto& s : sols) {
      std::vector<EnvElement<S>> B{A.one()};
      for (const auto& g : s) B.push_back(G.from_graded(g));
      std::sort(B.begin(), B.end(), support_less<S>);
      res.solutions.push_back(std::move(B));
    }
    stats.nodes = used;
    stats.solutions = static_cast<long long>(res.solutions.size());
    stats.trace_digest = detail::fnv(digest, static_cast<std::uint64_t>(used));
    cert.search = stats;
    if (found) {
      cert.basis = res.solutions.front();
      auto rep = is_fm_basis(A, G, cert.basis);
      if (!rep.ok()) throw Error(ErrorKind::InternalInconsistency, "search produced a basis the verifier rejects");
      cert.verification = rep;
      cert.kind = CertificateKind::FoundBasis;
      cert.summary = render_set(A, cert.basis);
      if (!budget.collect_all) res.solutions.resize(1);
    } else if (out_of_budget) {
      cert.kind = CertificateKind::Inconclusive;
      cert.summary = "node budget of " + std::to_string(budget.max_nodes) + " exhausted";
    } else {
      cert.kind = CertificateKind::NoBasis_Exhausted;
      cert.summary = "no f.m. basis containing 1 after " + std::to_string(used) + " nodes";
    }
    if (out_of_budget && found && budget.collect_all) cert.notes.push_back("solution list truncated by the node budget");
    return res;
  }
}

// ---------------------------------------------------------------------------
// Decision pipeline.

enum class Route { Abelian, ExampleShape, Theorem3, Lemma2, Search };

inline std::string to_string(Route r) {
  switch (r) {
    case Route::Abelian: return "abelian";
    case Route::ExampleShape: return "example-shape";
    case Route::Theorem3: return "theorem3";
    case Route::Lemma2: return "lemma2";
    case Route::Search: return "search";
  }
  return "?";
}

struct DecideOptions {
  SearchBudget budget;
  std::optional<Route> only;  // run a single route; Inconclusive if it does not apply
};

/// In order: cyclic decomposition (abelian, F_p); the three-dimensional
/// criterion (abelian, F_p(t)); class two with p > 2; the generator
/// obstruction for powerful algebras; search; otherwise Inconclusive.
template <class S>
Certificate<S> decide(const Analysis<S>& an, const DecideOptions& opt = {}) {
  if (!an.grading) throw Error(ErrorKind::NotPNilpotent, "L is not p-nilpotent");
  const auto& A = an.env;
  const auto& L = an.lie();
  auto wants = [&](Route r) { return !opt.only || *opt.only == r; };
  std::optional<Lemma2Report> lemma2_seen;

  if (wants(Route::Abelian) && L.is_abelian() && S::is_prime_field) {
    Certificate<S> c;
    c.route = to_string(Route::Abelian);
    c.decomposition = decompose(L);
    c.basis = monomial_fmb(A, *c.decomposition);
    c.verification = is_fm_basis(an, c.basis);
    if (!c.verification->ok()) throw Error(ErrorKind::InternalInconsistency, "monomial basis rejected");
    std::sort(c.basis.begin(), c.basis.end(), support_less<S>);
    c.kind = CertificateKind::FoundBasis;
    c.summary = render_set(A, c.basis);
    return c;
  }
  if (wants(Route::ExampleShape) && L.is_abelian() && !S::is_prime_field) {
    std::optional<ExampleShapeDecision<S>> d;
    try {
      d = example_shape_criterion(L);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ShapeMismatch) throw;
    }
    if (d) {
      Certificate<S> c;
      c.route = to_string(Route::ExampleShape);
      c.example = d;
      if (d->has_decomposition) {
        c.decomposition = d->decomposition;
        c.basis = monomial_fmb(A, *c.decomposition);
        c.verification = is_fm_basis(an, c.basis);
        if (!c.verification->ok()) throw Error(ErrorKind::InternalInconsistency, "monomial basis rejected");
        std::sort(c.basis.begin(), c.basis.end(), support_less<S>);
        c.kind = CertificateKind::FoundBasis;
        c.summary = render_set(A, c.basis);
      } else {
        c.kind = CertificateKind::NoBasis_Theorem1;
        c.summary = std::string(detail::unparen(to_string(d->alpha))) + " is not a p-th power in " + S::field_name();
      }
      c.notes.push_back(d->reason);
      return c;
    }
  }
  if (wants(Route::Theorem3)) {
    auto ev = theorem3_check(an);
    if (ev.applies) {
      Certificate<S> c;
      c.route = to_string(Route::Theorem3);
      c.kind = CertificateKind::NoBasis_Theorem3;
      c.summary = "nilpotency class 2 and p = " + std::to_string(S::characteristic);
      if (ev.witness)
        c.notes.push_back("[" + render_lie(L, ev.witness->first) + ", " + render_lie(L, ev.witness->second) +
                          "] = " + render_lie(L, ev.witness_bracket) + " is not in L^[p]");
      else
        c.notes.push_back("L is powerful ([L,L] inside L^[p]); no witness pair exists");
      if (!ev.identity_holds)
        throw Error(ErrorKind::InternalInconsistency, "class-2 identity fails in u(L)");
      c.theorem3 = std::move(ev);
      return c;
    }
  }
  if (wants(Route::Lemma2) && an.report.is_powerful && !L.is_abelian()) {
    Lemma2Report r = lemma2_check(A, *an.grading, minimal_generators(an));
    if (r.all()) {
      Certificate<S> c;
      c.route = to_string(Route::Lemma2);
      c.kind = CertificateKind::NoBasis_Lemma2;
      c.summary = "L is powerful and its height-one generators satisfy all three obstruction conditions";
      c.lemma2 = r;
      return c;
    }
    lemma2_seen = r;
  }
  if (wants(Route::Search) && S::is_prime_field) {
    Certificate<S> c = search_fmb(an, opt.budget).certificate;
    if (lemma2_seen) {
      c.lemma2 = lemma2_seen;
      c.notes.push_back("L is powerful but the generator obstruction does not apply");
    }
    return c;
  }
  Certificate<S> c;
  c.route = "none";
  c.summary = opt.only ? "route " + to_string(*opt.only) + " does not apply" : "no route applies";
  c.lemma2 = lemma2_seen;
  return c;
}

}  // namespace rla
