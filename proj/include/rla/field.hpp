#pragma once

// Exact scalars: the prime field F_p and the rational function field F_p(t).
// The characteristic is a template parameter so that every algebraic object
// downstream is a dense Eigen type over one concrete field.

#include <Eigen/Core>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rla/error.hpp"

namespace rla {

template <int P>
concept SupportedPrime = (P == 2 || P == 3 || P == 5 || P == 7);

// ---------------------------------------------------------------------------
// F_p

template <int P>
  requires SupportedPrime<P>
class Fp {
 public:
  static constexpr int characteristic = P;
  static constexpr bool is_prime_field = true;

  constexpr Fp() = default;
  constexpr Fp(long long v) : v_(static_cast<std::uint8_t>(((v % P) + P) % P)) {}

  constexpr int value() const { return v_; }
  constexpr bool is_zero() const { return v_ == 0; }
  constexpr bool is_one() const { return v_ == 1; }

  friend constexpr Fp operator+(Fp a, Fp b) { return raw((a.v_ + b.v_) % P); }
  friend constexpr Fp operator-(Fp a, Fp b) { return raw((a.v_ + P - b.v_) % P); }
  friend constexpr Fp operator*(Fp a, Fp b) { return raw((a.v_ * b.v_) % P); }
  friend constexpr Fp operator/(Fp a, Fp b) { return a * b.inverse(); }
  constexpr Fp operator-() const { return raw((P - v_) % P); }
  constexpr Fp& operator+=(Fp b) { return *this = *this + b; }
  constexpr Fp& operator-=(Fp b) { return *this = *this - b; }
  constexpr Fp& operator*=(Fp b) { return *this = *this * b; }
  constexpr Fp& operator/=(Fp b) { return *this = *this / b; }
  friend constexpr bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }
  friend constexpr bool operator<(Fp a, Fp b) { return a.v_ < b.v_; }

  constexpr Fp inverse() const {
    if (v_ == 0) throw Error(ErrorKind::DivisionByZero, "inverse of 0 in F" + std::to_string(P));
    // Fermat: a^(p-2)
    Fp r(1);
    for (int i = 0; i < P - 2; ++i) r *= *this;
    return r;
  }

  static std::string field_name() { return "F" + std::to_string(P); }

 private:
  static constexpr Fp raw(int v) {
    Fp r;
    r.v_ = static_cast<std::uint8_t>(v);
    return r;
  }
  std::uint8_t v_ = 0;
};

// ---------------------------------------------------------------------------
// F_p[t], dense coefficients, lowest degree first, no trailing zeros.

template <int P>
  requires SupportedPrime<P>
class Poly {
 public:
  using Coeff = Fp<P>;

  Poly() = default;
  Poly(Coeff c) {
    if (!c.is_zero()) c_.push_back(c);
  }
  explicit Poly(std::vector<Coeff> c) : c_(std::move(c)) { trim(); }

  static Poly monomial(Coeff c, int deg) {
    std::vector<Coeff> v(static_cast<std::size_t>(deg) + 1);
    v.back() = c;
    return Poly(std::move(v));
  }
  static Poly t() { return monomial(Coeff(1), 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for 0
  bool is_zero() const { return c_.empty(); }
  Coeff lead() const { return c_.empty() ? Coeff(0) : c_.back(); }
  Coeff operator[](int i) const {
    return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(i)] : Coeff(0);
  }
  const std::vector<Coeff>& coeffs() const { return c_; }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Coeff> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[static_cast<int>(i)] + b[static_cast<int>(i)];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<Coeff> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[static_cast<int>(i)] - b[static_cast<int>(i)];
    return Poly(std::move(r));
  }
  Poly operator-() const { return Poly() - *this; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Coeff> r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(r));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  /// Euclidean division; throws on a zero divisor.
  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "polynomial division by 0");
    std::vector<Coeff> rem = a.c_;
    int db = b.degree();
    if (a.degree() < db) return {Poly(), a};
    std::vector<Coeff> q(static_cast<std::size_t>(a.degree() - db) + 1);
    Coeff inv = b.lead().inverse();
    for (int i = a.degree(); i >= db; --i) {
      Coeff f = rem[static_cast<std::size_t>(i)] * inv;
      if (f.is_zero()) continue;
      q[static_cast<std::size_t>(i - db)] = f;
      for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(i - db + j)] -= f * b.c_[static_cast<std::size_t>(j)];
    }
    return {Poly(std::move(q)), Poly(std::move(rem))};
  }

  Poly monic() const {
    if (is_zero()) return *this;
    Coeff inv = lead().inverse();
    std::vector<Coeff> r = c_;
    for (auto& x : r) x *= inv;
    return Poly(std::move(r));
  }

  static Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      Poly r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  /// f(t) -> f(t)^p = f(t^p), since coefficients in F_p are Frobenius-fixed.
  Poly frobenius() const {
    if (is_zero()) return {};
    std::vector<Coeff> r(static_cast<std::size_t>(degree() * P) + 1);
    for (std::size_t i = 0; i < c_.size(); ++i) r[i * P] = c_[i];
    return Poly(std::move(r));
  }

  /// Some(g) with g^p = f iff f lies in F_p[t^p].
  std::optional<Poly> pth_root() const {
    std::vector<Coeff> r;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i % P == 0)
        r.push_back(c_[i]);
      else if (!c_[i].is_zero())
        return std::nullopt;
    }
    return Poly(std::move(r));
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (int i = degree(); i >= 0; --i) {
      Coeff c = (*this)[i];
      if (c.is_zero()) continue;
      if (!s.empty()) s += "+";
      bool unit = c.is_one();
      if (i == 0) {
        s += std::to_string(c.value());
      } else {
        if (!unit) s += std::to_string(c.value()) + "*";
        s += "t";
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s;
  }

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ULL;
    for (auto c : c_) h = (h ^ static_cast<std::size_t>(c.value())) * 1099511628211ULL;
    return h;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<Coeff> c_;
};

// ---------------------------------------------------------------------------
// F_p(t): reduced fractions with monic denominator; zero is 0/1.

template <int P>
  requires SupportedPrime<P>
class RatFunc {
 public:
  static constexpr int characteristic = P;
  static constexpr bool is_prime_field = false;
  using PolyT = Poly<P>;

  RatFunc() : num_(), den_(Fp<P>(1)) {}
  RatFunc(long long v) : num_(Fp<P>(v)), den_(Fp<P>(1)) {}
  RatFunc(Fp<P> v) : num_(v), den_(Fp<P>(1)) {}
  RatFunc(PolyT num, PolyT den = PolyT(Fp<P>(1))) : num_(std::move(num)), den_(std::move(den)) {
    normalize();
  }

  static RatFunc t() { return RatFunc(PolyT::t()); }

  const PolyT& num() const { return num_; }
  const PolyT& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.degree() == 0 && num_.lead().is_one() && den_.degree() == 0; }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    if (a.den_ == b.den_) return RatFunc(a.num_ - b.num_, a.den_);
    return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) return RatFunc();
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }
  RatFunc operator-() const { return RatFunc(-num_, den_); }
  RatFunc& operator+=(const RatFunc& b) { return *this = *this + b; }
  RatFunc& operator-=(const RatFunc& b) { return *this = *this - b; }
  RatFunc& operator*=(const RatFunc& b) { return *this = *this * b; }
  RatFunc& operator/=(const RatFunc& b) { return *this = *this / b; }
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  RatFunc inverse() const {
    if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of 0 in " + field_name());
    return RatFunc(den_, num_);
  }

  static std::string field_name() { return "F" + std::to_string(P) + "(t)"; }

 private:
  void normalize() {
    if (den_.is_zero()) throw Error(ErrorKind::DivisionByZero, "zero denominator");
    if (num_.is_zero()) {
      den_ = PolyT(Fp<P>(1));
      return;
    }
    PolyT g = PolyT::gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = PolyT::divmod(num_, g).first;
      den_ = PolyT::divmod(den_, g).first;
    }
    Fp<P> lc = den_.lead();
    if (!lc.is_one()) {
      Fp<P> inv = lc.inverse();
      num_ = num_ * PolyT(inv);
      den_ = den_ * PolyT(inv);
    }
  }

  PolyT num_;
  PolyT den_;
};

// ---------------------------------------------------------------------------
// Uniform scalar interface.

template <class S>
concept FieldScalar = requires(const S& a, const S& b) {
  { S::characteristic } -> std::convertible_to<int>;
  { S::is_prime_field } -> std::convertible_to<bool>;
  { a + b } -> std::same_as<S>;
  { a * b } -> std::same_as<S>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { a.inverse() } -> std::same_as<S>;
};

template <class S>
inline constexpr int char_of = S::characteristic;

template <int P>
Fp<P> frobenius(Fp<P> a) {
  return a;
}
template <int P>
RatFunc<P> frobenius(const RatFunc<P>& a) {
  return RatFunc<P>(a.num().frobenius(), a.den().frobenius());
}

template <int P>
std::optional<Fp<P>> pth_root(Fp<P> a) {
  return a;
}
template <int P>
std::optional<RatFunc<P>> pth_root(const RatFunc<P>& a) {
  auto n = a.num().pth_root();
  auto d = a.den().pth_root();
  if (!n || !d) return std::nullopt;
  return RatFunc<P>(*n, *d);
}

template <int P>
std::string to_string(Fp<P> a) {
  return std::to_string(a.value());
}

/// "(num)/(den)", "(num)" when the denominator is 1, bare integers for constants.
template <int P>
std::string to_string(const RatFunc<P>& a) {
  if (a.den().degree() == 0) {
    if (a.num().degree() <= 0) return std::to_string(a.num().lead().value());
    return "(" + a.num().to_string() + ")";
  }
  return "(" + a.num().to_string() + ")/(" + a.den().to_string() + ")";
}

template <int P>
std::ostream& operator<<(std::ostream& os, Fp<P> a) {
  return os << to_string(a);
}
template <int P>
std::ostream& operator<<(std::ostream& os, const RatFunc<P>& a) {
  return os << to_string(a);
}

template <int P>
std::size_t hash_value(Fp<P> a) {
  return static_cast<std::size_t>(a.value());
}
template <int P>
std::size_t hash_value(const RatFunc<P>& a) {
  return a.num().hash() * 31u + a.den().hash();
}

template <class S>
S power(S base, unsigned long long e) {
  S r(1);
  while (e) {
    if (e & 1u) r *= base;
    base *= base;
    e >>= 1u;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Parsing. Integers are accepted in every field; F_p(t) additionally takes
// polynomials in t and quotients "(f)/(g)".

namespace detail {

inline std::string strip(std::string_view s) {
  std::string r;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) r += c;
  return r;
}

inline std::optional<long long> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) return std::nullopt;
  long long v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    v = v * 10 + (s[i] - '0');
    if (v > 1'000'000'000LL) v %= 2520;  // lcm(1..9); keeps residues mod 2,3,5,7
  }
  return neg ? -v : v;
}

/// Strips one layer of enclosing parentheses if they match each other.
inline std::string_view unparen(std::string_view s) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') return s;
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth == 0 && i + 1 < s.size()) return s;
  }
  return s.substr(1, s.size() - 2);
}

}  // namespace detail

template <int P>
Poly<P> parse_poly(std::string_view text) {
  std::string s = detail::strip(detail::unparen(detail::strip(text)));
  if (s.empty()) throw ParseError(0, "empty polynomial");
  Poly<P> acc;
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    std::size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    std::string term = s.substr(i, j - i);
    if (term.empty()) throw ParseError(0, "malformed polynomial '" + s + "'");
    long long coeff = 1;
    int deg = 0;
    std::size_t tpos = term.find('t');
    if (tpos == std::string::npos) {
      auto v = detail::parse_int(term);
      if (!v) throw ParseError(0, "bad coefficient '" + term + "'");
      coeff = *v;
    } else {
      std::string pre = term.substr(0, tpos);
      std::string post = term.substr(tpos + 1);
      if (!pre.empty()) {
        if (pre.back() != '*') throw ParseError(0, "expected '*' before t in '" + term + "'");
        pre.pop_back();
        auto v = detail::parse_int(pre);
        if (!v) throw ParseError(0, "bad coefficient '" + pre + "'");
        coeff = *v;
      }
      deg = 1;
      if (!post.empty()) {
        if (post[0] != '^') throw ParseError(0, "bad power in '" + term + "'");
        auto v = detail::parse_int(post.substr(1));
        if (!v || *v < 0 || *v > 4096) throw ParseError(0, "bad exponent in '" + term + "'");
        deg = static_cast<int>(*v);
      }
    }
    acc = acc + Poly<P>::monomial(Fp<P>(sign * coeff), deg);
    i = j;
  }
  return acc;
}

template <class S>
S parse_scalar(std::string_view text);

template <class S>
  requires(S::is_prime_field)
S parse_scalar_impl(std::string_view text) {
  std::string s = detail::strip(detail::unparen(detail::strip(text)));
  auto v = detail::parse_int(s);
  if (!v) throw ParseError(0, "bad " + S::field_name() + " scalar '" + std::string(text) + "'");
  return S(*v);
}

template <class S>
  requires(!S::is_prime_field)
S parse_scalar_impl(std::string_view text) {
  constexpr int P = S::characteristic;
  std::string s = detail::strip(text);
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == '/' && depth == 0)
      return S(parse_poly<P>(s.substr(0, i)), parse_poly<P>(s.substr(i + 1)));
  }
  return S(parse_poly<P>(s));
}

template <class S>
S parse_scalar(std::string_view text) {
  return parse_scalar_impl<S>(text);
}

// ---------------------------------------------------------------------------
// Sampling, used by random tests and by exact span computations of
// polynomial maps.

template <int P>
Fp<P> random_scalar(std::mt19937_64& rng, Fp<P>*) {
  return Fp<P>(static_cast<long long>(rng() % P));
}
template <int P>
RatFunc<P> random_scalar(std::mt19937_64& rng, RatFunc<P>*) {
  auto rand_poly = [&](int maxdeg) {
    std::vector<Fp<P>> c(static_cast<std::size_t>(rng() % (maxdeg + 1)) + 1);
    for (auto& x : c) x = Fp<P>(static_cast<long long>(rng() % P));
    return Poly<P>(std::move(c));
  };
  Poly<P> den = rand_poly(2);
  if (den.is_zero()) den = Poly<P>(Fp<P>(1));
  return RatFunc<P>(rand_poly(3), den);
}
template <class S>
S random_scalar(std::mt19937_64& rng) {
  return random_scalar(rng, static_cast<S*>(nullptr));
}

/// At least `count` distinct scalars, or every element when the field is
/// smaller than that. A polynomial map of degree < count in each variable
/// that vanishes on the resulting grid vanishes identically.
template <class S>
std::vector<S> sample_points(int count) {
  std::vector<S> pts;
  if constexpr (S::is_prime_field) {
    for (int i = 0; i < S::characteristic; ++i) pts.emplace_back(i);
  } else {
    pts.emplace_back(0);
    S x(1);
    for (int i = 1; i < count; ++i) {
      pts.push_back(x);
      x *= S::t();
    }
  }
  return pts;
}

}  // namespace rla

template <int P>
struct std::hash<rla::Fp<P>> {
  std::size_t operator()(rla::Fp<P> a) const { return rla::hash_value(a); }
};
template <int P>
struct std::hash<rla::RatFunc<P>> {
  std::size_t operator()(const rla::RatFunc<P>& a) const { return rla::hash_value(a); }
};

namespace Eigen {

template <int P>
struct NumTraits<rla::Fp<P>> : GenericNumTraits<rla::Fp<P>> {
  using Real = rla::Fp<P>;
  using NonInteger = rla::Fp<P>;
  using Literal = rla::Fp<P>;
  using Nested = rla::Fp<P>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 0,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 1,
    MulCost = 2
  };
  static inline int digits10() { return 0; }
};

template <int P>
struct NumTraits<rla::RatFunc<P>> : GenericNumTraits<rla::RatFunc<P>> {
  using Real = rla::RatFunc<P>;
  using NonInteger = rla::RatFunc<P>;
  using Literal = rla::RatFunc<P>;
  using Nested = rla::RatFunc<P>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 0,
    RequireInitialization = 1,
    ReadCost = 20,
    AddCost = 100,
    MulCost = 100
  };
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
