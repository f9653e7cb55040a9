#pragma once

// Text formats.
//
// Algebra files (.rla), line oriented, '#' starts a comment:
//   field = F2 | F3 | F5 | F7 | F2(t) | F3(t) | F5(t) | F7(t)
//   dim = 3
//   names = a b c
//   bracket a b = c
//   pmap a = (t)*c + b
// Omitted brackets and p-map values are zero.
//
// Elements of u(L) are sums of terms, each a '*'-separated product of
// scalars and generators with optional powers: "a*b + c", "2*x^2 + (t)*z".
// Products are evaluated in u(L), so "b*a" means a*b + [b,a].
//
// Basis files (.fmb) hold one element per line; a line "{e1, e2, ...}" as
// printed by the tools is also accepted.

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rla/env.hpp"
#include "rla/error.hpp"
#include "rla/field.hpp"
#include "rla/liealg.hpp"

namespace rla {

using AnyAlgebra = std::variant<RestrictedLieAlgebra<Fp<2>>, RestrictedLieAlgebra<Fp<3>>, RestrictedLieAlgebra<Fp<5>>,
                                RestrictedLieAlgebra<Fp<7>>, RestrictedLieAlgebra<RatFunc<2>>,
                                RestrictedLieAlgebra<RatFunc<3>>, RestrictedLieAlgebra<RatFunc<5>>,
                                RestrictedLieAlgebra<RatFunc<7>>>;

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

/// Splits at top-level occurrences of `sep` (outside parentheses).
inline std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == sep && depth == 0) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.emplace_back(s.substr(start));
  return out;
}

/// Top-level signed terms: "a - 2*b + (t+1)*c" -> {(+,"a"), (-,"2*b"), (+,"(t+1)*c")}.
inline std::vector<std::pair<int, std::string>> signed_terms(std::string_view text, int line) {
  std::string s = strip(text);
  std::vector<std::pair<int, std::string>> out;
  if (s.empty()) throw ParseError(line, "empty expression");
  int depth = 0, sign = 1;
  std::size_t start = 0;
  bool fresh = true;  // no term characters since the last sign
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth < 0) throw ParseError(line, "unbalanced parentheses in '" + s + "'");
    if (depth == 0 && (c == '+' || c == '-') && !(i > 0 && s[i - 1] == '^')) {
      if (!fresh) {
        out.emplace_back(sign, s.substr(start, i - start));
        sign = 1;
      }
      if (c == '-') sign = -sign;
      start = i + 1;
      fresh = true;
      continue;
    }
    fresh = false;
  }
  if (depth != 0) throw ParseError(line, "unbalanced parentheses in '" + s + "'");
  if (fresh) throw ParseError(line, "expression ends with a sign: '" + s + "'");
  out.emplace_back(sign, s.substr(start));
  return out;
}

template <class S>
S scalar_at(std::string_view text, int line) {
  try {
    return parse_scalar<S>(text);
  } catch (const ParseError& e) {
    throw ParseError(line, e.message());
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
}

inline std::vector<std::pair<int, std::string>> lines_of(std::string_view text) {
  std::vector<std::pair<int, std::string>> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) {
    ++no;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string t = trim(raw);
    if (!t.empty()) out.emplace_back(no, std::move(t));
  }
  return out;
}

}  // namespace detail

/// `±c*id ± ...` over the algebra's basis names; "0" is the zero element.
template <class S>
LieElement<S> parse_lincomb(const RestrictedLieAlgebra<S>& L, std::string_view text, int line = 0) {
  LieElement<S> v = LieElement<S>::Zero(L.dim());
  for (const auto& [sign, term] : detail::signed_terms(text, line)) {
    auto factors = detail::split_top(term, '*');
    std::string id = factors.back();
    S coeff(sign);
    if (!detail::is_identifier(id)) {
      if (factors.size() == 1) {
        if (!detail::scalar_at<S>(id, line).is_zero())
          throw ParseError(line, "constant term '" + id + "' in a Lie element");
        continue;
      }
      throw ParseError(line, "expected a basis name, got '" + id + "'");
    }
    auto idx = L.index_of(id);
    if (!idx) throw ParseError(line, "unknown basis name '" + id + "'");
    for (std::size_t f = 0; f + 1 < factors.size(); ++f) coeff = coeff * detail::scalar_at<S>(factors[f], line);
    v[*idx] += coeff;
  }
  return v;
}

/// An element of u(L) in the syntax produced by render().
template <class S>
EnvElement<S> parse_element(const EnvAlgebra<S>& A, std::string_view text, int line = 0) {
  const auto& L = A.lie();
  EnvElement<S> r = A.zero();
  for (const auto& [sign, term] : detail::signed_terms(text, line)) {
    S coeff(sign);
    EnvElement<S> prod = A.one();
    for (const std::string& f : detail::split_top(term, '*')) {
      if (f.empty()) throw ParseError(line, "empty factor in '" + term + "'");
      auto pow = detail::split_top(f, '^');
      if (pow.size() <= 2 && detail::is_identifier(pow[0])) {
        auto idx = L.index_of(pow[0]);
        if (!idx) throw ParseError(line, "unknown generator '" + pow[0] + "'");
        long long k = 1;
        if (pow.size() == 2) {
          auto e = detail::parse_int(pow[1]);
          if (!e || *e < 0) throw ParseError(line, "bad exponent in '" + f + "'");
          k = *e;
        }
        prod = A.mul(prod, A.power(A.embed(L.basis_vector(*idx)), static_cast<unsigned long long>(k)));
      } else {
        coeff = coeff * detail::scalar_at<S>(f, line);
      }
    }
    r += coeff * prod;
  }
  return r;
}

/// One element per nonblank line, or brace-delimited comma-separated lists.
template <class S>
std::vector<EnvElement<S>> parse_basis(const EnvAlgebra<S>& A, std::string_view text) {
  std::vector<EnvElement<S>> out;
  for (const auto& [no, line] : detail::lines_of(text)) {
    std::string s = line;
    if (s.front() == '{') {
      if (s.back() != '}') throw ParseError(no, "unterminated '{'");
      for (const auto& part : detail::split_top(std::string_view(s).substr(1, s.size() - 2), ','))
        out.push_back(parse_element(A, part, no));
    } else {
      out.push_back(parse_element(A, s, no));
    }
  }
  return out;
}

/// Parses an algebra file whose field must be S; validates the result.
template <class S>
RestrictedLieAlgebra<S> parse_algebra_as(std::string_view text) {
  auto lines = detail::lines_of(text);
  std::optional<int> dim;
  std::optional<std::vector<std::string>> names;
  bool field_seen = false;
  std::vector<std::pair<int, std::string>> body;
  for (const auto& [no, line] : lines) {
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(no, "expected '='");
    std::string lhs = detail::trim(std::string_view(line).substr(0, eq));
    std::string rhs = detail::trim(std::string_view(line).substr(eq + 1));
    if (lhs == "field") {
      if (rhs != S::field_name()) throw ParseError(no, "field '" + rhs + "' where " + S::field_name() + " was expected");
      field_seen = true;
    } else if (lhs == "dim") {
      auto d = detail::parse_int(rhs);
      if (!d || *d < 0 || *d > 64) throw ParseError(no, "bad dimension '" + rhs + "'");
      dim = static_cast<int>(*d);
    } else if (lhs == "names") {
      std::vector<std::string> ns;
      std::string cur;
      for (char c : rhs + " ") {
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
          if (!cur.empty()) ns.push_back(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
      for (std::size_t i = 0; i < ns.size(); ++i) {
        if (!detail::is_identifier(ns[i])) throw ParseError(no, "bad name '" + ns[i] + "'");
        for (std::size_t j = 0; j < i; ++j)
          if (ns[i] == ns[j]) throw ParseError(no, "duplicate name '" + ns[i] + "'");
      }
      names = std::move(ns);
    } else {
      body.emplace_back(no, line);
    }
  }
  if (!field_seen) throw ParseError(0, "missing 'field = ...'");
  if (!dim) throw ParseError(0, "missing 'dim = ...'");
  if (!names) throw ParseError(0, "missing 'names = ...'");
  if (static_cast<int>(names->size()) != *dim)
    throw ParseError(0, "dim = " + std::to_string(*dim) + " but " + std::to_string(names->size()) + " names");

  RestrictedLieAlgebra<S> L(*names);
  const int n = *dim;
  std::vector<int> bracket_line(static_cast<std::size_t>(n * n), 0), pmap_line(static_cast<std::size_t>(n), 0);
  for (const auto& [no, line] : body) {
    auto eq = line.find('=');
    std::istringstream head(line.substr(0, eq));
    std::vector<std::string> tok;
    for (std::string t; head >> t;) tok.push_back(t);
    std::string rhs = line.substr(eq + 1);
    auto index = [&, no = no](const std::string& name) {
      auto i = L.index_of(name);
      if (!i) throw ParseError(no, "unknown basis name '" + name + "'");
      return *i;
    };
    if (tok.size() == 3 && tok[0] == "bracket") {
      int i = index(tok[1]), j = index(tok[2]);
      if (i == j) throw ParseError(no, "self-bracket [" + tok[1] + "," + tok[1] + "] must be zero and cannot be set");
      auto key = static_cast<std::size_t>(std::min(i, j) * n + std::max(i, j));
      if (bracket_line[key])
        throw ParseError(no, "bracket of " + tok[1] + " and " + tok[2] + " already set on line " +
                                 std::to_string(bracket_line[key]));
      bracket_line[key] = no;
      L.set_bracket(i, j, parse_lincomb(L, rhs, no));
    } else if (tok.size() == 2 && tok[0] == "pmap") {
      int i = index(tok[1]);
      if (pmap_line[static_cast<std::size_t>(i)])
        throw ParseError(no, "pmap of " + tok[1] + " already set on line " +
                                 std::to_string(pmap_line[static_cast<std::size_t>(i)]));
      pmap_line[static_cast<std::size_t>(i)] = no;
      L.set_pmap(i, parse_lincomb(L, rhs, no));
    } else {
      throw ParseError(no, "expected 'field', 'dim', 'names', 'bracket <a> <b>' or 'pmap <a>'");
    }
  }
  ValidationReport rep = validate(L);
  if (!rep.ok()) {
    const Violation& v = rep.violations.front();
    std::string at;
    for (int i : v.at) at += (at.empty() ? "" : ", ") + L.name(i);
    throw Error(ErrorKind::ValidationError, v.axiom + " fails at (" + at + "): " + v.detail);
  }
  return L;
}

/// Reads the field line and dispatches to parse_algebra_as.
AnyAlgebra parse_algebra(std::string_view text);
AnyAlgebra load_algebra(const std::string& path);
std::string read_file(const std::string& path);
std::string field_name(const AnyAlgebra& L);

template <class S>
std::string render_algebra(const RestrictedLieAlgebra<S>& L) {
  std::string s = "field = " + S::field_name() + "\n";
  s += "dim = " + std::to_string(L.dim()) + "\n";
  s += "names =";
  for (const auto& n : L.names()) s += " " + n;
  s += "\n";
  for (int i = 0; i < L.dim(); ++i)
    for (int j = i + 1; j < L.dim(); ++j) {
      LieElement<S> v = L.basis_bracket(i, j);
      if (!is_zero_vec<S>(v)) s += "bracket " + L.name(i) + " " + L.name(j) + " = " + render_lie(L, v) + "\n";
    }
  for (int i = 0; i < L.dim(); ++i) {
    LieElement<S> v = L.basis_pmap(i);
    if (!is_zero_vec<S>(v)) s += "pmap " + L.name(i) + " = " + render_lie(L, v) + "\n";
  }
  return s;
}

}  // namespace rla
