#pragma once

// JSON reports (layout in README.md). nlohmann::json keeps keys sorted, so
// equal inputs serialize to identical bytes.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "rla/fmb.hpp"
#include "rla/io.hpp"

namespace rla {

inline constexpr int kReportSchemaVersion = 1;

struct ReportOptions {
  SearchBudget budget;
};

/// FNV-1a over the raw input bytes, as "fnv1a64:<16 hex digits>".
std::string input_digest(std::string_view text);

/// Parse, analyse and decide `text`, then serialize everything.
/// Errors from analysis (e.g. a non-p-nilpotent algebra) are reported in an
/// "error" member instead of a certificate.
nlohmann::json make_report(std::string_view text, const ReportOptions& opt);

namespace json_detail {

template <class S>
nlohmann::json coords(const Vec<S>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_string(v[i]));
  return a;
}

template <class S>
nlohmann::json elements(const EnvAlgebra<S>& A, const std::vector<EnvElement<S>>& B) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& b : B) a.push_back(render(A, b));
  return a;
}

inline nlohmann::json lemma2(const Lemma2Report& r) {
  return {{"commutators_in_omega3", r.commutators_in_omega3},
          {"products_outside_omega3", r.products_outside_omega3},
          {"squares_meet_products_trivially", r.squares_meet_products_trivially},
          {"all_hold", r.all()},
          {"failures", r.failures}};
}

template <class S>
nlohmann::json decomposition(const EnvAlgebra<S>& A, const CyclicDecomposition<S>& d) {
  nlohmann::json gens = nlohmann::json::array(), text = nlohmann::json::array();
  for (const auto& g : d.generators) {
    gens.push_back(coords(g));
    text.push_back(render_lie(A.lie(), g));
  }
  return {{"generators", gens}, {"generators_text", text}, {"exponents", d.exponents}};
}

template <class S>
nlohmann::json verification(const EnvAlgebra<S>& A, const std::vector<EnvElement<S>>& B, const VerifyReport<S>& r) {
  nlohmann::json viol = nlohmann::json::array(), coll = nlohmann::json::array();
  for (const auto& v : r.violations)
    viol.push_back({{"left", render(A, B[static_cast<std::size_t>(v.i)])},
                    {"right", render(A, B[static_cast<std::size_t>(v.j)])},
                    {"product", render(A, v.product)}});
  for (const auto& c : r.congruence_collisions)
    coll.push_back({{"left", render(A, B[static_cast<std::size_t>(c.i)])},
                    {"right", render(A, B[static_cast<std::size_t>(c.j)])},
                    {"modulo_omega_power", c.k}});
  return {{"valid", r.ok()},
          {"contains_one", r.contains_one},
          {"independent", r.independent},
          {"spans_omega", r.spans_omega},
          {"product_violations", viol},
          {"filtration_failures", r.filtration_failures},
          {"congruence_collisions", coll}};
}

template <class S>
nlohmann::json certificate(const Analysis<S>& an, const Certificate<S>& c) {
  const auto& A = an.env;
  const auto& L = an.lie();
  nlohmann::json j = {{"kind", to_string(c.kind)}, {"route", c.route}, {"summary", c.summary}, {"notes", c.notes}};
  j["basis"] = c.basis.empty() ? nlohmann::json(nullptr) : elements(A, c.basis);
  j["verification"] = c.verification ? verification(A, c.basis, *c.verification) : nlohmann::json(nullptr);
  j["decomposition"] = c.decomposition ? decomposition(A, *c.decomposition) : nlohmann::json(nullptr);
  if (c.example) {
    const auto& e = *c.example;
    j["example_shape"] = {{"x", L.name(e.x)},
                          {"y", L.name(e.y)},
                          {"z", L.name(e.z)},
                          {"alpha", to_string(e.alpha)},
                          {"pth_root", e.root ? nlohmann::json(to_string(*e.root)) : nlohmann::json(nullptr)},
                          {"has_decomposition", e.has_decomposition},
                          {"reason", e.reason}};
  } else {
    j["example_shape"] = nullptr;
  }
  j["lemma2"] = c.lemma2 ? lemma2(*c.lemma2) : nlohmann::json(nullptr);
  if (c.theorem3) {
    const auto& t = *c.theorem3;
    nlohmann::json w = nullptr;
    if (t.witness)
      w = {{"u_r", render_lie(L, t.witness->first)},
           {"u_s", render_lie(L, t.witness->second)},
           {"bracket", render_lie(L, t.witness_bracket)},
           {"bracket_in_L_p", false}};
    j["theorem3"] = {{"applies", t.applies},
                     {"p", t.p},
                     {"nilpotency_class", t.nilpotency_class ? nlohmann::json(*t.nilpotency_class) : nlohmann::json(nullptr)},
                     {"powerful", t.powerful},
                     {"witness", w},
                     {"class2_identity_holds", t.identity_holds},
                     {"lemma2", t.lemma2 ? lemma2(*t.lemma2) : nlohmann::json(nullptr)}};
  } else {
    j["theorem3"] = nullptr;
  }
  if (c.search) {
    const auto& s = *c.search;
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(s.trace_digest));
    j["search"] = {{"nodes", s.nodes},
                   {"budget", s.budget},
                   {"branches", s.branches},
                   {"solutions", s.solutions},
                   {"trace_digest", hex}};
  } else {
    j["search"] = nullptr;
  }
  return j;
}

template <class S>
nlohmann::json structure(const Analysis<S>& an) {
  const auto& L = an.lie();
  const auto& F = an.filtration;
  const auto& R = an.report;
  auto dims = [](const std::vector<Subspace<S>>& chain) {
    std::vector<int> d;
    for (const auto& s : chain) d.push_back(s.dim());
    return d;
  };
  nlohmann::json gens = nlohmann::json::array();
  for (Eigen::Index c = 0; c < R.minimal_generators.cols(); ++c)
    gens.push_back(render_lie(L, LieElement<S>(R.minimal_generators.col(c))));
  nlohmann::json st = {{"abelian", R.is_abelian},
                       {"nilpotency_class", R.nilpotency_class ? nlohmann::json(*R.nilpotency_class) : nlohmann::json(nullptr)},
                       {"p_nilpotent", R.is_p_nilpotent},
                       {"powerful", R.is_powerful},
                       {"minimal_generators", gens}};
  nlohmann::json heights = nlohmann::json::array();
  for (Eigen::Index c = 0; c < F.adapted_basis.cols(); ++c)
    heights.push_back({{"element", render_lie(L, LieElement<S>(F.adapted_basis.col(c)))},
                       {"height", F.heights[static_cast<std::size_t>(c)]}});
  nlohmann::json fil = {{"lower_central_series", dims(F.gamma)},
                        {"dimension_subalgebras", dims(F.dim_subalgebras)},
                        {"heights", F.p_nilpotent ? heights : nlohmann::json(nullptr)}};
  if (an.grading) {
    fil["omega_power_dims"] = dims(an.grading->chain);
    fil["layer_dims"] = an.grading->layer_dims;
  } else {
    fil["omega_power_dims"] = nullptr;
    fil["layer_dims"] = nullptr;
  }
  return {{"structure", st}, {"filtration", fil}};
}

}  // namespace json_detail

}  // namespace rla
