#include "rla/report.hpp"

#include <cstdio>

namespace rla {

std::string input_digest(std::string_view text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json make_report(std::string_view text, const ReportOptions& opt) {
  AnyAlgebra any = parse_algebra(text);
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = "rla";
  j["tool_version"] = RLA_VERSION;
  j["parameters"] = {{"budget", opt.budget.max_nodes}};
  std::visit(
      [&](const auto& L) {
        using S = typename std::decay_t<decltype(L)>::Scalar;
        j["input"] = {{"digest", input_digest(text)},
                      {"field", S::field_name()},
                      {"dim", L.dim()},
                      {"names", L.names()}};
        Analysis<S> an(L);
        auto parts = json_detail::structure(an);
        j["structure"] = parts["structure"];
        j["filtration"] = parts["filtration"];
        j["certificate"] = nullptr;
        j["error"] = nullptr;
        try {
          DecideOptions d;
          d.budget = opt.budget;
          j["certificate"] = json_detail::certificate(an, decide(an, d));
        } catch (const Error& e) {
          j["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
        }
      },
      any);
  return j;
}

}  // namespace rla
