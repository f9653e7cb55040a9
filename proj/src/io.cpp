#include "rla/io.hpp"

#include <fstream>
#include <sstream>

namespace rla {

namespace {

template <class S>
AnyAlgebra as(std::string_view text) {
  return AnyAlgebra(parse_algebra_as<S>(text));
}

}  // namespace

AnyAlgebra parse_algebra(std::string_view text) {
  for (const auto& [no, line] : detail::lines_of(text)) {
    auto eq = line.find('=');
    if (eq == std::string::npos || detail::trim(std::string_view(line).substr(0, eq)) != "field") continue;
    std::string f = detail::strip(std::string_view(line).substr(eq + 1));
    if (f == "F2") return as<Fp<2>>(text);
    if (f == "F3") return as<Fp<3>>(text);
    if (f == "F5") return as<Fp<5>>(text);
    if (f == "F7") return as<Fp<7>>(text);
    if (f == "F2(t)") return as<RatFunc<2>>(text);
    if (f == "F3(t)") return as<RatFunc<3>>(text);
    if (f == "F5(t)") return as<RatFunc<5>>(text);
    if (f == "F7(t)") return as<RatFunc<7>>(text);
    throw ParseError(no, "unsupported field '" + f + "' (expected F2, F3, F5, F7 or Fp(t) for those p)");
  }
  throw ParseError(0, "missing 'field = ...'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AnyAlgebra load_algebra(const std::string& path) { return parse_algebra(read_file(path)); }

std::string field_name(const AnyAlgebra& L) {
  return std::visit([](const auto& alg) { return std::decay_t<decltype(alg)>::Scalar::field_name(); }, L);
}

}  // namespace rla
