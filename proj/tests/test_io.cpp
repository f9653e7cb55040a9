#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "fixtures.hpp"
#include "rla/fmb.hpp"
#include "rla/io.hpp"
#include "rla/report.hpp"

using namespace rla;
using namespace rla::test;

namespace {

using F2 = Fp<2>;
using F3 = Fp<3>;
using R2 = RatFunc<2>;

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const char* dir : {RLA_DATA_DIR "/corpus", RLA_DATA_DIR "/f2_dim3"})
    for (const auto& e : std::filesystem::directory_iterator(dir))
      if (e.path().extension() == ".rla") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

template <class S>
bool same_algebra(const RestrictedLieAlgebra<S>& a, const RestrictedLieAlgebra<S>& b) {
  if (a.names() != b.names()) return false;
  for (int i = 0; i < a.dim(); ++i) {
    if (!equal<S>(a.basis_pmap(i), b.basis_pmap(i))) return false;
    for (int j = 0; j < a.dim(); ++j)
      if (!equal<S>(a.basis_bracket(i, j), b.basis_bracket(i, j))) return false;
  }
  return true;
}

int parse_error_line(const std::string& text) {
  try {
    parse_algebra(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("algebra files parse") {
  auto H = parse_algebra("field = F2\ndim = 3\nnames = a b c\nbracket a b = c\n");
  REQUIRE(std::holds_alternative<RestrictedLieAlgebra<F2>>(H));
  CHECK(same_algebra(std::get<RestrictedLieAlgebra<F2>>(H), heisenberg<F2>()));

  auto La = parse_algebra("# comment\nfield = F2(t)\ndim = 3\nnames = x y z\npmap x = (t)*z  # alpha\npmap y = z\n");
  REQUIRE(std::holds_alternative<RestrictedLieAlgebra<R2>>(La));
  CHECK(same_algebra(std::get<RestrictedLieAlgebra<R2>>(La), l_alpha<R2>(R2::t())));

  auto P = parse_algebra("field = F3\ndim = 3\nnames = x y z\nbracket y x = -z\npmap x = z\n");
  CHECK(same_algebra(std::get<RestrictedLieAlgebra<F3>>(P), powerful_xz<F3>()));
  CHECK(field_name(P) == "F3");
}

TEST_CASE("parse errors carry the line") {
  CHECK(parse_error_line("field = F2\ndim = 3\nnames = a b c\nbracket a a = c\n") == 4);
  CHECK(parse_error_line("field = F2\ndim = 3\nnames = a b c\nbracket a d = c\n") == 4);
  CHECK(parse_error_line("field = F2\ndim = 3\nnames = a b c\n\nbracket a b = c\nbracket b a = c\n") == 6);
  CHECK(parse_error_line("field = F2\ndim = 3\nnames = a b c\npmap a = 1\n") == 4);
  CHECK(parse_error_line("field = F2\ndim = 3\nnames = a b c\npmap a = (t)*c\n") == 4);
  CHECK(parse_error_line("field = F4\ndim = 1\nnames = a\n") == 1);
  CHECK(parse_error_line("field = F2\ndim = 2\nnames = a b c\n") == 0);
  CHECK(parse_error_line("field = F2\ndim = 1\nnames = a\nfoo\n") == 4);
}

TEST_CASE("axiom failures are validation errors") {
  // [a,c] = a breaks Jacobi with [a,b] = c over F_2
  const std::string bad = "field = F2\ndim = 3\nnames = a b c\nbracket a b = c\nbracket a c = a\n";
  try {
    parse_algebra(bad);
    FAIL("accepted an invalid algebra");
  } catch (const ParseError&) {
    FAIL("reported as a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ValidationError);
  }
  // ad(a)^2 = 0 but a^[2] = b with ad(b) != 0
  CHECK_THROWS_AS(parse_algebra("field = F2\ndim = 3\nnames = a b c\nbracket b c = a\npmap a = b\n"), Error);
}

TEST_CASE("render round trip over the corpus") {
  for (const auto& path : corpus_files()) {
    CAPTURE(path);
    AnyAlgebra any = load_algebra(path);
    std::visit(
        [](const auto& L) {
          using S = typename std::decay_t<decltype(L)>::Scalar;
          auto again = parse_algebra(render_algebra(L));
          REQUIRE(std::holds_alternative<RestrictedLieAlgebra<S>>(again));
          CHECK(same_algebra(std::get<RestrictedLieAlgebra<S>>(again), L));
        },
        any);
  }
}

TEST_CASE("element syntax round trips through render") {
  EnvAlgebra<F2> A(heisenberg<F2>());
  CHECK(equal<F2>(parse_element(A, "b*a"), A.mul(A.monomial(2), A.monomial(1))));
  CHECK(render(A, parse_element(A, "b*a")) == "a*b + c");
  CHECK(render(A, parse_element(A, "a^2")) == "0");
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    EnvElement<F2> u = A.zero();
    for (int i = 0; i < A.dim(); ++i) u[i] = F2(static_cast<int>(rng() % 2));
    CHECK(equal<F2>(parse_element(A, render(A, u)), u));
  }
  EnvAlgebra<R2> B(l_alpha<R2>(R2::t()));
  EnvElement<R2> v = B.zero();
  v[1] = R2::t();
  v[4] = R2::t() + R2(1);
  v[7] = R2(1) / R2::t();
  CHECK(equal<R2>(parse_element(B, render(B, v)), v));
  EnvAlgebra<F3> C(heisenberg<F3>());
  EnvElement<F3> w = C.zero();
  for (int i = 0; i < C.dim(); ++i) w[i] = F3((i * 7) % 3);
  CHECK(equal<F3>(parse_element(C, render(C, w)), w));
  CHECK_THROWS_AS(parse_element(A, "a*d"), ParseError);
  CHECK_THROWS_AS(parse_element(A, "a +"), ParseError);
}

TEST_CASE("basis files") {
  EnvAlgebra<F2> A(heisenberg<F2>());
  auto B1 = parse_basis(A, "{1, a, b, a*b, a*b + c, a*c, b*c, a*b*c}\n");
  auto B2 = parse_basis(A, "1\na\nb\na*b\na*b + c  # not c\na*c\nb*c\na*b*c\n");
  REQUIRE(B1.size() == 8);
  REQUIRE(B2.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) CHECK(equal<F2>(B1[i], B2[i]));
  CHECK(render_set(A, B1) == "{1, a, b, a*b, a*b + c, a*c, b*c, a*b*c}");
  auto bundled = parse_basis(A, read_file(RLA_DATA_DIR "/corpus/heisenberg_p2.fmb"));
  CHECK(is_fm_basis(Analysis<F2>(heisenberg<F2>()), bundled).ok());
}

TEST_CASE("reports are deterministic and complete") {
  const std::string text = read_file(RLA_DATA_DIR "/corpus/heisenberg_p2.rla");
  ReportOptions opt;
  auto a = make_report(text, opt).dump(2);
  auto b = make_report(text, opt).dump(2);
  CHECK(a == b);
  auto j = make_report(text, opt);
  CHECK(j["schema_version"] == 1);
  CHECK(j["input"]["digest"] == input_digest(text));
  CHECK(j["certificate"]["kind"] == "FoundBasis");
  CHECK(j["certificate"]["verification"]["valid"] == true);
  CHECK(j["filtration"]["omega_power_dims"] == nlohmann::json({7, 5, 3, 1, 0}));
  CHECK(j["filtration"]["heights"][2]["height"] == 2);
  CHECK_FALSE(j.contains("timing"));

  auto t = make_report(read_file(RLA_DATA_DIR "/corpus/l_alpha_t.rla"), opt);
  CHECK(t["certificate"]["kind"] == "NoBasis_Theorem1");
  CHECK(t["certificate"]["example_shape"]["pth_root"].is_null());

  auto bad = make_report(read_file(RLA_DATA_DIR "/corpus/not_p_nilpotent.rla"), opt);
  CHECK(bad["certificate"].is_null());
  CHECK(bad["error"]["kind"] == "NotPNilpotent");
}

TEST_CASE("input digest") {
  CHECK(input_digest("") == "fnv1a64:cbf29ce484222325");
  CHECK(input_digest("a") == "fnv1a64:af63dc4c8601ec8c");
}

}  // TEST_SUITE
