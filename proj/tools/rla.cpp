// rla: command-line front end.
// Exit codes: 0 definite answer, 2 inconclusive, 1 error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rla/abelian.hpp"
#include "rla/fmb.hpp"
#include "rla/io.hpp"
#include "rla/report.hpp"

namespace {

using namespace rla;

constexpr int kDefinite = 0;
constexpr int kError = 1;
constexpr int kInconclusive = 2;

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

template <class S>
std::vector<int> dims(const std::vector<Subspace<S>>& chain) {
  std::vector<int> d;
  for (const auto& s : chain) d.push_back(s.dim());
  return d;
}

template <class S>
void require_p_nilpotent(const Analysis<S>& an) {
  if (!an.grading) throw Error(ErrorKind::NotPNilpotent, "L is not p-nilpotent");
}

template <class S>
int cmd_check(const RestrictedLieAlgebra<S>& L) {
  Analysis<S> an(L);
  const auto& r = an.report;
  std::cout << "valid restricted Lie algebra over " << S::field_name() << ", dim " << L.dim() << "\n";
  std::cout << "abelian: " << (r.is_abelian ? "yes" : "no") << "\n";
  std::cout << "nilpotency class: " << (r.nilpotency_class ? std::to_string(*r.nilpotency_class) : "not nilpotent")
            << "\n";
  std::cout << "p-nilpotent: " << (r.is_p_nilpotent ? "yes" : "no") << "\n";
  std::cout << "powerful: " << (r.is_powerful ? "yes" : "no") << "\n";
  return kDefinite;
}

template <class S>
int cmd_series(const RestrictedLieAlgebra<S>& L) {
  Analysis<S> an(L);
  std::cout << "lower central series dims: " << join(dims(an.filtration.gamma)) << "\n";
  std::cout << "dimension subalgebra dims: " << join(dims(an.filtration.dim_subalgebras)) << "\n";
  require_p_nilpotent(an);
  std::cout << "ω-power dims: " << join(dims(an.grading->chain)) << "\n";
  std::cout << "ω-layer dims: " << join(an.grading->layer_dims) << "\n";
  return kDefinite;
}

template <class S>
int cmd_heights(const RestrictedLieAlgebra<S>& L) {
  Analysis<S> an(L);
  require_p_nilpotent(an);
  for (int i = 0; i < L.dim(); ++i)
    std::cout << (i ? ", " : "") << "ν(" << L.name(i) << ")=" << *an.filtration.height(L.basis_vector(i));
  auto d = dims(an.grading->chain);
  while (!d.empty() && d.back() == 0) d.pop_back();
  std::cout << "; ω-layer dims " << join(d) << "\n";
  return kDefinite;
}

template <class S>
int cmd_decompose(const RestrictedLieAlgebra<S>& L) {
  const EnvAlgebra<S> A(L);
  std::optional<CyclicDecomposition<S>> dec;
  if constexpr (S::is_prime_field) {
    dec = decompose(L);
  } else {
    auto d = example_shape_criterion(L);
    std::cout << d.reason << "\n";
    if (!d.has_decomposition) return kDefinite;
    dec = d.decomposition;
  }
  for (std::size_t i = 0; i < dec->generators.size(); ++i)
    std::cout << "<" << render_lie(L, dec->generators[i]) << ">_p  exponent " << dec->exponents[i] << "\n";
  return kDefinite;
}

template <class S>
int cmd_verify(const RestrictedLieAlgebra<S>& L, const std::string& basis_path) {
  Analysis<S> an(L);
  require_p_nilpotent(an);
  auto B = parse_basis(an.env, read_file(basis_path));
  auto r = is_fm_basis(an, B);
  const auto& A = an.env;
  if (r.ok()) {
    std::cout << "accepted: " << render_set(A, B) << " is a filtered multiplicative basis\n";
    return kDefinite;
  }
  std::cout << "rejected: " << render_set(A, B) << "\n";
  if (!r.contains_one) std::cout << "  1 is not in the set\n";
  if (!r.independent) std::cout << "  elements are linearly dependent\n";
  if (!r.spans_omega) std::cout << "  elements in ω do not span ω\n";
  for (const auto& v : r.violations)
    std::cout << "  (" << render(A, B[static_cast<std::size_t>(v.i)]) << ") * ("
              << render(A, B[static_cast<std::size_t>(v.j)]) << ") = " << render(A, v.product)
              << " is neither 0 nor in the set\n";
  return kDefinite;
}

template <class S>
int print_certificate(const Analysis<S>& an, const Certificate<S>& c) {
  switch (c.kind) {
    case CertificateKind::FoundBasis: std::cout << "FoundBasis: " << c.summary << "\n"; break;
    case CertificateKind::NoBasis_Theorem1: std::cout << "NoBasis (Theorem 1 route): " << c.summary << "\n"; break;
    case CertificateKind::NoBasis_Lemma2: std::cout << "NoBasis (Lemma 2 route): " << c.summary << "\n"; break;
    case CertificateKind::NoBasis_Theorem3: std::cout << "NoBasis (Theorem 3 route): " << c.summary << "\n"; break;
    case CertificateKind::NoBasis_Exhausted: std::cout << "NoBasis (exhaustive search): " << c.summary << "\n"; break;
    case CertificateKind::Inconclusive: std::cout << "Inconclusive: " << c.summary << "\n"; break;
  }
  for (const auto& n : c.notes) std::cout << "  " << n << "\n";
  if (c.search)
    std::cout << "  search: " << c.search->nodes << " nodes of " << c.search->budget << ", "
              << c.search->solutions << " solution(s)\n";
  (void)an;
  return c.definite() ? kDefinite : kInconclusive;
}

template <class S>
int cmd_search(const RestrictedLieAlgebra<S>& L, const SearchBudget& budget) {
  Analysis<S> an(L);
  require_p_nilpotent(an);
  auto res = search_fmb(an, budget);
  int code = print_certificate(an, res.certificate);
  for (const auto& B : res.solutions) std::cout << render_set(an.env, B) << "\n";
  return code;
}

template <class S>
int cmd_decide(const RestrictedLieAlgebra<S>& L, const SearchBudget& budget) {
  Analysis<S> an(L);
  DecideOptions o;
  o.budget = budget;
  return print_certificate(an, decide(an, o));
}

int cmd_report(const std::string& path, const std::string& out, const SearchBudget& budget, bool timing) {
  const std::string text = read_file(path);
  ReportOptions opt;
  opt.budget = budget;
  auto t0 = std::chrono::steady_clock::now();
  auto j = make_report(text, opt);
  if (timing) j["timing"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error(ErrorKind::Unsupported, "cannot write " + out);
  f << j.dump(2) << "\n";
  if (!j["error"].is_null()) {
    std::cerr << j["error"]["message"].get<std::string>() << "\n";
    return kError;
  }
  return j["certificate"]["kind"] == "Inconclusive" ? kInconclusive : kDefinite;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"restricted Lie algebras and filtered multiplicative bases of u(L)"};
  app.set_version_flag("--version", std::string(RLA_VERSION));
  app.require_subcommand(1);

  std::string file, basis, out;
  SearchBudget budget;
  bool timing = false;
  auto input = [&](CLI::App* c) { c->add_option("file", file, "algebra file (.rla)")->required(); };
  auto search_opts = [&](CLI::App* c) {
    c->add_option("--budget", budget.max_nodes, "node budget for the search");
    c->add_option("--threads", budget.threads, "search threads")->check(CLI::PositiveNumber);
  };

  auto* check = app.add_subcommand("check", "validate and print structural predicates");
  input(check);
  auto* series = app.add_subcommand("series", "lower central series, dimension subalgebras, ω powers");
  input(series);
  auto* heights = app.add_subcommand("heights", "heights of the basis elements and ω-power dims");
  input(heights);
  auto* decomp = app.add_subcommand("decompose", "cyclic decomposition of an abelian algebra");
  input(decomp);
  auto* verify = app.add_subcommand("fmb-verify", "check a candidate basis of u(L)");
  input(verify);
  verify->add_option("basis", basis, "basis file (.fmb)")->required();
  auto* search = app.add_subcommand("fmb-search", "exhaustive search for a basis (prime fields)");
  input(search);
  search_opts(search);
  search->add_flag("--all", budget.collect_all, "list every basis found");
  auto* dec = app.add_subcommand("decide", "run the decision pipeline");
  input(dec);
  search_opts(dec);
  auto* rep = app.add_subcommand("report", "write a JSON report");
  input(rep);
  search_opts(rep);
  rep->add_option("--json", out, "output path")->required();
  rep->add_flag("--timing", timing, "record wall-clock time (breaks byte-identical output)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rep->parsed()) return cmd_report(file, out, budget, timing);
    AnyAlgebra any = load_algebra(file);
    return std::visit(
        [&](const auto& L) -> int {
          if (check->parsed()) return cmd_check(L);
          if (series->parsed()) return cmd_series(L);
          if (heights->parsed()) return cmd_heights(L);
          if (decomp->parsed()) return cmd_decompose(L);
          if (verify->parsed()) return cmd_verify(L, basis);
          if (search->parsed()) return cmd_search(L, budget);
          return cmd_decide(L, budget);
        },
        any);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kError;
  }
}
