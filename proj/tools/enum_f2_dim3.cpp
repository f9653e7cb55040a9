// Enumerates the p-nilpotent restricted Lie algebras of dimension 3 over F_2
// up to isomorphism and writes one .rla file per class.
//
//   enum_f2_dim3 OUTDIR          write class_<k>.rla
//   enum_f2_dim3 --check DIR     compare against an existing bundle

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rla/filtration.hpp"
#include "rla/io.hpp"
#include "rla/pmap.hpp"

namespace {

using namespace rla;
using F = Fp<2>;
constexpr int n = 3;

LieElement<F> bits(unsigned v) {
  LieElement<F> e(n);
  for (int k = 0; k < n; ++k) e[k] = F(static_cast<int>((v >> k) & 1U));
  return e;
}

unsigned pack(const LieElement<F>& v) {
  unsigned r = 0;
  for (int k = 0; k < n; ++k)
    if (!v[k].is_zero()) r |= 1U << k;
  return r;
}

// 18 bits: brackets [0,1], [0,2], [1,2], then p-map of x_0, x_1, x_2.
std::uint32_t encode(const RestrictedLieAlgebra<F>& L) {
  std::uint32_t c = 0;
  int shift = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, shift += n) c |= pack(L.basis_bracket(i, j)) << shift;
  for (int i = 0; i < n; ++i, shift += n) c |= pack(L.basis_pmap(i)) << shift;
  return c;
}

RestrictedLieAlgebra<F> decode(std::uint32_t c) {
  RestrictedLieAlgebra<F> L({"a", "b", "c"});
  int shift = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, shift += n) L.set_bracket(i, j, bits((c >> shift) & 7U));
  for (int i = 0; i < n; ++i, shift += n) L.set_pmap(i, bits((c >> shift) & 7U));
  return L;
}

std::vector<Mat<F>> general_linear_group() {
  std::vector<Mat<F>> out;
  for (unsigned m = 0; m < (1U << (n * n)); ++m) {
    Mat<F> M(n, n);
    for (int c = 0; c < n; ++c) M.col(c) = bits((m >> (n * c)) & 7U);
    if (rref<F>(M).rank() == n) out.push_back(M);
  }
  return out;
}

std::uint32_t canonical(const RestrictedLieAlgebra<F>& L, const std::vector<Mat<F>>& group) {
  EnvAlgebra<F> A(L);
  std::uint32_t best = UINT32_MAX;
  for (const auto& M : group) best = std::min(best, encode(rebase(A, M, L.names())));
  return best;
}

std::map<std::string, std::string> enumerate() {
  const auto group = general_linear_group();
  std::vector<std::uint32_t> classes;
  std::map<std::uint32_t, bool> seen;
  for (std::uint32_t c = 0; c < (1U << 18); ++c) {
    RestrictedLieAlgebra<F> L = decode(c);
    if (!validate(L).ok()) continue;
    std::uint32_t k = canonical(L, group);
    if (seen.count(k)) continue;
    seen[k] = true;
    if (Analysis<F>(decode(k)).filtration.p_nilpotent) classes.push_back(k);
  }
  std::sort(classes.begin(), classes.end());
  std::map<std::string, std::string> files;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    std::string body = "# isomorphism class " + std::to_string(i) + ", canonical code " +
                       std::to_string(classes[i]) + "\n" + render_algebra(decode(classes[i]));
    files["class_" + std::to_string(i) + ".rla"] = body;
  }
  return files;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"enumerate 3-dimensional p-nilpotent restricted Lie algebras over F_2"};
  std::string dir;
  bool check = false;
  app.add_option("dir", dir, "output (or bundle) directory")->required();
  app.add_flag("--check", check, "compare with the files in dir instead of writing");
  CLI11_PARSE(app, argc, argv);

  namespace fs = std::filesystem;
  const auto files = enumerate();
  if (!check) {
    fs::create_directories(dir);
    for (const auto& [name, body] : files) std::ofstream(fs::path(dir) / name, std::ios::binary) << body;
    std::cout << files.size() << " classes written to " << dir << "\n";
    return 0;
  }
  int bad = 0;
  std::size_t on_disk = 0;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".rla") ++on_disk;
  for (const auto& [name, body] : files) {
    fs::path p = fs::path(dir) / name;
    if (!fs::exists(p) || read_file(p.string()) != body) {
      std::cout << "mismatch: " << name << "\n";
      ++bad;
    }
  }
  if (on_disk != files.size()) {
    std::cout << "bundle has " << on_disk << " files, enumeration gives " << files.size() << "\n";
    ++bad;
  }
  std::cout << (bad ? "bundle differs" : "bundle matches") << " (" << files.size() << " classes)\n";
  return bad ? 1 : 0;
}
