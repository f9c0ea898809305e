// Benchmark: serial reference implementations against their OpenMP variants
// for the two scan-heavy kernels (full subset scan, bounded enumeration).
#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "elat/coxeter.hpp"
#include "elat/model.hpp"
#include "elat/orbits.hpp"

using namespace elat;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
double timed(const char* name, F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  double dt = seconds_since(t0);
  std::printf("%-42s %8.3f s\n", name, dt);
  return dt;
}

}  // namespace

int main(int argc, char** argv) {
  int max_degree = argc > 1 ? std::stoi(argv[1]) : 6;
  EnriquesModel m = build_model();
  CoxeterDiagram d = CoxeterDiagram::from_model(m);
  OrbitContext ctx = build_orbit_context(m);

#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled: parallel entry points fall back to serial\n");
#endif
  std::printf("enumeration degree bound %d\n\n", max_degree);

  std::size_t n_serial = 0, n_par = 0;
  double t_scan_serial = timed("subset scan (2^20), serial reference", [&] {
    n_serial = enumerate_semidefinite_subsets_naive(d).size();
  });
  double t_scan_par = timed("subset scan (2^20), OpenMP", [&] {
    n_par = enumerate_semidefinite_subsets_parallel(d).size();
  });
  if (n_serial != n_par) {
    std::printf("MISMATCH: %zu vs %zu subsets\n", n_serial, n_par);
    return 1;
  }
  std::printf("  %zu semidefinite subsets, speedup %.2fx\n\n", n_serial,
              t_scan_serial / t_scan_par);

  std::size_t e_serial = 0, e_par = 0;
  double t_enum_serial = timed("(-2)-vector enumeration, serial reference", [&] {
    e_serial = enumerate_vectors(ctx, -2, max_degree, false).size();
  });
  double t_enum_par = timed("(-2)-vector enumeration, OpenMP", [&] {
    e_par = enumerate_vectors_parallel(ctx, -2, max_degree, false).size();
  });
  if (e_serial != e_par) {
    std::printf("MISMATCH: %zu vs %zu vectors\n", e_serial, e_par);
    return 1;
  }
  std::printf("  %zu vectors, speedup %.2fx\n", e_serial, t_enum_serial / t_enum_par);
  return 0;
}
