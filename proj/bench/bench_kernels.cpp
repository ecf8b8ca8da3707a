// Times the OpenMP kernels against their serial references on a large
// two-segment layout and checks the outputs agree exactly. On a single
// hardware core the interesting number is parity (no parallel overhead
// regression); with more cores the same binary reports the speedup.

#include <phs/kernels.hpp>
#include <phs/presets.hpp>
#include <phs/rng.hpp>

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace phs;

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(int reps, void (*fn)(const DiscreteLayout&, const Matrix&, Matrix&),
               const DiscreteLayout& lay, const Matrix& x, Matrix& out) {
  fn(lay, x, out);  // warm up, also sizes the output
  const auto start = Clock::now();
  for (int r = 0; r < reps; ++r) fn(lay, x, out);
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count() /
         reps;
}

struct Pair {
  const char* name;
  void (*serial)(const DiscreteLayout&, const Matrix&, Matrix&);
  void (*parallel)(const DiscreteLayout&, const Matrix&, Matrix&);
};

}  // namespace

int main() {
  const int points = 20000;
  const int cols = 64;
  const int reps = 20;

  const SystemSpec spec = acoustic();
  const DiscreteLayout lay = build_layout(spec, {points, points});

  Rng rng(1);
  Matrix x(lay.dofs, cols);
  for (Index j = 0; j < x.cols(); ++j)
    for (Index i = 0; i < x.rows(); ++i) x(i, j) = rng.normal();

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (compiled without OpenMP)\n");
#endif
  std::printf("layout: %d dofs x %d columns, %d reps per timing\n\n", lay.dofs,
              cols, reps);
  std::printf("%-12s %12s %12s %9s %s\n", "kernel", "serial ms", "parallel ms",
              "speedup", "max|diff|");

  const Pair pairs[] = {
      {"coenergy", kernels::coenergy_serial, kernels::coenergy},
      {"apply_free", kernels::apply_free_serial, kernels::apply_free},
      {"apply_mass", kernels::apply_mass_serial, kernels::apply_mass},
  };

  bool all_equal = true;
  for (const Pair& p : pairs) {
    Matrix out_serial, out_parallel;
    const double ms_serial = time_ms(reps, p.serial, lay, x, out_serial);
    const double ms_parallel = time_ms(reps, p.parallel, lay, x, out_parallel);
    const double diff = (out_serial - out_parallel).cwiseAbs().maxCoeff();
    all_equal = all_equal && diff == 0.0;
    std::printf("%-12s %12.3f %12.3f %8.2fx %9.2e\n", p.name, ms_serial,
                ms_parallel, ms_serial / ms_parallel, diff);
  }

  if (!all_equal) {
    std::printf("\nkernel outputs diverged\n");
    return 1;
  }
  std::printf("\nall kernel pairs agree exactly\n");
  return 0;
}
