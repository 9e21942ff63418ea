// Compares the OpenMP kernels against their serial reference
// implementations: system assembly, LDL^T factorization, grid sampling
// and the brute-force signed distance field.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "vshape/constraints.hpp"
#include "vshape/grid.hpp"
#include "vshape/linear_system.hpp"
#include "vshape/model.hpp"

namespace {

using vshape::Constraint;
using vshape::Kernel;
using vshape::Point;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed) {}
  double uniform() {
    s_ ^= s_ >> 12;
    s_ ^= s_ << 25;
    s_ ^= s_ >> 27;
    return static_cast<double>((s_ * 0x2545f4914f6cdd1dull) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t s_;
};

template <typename F>
double time_ms(F&& f, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s serial %9.2f ms   omp %9.2f ms   speedup %.2fx\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled; both columns run the same serial code\n");
#endif

  Rng rng(12345);
  const std::size_t k = 900;
  std::vector<Constraint> cons;
  cons.reserve(k);
  for (std::size_t i = 0; i < k; ++i)
    cons.push_back({Point{rng.uniform(), rng.uniform(), rng.uniform()}, rng.uniform()});

  vshape::LinearSystem sys_serial, sys_parallel;
  report("assemble_system (k=900)",
         time_ms([&] { sys_serial = vshape::assemble_system_serial(cons, Kernel::cubic); }),
         time_ms([&] { sys_parallel = vshape::assemble_system(cons, Kernel::cubic); }));

  report("ldlt_factorize (n=904)",
         time_ms([&] { vshape::ldlt_factorize(sys_serial.a, sys_serial.n, false); }),
         time_ms([&] { vshape::ldlt_factorize(sys_parallel.a, sys_parallel.n, true); }));

  vshape::SolveOptions serial_opts;
  serial_opts.parallel = false;
  const vshape::RbfModel model_serial = vshape::solve_model(cons, Kernel::cubic, serial_opts);
  const vshape::RbfModel model = vshape::solve_model(cons, Kernel::cubic);

  const vshape::Box bounds{Point{-0.2, -0.2, -0.2}, Point{1.2, 1.2, 1.2}};
  const vshape::Field3 field = [&](double x, double y, double z) {
    return model.evaluate({x, y, z});
  };
  report("sample_grid 49^3 x k=900",
         time_ms([&] { vshape::sample_grid_serial(field, bounds, {49, 49, 49}); }, 2),
         time_ms([&] { vshape::sample_grid(field, bounds, {49, 49, 49}); }, 2));

  vshape::GrayImage img;
  img.width = img.height = 256;
  img.pixels.resize(256 * 256);
  for (int y = 0; y < 256; ++y)
    for (int x = 0; x < 256; ++x) {
      const double d = 80.0 - std::hypot(x - 128.0, y - 128.0);
      img.at(x, y) = 255.0 * std::clamp(0.5 + d, 0.0, 1.0);
    }
  report("signed_distance_field 256^2",
         time_ms([&] { vshape::signed_distance_field_serial(img, 127.5); }, 2),
         time_ms([&] { vshape::signed_distance_field(img, 127.5); }, 2));

  (void)model_serial;
  return 0;
}
