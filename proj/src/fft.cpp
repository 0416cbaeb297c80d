#include "diffent/fft.hpp"

#include <fftw3.h>

#include <memory>
#include <mutex>

namespace diffent {
namespace {

// FFTW planning is not thread-safe; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

// Moves the centered sample (n/2) to index 0, or back. For even n both
// directions are the same permutation.
ComplexVector shifted(const Grid2D& grid, std::span<const cd> in) {
  const int nx = grid.nx();
  const int ny = grid.ny();
  ComplexVector out(in.size());
  for (int j = 0; j < ny; ++j) {
    const int js = (j + ny / 2) % ny;
    for (int i = 0; i < nx; ++i) {
      const int is = (i + nx / 2) % nx;
      out[grid.index(is, js)] = in[grid.index(i, j)];
    }
  }
  return out;
}

ComplexVector transform(const Grid2D& grid, std::span<const cd> in, int sign, double scale) {
  ComplexVector buffer = shifted(grid, in);
  auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_2d(grid.ny(), grid.nx(), data, data, sign, FFTW_ESTIMATE));
  }
  fftw_execute(plan.get());
  for (auto& v : buffer) v *= scale;
  return shifted(grid, buffer);
}

}  // namespace

ComplexVector fft2_centered(const Grid2D& grid, std::span<const cd> samples) {
  return transform(grid, samples, FFTW_FORWARD, grid.cell_area());
}

ComplexVector ifft2_centered(const Grid2D& grid, std::span<const cd> spectrum) {
  return transform(grid, spectrum, FFTW_BACKWARD, 1.0 / (grid.cell_area() * grid.size()));
}

}  // namespace diffent
