#include "dirac/fft.hpp"

#include "dirac/error.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace dirac {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::span<cplx> d) { return reinterpret_cast<fftw_complex*>(d.data()); }

}  // namespace

Fft3::Fft3(int n) : n_(n) {
  std::vector<cplx> scratch(static_cast<std::size_t>(n) * n * n);
  std::lock_guard<std::mutex> lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  forward_plan_ = fftw_plan_dft_3d(n, n, n, p, p, FFTW_FORWARD, flags);
  backward_plan_ = fftw_plan_dft_3d(n, n, n, p, p, FFTW_BACKWARD, flags);
  if (forward_plan_ == nullptr || backward_plan_ == nullptr) fail(ErrorKind::Evaluation, "FFTW planning failed");
}

Fft3::~Fft3() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

void Fft3::forward(std::span<cplx> data) const {
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(data), as_fftw(data));
}

void Fft3::backward(std::span<cplx> data) const {
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(data), as_fftw(data));
}

const Fft3& fft_for(int n) {
  static std::mutex m;
  static std::map<int, std::unique_ptr<Fft3>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Fft3>(n);
  return *slot;
}

std::shared_ptr<const WaveVectors> wave_vectors(const Grid& grid) {
  static std::mutex m;
  static std::map<std::pair<int, double>, std::shared_ptr<const WaveVectors>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[{grid.n(), grid.extent()}];
  if (!slot) {
    auto wv = std::make_shared<WaveVectors>();
    const std::size_t size = grid.size();
    wv->k1.resize(size);
    wv->k2.resize(size);
    wv->k3.resize(size);
    const int n = grid.n();
    for (int i3 = 0; i3 < n; ++i3)
      for (int i2 = 0; i2 < n; ++i2)
        for (int i1 = 0; i1 < n; ++i1) {
          const std::size_t idx = grid.index(i1, i2, i3);
          wv->k1[idx] = grid.wavenumber(i1);
          wv->k2[idx] = grid.wavenumber(i2);
          wv->k3[idx] = grid.wavenumber(i3);
        }
    slot = std::move(wv);
  }
  return slot;
}

std::vector<cplx> spectral_derivative(const Grid& grid, std::span<const cplx> f, int axis) {
  if (axis < 1 || axis > 3) fail(ErrorKind::InvalidParameter, "derivative axis must be 1, 2 or 3");
  if (f.size() != grid.size()) fail(ErrorKind::InvalidParameter, "field size does not match grid");
  std::vector<cplx> out(f.begin(), f.end());
  const Fft3& fft = fft_for(grid.n());
  fft.forward(out);
  const auto wv = wave_vectors(grid);
  const std::vector<double>& k = axis == 1 ? wv->k1 : (axis == 2 ? wv->k2 : wv->k3);
  const double inv_n = 1.0 / static_cast<double>(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= k[i] * inv_n;
  fft.backward(out);
  return out;
}

std::string fft_library_version() { return fftw_version; }

}  // namespace dirac
