#pragma once

// Thin RAII layer over FFTW for the cubic periodic grid, plus the spectral
// derivative D_j = (1/i)∂_j acting by the Fourier multiplier k_j.

#include "dirac/field.hpp"

#include <memory>
#include <span>
#include <string>

namespace dirac {

/// Unnormalised in-place 3D transforms on n³ complex arrays. Plans are built
/// with FFTW_ESTIMATE so that results are bitwise reproducible across runs.
class Fft3 {
 public:
  explicit Fft3(int n);
  ~Fft3();
  Fft3(const Fft3&) = delete;
  Fft3& operator=(const Fft3&) = delete;

  void forward(std::span<cplx> data) const;
  void backward(std::span<cplx> data) const;
  int n() const { return n_; }

 private:
  int n_;
  void* forward_plan_;
  void* backward_plan_;
};

/// Shared per-n plan; creation is serialised, execution is reentrant.
const Fft3& fft_for(int n);

/// Version string of the linked FFT library.
std::string fft_library_version();

/// Wavevector components at every node in FFT bin order (same layout as fields).
struct WaveVectors {
  std::vector<double> k1, k2, k3;
};
std::shared_ptr<const WaveVectors> wave_vectors(const Grid& grid);

/// D_axis f = (1/i) ∂_axis f through the exact Fourier multiplier k_axis.
/// axis ∈ {1,2,3}.
std::vector<cplx> spectral_derivative(const Grid& grid, std::span<const cplx> f, int axis);

}  // namespace dirac
