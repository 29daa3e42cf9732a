#pragma once

// Cubic periodic grids and spinor fields sampled on them.

#include "dirac/potential.hpp"
#include "dirac/spinor.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace dirac {

/// Box [−L/2, L/2)³ with n points per axis (n odd, n ≥ 15), spacing h = L/n.
class Grid {
 public:
  Grid(int n, double extent);

  int n() const { return n_; }
  double extent() const { return extent_; }
  double spacing() const { return extent_ / n_; }
  double cell_volume() const { const double h = spacing(); return h * h * h; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }

  /// Cell-centred nodes: symmetric about 0, which is itself a node (n odd).
  double coord(int i) const { return -0.5 * extent_ + (i + 0.5) * spacing(); }

  /// x₁ fastest, x₃ slowest.
  std::size_t index(int i1, int i2, int i3) const {
    return static_cast<std::size_t>(i1) + static_cast<std::size_t>(n_) * (i2 + static_cast<std::size_t>(n_) * i3);
  }
  Vec3R node(std::size_t idx) const;

  /// Fourier wavenumber of FFT bin i along any axis: 2π/L · (i or i − n).
  double wavenumber(int i) const;

  /// Smallest non-zero |k|, i.e. 2π/L.
  double fundamental() const;

  bool operator==(const Grid& o) const { return n_ == o.n_ && extent_ == o.extent_; }

 private:
  int n_;
  double extent_;
};

/// c-component complex field, stored component-major then x₃ slowest / x₁ fastest.
class SpinorField {
 public:
  SpinorField(const Grid& grid, int components);

  static SpinorField sample(const Grid& grid, const SpinorMap2& f);
  static SpinorField sample(const Grid& grid, const SpinorMap4& f);
  /// (upper; lower) from two 2-spinor fields on the same grid.
  static SpinorField stack(const SpinorField& upper, const SpinorField& lower);
  /// Same constant spinor at every node.
  static SpinorField constant(const Grid& grid, std::span<const cplx> value);

  const Grid& grid() const { return grid_; }
  int components() const { return components_; }
  std::size_t size() const { return data_.size(); }

  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }
  std::span<cplx> values() { return data_; }
  std::span<const cplx> values() const { return data_; }
  std::span<cplx> component(int a);
  std::span<const cplx> component(int a) const;

  cplx& at(int a, std::size_t node) { return data_[static_cast<std::size_t>(a) * grid_.size() + node]; }
  cplx at(int a, std::size_t node) const { return data_[static_cast<std::size_t>(a) * grid_.size() + node]; }

  /// Components [first, first + count) as a new field.
  SpinorField block(int first, int count) const;

  /// Discrete L² inner product h³ Σ conj(this)·other.
  cplx inner(const SpinorField& other) const;
  double norm() const;

  /// Pointwise spinor norm at one node.
  double magnitude_at(std::size_t node) const;

  SpinorField& operator+=(const SpinorField& o);
  SpinorField& operator-=(const SpinorField& o);
  SpinorField& operator*=(cplx s);
  void axpy(cplx alpha, const SpinorField& x);

  bool operator==(const SpinorField& o) const { return grid_ == o.grid_ && components_ == o.components_ && data_ == o.data_; }

 private:
  void require_compatible(const SpinorField& o, const char* op) const;

  Grid grid_;
  int components_;
  std::vector<cplx> data_;
};

SpinorField operator-(SpinorField a, const SpinorField& b);
SpinorField operator+(SpinorField a, const SpinorField& b);

/// Projects out the constant spinors (per-component mean) in place.
void remove_constants(std::span<cplx> values, std::size_t nodes);
void remove_constants(SpinorField& f);

// SPNF binary layout (little-endian):
//   "SPNF" | version u32 = 1 | c u32 | n u32 | L f64 | c·n³ × (re f64, im f64)
inline constexpr std::uint32_t kSpnfVersion = 1;
void write_spnf(const SpinorField& f, std::ostream& os);
SpinorField read_spnf(std::istream& is);
void write_spnf(const SpinorField& f, const std::filesystem::path& path);
SpinorField read_spnf(const std::filesystem::path& path);

}  // namespace dirac
