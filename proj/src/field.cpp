#include "dirac/field.hpp"

#include "dirac/error.hpp"
#include "dirac/simd/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

namespace dirac {

Grid::Grid(int n, double extent) : n_(n), extent_(extent) {
  if (n % 2 == 0) fail(ErrorKind::Configuration, "grid n must be odd, got " + std::to_string(n));
  if (n < 15) fail(ErrorKind::Configuration, "grid n must be >= 15, got " + std::to_string(n));
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    std::ostringstream os;
    os << "grid extent L must be positive, got " << extent;
    fail(ErrorKind::Configuration, os.str());
  }
}

Vec3R Grid::node(std::size_t idx) const {
  const std::size_t n = static_cast<std::size_t>(n_);
  const int i1 = static_cast<int>(idx % n);
  const int i2 = static_cast<int>((idx / n) % n);
  const int i3 = static_cast<int>(idx / (n * n));
  return {coord(i1), coord(i2), coord(i3)};
}

double Grid::wavenumber(int i) const {
  const int shifted = (i <= (n_ - 1) / 2) ? i : i - n_;
  return fundamental() * shifted;
}

double Grid::fundamental() const { return 2.0 * std::numbers::pi / extent_; }

SpinorField::SpinorField(const Grid& grid, int components)
    : grid_(grid), components_(components), data_(static_cast<std::size_t>(components) * grid.size()) {
  if (components != 2 && components != 4) {
    fail(ErrorKind::InvalidParameter, "spinor fields have 2 or 4 components, got " + std::to_string(components));
  }
}

SpinorField SpinorField::sample(const Grid& grid, const SpinorMap2& f) {
  SpinorField out(grid, 2);
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Spinor2 v = f(grid.node(i));
    out.data_[i] = v(0);
    out.data_[n + i] = v(1);
  }
  return out;
}

SpinorField SpinorField::sample(const Grid& grid, const SpinorMap4& f) {
  SpinorField out(grid, 4);
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Spinor4 v = f(grid.node(i));
    for (int a = 0; a < 4; ++a) out.data_[a * n + i] = v(a);
  }
  return out;
}

SpinorField SpinorField::stack(const SpinorField& upper, const SpinorField& lower) {
  if (upper.components_ != 2 || lower.components_ != 2 || !(upper.grid_ == lower.grid_)) {
    fail(ErrorKind::InvalidParameter, "stack needs two 2-component fields on the same grid");
  }
  SpinorField out(upper.grid_, 4);
  std::copy(upper.data_.begin(), upper.data_.end(), out.data_.begin());
  std::copy(lower.data_.begin(), lower.data_.end(), out.data_.begin() + upper.data_.size());
  return out;
}

SpinorField SpinorField::constant(const Grid& grid, std::span<const cplx> value) {
  SpinorField out(grid, static_cast<int>(value.size()));
  for (int a = 0; a < out.components_; ++a) {
    auto c = out.component(a);
    std::fill(c.begin(), c.end(), value[a]);
  }
  return out;
}

std::span<cplx> SpinorField::component(int a) {
  return std::span<cplx>(data_).subspan(static_cast<std::size_t>(a) * grid_.size(), grid_.size());
}

std::span<const cplx> SpinorField::component(int a) const {
  return std::span<const cplx>(data_).subspan(static_cast<std::size_t>(a) * grid_.size(), grid_.size());
}

SpinorField SpinorField::block(int first, int count) const {
  if (first < 0 || first + count > components_) fail(ErrorKind::InvalidParameter, "block range out of bounds");
  SpinorField out(grid_, count);
  const std::size_t n = grid_.size();
  std::copy(data_.begin() + first * n, data_.begin() + (first + count) * n, out.data_.begin());
  return out;
}

void SpinorField::require_compatible(const SpinorField& o, const char* op) const {
  if (!(grid_ == o.grid_) || components_ != o.components_) {
    fail(ErrorKind::InvalidParameter, std::string(op) + ": fields live on different grids or spinor sizes");
  }
}

cplx SpinorField::inner(const SpinorField& other) const {
  require_compatible(other, "inner");
  return grid_.cell_volume() * simd::active().dot(data_.data(), other.data_.data(), data_.size());
}

double SpinorField::norm() const {
  return std::sqrt(grid_.cell_volume() * simd::active().norm2(data_.data(), data_.size()));
}

double SpinorField::magnitude_at(std::size_t node) const {
  double s = 0.0;
  for (int a = 0; a < components_; ++a) s += std::norm(at(a, node));
  return std::sqrt(s);
}

SpinorField& SpinorField::operator+=(const SpinorField& o) {
  require_compatible(o, "+=");
  simd::active().axpy(1.0, o.data_.data(), data_.data(), data_.size());
  return *this;
}

SpinorField& SpinorField::operator-=(const SpinorField& o) {
  require_compatible(o, "-=");
  simd::active().axpy(-1.0, o.data_.data(), data_.data(), data_.size());
  return *this;
}

SpinorField& SpinorField::operator*=(cplx s) {
  for (auto& v : data_) v *= s;
  return *this;
}

void SpinorField::axpy(cplx alpha, const SpinorField& x) {
  require_compatible(x, "axpy");
  simd::active().axpy(alpha, x.data_.data(), data_.data(), data_.size());
}

SpinorField operator-(SpinorField a, const SpinorField& b) { return a -= b; }
SpinorField operator+(SpinorField a, const SpinorField& b) { return a += b; }

void remove_constants(std::span<cplx> values, std::size_t nodes) {
  const std::size_t comps = values.size() / nodes;
  for (std::size_t a = 0; a < comps; ++a) {
    auto c = values.subspan(a * nodes, nodes);
    cplx mean = 0.0;
    for (const cplx& v : c) mean += v;
    mean /= static_cast<double>(nodes);
    for (cplx& v : c) v -= mean;
  }
}

void remove_constants(SpinorField& f) { remove_constants(f.values(), f.grid().size()); }

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put_le(std::ostream& os, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  is.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (!is) fail(ErrorKind::Io, "SPNF stream truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_spnf(const SpinorField& f, std::ostream& os) {
  os.write("SPNF", 4);
  put_le<std::uint32_t>(os, kSpnfVersion);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(f.components()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid().n()));
  put_le<double>(os, f.grid().extent());
  for (const cplx& v : f.values()) {
    put_le<double>(os, v.real());
    put_le<double>(os, v.imag());
  }
  if (!os) fail(ErrorKind::Io, "failed writing SPNF stream");
}

SpinorField read_spnf(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "SPNF", 4) != 0) fail(ErrorKind::Io, "not an SPNF stream (bad magic)");
  const auto version = get_le<std::uint32_t>(is);
  if (version != kSpnfVersion) fail(ErrorKind::Io, "unsupported SPNF version " + std::to_string(version));
  const auto c = get_le<std::uint32_t>(is);
  const auto n = get_le<std::uint32_t>(is);
  const auto extent = get_le<double>(is);
  SpinorField f(Grid(static_cast<int>(n), extent), static_cast<int>(c));
  for (cplx& v : f.values()) {
    const double re = get_le<double>(is);
    const double im = get_le<double>(is);
    v = cplx(re, im);
  }
  return f;
}

void write_spnf(const SpinorField& f, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  write_spnf(f, os);
}

SpinorField read_spnf(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::Io, "cannot open " + path.string());
  return read_spnf(is);
}

}  // namespace dirac
