#include "dirac/lattice.hpp"

#include "dirac/error.hpp"
#include "dirac/fft.hpp"
#include "dirac/parallel.hpp"
#include "dirac/quadrature.hpp"
#include "dirac/simd/kernels.hpp"

#include <algorithm>
#include <sstream>

namespace dirac {

const char* to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Weyl: return "weyl";
    case OperatorKind::Dirac: return "dirac";
    case OperatorKind::MasslessGeneral: return "massless-general";
  }
  return "unknown";
}

SampledPotential sample_potential(const VectorPotential& a, const Grid& grid) {
  SampledPotential s;
  const std::size_t n = grid.size();
  s.a1.resize(n);
  s.a2.resize(n);
  s.a3.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3R x = grid.node(i);
    const Vec3R v = a(x);
    if (!v.allFinite()) {
      std::ostringstream os;
      os << "potential '" << a.label() << "' is not finite at node " << i << " (" << x.x() << ", " << x.y() << ", "
         << x.z() << ")";
      fail(ErrorKind::Evaluation, os.str());
    }
    s.a1[i] = v.x();
    s.a2[i] = v.y();
    s.a3[i] = v.z();
  }
  return s;
}

double wraparound_budget(const VectorPotential& a, const Grid& grid) {
  double sup = 0.0;
  for (const Vec3R& d : cube_directions()) sup = std::max(sup, a(0.5 * grid.extent() * d).norm());
  return sup;
}

namespace detail {

class LatticeOperator {
 public:
  LatticeOperator(OperatorKind kind, int components, OperatorMetadata meta)
      : kind_(kind), components_(components), meta_(std::move(meta)), waves_(wave_vectors(meta_.grid)) {}
  virtual ~LatticeOperator() = default;

  virtual void apply(const cplx* in, cplx* out, bool adjoint) const = 0;

  OperatorKind kind() const { return kind_; }
  int components() const { return components_; }
  const OperatorMetadata& metadata() const { return meta_; }

 protected:
  std::size_t nodes() const { return meta_.grid.size(); }

  // out = σ·D (in_up, in_dn), spectrally. out may not alias in.
  void free_weyl(const cplx* up, const cplx* dn, cplx* out_up, cplx* out_dn) const {
    const std::size_t n = nodes();
    const Fft3& fft = fft_for(meta_.grid.n());
    std::copy(up, up + n, out_up);
    std::copy(dn, dn + n, out_dn);
    cplx* outs[2] = {out_up, out_dn};
    parallel_for(2, [&](std::size_t c) { fft.forward({outs[c], n}); });
    simd::active().pauli_apply(waves_->k1.data(), waves_->k2.data(), waves_->k3.data(), out_up, out_dn, out_up,
                               out_dn, n, 1.0 / static_cast<double>(n), false);
    parallel_for(2, [&](std::size_t c) { fft.backward({outs[c], n}); });
  }

  OperatorKind kind_;
  int components_;
  OperatorMetadata meta_;
  std::shared_ptr<const WaveVectors> waves_;
};

namespace {

class WeylCore {
 public:
  WeylCore(const VectorPotential& a, const Grid& grid) : sampled_(sample_potential(a, grid)) {}

  // out −= σ·A in, accumulated onto out
  void subtract_potential(const cplx* up, const cplx* dn, cplx* out_up, cplx* out_dn, std::size_t n) const {
    simd::active().pauli_apply(sampled_.a1.data(), sampled_.a2.data(), sampled_.a3.data(), up, dn, out_up, out_dn, n,
                               -1.0, true);
  }

 private:
  SampledPotential sampled_;
};

class WeylOperator final : public LatticeOperator {
 public:
  WeylOperator(const VectorPotential& a, const Grid& grid)
      : LatticeOperator(OperatorKind::Weyl, 2, {a.label(), 0.0, grid, wraparound_budget(a, grid)}), core_(a, grid) {}

  void apply(const cplx* in, cplx* out, bool) const override {
    const std::size_t n = nodes();
    free_weyl(in, in + n, out, out + n);
    core_.subtract_potential(in, in + n, out, out + n, n);
  }

 private:
  WeylCore core_;
};

class DiracOperator final : public LatticeOperator {
 public:
  DiracOperator(const VectorPotential& a, double mass, const Grid& grid)
      : LatticeOperator(OperatorKind::Dirac, 4, {a.label(), mass, grid, wraparound_budget(a, grid)}), core_(a, grid) {}

  // H (ψ; φ) = (Tφ + mψ ; Tψ − mφ)
  void apply(const cplx* in, cplx* out, bool) const override {
    const std::size_t n = nodes();
    const cplx* up = in;
    const cplx* lo = in + 2 * n;
    cplx* out_up = out;
    cplx* out_lo = out + 2 * n;
    free_weyl(lo, lo + n, out_up, out_up + n);
    core_.subtract_potential(lo, lo + n, out_up, out_up + n, n);
    free_weyl(up, up + n, out_lo, out_lo + n);
    core_.subtract_potential(up, up + n, out_lo, out_lo + n, n);
    const double m = meta_.mass;
    if (m != 0.0) {
      simd::active().axpy(m, up, out_up, 2 * n);
      simd::active().axpy(-m, lo, out_lo, 2 * n);
    }
  }

 private:
  WeylCore core_;
};

class MasslessGeneralOperator final : public LatticeOperator {
 public:
  MasslessGeneralOperator(const MatrixPotential& q, const Grid& grid)
      : LatticeOperator(OperatorKind::MasslessGeneral, 4, {q.label(), 0.0, grid, 0.0}) {
    const std::size_t n = grid.size();
    samples_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3R x = grid.node(i);
      const Mat4C m = q(x);
      if (!m.allFinite()) {
        std::ostringstream os;
        os << "matrix potential '" << q.label() << "' is not finite at (" << x.x() << ", " << x.y() << ", " << x.z()
           << ")";
        fail(ErrorKind::Evaluation, os.str());
      }
      const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
      if (!is_hermitian(m, 1e-12 * scale)) {
        std::ostringstream os;
        os << "matrix potential '" << q.label() << "' is not Hermitian at (" << x.x() << ", " << x.y() << ", "
           << x.z() << ")";
        fail(ErrorKind::Validation, os.str());
      }
      samples_[i] = m;
    }
  }

  // α·D (ψ; φ) = (σ·Dφ ; σ·Dψ), then + Q f node by node
  void apply(const cplx* in, cplx* out, bool adjoint) const override {
    const std::size_t n = nodes();
    free_weyl(in + 2 * n, in + 3 * n, out, out + n);
    free_weyl(in, in + n, out + 2 * n, out + 3 * n);
    for (std::size_t i = 0; i < n; ++i) {
      const Mat4C& q = samples_[i];
      const cplx f[4] = {in[i], in[n + i], in[2 * n + i], in[3 * n + i]};
      for (int r = 0; r < 4; ++r) {
        cplx acc = 0.0;
        for (int c = 0; c < 4; ++c) acc += (adjoint ? std::conj(q(c, r)) : q(r, c)) * f[c];
        out[r * n + i] += acc;
      }
    }
  }

 private:
  std::vector<Mat4C> samples_;
};

}  // namespace
}  // namespace detail

OperatorHandle::OperatorHandle(std::shared_ptr<const detail::LatticeOperator> impl) : impl_(std::move(impl)) {}

SpinorField OperatorHandle::apply(const SpinorField& f) const {
  if (f.components() != components() || !(f.grid() == grid())) {
    fail(ErrorKind::InvalidParameter, "field does not match the operator's grid or spinor size");
  }
  SpinorField out(grid(), components());
  impl_->apply(f.data(), out.data(), false);
  return out;
}

SpinorField OperatorHandle::adjoint_apply(const SpinorField& f) const {
  if (f.components() != components() || !(f.grid() == grid())) {
    fail(ErrorKind::InvalidParameter, "field does not match the operator's grid or spinor size");
  }
  SpinorField out(grid(), components());
  impl_->apply(f.data(), out.data(), true);
  return out;
}

void OperatorHandle::apply_raw(const cplx* in, cplx* out) const { impl_->apply(in, out, false); }

OperatorKind OperatorHandle::kind() const { return impl_->kind(); }
int OperatorHandle::components() const { return impl_->components(); }
const OperatorMetadata& OperatorHandle::metadata() const { return impl_->metadata(); }

OperatorHandle build_weyl(const VectorPotential& a, const Grid& grid) {
  return OperatorHandle(std::make_shared<detail::WeylOperator>(a, grid));
}

OperatorHandle build_dirac(const VectorPotential& a, double mass, const Grid& grid) {
  if (!(mass >= 0.0)) fail(ErrorKind::InvalidParameter, "mass must be >= 0");
  return OperatorHandle(std::make_shared<detail::DiracOperator>(a, mass, grid));
}

OperatorHandle build_massless_general(const MatrixPotential& q, const Grid& grid) {
  return OperatorHandle(std::make_shared<detail::MasslessGeneralOperator>(q, grid));
}

}  // namespace dirac
