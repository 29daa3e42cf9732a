#pragma once

// Pauli and Dirac matrices for the 3D, 4-spinor setting.
//
// Every entry of the basic matrices lies in {0, ±1, ±i}, so products and
// anticommutators are exact in floating point.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <complex>

namespace dirac {

using cplx = std::complex<double>;
using Mat2C = Eigen::Matrix2cd;
using Mat4C = Eigen::Matrix4cd;
using Vec3R = Eigen::Vector3d;
using Spinor2 = Eigen::Vector2cd;
using Spinor4 = Eigen::Vector4cd;

inline constexpr cplx kI{0.0, 1.0};

/// σ_j for j ∈ {1,2,3} (1-based, physics convention).
Mat2C pauli(int j);

/// α_j = [[0, σ_j], [σ_j, 0]] for j ∈ {1,2,3}.
Mat4C alpha(int j);

/// β = diag(1, 1, −1, −1).
Mat4C beta();

/// Σ_j v_j σ_j. Hermitian, traceless, det = −|v|².
Mat2C pauli_dot(const Vec3R& v);

/// Σ_j v_j α_j; off-diagonal blocks equal pauli_dot(v).
Mat4C alpha_dot(const Vec3R& v);

/// Block matrix [[a, b], [c, d]] from 2×2 blocks.
Mat4C block4(const Mat2C& a, const Mat2C& b, const Mat2C& c, const Mat2C& d);

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = 0.0) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Levi-Civita symbol on 1-based indices.
int levi_civita(int j, int k, int l);

}  // namespace dirac
