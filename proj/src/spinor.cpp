#include "dirac/spinor.hpp"

#include "dirac/error.hpp"

#include <string>

namespace dirac {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::Configuration: return "configuration";
    case ErrorKind::Evaluation: return "evaluation";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Accuracy: return "accuracy";
    case ErrorKind::NoData: return "no-data";
    case ErrorKind::DegenerateFit: return "degenerate-fit";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Mat2C pauli(int j) {
  Mat2C s = Mat2C::Zero();
  switch (j) {
    case 1:
      s(0, 1) = 1.0;
      s(1, 0) = 1.0;
      break;
    case 2:
      s(0, 1) = -kI;
      s(1, 0) = kI;
      break;
    case 3:
      s(0, 0) = 1.0;
      s(1, 1) = -1.0;
      break;
    default:
      fail(ErrorKind::InvalidParameter, "pauli index must be 1, 2 or 3, got " + std::to_string(j));
  }
  return s;
}

Mat4C block4(const Mat2C& a, const Mat2C& b, const Mat2C& c, const Mat2C& d) {
  Mat4C m;
  m.block<2, 2>(0, 0) = a;
  m.block<2, 2>(0, 2) = b;
  m.block<2, 2>(2, 0) = c;
  m.block<2, 2>(2, 2) = d;
  return m;
}

Mat4C alpha(int j) {
  const Mat2C s = pauli(j);
  return block4(Mat2C::Zero(), s, s, Mat2C::Zero());
}

Mat4C beta() {
  return block4(Mat2C::Identity(), Mat2C::Zero(), Mat2C::Zero(), -Mat2C::Identity());
}

Mat2C pauli_dot(const Vec3R& v) {
  Mat2C s;
  s(0, 0) = v.z();
  s(0, 1) = cplx(v.x(), -v.y());
  s(1, 0) = cplx(v.x(), v.y());
  s(1, 1) = -v.z();
  return s;
}

Mat4C alpha_dot(const Vec3R& v) {
  const Mat2C s = pauli_dot(v);
  return block4(Mat2C::Zero(), s, s, Mat2C::Zero());
}

int levi_civita(int j, int k, int l) {
  if (j == k || k == l || j == l) return 0;
  // even permutations of (1,2,3)
  if ((j == 1 && k == 2 && l == 3) || (j == 2 && k == 3 && l == 1) || (j == 3 && k == 1 && l == 2)) return 1;
  return -1;
}

}  // namespace dirac
