#include "agsim/gates.hpp"

#include <cmath>
#include <sstream>

namespace agsim {

namespace {
const std::complex<double> kI{0.0, 1.0};
}

Mat4 u_coulomb(double theta, double u) {
  Mat4 m = Mat4::Identity();
  m(3, 3) = std::exp(-kI * u * theta);
  return m;
}

Mat4 u_hop(double theta, double t) {
  Mat4 m = Mat4::Identity();
  double c = std::cos(t * theta);
  double s = std::sin(t * theta);
  m(1, 1) = c;
  m(2, 2) = c;
  m(1, 2) = -kI * s;
  m(2, 1) = -kI * s;
  return m;
}

Mat4 u_so(double theta, double lambda, double phi) {
  Mat4 m = Mat4::Identity();
  double a = 2.0 / 3.0 * lambda * theta;
  double c = std::cos(a);
  double s = std::sin(a);
  m(1, 1) = c;
  m(2, 2) = c;
  m(1, 2) = std::exp(kI * phi) * s;
  m(2, 1) = -std::exp(-kI * phi) * s;
  return m;
}

Mat4 fswap() {
  Mat4 m = Mat4::Zero();
  m(0, 0) = 1.0;
  m(1, 2) = 1.0;
  m(2, 1) = 1.0;
  m(3, 3) = -1.0;
  return m;
}

Mat4 diagonalizer() {
  // CNOT with the left qubit as control.
  Mat4 cnot = Mat4::Zero();
  cnot(0, 0) = 1.0;
  cnot(1, 1) = 1.0;
  cnot(2, 3) = 1.0;
  cnot(3, 2) = 1.0;
  // Controlled Hadamard, control on the right qubit, target the left.
  const double r = 1.0 / std::sqrt(2.0);
  Mat4 ch = Mat4::Zero();
  ch(0, 0) = 1.0;
  ch(2, 2) = 1.0;
  ch(1, 1) = r;
  ch(1, 3) = r;
  ch(3, 1) = r;
  ch(3, 3) = -r;
  return cnot * ch * cnot;
}

Mat2 so_prerotation(double phi) {
  Mat2 m = Mat2::Identity();
  m(1, 1) = std::exp(-kI * phi);
  return m;
}

GateOp make_gate(std::string label, int position, const Mat4& m) {
  GateOp op;
  op.label = std::move(label);
  op.position = position;
  op.arity = 2;
  op.m4 = m;
  return op;
}

GateOp make_gate(std::string label, int position, const Mat2& m) {
  GateOp op;
  op.label = std::move(label);
  op.position = position;
  op.arity = 1;
  op.m2 = m;
  return op;
}

std::string export_gate_list(const GateList& gates) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& g : gates) {
    os << g.label << " ";
    if (g.arity == 2) {
      os << g.position << " " << g.position + 1;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
          os << " " << g.m4(r, c).real() << " " << g.m4(r, c).imag();
    } else {
      os << g.position;
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          os << " " << g.m2(r, c).real() << " " << g.m2(r, c).imag();
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace agsim
