#ifndef AGSIM_GATES_HPP
#define AGSIM_GATES_HPP

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace agsim {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

// Two-qubit basis order is |q_left q_right> = (00, 01, 10, 11) with the
// left qubit at the lower chain position. All gates here conserve the
// two-qubit excitation number.

// exp(-i U theta n0 n1) = diag(1, 1, 1, e^{-i U theta}).
Mat4 u_coulomb(double theta, double u);

// Hopping rotation with cos(t theta) on the single-excitation block and
// -i sin(t theta) off-diagonals, identity elsewhere.
Mat4 u_hop(double theta, double t);

// Spin-orbit rotation exp(-i (2/3) lambda theta h(phi)) where h(phi) is the
// single-excitation block [[0, i e^{i phi}], [-i e^{-i phi}, 0]].
Mat4 u_so(double theta, double lambda, double phi);

// Fermionic swap: exchange the two modes and keep the parity sign on |11>.
Mat4 fswap();

// The measurement change of basis CNOT * CH * CNOT, oriented so it maps the
// hopping block (XX+YY)/2 to |01><01| - |10><10|.
Mat4 diagonalizer();

// diag(1, e^{-i phi}) on one qubit; aligns a spin-orbit pair term so the
// diagonalizer applies.
Mat2 so_prerotation(double phi);

// A single placed gate of a circuit stream: 1- or 2-qubit, acting at chain
// position `position` (and position+1 for arity 2).
struct GateOp {
  std::string label;
  int position = 0;
  int arity = 2;
  Mat4 m4 = Mat4::Identity();
  Mat2 m2 = Mat2::Identity();
};

using GateList = std::vector<GateOp>;

GateOp make_gate(std::string label, int position, const Mat4& m);
GateOp make_gate(std::string label, int position, const Mat2& m);

// One gate per line: label, chain position(s), matrix entries row-major at
// full precision.
std::string export_gate_list(const GateList& gates);

}  // namespace agsim

#endif
