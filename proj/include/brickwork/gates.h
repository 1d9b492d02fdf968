#ifndef BRICKWORK_GATES_H_
#define BRICKWORK_GATES_H_

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace brickwork {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using MatX = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
/// Every angle that is a multiple of pi/8 is built from this constant.
inline constexpr double kPiOver8 = kPi / 8.0;

namespace gates {

Mat2 identity();
Mat2 hadamard();
Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();
/// R_z(theta) = exp(-i theta Z / 2).
Mat2 rz(double theta);
/// R_x(theta) = exp(-i theta X / 2).
Mat2 rx(double theta);
/// Z^s for s in {0, 1}.
Mat2 z_power(int s);

/// Two-qubit gates act on (first, second) with the first factor as the
/// most significant tensor slot: kron(A, B) |a b> = A|a> (x) B|b>.
Mat4 cz();
Mat4 kron(const Mat2 &a, const Mat2 &b);
/// exp(i phi Z (x) Z).
Mat4 zz_phase(double phi);

}  // namespace gates

/// Normalized Hilbert-Schmidt overlap |tr(A^dag B)| / (||A||_F ||B||_F).
/// Equals 1 exactly when A and B agree up to a global phase and scale.
double phase_insensitive_fidelity(const MatX &a, const MatX &b);

/// Max-abs entry of a - b.
double max_abs_diff(const MatX &a, const MatX &b);

/// ||U^dag U - I||_max.
double unitarity_defect(const MatX &u);

}  // namespace brickwork

#endif  // BRICKWORK_GATES_H_
