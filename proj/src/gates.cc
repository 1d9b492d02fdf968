#include "brickwork/gates.h"

#include <cmath>

namespace brickwork {
namespace gates {

namespace {
constexpr Complex kI{0.0, 1.0};
}

Mat2 identity() { return Mat2::Identity(); }

Mat2 hadamard() {
    Mat2 h;
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    return h;
}

Mat2 pauli_x() {
    Mat2 m;
    m << 0, 1, 1, 0;
    return m;
}

Mat2 pauli_y() {
    Mat2 m;
    m << 0, -kI, kI, 0;
    return m;
}

Mat2 pauli_z() {
    Mat2 m;
    m << 1, 0, 0, -1;
    return m;
}

Mat2 rz(double theta) {
    Mat2 m = Mat2::Zero();
    m(0, 0) = std::exp(-kI * (theta / 2.0));
    m(1, 1) = std::exp(kI * (theta / 2.0));
    return m;
}

Mat2 rx(double theta) {
    return std::cos(theta / 2.0) * identity() - kI * std::sin(theta / 2.0) * pauli_x();
}

Mat2 z_power(int s) { return (s & 1) ? pauli_z() : identity(); }

Mat4 cz() {
    Mat4 m = Mat4::Identity();
    m(3, 3) = -1.0;
    return m;
}

Mat4 kron(const Mat2 &a, const Mat2 &b) {
    Mat4 m;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        }
    }
    return m;
}

Mat4 zz_phase(double phi) {
    Mat4 m = Mat4::Zero();
    m(0, 0) = std::exp(kI * phi);
    m(1, 1) = std::exp(-kI * phi);
    m(2, 2) = std::exp(-kI * phi);
    m(3, 3) = std::exp(kI * phi);
    return m;
}

}  // namespace gates

double phase_insensitive_fidelity(const MatX &a, const MatX &b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) {
        return 0.0;
    }
    return std::abs((a.adjoint() * b).trace()) / (na * nb);
}

double max_abs_diff(const MatX &a, const MatX &b) { return (a - b).cwiseAbs().maxCoeff(); }

double unitarity_defect(const MatX &u) {
    if (u.rows() != u.cols()) {
        return INFINITY;
    }
    return (u.adjoint() * u - MatX::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace brickwork
