#ifndef BRICKWORK_ENSEMBLE_H_
#define BRICKWORK_ENSEMBLE_H_

#include <array>
#include <cstddef>
#include <cstdint>

#include "brickwork/gates.h"
#include "brickwork/mbqc.h"
#include "brickwork/statevec.h"

namespace brickwork {

/// Two-qubit operator of one brick: two rows of five sites, the first four
/// columns measured (all outcomes 0) with angles step * pi/4, outputs in
/// column 4, vertical edges at columns 2 and 4.
///   steps = (alpha, beta, gamma, delta, alpha', beta', gamma', delta')
/// Unprimed angles sit on the upper row, which is the most significant factor.
struct BrickGate {
    std::array<int, 8> steps{};
    Mat4 unitary;

    double angle(std::size_t slot) const { return steps.at(slot) * kPi / 4.0; }
};

Pattern brick_pattern(const std::array<int, 8> &steps);
BrickGate make_brick_gate(const std::array<int, 8> &steps);
/// CZ (HR(delta)HR(gamma) x ...) CZ (HR(beta)HR(alpha) x ...), written out.
Mat4 brick_circuit(const std::array<int, 8> &steps);
BrickGate random_brick_gate(std::uint64_t seed);

/// Product-state search: some product input leaves the output with two
/// nonzero Schmidt coefficients.
bool is_entangling(const BrickGate &gate);
/// Rank of the realigned 4x4 matrix (tolerance 1e-9).
int operator_schmidt_rank(const Mat4 &u);
/// delta or delta' outside {0, pi}.
bool delta_criterion(const BrickGate &gate);

/// KS distance between the empirical CDF of 2^N q_x and Exp(1).
double porter_thomas_stat(const Distribution &dist);
/// Same statistic on an explicit list of rescaled probabilities.
double ks_exponential(std::vector<double> values);

/// Brickwork Ising state on `rows` rows and `layers` cells per row plus one
/// bare |+> column; every earlier column is postselected on uniformly random
/// X outcomes. Returns the distribution on the bare column.
Distribution random_instance_distribution(int rows, int layers, std::uint64_t seed);

}  // namespace brickwork

#endif  // BRICKWORK_ENSEMBLE_H_
