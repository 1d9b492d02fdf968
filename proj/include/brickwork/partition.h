#ifndef BRICKWORK_PARTITION_H_
#define BRICKWORK_PARTITION_H_

#include <cstddef>

#include "brickwork/lattice.h"
#include "brickwork/statevec.h"

namespace brickwork {

/// Largest lattice the brute-force partition sum accepts.
inline constexpr std::size_t kPartitionMaxSites = 24;
inline constexpr std::size_t kBornCheckMaxSites = 20;

/// Imaginary-temperature Ising partition function
///   Z_x = sum_{z in {+1,-1}^N} exp(i (J sum_<ij> z_i z_j + sum_i B'_i z_i)),
/// with B'_i = theta_i / 2 + x_i pi / 2.
struct PartitionValue {
    Complex value;
    std::size_t num_sites;
    Outcome x;

    double abs2() const { return std::norm(value); }
};

/// Pure enumeration over spin configurations (Gray-code order, Kahan
/// summation). Independent of the state-vector engine. The sum is split into
/// fixed chunks that are reduced in index order, so the result does not
/// depend on the worker count.
PartitionValue partition_function(const Lattice &lattice, const AngleField &field, Outcome x,
                                  unsigned workers = 0);

/// q_x from exp(-iH)|+>^N, the state-vector side of the Born identity.
double born_probability(const Lattice &lattice, const AngleField &field, Outcome x);

/// |q_x - |Z_x|^2 / 4^N|.
double verify_born_partition_identity(const Lattice &lattice, const AngleField &field, Outcome x);

/// True iff |p_x - q_x| <= gamma q_x for every x.
bool multiplicative_error_check(const Distribution &p, const Distribution &q, double gamma);

/// The un-halved sum sum_x |p_x - q_x|.
double variation_distance(const Distribution &p, const Distribution &q);

/// Half of variation_distance: the trace distance between the classical
/// states.
double trace_distance(const Distribution &p, const Distribution &q);

/// True iff |Z2_approx - Z2_true| / 2^N <= (1/poly) Z2_true / 2^N + eps/delta.
/// Rejects eps/delta >= 1/2.
bool mixed_error_check(double z2_approx, double z2_true, std::size_t num_sites, double poly_factor,
                       double epsilon, double delta);

}  // namespace brickwork

#endif  // BRICKWORK_PARTITION_H_
