#ifndef BRICKWORK_MBQC_H_
#define BRICKWORK_MBQC_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "brickwork/gates.h"
#include "brickwork/lattice.h"
#include "brickwork/statevec.h"

namespace brickwork {

/// A measurement pattern on a small graph. Every site that is not an output
/// is measured, after CZ on every edge and R_z(angle) on every site. Input
/// sites start maximally entangled with reference qubits, so the
/// postselected residual state is the Choi state of the realized operator.
struct Pattern {
    std::size_t num_sites = 0;
    std::vector<Edge> edges;
    std::vector<double> angles;
    std::vector<Basis> bases;  // per site, used for measured sites
    std::vector<std::size_t> inputs;
    std::vector<std::size_t> outputs;
};

struct RealizedOperator {
    /// Matrix in the kron convention: inputs[0] / outputs[0] are the most
    /// significant tensor factors. Scaled so that a unitary result is unitary.
    MatX op;
    /// Branch probability for a maximally mixed input.
    double probability;
};

/// Postselects measured sites (ascending site order) on `outcomes`.
RealizedOperator realize_pattern(const Pattern &pattern, const std::vector<int> &outcomes);

/// Linear X-measured chain: sites 0..L-1 measured with the given angles,
/// site L is the output. Realizes prod_j H Z^{o_j} R_z(theta_j).
Pattern chain_pattern(const std::vector<double> &angles);
Mat2 simulate_chain(const std::vector<double> &angles, const std::vector<int> &outcomes);
/// The same product written out gate by gate.
Mat2 chain_product(const std::vector<double> &angles, const std::vector<int> &outcomes);

/// H Z^s R_z(theta): the gate propagated by one X measurement with outcome s.
Mat2 propagate_single_measurement(double theta, int s);

/// A postselected chain and the operator it is meant to realize. The target
/// is Z^{left_z} * core * Z^{right_z}; the Z factors are the byproducts that
/// remain after postselection.
struct Gadget {
    std::string name;
    std::vector<double> angles;
    std::vector<int> postselection;
    Mat2 target;
    int left_z = 0;
    int right_z = 0;
};

/// Angles (theta/2, 0, -theta/2, 0), postselection (0, s, 0, s), target R_z(theta)^s.
Gadget conditional_rotation_gadget(double theta, int s);

/// Angles (pi/8, 0, -pi/4, 0, pi/4, 0, -pi/8), postselection
/// (s1 ^ s3', s2, 0, s2, 0, s3, 0) for k = s1 s2 s3 in binary; target
/// Z^{s3} H R_z(k pi/4) Z^{s3'}.
Gadget hrz_k_gadget(int k, int s3_prime);

/// Postselection string that realizes H R_z(k pi/4) given the seven angles.
std::vector<int> hrz_postselection(int k, int s3_prime);

Mat2 realized_gadget_operator(const Gadget &gadget);
double gadget_fidelity(const Gadget &gadget);

enum class Pauli { kI, kX, kY, kZ };
const char *to_string(Pauli p);
Mat2 pauli_matrix(Pauli p);

struct PauliByproduct {
    Pauli left;
    Pauli right;
};

/// If flipping the outcome at `position` changes the realized operator U to
/// L * U * R for Paulis L and R (up to phase), returns them.
std::optional<PauliByproduct> flip_byproduct(const Gadget &gadget, std::size_t position);

/// ||CZ - e^{i pi/4} e^{-i pi/4 I Z} e^{-i pi/4 Z I} e^{i pi/4 Z Z}||_max.
struct CzDecomposition {
    Mat4 product;
    double residual;
};
CzDecomposition cz_phase_decomposition();

/// Outcome of absorbing the local fields that the Ising coupling leaves
/// behind (each J = pi/4 edge equals CZ times R_z(-pi/2) on both ends).
struct SiteAdjustment {
    std::size_t site;
    std::size_t degree;
    double angle_shift;
    bool flip_outcome;
};

struct FlipRules {
    std::vector<SiteAdjustment> adjustments;
    /// Sites whose X outcome is negated.
    Outcome flip_mask = 0;
    /// Degree-3 sites: if the translation-invariant field were kept instead
    /// of shifted, the seven-chain starting there realizes H R_z(k pi/4) by
    /// postselecting the bits of degree3_logical_relabel(k).
    std::vector<std::size_t> relabel_sites;
};

struct AbsorbedField {
    AngleField field;
    FlipRules rules;
};

/// Degree 1: angle + pi/2. Degree 2: outcome flip. Degree 3: angle - pi/2.
/// Requires J = pi/4 and degrees <= 3.
AbsorbedField absorb_fields(const Lattice &lattice, const AngleField &raw);

Outcome apply_flip_rules(Outcome x, const FlipRules &rules);
Distribution apply_flip_rules(const Distribution &dist, const FlipRules &rules);

/// k - 2 (mod 8): the logical index to postselect when the first qubit of
/// a seven-chain carries the uncompensated degree-3 field.
int degree3_logical_relabel(int k);

/// Break/bridge on the three-qubit line 1 - 0 - 2 with R_z(pi/2) on 0:
/// measuring site 0 leaves a two-qubit operator on (1, 2).
RealizedOperator red_site_measurement(Basis basis, int outcome);
/// Z0: I I. Z1: Z Z. X0: e^{i pi/4 ZZ}. X1: e^{i pi/4 ZZ} (Z Z).
Mat4 expected_red_site_operator(Basis basis, int outcome);

struct RedSite {
    std::size_t cluster_site;
    Basis basis;
    /// Target sites whose outcome flips when this site reads 1.
    Outcome flip_mask;
};

/// Square-lattice to brickwork reduction. Target site (i, j) sits at
/// cluster site (2i, 2j); every other cluster site is red. Connectors of
/// target edges are bridged (X after R_z(pi/2)), all remaining red sites are
/// broken (Z).
struct ReductionPlan {
    Lattice cluster;
    Lattice target;
    AngleField target_field;
    AngleField cluster_field;
    std::vector<std::size_t> blue_sites;
    std::vector<RedSite> red_sites;
    std::vector<Basis> cluster_bases;

    std::size_t num_red() const { return red_sites.size(); }
    /// Target outcome x from a cluster outcome (x', y).
    Outcome relabel(Outcome cluster_outcome) const;
    /// Red-site outcome y packed in red-site order.
    Outcome red_bits(Outcome cluster_outcome) const;
};

/// 3mn - 2m - 2n + 1 red sites for an m x n target grid.
std::size_t red_site_count(int m, int n);

/// Plans the reduction of a (2m-1) x (2n-1) cluster to a target whose sites
/// fill an m x n grid and whose edges join grid neighbours.
ReductionPlan plan_reduction(const Lattice &cluster, const Lattice &target, const AngleField &target_field);

/// Cluster of (2m-1) x (14n-1) sites to build_brickwork(m, n) with the
/// canonical field.
ReductionPlan reduce_cluster_to_brickwork(const Lattice &cluster);

/// The cluster state the plan measures: rotated graph state with the plan's
/// cluster field.
PureState reduction_source_state(const ReductionPlan &plan);

/// Distribution of y alone.
Distribution red_marginal(const Distribution &square, const ReductionPlan &plan);

/// x -> sum_y D(relabel^{-1}(x, y)). Throws std::domain_error if any q_y
/// differs from 2^-r by more than `tol`.
Distribution marginalize_square_to_brickwork(const Distribution &square, const ReductionPlan &plan,
                                             double tol = 1e-9);

std::string reduction_plan_to_json(const ReductionPlan &plan);

struct GadgetCheck {
    std::string name;
    double fidelity;
    double residual;
    bool pass;
};

/// Conditional rotation for s in {0,1} and theta in {k pi/8 : k < 16}, all
/// sixteen H R_z(k pi/4) cases and the CZ decomposition.
std::vector<GadgetCheck> run_gadget_suite();

}  // namespace brickwork

#endif  // BRICKWORK_MBQC_H_
