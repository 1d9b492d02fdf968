#ifndef BRICKWORK_STATEVEC_H_
#define BRICKWORK_STATEVEC_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "brickwork/gates.h"
#include "brickwork/lattice.h"

namespace brickwork {

inline constexpr std::size_t kDefaultQubitCap = 26;

/// The state-vector qubit cap: BRICKWORK_MAX_QUBITS if set, else 26.
std::size_t qubit_cap();

/// Outcome bitstrings are packed with site i at bit i.
using Outcome = std::uint64_t;

/// Formats site 0 first.
std::string to_bitstring(Outcome x, std::size_t num_bits);
Outcome parse_bitstring(std::string_view bits);

enum class Basis { kX, kZ };
char basis_char(Basis b);

class PhaseProgram;

/// Dense normalized amplitude vector; qubit i is bit i of the index.
class PureState {
   public:
    /// Throws if the length is not 2^n or the norm is off by more than 1e-10.
    PureState(std::size_t num_qubits, std::vector<Complex> amplitudes);

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amplitudes_.size(); }
    const std::vector<Complex> &amplitudes() const { return amplitudes_; }
    Complex amplitude(std::size_t index) const { return amplitudes_.at(index); }
    double norm_squared() const;

    /// |<this|other>|.
    double overlap(const PureState &other) const;

    friend PureState apply_phase_program(PureState state, const PhaseProgram &program);
    friend PureState apply_local_unitary(PureState state, std::span<const std::size_t> sites,
                                         const MatX &u);
    friend PureState apply_cz(PureState state, std::size_t a, std::size_t b);

   private:
    std::size_t num_qubits_;
    std::vector<Complex> amplitudes_;
};

/// One diagonal term of exp(-i H) with unit evolution time: a Z term
/// contributes exp(-i angle Z_a), a ZZ term exp(-i angle Z_a Z_b).
struct PhaseTerm {
    enum class Kind { kZ, kZZ };
    Kind kind;
    std::size_t a;
    std::size_t b;
    double angle;
};

class PhaseProgram {
   public:
    void add_z(std::size_t site, double angle);
    void add_zz(std::size_t a, std::size_t b, double angle);
    const std::vector<PhaseTerm> &terms() const { return terms_; }
    std::size_t max_site() const;
    bool empty() const { return terms_.empty(); }

   private:
    std::vector<PhaseTerm> terms_;
};

/// Phase exponent Phi(z) summed over the program's terms.
double program_phase(const PhaseProgram &program, std::size_t basis_index);

/// exp(-i H) for H = -J sum_<ij> Z_i Z_j + sum_i B_i Z_i with B_i = theta_i / 2.
PhaseProgram ising_program(const Lattice &lattice, const AngleField &field);

/// Discrete outcome distribution over 2^num_bits bitstrings.
struct Distribution {
    std::size_t num_bits = 0;
    std::vector<double> probs;

    double operator()(Outcome x) const { return probs.at(x); }
    double total() const;
    /// Throws unless probabilities are nonnegative and sum to 1 within tol.
    void validate(double tol = 1e-9) const;
};

Distribution uniform_distribution(std::size_t num_bits);
Distribution point_mass(std::size_t num_bits, Outcome x);

struct MeasurementRecord {
    std::size_t num_bits = 0;
    std::vector<Outcome> outcomes;
    std::vector<Basis> bases;
    std::uint64_t seed = 0;
};

using Rng = std::mt19937_64;
/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(Rng &rng);
/// Inverse-CDF draw from a distribution.
Outcome draw(const std::vector<double> &cumulative, Rng &rng);
std::vector<double> cumulative(const Distribution &dist);

PureState init_plus(std::size_t num_qubits);
/// Computational basis state |index>.
PureState basis_state(std::size_t num_qubits, std::size_t index);

PureState apply_phase_program(PureState state, const PhaseProgram &program);
/// `sites` holds one or two distinct qubits; for two sites the matrix acts
/// on |s0 s1> with sites[0] as the most significant tensor factor.
PureState apply_local_unitary(PureState state, std::span<const std::size_t> sites, const MatX &u);
PureState apply_local_unitary(PureState state, std::size_t site, const Mat2 &u);
PureState apply_cz(PureState state, std::size_t a, std::size_t b);

/// CZ on every edge followed by R_z(theta_i) on every site, from |+>^N.
PureState rotated_graph_state(const Lattice &lattice, const AngleField &field);
/// exp(-i H) |+>^N for the Ising program of the lattice and field.
PureState ising_state(const Lattice &lattice, const AngleField &field);

/// <+_x|psi> with |+_x> = Z^x |+>^N.
Complex x_basis_amplitude(const PureState &state, Outcome x);
Complex x_basis_amplitude(const PureState &state, std::string_view bits);

/// All-X measurement distribution, computed by one Walsh-Hadamard pass.
Distribution full_distribution(const PureState &state);

/// Outcome distribution when site i is measured in bases[i].
Distribution measure_distribution(const PureState &state, std::span<const Basis> bases);

MeasurementRecord sample_distribution(const Distribution &dist, std::size_t count, std::uint64_t seed);
MeasurementRecord sample(const PureState &state, std::size_t count, std::uint64_t seed);

struct Postselection {
    PureState state;
    double probability;
};

/// Projects `site` onto the outcome and removes it. Throws std::domain_error
/// on a zero-probability branch.
Postselection postselect(const PureState &state, std::size_t site, Basis basis, int outcome);

/// Renders "bitstring,probability" lines.
std::string distribution_to_csv(const Distribution &dist);
/// One JSON header line {"seed", "bases"} followed by one bitstring per line.
std::string record_to_text(const MeasurementRecord &record);

}  // namespace brickwork

#endif  // BRICKWORK_STATEVEC_H_
