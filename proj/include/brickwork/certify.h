#ifndef BRICKWORK_CERTIFY_H_
#define BRICKWORK_CERTIFY_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "brickwork/gates.h"
#include "brickwork/lattice.h"
#include "brickwork/statevec.h"

namespace brickwork {

/// h_i = (I - S_i) / 2 with S_i = (R_z(theta_i) X R_z(theta_i)^dag)_i prod_{j~i} Z_j.
struct LocalTerm {
    std::size_t center;
    double theta;
    std::vector<std::size_t> support;  // center first, then neighbours ascending
    MatX op;                           // kron order follows support
};

std::vector<LocalTerm> parent_hamiltonian(const Lattice &lattice, const AngleField &field);

/// Dense sum of all terms; only for small lattices.
MatX dense_parent_hamiltonian(const Lattice &lattice, const std::vector<LocalTerm> &terms);

/// Pure-state ensemble sum_k w_k |psi_k><psi_k|.
struct MixedState {
    std::vector<double> weights;
    std::vector<PureState> states;

    std::size_t num_qubits() const;
    void validate(double tol = 1e-10) const;
};

MixedState pure(PureState state);
/// (1 - 3p/4) rho + (p/4)(X rho X + Y rho Y + Z rho Z) on one site.
MixedState depolarize(const MixedState &rho, std::size_t site, double p);
MixedState apply_pauli_x(const MixedState &rho, std::size_t site);

/// <S_i> on a pure or mixed state.
double stabilizer_expectation(const PureState &state, const LocalTerm &term);
double term_expectation(const MixedState &rho, const LocalTerm &term);
double exact_energy(const MixedState &rho, const std::vector<LocalTerm> &terms);

/// <psi|rho|psi>.
double overlap_fidelity(const PureState &psi, const MixedState &rho);
/// (1/2) || |psi><psi| - rho ||_1, from the spectrum on span{psi, rho's states}.
double exact_trace_distance(const PureState &psi, const MixedState &rho);

/// Bases that measure a term: center in X after undoing its rotation, the
/// rest in Z. Records hold full bitstrings; the eigenvalue is the support parity.
std::vector<Basis> term_bases(const LocalTerm &term, std::size_t num_sites);
Distribution term_distribution(const MixedState &rho, const LocalTerm &term);
int term_eigenvalue(const LocalTerm &term, Outcome outcome);

struct TermCounts {
    std::size_t center;
    std::uint64_t shots = 0;
    std::uint64_t ones = 0;
};

TermCounts count_record(const LocalTerm &term, const MeasurementRecord &record);

struct EnergyEstimate {
    std::vector<double> term_means;
    std::vector<double> term_std_errors;
    double total;
    double std_error;
};

EnergyEstimate energy_estimate(const std::vector<TermCounts> &counts);

struct Bounds {
    double fidelity;
    double trace_distance;
};

Bounds fidelity_and_trace_bounds(double energy, double gap, double eps_prime);

std::uint64_t sample_budget(int m, int n, double gap, double coupling, double eps_prime, double alpha);

/// Fractions instantiating eps_d = O(eps), eps_m = O(eps), eps' = O(eps^2).
struct BudgetConstants {
    double distance_fraction = 0.5;
    double measurement_fraction = 0.5;
    double eps_prime_factor = 0.125;
};

struct BudgetSplit {
    double eps_d;
    double eps_m;
    double eps_prime;
    double per_site_cap;
};

BudgetSplit noise_budget_split(double eps, std::size_t num_sites, const BudgetConstants &constants = {});

struct NoiseModel {
    double flip_probability = 0.0;
    double depolarizing = 0.0;
    std::vector<std::size_t> depolarized_sites;

    void validate() const;
};

/// Flips each bit of each outcome independently.
MeasurementRecord apply_measurement_noise(const MeasurementRecord &record, const NoiseModel &noise,
                                          std::uint64_t seed);
/// Binary symmetric channel on every bit.
Distribution apply_measurement_noise(const Distribution &dist, const NoiseModel &noise);
/// Probability that an eigenvalue read off `support_size` bits is flipped.
double parity_flip_probability(double flip, std::size_t support_size);

MixedState apply_state_noise(const MixedState &rho, const NoiseModel &noise);

/// Binomial draw of `shots` eigenvalues per term.
std::vector<TermCounts> simulate_counts(const MixedState &rho, const std::vector<LocalTerm> &terms,
                                        std::uint64_t shots, double flip_probability, std::uint64_t seed);
/// Explicit bitstring records per term.
std::vector<MeasurementRecord> simulate_records(const MixedState &rho, const std::vector<LocalTerm> &terms,
                                                std::uint64_t shots, std::uint64_t seed);

enum class Verdict { kAccept, kReject, kInsufficientSamples };
const char *to_string(Verdict v);

struct CertifyOptions {
    double epsilon = 0.1;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    NoiseModel noise;
    BudgetConstants constants;
    double gap = 1.0;
    double coupling = 1.0;
};

struct CertificationReport {
    std::vector<double> term_energies;
    double energy;
    double energy_std_error;
    double fidelity_bound;
    double trace_bound;
    BudgetSplit budget;
    std::uint64_t samples_required;
    std::uint64_t samples_used;  // fewest shots over all terms
    double alpha;
    double threshold;
    Verdict verdict;
};

/// Simulates the protocol on rho with M shots per term.
CertificationReport certify(const MixedState &rho, const Lattice &lattice, const AngleField &field,
                            const CertifyOptions &options);
/// Evaluates supplied counts; fewer than M shots on any term gives
/// kInsufficientSamples.
CertificationReport certify_counts(const std::vector<TermCounts> &counts, const Lattice &lattice,
                                   const CertifyOptions &options);

std::string report_to_json(const CertificationReport &report);

/// {"terms": [{"site": i, "shots": N, "ones": k}, ...]}
std::vector<TermCounts> counts_from_json(const std::string &text);

}  // namespace brickwork

#endif  // BRICKWORK_CERTIFY_H_
