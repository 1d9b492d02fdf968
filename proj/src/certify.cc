#include "brickwork/certify.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace brickwork {

namespace {

constexpr std::size_t kDenseHamiltonianMaxSites = 12;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t term_seed(std::uint64_t seed, std::size_t term) { return splitmix64(seed ^ splitmix64(term + 1)); }

MatX kron(const MatX &a, const MatX &b) {
    MatX out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Mat2 rotated_x(double theta) { return gates::rz(theta) * gates::pauli_x() * gates::rz(-theta); }

}  // namespace

std::vector<LocalTerm> parent_hamiltonian(const Lattice &lattice, const AngleField &field) {
    validate_field(lattice, field);
    std::vector<LocalTerm> terms;
    terms.reserve(lattice.num_sites());
    for (std::size_t i = 0; i < lattice.num_sites(); ++i) {
        LocalTerm t{i, field.angles[i], {i}, {}};
        for (auto j : lattice.neighbors(i)) t.support.push_back(j);
        MatX s = rotated_x(t.theta);
        for (std::size_t k = 1; k < t.support.size(); ++k) s = kron(s, gates::pauli_z());
        t.op = (MatX::Identity(s.rows(), s.cols()) - s) / 2.0;
        terms.push_back(std::move(t));
    }
    return terms;
}

MatX dense_parent_hamiltonian(const Lattice &lattice, const std::vector<LocalTerm> &terms) {
    const std::size_t n = lattice.num_sites();
    if (n > kDenseHamiltonianMaxSites) throw std::length_error("dense Hamiltonian limited to 12 sites");
    const std::size_t dim = std::size_t{1} << n;
    MatX h = MatX::Zero(dim, dim);
    for (const auto &t : terms) {
        const std::size_t k = t.support.size();
        std::size_t mask = 0;
        for (auto s : t.support) mask |= std::size_t{1} << s;
        auto local_index = [&](std::size_t z) {
            std::size_t r = 0;
            for (std::size_t j = 0; j < k; ++j) {
                if ((z >> t.support[j]) & 1) r |= std::size_t{1} << (k - 1 - j);
            }
            return r;
        };
        for (std::size_t c = 0; c < dim; ++c) {
            const std::size_t lc = local_index(c);
            for (std::size_t lr = 0; lr < (std::size_t{1} << k); ++lr) {
                std::size_t r = c & ~mask;
                for (std::size_t j = 0; j < k; ++j) {
                    if ((lr >> (k - 1 - j)) & 1) r |= std::size_t{1} << t.support[j];
                }
                h(r, c) += t.op(lr, lc);
            }
        }
    }
    return h;
}

std::size_t MixedState::num_qubits() const {
    if (states.empty()) throw std::invalid_argument("empty mixed state");
    return states.front().num_qubits();
}

void MixedState::validate(double tol) const {
    if (states.empty() || states.size() != weights.size()) {
        throw std::invalid_argument("mixed state needs one weight per component");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (weights[k] < 0.0) throw std::invalid_argument("negative mixture weight");
        if (states[k].num_qubits() != states.front().num_qubits()) {
            throw std::invalid_argument("mixture components differ in size");
        }
        sum += weights[k];
    }
    if (std::abs(sum - 1.0) > tol) throw std::invalid_argument("mixture weights must sum to 1");
}

MixedState pure(PureState state) { return {{1.0}, {std::move(state)}}; }

MixedState depolarize(const MixedState &rho, std::size_t site, double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarizing weight must lie in [0, 1]");
    if (p == 0.0) return rho;
    MixedState out;
    const Mat2 paulis[] = {gates::pauli_x(), gates::pauli_y(), gates::pauli_z()};
    for (std::size_t k = 0; k < rho.states.size(); ++k) {
        out.weights.push_back(rho.weights[k] * (1.0 - 0.75 * p));
        out.states.push_back(rho.states[k]);
        for (const auto &sigma : paulis) {
            out.weights.push_back(rho.weights[k] * 0.25 * p);
            out.states.push_back(apply_local_unitary(rho.states[k], site, sigma));
        }
    }
    return out;
}

MixedState apply_pauli_x(const MixedState &rho, std::size_t site) {
    MixedState out{rho.weights, {}};
    for (const auto &s : rho.states) out.states.push_back(apply_local_unitary(s, site, gates::pauli_x()));
    return out;
}

double stabilizer_expectation(const PureState &state, const LocalTerm &term) {
    const auto &a = state.amplitudes();
    const std::size_t cbit = std::size_t{1} << term.center;
    std::size_t zmask = 0;
    for (std::size_t j = 1; j < term.support.size(); ++j) zmask |= std::size_t{1} << term.support[j];
    const Complex up = std::polar(1.0, term.theta);
    const Complex down = std::conj(up);
    Complex acc = 0.0;
    for (std::size_t z = 0; z < a.size(); ++z) {
        if (a[z] == 0.0) continue;
        Complex v = a[z] * ((z & cbit) ? down : up);
        if (std::popcount(z & zmask) & 1) v = -v;
        acc += std::conj(a[z ^ cbit]) * v;
    }
    return acc.real();
}

double term_expectation(const MixedState &rho, const LocalTerm &term) {
    double s = 0.0;
    for (std::size_t k = 0; k < rho.states.size(); ++k) {
        s += rho.weights[k] * stabilizer_expectation(rho.states[k], term);
    }
    return (1.0 - s) / 2.0;
}

double exact_energy(const MixedState &rho, const std::vector<LocalTerm> &terms) {
    double e = 0.0;
    for (const auto &t : terms) e += term_expectation(rho, t);
    return e;
}

double overlap_fidelity(const PureState &psi, const MixedState &rho) {
    double f = 0.0;
    for (std::size_t k = 0; k < rho.states.size(); ++k) {
        f += rho.weights[k] * std::norm(psi.overlap(rho.states[k]));
    }
    return f;
}

double exact_trace_distance(const PureState &psi, const MixedState &rho) {
    rho.validate();
    const std::size_t cols = rho.states.size() + 1;
    const std::size_t dim = psi.dim();
    MatX v(dim, cols);
    v.col(0) = Eigen::Map<const Eigen::VectorXcd>(psi.amplitudes().data(), dim);
    Eigen::VectorXd d(cols);
    d(0) = 1.0;
    for (std::size_t k = 0; k < rho.states.size(); ++k) {
        v.col(k + 1) = Eigen::Map<const Eigen::VectorXcd>(rho.states[k].amplitudes().data(), dim);
        d(k + 1) = -rho.weights[k];
    }
    // Orthonormal basis of the span from the Gram matrix, then the small
    // difference matrix in that basis.
    const MatX gram = v.adjoint() * v;
    Eigen::SelfAdjointEigenSolver<MatX> ge(gram);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < ge.eigenvalues().size(); ++i) {
        if (ge.eigenvalues()(i) > 1e-12) keep.push_back(i);
    }
    MatX c(keep.size(), cols);
    for (std::size_t r = 0; r < keep.size(); ++r) {
        c.row(r) = std::sqrt(ge.eigenvalues()(keep[r])) * ge.eigenvectors().col(keep[r]).adjoint();
    }
    const MatX diff = c * d.cast<Complex>().asDiagonal() * c.adjoint();
    Eigen::SelfAdjointEigenSolver<MatX> de(diff, Eigen::EigenvaluesOnly);
    return 0.5 * de.eigenvalues().cwiseAbs().sum();
}

std::vector<Basis> term_bases(const LocalTerm &term, std::size_t num_sites) {
    std::vector<Basis> bases(num_sites, Basis::kZ);
    bases.at(term.center) = Basis::kX;
    return bases;
}

Distribution term_distribution(const MixedState &rho, const LocalTerm &term) {
    rho.validate();
    const std::size_t n = rho.num_qubits();
    const auto bases = term_bases(term, n);
    Distribution out{n, std::vector<double>(std::size_t{1} << n, 0.0)};
    for (std::size_t k = 0; k < rho.states.size(); ++k) {
        if (rho.weights[k] == 0.0) continue;
        const PureState undone = apply_local_unitary(rho.states[k], term.center, gates::rz(-term.theta));
        const Distribution d = measure_distribution(undone, bases);
        for (std::size_t x = 0; x < d.probs.size(); ++x) out.probs[x] += rho.weights[k] * d.probs[x];
    }
    return out;
}

int term_eigenvalue(const LocalTerm &term, Outcome outcome) {
    int parity = 0;
    for (auto s : term.support) parity ^= static_cast<int>((outcome >> s) & 1);
    return parity;
}

TermCounts count_record(const LocalTerm &term, const MeasurementRecord &record) {
    for (auto s : term.support) {
        if (s >= record.num_bits) throw std::invalid_argument("record does not cover the term support");
    }
    if (!record.bases.empty()) {
        for (std::size_t s = 0; s < record.bases.size(); ++s) {
            const Basis want = s == term.center ? Basis::kX : Basis::kZ;
            const bool on_support = std::find(term.support.begin(), term.support.end(), s) != term.support.end();
            if (on_support && record.bases[s] != want) {
                throw std::invalid_argument("record was not taken in the term's basis");
            }
        }
    }
    TermCounts c{term.center, record.outcomes.size(), 0};
    for (auto x : record.outcomes) c.ones += term_eigenvalue(term, x);
    return c;
}

EnergyEstimate energy_estimate(const std::vector<TermCounts> &counts) {
    if (counts.empty()) throw std::invalid_argument("no measurement records");
    EnergyEstimate e{{}, {}, 0.0, 0.0};
    double var = 0.0;
    for (const auto &c : counts) {
        if (c.shots == 0) throw std::invalid_argument("term has no records");
        if (c.ones > c.shots) throw std::invalid_argument("more ones than shots");
        const double mean = static_cast<double>(c.ones) / static_cast<double>(c.shots);
        const double v = mean * (1.0 - mean) / static_cast<double>(c.shots);
        e.term_means.push_back(mean);
        e.term_std_errors.push_back(std::sqrt(v));
        e.total += mean;
        var += v;
    }
    e.std_error = std::sqrt(var);
    return e;
}

Bounds fidelity_and_trace_bounds(double energy, double gap, double eps_prime) {
    if (!(gap > 0.0)) throw std::invalid_argument("gap must be positive");
    const double f = std::clamp(1.0 - energy / gap, 0.0, 1.0);
    const double lo = std::max(f - eps_prime, 0.0);
    return {f, std::sqrt(std::max(0.0, 1.0 - lo * lo))};
}

std::uint64_t sample_budget(int m, int n, double gap, double coupling, double eps_prime, double alpha) {
    if (m <= 0 || n <= 0) throw std::invalid_argument("m and n must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (!(eps_prime > 0.0)) throw std::invalid_argument("eps' must be positive");
    if (!(gap > 0.0) || !(coupling > 0.0)) throw std::invalid_argument("gap and coupling must be positive");
    const double mn = static_cast<double>(m) * static_cast<double>(n);
    const double log_term = std::log(-(mn + 1.0) / std::log1p(-alpha));
    const double bound = coupling * mn * mn / (2.0 * gap * gap * eps_prime * eps_prime) * log_term;
    if (!std::isfinite(bound) || bound > 1e18) throw std::overflow_error("sample budget overflows");
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(bound)));
}

BudgetSplit noise_budget_split(double eps, std::size_t num_sites, const BudgetConstants &constants) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    if (num_sites == 0) throw std::invalid_argument("no sites");
    BudgetSplit b;
    b.eps_d = constants.distance_fraction * eps;
    b.eps_m = constants.measurement_fraction * eps;
    b.eps_prime = constants.eps_prime_factor * eps * eps;
    b.per_site_cap = b.eps_m / static_cast<double>(num_sites);
    return b;
}

void NoiseModel::validate() const {
    if (!(flip_probability >= 0.0 && flip_probability <= 0.5)) {
        throw std::invalid_argument("flip probability must lie in [0, 1/2]");
    }
    if (!(depolarizing >= 0.0 && depolarizing <= 1.0)) {
        throw std::invalid_argument("depolarizing weight must lie in [0, 1]");
    }
}

MeasurementRecord apply_measurement_noise(const MeasurementRecord &record, const NoiseModel &noise,
                                          std::uint64_t seed) {
    noise.validate();
    MeasurementRecord out = record;
    if (noise.flip_probability == 0.0) return out;
    Rng rng(seed);
    for (auto &x : out.outcomes) {
        for (std::size_t b = 0; b < record.num_bits; ++b) {
            if (uniform01(rng) < noise.flip_probability) x ^= Outcome{1} << b;
        }
    }
    return out;
}

Distribution apply_measurement_noise(const Distribution &dist, const NoiseModel &noise) {
    noise.validate();
    Distribution out = dist;
    const double q = noise.flip_probability;
    if (q == 0.0) return out;
    for (std::size_t b = 0; b < dist.num_bits; ++b) {
        const std::size_t bit = std::size_t{1} << b;
        for (std::size_t x = 0; x < out.probs.size(); ++x) {
            if (x & bit) continue;
            const double a = out.probs[x];
            const double c = out.probs[x | bit];
            out.probs[x] = (1.0 - q) * a + q * c;
            out.probs[x | bit] = q * a + (1.0 - q) * c;
        }
    }
    return out;
}

double parity_flip_probability(double flip, std::size_t support_size) {
    return 0.5 * (1.0 - std::pow(1.0 - 2.0 * flip, static_cast<double>(support_size)));
}

MixedState apply_state_noise(const MixedState &rho, const NoiseModel &noise) {
    noise.validate();
    MixedState out = rho;
    for (auto s : noise.depolarized_sites) out = depolarize(out, s, noise.depolarizing);
    return out;
}

std::vector<TermCounts> simulate_counts(const MixedState &rho, const std::vector<LocalTerm> &terms,
                                        std::uint64_t shots, double flip_probability, std::uint64_t seed) {
    rho.validate();
    std::vector<TermCounts> counts;
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const double p1 = std::clamp(term_expectation(rho, terms[t]), 0.0, 1.0);
        const double pf = parity_flip_probability(flip_probability, terms[t].support.size());
        const double p = p1 * (1.0 - pf) + (1.0 - p1) * pf;
        Rng rng(term_seed(seed, t));
        std::binomial_distribution<std::uint64_t> binom(shots, p);
        counts.push_back({terms[t].center, shots, binom(rng)});
    }
    return counts;
}

std::vector<MeasurementRecord> simulate_records(const MixedState &rho, const std::vector<LocalTerm> &terms,
                                                std::uint64_t shots, std::uint64_t seed) {
    std::vector<MeasurementRecord> records;
    for (std::size_t t = 0; t < terms.size(); ++t) {
        auto r = sample_distribution(term_distribution(rho, terms[t]), shots, term_seed(seed, t));
        r.bases = term_bases(terms[t], rho.num_qubits());
        records.push_back(std::move(r));
    }
    return records;
}

const char *to_string(Verdict v) {
    switch (v) {
        case Verdict::kAccept:
            return "accept";
        case Verdict::kReject:
            return "reject";
        case Verdict::kInsufficientSamples:
            return "insufficient samples";
    }
    return "?";
}

CertificationReport certify(const MixedState &rho, const Lattice &lattice, const AngleField &field,
                            const CertifyOptions &options) {
    options.noise.validate();
    const auto terms = parent_hamiltonian(lattice, field);
    const auto budget = noise_budget_split(options.epsilon, lattice.num_sites(), options.constants);
    const auto shots =
        sample_budget(lattice.rows(), lattice.cols(), options.gap, options.coupling, budget.eps_prime, options.alpha);
    const MixedState noisy = apply_state_noise(rho, options.noise);
    const auto counts = simulate_counts(noisy, terms, shots, options.noise.flip_probability, options.seed);
    return certify_counts(counts, lattice, options);
}

CertificationReport certify_counts(const std::vector<TermCounts> &counts, const Lattice &lattice,
                                   const CertifyOptions &options) {
    CertificationReport r;
    r.budget = noise_budget_split(options.epsilon, lattice.num_sites(), options.constants);
    r.samples_required = sample_budget(lattice.rows(), lattice.cols(), options.gap, options.coupling,
                                       r.budget.eps_prime, options.alpha);
    r.alpha = options.alpha;
    r.threshold = std::sqrt(1.0 - r.budget.eps_d * r.budget.eps_d) + r.budget.eps_prime;

    std::vector<TermCounts> sorted = counts;
    std::sort(sorted.begin(), sorted.end(), [](const auto &a, const auto &b) { return a.center < b.center; });
    if (sorted.size() != lattice.num_sites()) {
        throw std::invalid_argument("need one count entry per lattice site");
    }
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i].center != i) throw std::invalid_argument("count entries must cover each site once");
    }
    r.samples_used = std::numeric_limits<std::uint64_t>::max();
    for (const auto &c : sorted) r.samples_used = std::min(r.samples_used, c.shots);

    const bool any_empty = r.samples_used == 0;
    if (any_empty) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r.term_energies.assign(sorted.size(), nan);
        r.energy = r.energy_std_error = nan;
        r.fidelity_bound = 0.0;
        r.trace_bound = 1.0;
    } else {
        const auto est = energy_estimate(sorted);
        r.term_energies = est.term_means;
        r.energy = est.total;
        r.energy_std_error = est.std_error;
        const auto b = fidelity_and_trace_bounds(est.total, options.gap, r.budget.eps_prime);
        r.fidelity_bound = b.fidelity;
        r.trace_bound = b.trace_distance;
    }
    if (r.samples_used < r.samples_required) {
        r.verdict = Verdict::kInsufficientSamples;
    } else {
        r.verdict = r.fidelity_bound >= r.threshold ? Verdict::kAccept : Verdict::kReject;
    }
    return r;
}

std::string report_to_json(const CertificationReport &report) {
    nlohmann::json j;
    j["term_energies"] = report.term_energies;
    j["energy"] = report.energy;
    j["energy_std_error"] = report.energy_std_error;
    j["fidelity_bound"] = report.fidelity_bound;
    j["trace_distance_bound"] = report.trace_bound;
    j["budget"] = {{"eps_d", report.budget.eps_d},
                   {"eps_m", report.budget.eps_m},
                   {"eps_prime", report.budget.eps_prime},
                   {"per_site_cap", report.budget.per_site_cap}};
    j["samples_required"] = report.samples_required;
    j["samples_used"] = report.samples_used;
    j["alpha"] = report.alpha;
    j["threshold"] = report.threshold;
    j["verdict"] = to_string(report.verdict);
    return j.dump();
}

std::vector<TermCounts> counts_from_json(const std::string &text) {
    const auto j = nlohmann::json::parse(text);
    std::vector<TermCounts> out;
    for (const auto &t : j.at("terms")) {
        out.push_back({t.at("site").get<std::size_t>(), t.at("shots").get<std::uint64_t>(),
                       t.at("ones").get<std::uint64_t>()});
    }
    return out;
}

}  // namespace brickwork
