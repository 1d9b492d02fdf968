#include "brickwork/statevec.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace brickwork {

namespace {

constexpr Complex kI{0.0, 1.0};

// Inserts a zero bit at position `pos` of `x`.
std::size_t insert_zero_bit(std::size_t x, std::size_t pos) {
    const std::size_t low = x & ((std::size_t{1} << pos) - 1);
    return ((x >> pos) << (pos + 1)) | low;
}

void check_site(const PureState &state, std::size_t site) {
    if (site >= state.num_qubits()) {
        throw std::out_of_range("site " + std::to_string(site) + " out of range for " +
                                std::to_string(state.num_qubits()) + " qubits");
    }
}

}  // namespace

std::size_t qubit_cap() {
    if (const char *env = std::getenv("BRICKWORK_MAX_QUBITS")) {
        char *end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 40) {
            return v;
        }
    }
    return kDefaultQubitCap;
}

std::string to_bitstring(Outcome x, std::size_t num_bits) {
    std::string s(num_bits, '0');
    for (std::size_t i = 0; i < num_bits; ++i) {
        if ((x >> i) & 1) s[i] = '1';
    }
    return s;
}

Outcome parse_bitstring(std::string_view bits) {
    if (bits.size() > 64) {
        throw std::invalid_argument("bitstring longer than 64 sites");
    }
    Outcome x = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            x |= Outcome{1} << i;
        } else if (bits[i] != '0') {
            throw std::invalid_argument("bitstring may only contain 0 and 1");
        }
    }
    return x;
}

char basis_char(Basis b) { return b == Basis::kX ? 'X' : 'Z'; }

PureState::PureState(std::size_t num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    if (num_qubits_ > 40 || amplitudes_.size() != (std::size_t{1} << num_qubits_)) {
        throw std::invalid_argument("amplitude vector length must be 2^num_qubits");
    }
    if (std::abs(norm_squared() - 1.0) > 1e-10) {
        throw std::invalid_argument("state is not normalized");
    }
}

double PureState::norm_squared() const {
    double s = 0.0;
    for (const auto &a : amplitudes_) s += std::norm(a);
    return s;
}

double PureState::overlap(const PureState &other) const {
    if (other.num_qubits_ != num_qubits_) {
        throw std::invalid_argument("overlap of states with different qubit counts");
    }
    Complex s = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        s += std::conj(amplitudes_[i]) * other.amplitudes_[i];
    }
    return std::abs(s);
}

void PhaseProgram::add_z(std::size_t site, double angle) {
    terms_.push_back({PhaseTerm::Kind::kZ, site, site, angle});
}

void PhaseProgram::add_zz(std::size_t a, std::size_t b, double angle) {
    if (a == b) {
        throw std::invalid_argument("ZZ term needs two distinct sites");
    }
    terms_.push_back({PhaseTerm::Kind::kZZ, a, b, angle});
}

std::size_t PhaseProgram::max_site() const {
    std::size_t m = 0;
    for (const auto &t : terms_) m = std::max({m, t.a, t.b});
    return m;
}

double program_phase(const PhaseProgram &program, std::size_t z) {
    double phi = 0.0;
    for (const auto &t : program.terms()) {
        int parity = static_cast<int>((z >> t.a) & 1);
        if (t.kind == PhaseTerm::Kind::kZZ) parity ^= static_cast<int>((z >> t.b) & 1);
        phi += parity ? -t.angle : t.angle;
    }
    return phi;
}

PhaseProgram ising_program(const Lattice &lattice, const AngleField &field) {
    validate_field(lattice, field);
    PhaseProgram program;
    for (auto [a, b] : lattice.edges()) {
        program.add_zz(a, b, -field.coupling);
    }
    for (std::size_t i = 0; i < lattice.num_sites(); ++i) {
        program.add_z(i, field.field(i));
    }
    return program;
}

double Distribution::total() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
}

void Distribution::validate(double tol) const {
    if (num_bits > 40 || probs.size() != (std::size_t{1} << num_bits)) {
        throw std::invalid_argument("distribution size must be 2^num_bits");
    }
    for (double p : probs) {
        if (!(p >= -tol)) throw std::invalid_argument("negative probability");
    }
    if (std::abs(total() - 1.0) > tol) {
        throw std::invalid_argument("distribution does not sum to 1");
    }
}

Distribution uniform_distribution(std::size_t num_bits) {
    const std::size_t dim = std::size_t{1} << num_bits;
    return {num_bits, std::vector<double>(dim, 1.0 / static_cast<double>(dim))};
}

Distribution point_mass(std::size_t num_bits, Outcome x) {
    Distribution d{num_bits, std::vector<double>(std::size_t{1} << num_bits, 0.0)};
    d.probs.at(x) = 1.0;
    return d;
}

double uniform01(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<double> cumulative(const Distribution &dist) {
    std::vector<double> cdf(dist.probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.probs.size(); ++i) {
        acc += std::max(dist.probs[i], 0.0);
        cdf[i] = acc;
    }
    return cdf;
}

Outcome draw(const std::vector<double> &cdf, Rng &rng) {
    const double u = uniform01(rng) * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    return static_cast<Outcome>(it - cdf.begin());
}

PureState init_plus(std::size_t num_qubits) {
    if (num_qubits < 1 || num_qubits > qubit_cap()) {
        throw std::length_error("qubit count " + std::to_string(num_qubits) + " outside [1, " +
                                std::to_string(qubit_cap()) + "]");
    }
    const std::size_t dim = std::size_t{1} << num_qubits;
    return PureState(num_qubits, std::vector<Complex>(dim, 1.0 / std::sqrt(static_cast<double>(dim))));
}

PureState basis_state(std::size_t num_qubits, std::size_t index) {
    if (num_qubits < 1 || num_qubits > qubit_cap()) {
        throw std::length_error("qubit count outside the state-vector cap");
    }
    std::vector<Complex> amps(std::size_t{1} << num_qubits, 0.0);
    amps.at(index) = 1.0;
    return PureState(num_qubits, std::move(amps));
}

PureState apply_phase_program(PureState state, const PhaseProgram &program) {
    if (program.empty()) return state;
    if (program.max_site() >= state.num_qubits()) {
        throw std::out_of_range("phase program addresses a site beyond the state");
    }
    for (std::size_t z = 0; z < state.amplitudes_.size(); ++z) {
        state.amplitudes_[z] *= std::exp(-kI * program_phase(program, z));
    }
    return state;
}

PureState apply_local_unitary(PureState state, std::span<const std::size_t> sites, const MatX &u) {
    if (sites.size() != 1 && sites.size() != 2) {
        throw std::invalid_argument("local unitaries act on one or two sites");
    }
    const std::size_t k = sites.size();
    if (u.rows() != (1 << k) || u.cols() != (1 << k)) {
        throw std::invalid_argument("unitary dimension does not match the site count");
    }
    if (unitarity_defect(u) > 1e-10) {
        throw std::invalid_argument("matrix is not unitary within 1e-10");
    }
    for (auto s : sites) check_site(state, s);
    auto &amps = state.amplitudes_;
    if (k == 1) {
        const std::size_t bit = std::size_t{1} << sites[0];
        for (std::size_t rest = 0; rest < amps.size() / 2; ++rest) {
            const std::size_t i0 = insert_zero_bit(rest, sites[0]);
            const std::size_t i1 = i0 | bit;
            const Complex a0 = amps[i0];
            const Complex a1 = amps[i1];
            amps[i0] = u(0, 0) * a0 + u(0, 1) * a1;
            amps[i1] = u(1, 0) * a0 + u(1, 1) * a1;
        }
        return state;
    }
    if (sites[0] == sites[1]) {
        throw std::invalid_argument("two-site unitary needs distinct sites");
    }
    const std::size_t hi = sites[0];
    const std::size_t lo = sites[1];
    const std::size_t bhi = std::size_t{1} << hi;
    const std::size_t blo = std::size_t{1} << lo;
    const std::size_t p0 = std::min(hi, lo);
    const std::size_t p1 = std::max(hi, lo);
    for (std::size_t rest = 0; rest < amps.size() / 4; ++rest) {
        const std::size_t base = insert_zero_bit(insert_zero_bit(rest, p0), p1);
        const std::size_t idx[4] = {base, base | blo, base | bhi, base | bhi | blo};
        Complex in[4];
        for (int j = 0; j < 4; ++j) in[j] = amps[idx[j]];
        for (int i = 0; i < 4; ++i) {
            Complex acc = 0.0;
            for (int j = 0; j < 4; ++j) acc += u(i, j) * in[j];
            amps[idx[i]] = acc;
        }
    }
    return state;
}

PureState apply_local_unitary(PureState state, std::size_t site, const Mat2 &u) {
    const std::size_t sites[1] = {site};
    return apply_local_unitary(std::move(state), sites, MatX(u));
}

PureState apply_cz(PureState state, std::size_t a, std::size_t b) {
    check_site(state, a);
    check_site(state, b);
    if (a == b) throw std::invalid_argument("CZ needs distinct sites");
    const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
    for (std::size_t z = 0; z < state.amplitudes_.size(); ++z) {
        if ((z & mask) == mask) state.amplitudes_[z] = -state.amplitudes_[z];
    }
    return state;
}

PureState rotated_graph_state(const Lattice &lattice, const AngleField &field) {
    validate_field(lattice, field);
    PureState state = init_plus(lattice.num_sites());
    for (auto [a, b] : lattice.edges()) {
        state = apply_cz(std::move(state), a, b);
    }
    PhaseProgram rotations;
    for (std::size_t i = 0; i < lattice.num_sites(); ++i) {
        rotations.add_z(i, field.field(i));
    }
    return apply_phase_program(std::move(state), rotations);
}

PureState ising_state(const Lattice &lattice, const AngleField &field) {
    return apply_phase_program(init_plus(lattice.num_sites()), ising_program(lattice, field));
}

Complex x_basis_amplitude(const PureState &state, Outcome x) {
    if (x >= state.dim()) {
        throw std::out_of_range("outcome has more sites than the state");
    }
    Complex s = 0.0;
    for (std::size_t z = 0; z < state.dim(); ++z) {
        const Complex a = state.amplitudes()[z];
        s += (std::popcount(x & z) & 1) ? -a : a;
    }
    return s / std::sqrt(static_cast<double>(state.dim()));
}

Complex x_basis_amplitude(const PureState &state, std::string_view bits) {
    if (bits.size() != state.num_qubits()) {
        throw std::invalid_argument("bitstring length does not match the qubit count");
    }
    return x_basis_amplitude(state, parse_bitstring(bits));
}

Distribution full_distribution(const PureState &state) {
    if (state.num_qubits() > qubit_cap()) {
        throw std::length_error("state exceeds the qubit cap");
    }
    std::vector<Complex> w = state.amplitudes();
    const std::size_t dim = w.size();
    for (std::size_t h = 1; h < dim; h <<= 1) {
        for (std::size_t i = 0; i < dim; i += 2 * h) {
            for (std::size_t j = i; j < i + h; ++j) {
                const Complex a = w[j];
                const Complex b = w[j + h];
                w[j] = a + b;
                w[j + h] = a - b;
            }
        }
    }
    Distribution d{state.num_qubits(), std::vector<double>(dim)};
    const double scale = 1.0 / static_cast<double>(dim);
    for (std::size_t x = 0; x < dim; ++x) d.probs[x] = std::norm(w[x]) * scale;
    return d;
}

Distribution measure_distribution(const PureState &state, std::span<const Basis> bases) {
    if (bases.size() != state.num_qubits()) {
        throw std::invalid_argument("one basis per site required");
    }
    // H maps a Z measurement onto an X measurement with the same labels.
    PureState rotated = state;
    for (std::size_t i = 0; i < bases.size(); ++i) {
        if (bases[i] == Basis::kZ) rotated = apply_local_unitary(std::move(rotated), i, gates::hadamard());
    }
    return full_distribution(rotated);
}

MeasurementRecord sample_distribution(const Distribution &dist, std::size_t count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("sample count must be at least 1");
    MeasurementRecord rec;
    rec.num_bits = dist.num_bits;
    rec.seed = seed;
    rec.bases.assign(dist.num_bits, Basis::kX);
    const auto cdf = cumulative(dist);
    Rng rng(seed);
    rec.outcomes.reserve(count);
    for (std::size_t i = 0; i < count; ++i) rec.outcomes.push_back(draw(cdf, rng));
    return rec;
}

MeasurementRecord sample(const PureState &state, std::size_t count, std::uint64_t seed) {
    return sample_distribution(full_distribution(state), count, seed);
}

Postselection postselect(const PureState &state, std::size_t site, Basis basis, int outcome) {
    check_site(state, site);
    if (outcome != 0 && outcome != 1) throw std::invalid_argument("outcome must be 0 or 1");
    if (state.num_qubits() < 2) {
        throw std::invalid_argument("cannot remove the last qubit of a state");
    }
    const std::size_t bit = std::size_t{1} << site;
    std::vector<Complex> out(state.dim() / 2);
    const auto &amps = state.amplitudes();
    for (std::size_t rest = 0; rest < out.size(); ++rest) {
        const std::size_t i0 = insert_zero_bit(rest, site);
        const std::size_t i1 = i0 | bit;
        if (basis == Basis::kZ) {
            out[rest] = outcome ? amps[i1] : amps[i0];
        } else {
            out[rest] = (outcome ? amps[i0] - amps[i1] : amps[i0] + amps[i1]) / std::sqrt(2.0);
        }
    }
    double p = 0.0;
    for (const auto &a : out) p += std::norm(a);
    if (p < 1e-14) {
        throw std::domain_error("postselected branch has zero probability");
    }
    const double scale = 1.0 / std::sqrt(p);
    for (auto &a : out) a *= scale;
    return {PureState(state.num_qubits() - 1, std::move(out)), p};
}

std::string distribution_to_csv(const Distribution &dist) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t x = 0; x < dist.probs.size(); ++x) {
        os << to_bitstring(x, dist.num_bits) << ',' << dist.probs[x] << '\n';
    }
    return os.str();
}

std::string record_to_text(const MeasurementRecord &record) {
    nlohmann::json header;
    header["seed"] = record.seed;
    std::string bases;
    for (auto b : record.bases) bases.push_back(basis_char(b));
    header["bases"] = bases;
    std::string out = header.dump() + "\n";
    for (auto x : record.outcomes) {
        out += to_bitstring(x, record.num_bits);
        out += '\n';
    }
    return out;
}

}  // namespace brickwork
