#include "brickwork/partition.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace brickwork {

namespace {

// Neumaier-compensated complex accumulator.
struct KahanSum {
    double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;

    static void add(double &sum, double &comp, double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    void add(Complex v) {
        add(re, cre, v.real());
        add(im, cim, v.imag());
    }
    Complex value() const { return {re + cre, im + cim}; }
};

constexpr std::uint64_t kResyncInterval = 64;

struct SpinModel {
    std::size_t n = 0;
    double coupling = 0.0;
    std::vector<double> field;  // B'_i
    std::vector<std::vector<std::size_t>> adj;
    std::vector<std::uint64_t> neighbor_mask;
    // rotation[k][2 * d + zbit]: exp(i delta) for flipping spin k when d of
    // its neighbours are down and its own bit is zbit.
    std::vector<std::vector<Complex>> rotation;
    std::vector<std::vector<double>> delta;

    void prepare() {
        neighbor_mask.assign(n, 0);
        rotation.assign(n, {});
        delta.assign(n, {});
        for (std::size_t k = 0; k < n; ++k) {
            for (auto j : adj[k]) neighbor_mask[k] |= std::uint64_t{1} << j;
            const std::size_t deg = adj[k].size();
            for (std::size_t d = 0; d <= deg; ++d) {
                const double neighbours = static_cast<double>(deg) - 2.0 * static_cast<double>(d);
                for (int zbit = 0; zbit < 2; ++zbit) {
                    const double zk = zbit ? -1.0 : 1.0;
                    const double dl = -2.0 * zk * (field[k] + coupling * neighbours);
                    delta[k].push_back(dl);
                    rotation[k].push_back(std::polar(1.0, dl));
                }
            }
        }
    }

    // Exponent of one configuration; bit i set means z_i = -1.
    double phase(std::uint64_t bits) const {
        double ph = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double zi = ((bits >> i) & 1) ? -1.0 : 1.0;
            ph += field[i] * zi;
            for (auto j : adj[i]) {
                if (j > i) ph += coupling * zi * (((bits >> j) & 1) ? -1.0 : 1.0);
            }
        }
        return ph;
    }

    std::size_t flip_slot(std::uint64_t bits, std::size_t k) const {
        const auto down = static_cast<std::size_t>(std::popcount(bits & neighbor_mask[k]));
        return 2 * down + ((bits >> k) & 1);
    }
};

// Sums configurations whose top bits equal `prefix` and whose low `low_bits`
// bits run through a Gray code. The running term is advanced by table
// rotations and reset from the exact phase every kResyncInterval steps.
Complex chunk_sum(const SpinModel &model, std::uint64_t prefix, std::size_t low_bits) {
    std::uint64_t bits = prefix << low_bits;
    double ph = model.phase(bits);
    Complex term = std::polar(1.0, ph);
    KahanSum acc;
    acc.add(term);
    const std::uint64_t count = std::uint64_t{1} << low_bits;
    for (std::uint64_t step = 1; step < count; ++step) {
        const std::size_t k = static_cast<std::size_t>(std::countr_zero(step));
        const std::size_t slot = model.flip_slot(bits, k);
        ph += model.delta[k][slot];
        bits ^= std::uint64_t{1} << k;
        term = (step % kResyncInterval == 0) ? std::polar(1.0, ph) : term * model.rotation[k][slot];
        acc.add(term);
    }
    return acc.value();
}

}  // namespace

PartitionValue partition_function(const Lattice &lattice, const AngleField &field, Outcome x,
                                  unsigned workers) {
    validate_field(lattice, field);
    const std::size_t n = lattice.num_sites();
    if (n > kPartitionMaxSites) {
        throw std::length_error("partition sum limited to " + std::to_string(kPartitionMaxSites) +
                                " sites");
    }
    if (n < 64 && (x >> n) != 0) {
        throw std::out_of_range("outcome has more sites than the lattice");
    }
    SpinModel model;
    model.n = n;
    model.coupling = field.coupling;
    model.field.resize(n);
    model.adj.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        model.field[i] = field.field(i) + (((x >> i) & 1) ? kPi / 2.0 : 0.0);
        model.adj[i] = lattice.neighbors(i);
    }
    model.prepare();

    // The chunk layout depends only on n; workers only pick up chunks.
    const std::size_t prefix_bits = std::min<std::size_t>(n, 6);
    const std::size_t low_bits = n - prefix_bits;
    const std::size_t chunks = std::size_t{1} << prefix_bits;
    std::vector<Complex> partial(chunks);

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(chunks));
    if (workers <= 1 || n < 12) {
        for (std::size_t c = 0; c < chunks; ++c) partial[c] = chunk_sum(model, c, low_bits);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t c = w; c < chunks; c += workers) partial[c] = chunk_sum(model, c, low_bits);
            });
        }
        for (auto &t : pool) t.join();
    }
    KahanSum total;
    for (const auto &p : partial) total.add(p);
    return {total.value(), n, x};
}

double born_probability(const Lattice &lattice, const AngleField &field, Outcome x) {
    const PureState psi = ising_state(lattice, field);
    return std::norm(x_basis_amplitude(psi, x));
}

double verify_born_partition_identity(const Lattice &lattice, const AngleField &field, Outcome x) {
    const std::size_t n = lattice.num_sites();
    if (n > kBornCheckMaxSites) {
        throw std::length_error("Born identity check limited to " +
                                std::to_string(kBornCheckMaxSites) + " sites");
    }
    const double q = born_probability(lattice, field, x);
    const double z2 = partition_function(lattice, field, x).abs2();
    return std::abs(q - std::ldexp(z2, -2 * static_cast<int>(n)));
}

namespace {

void check_same_universe(const Distribution &p, const Distribution &q) {
    if (p.num_bits != q.num_bits || p.probs.size() != q.probs.size()) {
        throw std::invalid_argument("distributions are over different outcome sets");
    }
}

}  // namespace

bool multiplicative_error_check(const Distribution &p, const Distribution &q, double gamma) {
    check_same_universe(p, q);
    for (std::size_t x = 0; x < p.probs.size(); ++x) {
        if (std::abs(p.probs[x] - q.probs[x]) > gamma * q.probs[x]) return false;
    }
    return true;
}

double variation_distance(const Distribution &p, const Distribution &q) {
    check_same_universe(p, q);
    double s = 0.0;
    for (std::size_t x = 0; x < p.probs.size(); ++x) s += std::abs(p.probs[x] - q.probs[x]);
    return s;
}

double trace_distance(const Distribution &p, const Distribution &q) {
    return 0.5 * variation_distance(p, q);
}

bool mixed_error_check(double z2_approx, double z2_true, std::size_t num_sites, double poly_factor,
                       double epsilon, double delta) {
    if (!(delta > 0.0) || !(epsilon >= 0.0) || epsilon / delta >= 0.5) {
        throw std::invalid_argument("mixed error check requires eps/delta < 1/2");
    }
    if (!(poly_factor > 0.0)) {
        throw std::invalid_argument("poly factor must be positive");
    }
    const double scale = std::ldexp(1.0, -static_cast<int>(num_sites));
    const double lhs = std::abs(z2_approx - z2_true) * scale;
    return lhs <= z2_true * scale / poly_factor + epsilon / delta;
}

}  // namespace brickwork
