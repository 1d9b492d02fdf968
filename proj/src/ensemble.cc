#include "brickwork/ensemble.h"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "brickwork/lattice.h"

namespace brickwork {

namespace {

constexpr int kBrickColumns = 5;
constexpr double kSchmidtTolerance = 1e-9;

Mat2 hr(int step) { return gates::hadamard() * gates::rz(step * kPi / 4.0); }

}  // namespace

Pattern brick_pattern(const std::array<int, 8> &steps) {
    for (int s : steps) {
        if (s < 0 || s > 7) throw std::invalid_argument("brick angles are k pi/4 with k in 0..7");
    }
    Pattern p;
    p.num_sites = 2 * kBrickColumns;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c + 1 < kBrickColumns; ++c) {
            p.edges.emplace_back(r * kBrickColumns + c, r * kBrickColumns + c + 1);
        }
    }
    p.edges.emplace_back(2, kBrickColumns + 2);
    p.edges.emplace_back(4, kBrickColumns + 4);
    p.angles.assign(p.num_sites, 0.0);
    for (int c = 0; c < 4; ++c) {
        p.angles[c] = steps[c] * kPi / 4.0;
        p.angles[kBrickColumns + c] = steps[4 + c] * kPi / 4.0;
    }
    p.bases.assign(p.num_sites, Basis::kX);
    p.inputs = {0, kBrickColumns};
    p.outputs = {kBrickColumns - 1, 2 * kBrickColumns - 1};
    return p;
}

BrickGate make_brick_gate(const std::array<int, 8> &steps) {
    const Pattern p = brick_pattern(steps);
    const auto realized = realize_pattern(p, std::vector<int>(p.num_sites - 2, 0));
    return {steps, realized.op};
}

Mat4 brick_circuit(const std::array<int, 8> &steps) {
    const Mat4 first = gates::kron(hr(steps[1]) * hr(steps[0]), hr(steps[5]) * hr(steps[4]));
    const Mat4 second = gates::kron(hr(steps[3]) * hr(steps[2]), hr(steps[7]) * hr(steps[6]));
    return gates::cz() * second * gates::cz() * first;
}

BrickGate random_brick_gate(std::uint64_t seed) {
    Rng rng(seed);
    std::array<int, 8> steps{};
    for (auto &s : steps) s = static_cast<int>(rng() % 8);
    return make_brick_gate(steps);
}

bool is_entangling(const BrickGate &gate) {
    // Bloch-sphere grid including the poles and the X/Y axes.
    std::vector<Eigen::Vector2cd> grid;
    constexpr int kPolar = 6;
    constexpr int kAzimuth = 8;
    for (int a = 0; a <= kPolar; ++a) {
        const double theta = kPi * a / kPolar;
        const int azimuths = (a == 0 || a == kPolar) ? 1 : kAzimuth;
        for (int b = 0; b < azimuths; ++b) {
            const double phi = 2.0 * kPi * b / kAzimuth;
            grid.emplace_back(std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi));
        }
    }
    for (const auto &u : grid) {
        for (const auto &v : grid) {
            Eigen::Vector4cd in;
            in << u(0) * v(0), u(0) * v(1), u(1) * v(0), u(1) * v(1);
            const Eigen::Vector4cd out = gate.unitary * in;
            Eigen::Matrix2cd m;
            m << out(0), out(1), out(2), out(3);
            Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m);
            if (svd.singularValues()(1) > 1e-6) return true;
        }
    }
    return false;
}

int operator_schmidt_rank(const Mat4 &u) {
    // R[(i1 j1), (i2 j2)] = U[(i1 i2), (j1 j2)].
    Mat4 r;
    for (int i1 = 0; i1 < 2; ++i1)
        for (int i2 = 0; i2 < 2; ++i2)
            for (int j1 = 0; j1 < 2; ++j1)
                for (int j2 = 0; j2 < 2; ++j2) r(2 * i1 + j1, 2 * i2 + j2) = u(2 * i1 + i2, 2 * j1 + j2);
    Eigen::JacobiSVD<Mat4> svd(r);
    int rank = 0;
    for (int i = 0; i < 4; ++i) {
        if (svd.singularValues()(i) > kSchmidtTolerance) ++rank;
    }
    return rank;
}

bool delta_criterion(const BrickGate &gate) {
    auto off_axis = [](int step) { return step % 4 != 0; };
    return off_axis(gate.steps[3]) || off_axis(gate.steps[7]);
}

double ks_exponential(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("no values");
    std::sort(values.begin(), values.end());
    const double k = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = -std::expm1(-std::max(values[i], 0.0));
        d = std::max({d, (static_cast<double>(i) + 1.0) / k - f, f - static_cast<double>(i) / k});
    }
    return d;
}

double porter_thomas_stat(const Distribution &dist) {
    if (dist.probs.size() < 16) throw std::invalid_argument("Porter-Thomas check needs at least 16 outcomes");
    std::vector<double> v(dist.probs.size());
    const double scale = static_cast<double>(dist.probs.size());
    std::transform(dist.probs.begin(), dist.probs.end(), v.begin(), [&](double p) { return p * scale; });
    return ks_exponential(std::move(v));
}

Distribution random_instance_distribution(int rows, int layers, std::uint64_t seed) {
    if (rows <= 0 || layers < 0) throw std::invalid_argument("rows must be positive and layers nonnegative");
    const std::size_t m = static_cast<std::size_t>(rows);
    if (2 * m > qubit_cap()) throw std::length_error("column window exceeds the state-vector cap");
    const double coupling = kPi / 4.0;

    // Columns of the brickwork block; the bare column is appended at the end.
    std::vector<std::vector<double>> fields;
    std::vector<std::vector<std::pair<int, int>>> vertical;
    if (layers > 0) {
        const Lattice lat = build_brickwork(rows, layers);
        const AngleField field = canonical_angle_field(lat);
        fields.assign(lat.cols(), std::vector<double>(m, 0.0));
        vertical.assign(lat.cols(), {});
        for (std::size_t i = 0; i < lat.num_sites(); ++i) {
            fields[lat.site(i).col][lat.site(i).row] = field.field(i);
        }
        for (auto [a, b] : lat.edges()) {
            const auto &sa = lat.site(a);
            const auto &sb = lat.site(b);
            if (sa.col == sb.col) vertical[sa.col].emplace_back(sa.row, sb.row);
        }
    }
    fields.emplace_back(m, 0.0);
    vertical.emplace_back();

    auto column_terms = [&](std::size_t col, std::size_t offset) {
        PhaseProgram prog;
        for (auto [a, b] : vertical[col]) prog.add_zz(offset + a, offset + b, -coupling);
        for (std::size_t r = 0; r < m; ++r) {
            if (fields[col][r] != 0.0) prog.add_z(offset + r, fields[col][r]);
        }
        return prog;
    };

    Rng rng(seed);
    PureState state = apply_phase_program(init_plus(m), column_terms(0, 0));
    for (std::size_t col = 1; col < fields.size(); ++col) {
        // Window: previous column at bits 0..m-1, new column at m..2m-1.
        std::vector<Complex> amps(std::size_t{1} << (2 * m));
        const double plus = std::pow(2.0, -0.5 * static_cast<double>(m));
        for (std::size_t hi = 0; hi < (std::size_t{1} << m); ++hi) {
            for (std::size_t lo = 0; lo < (std::size_t{1} << m); ++lo) {
                amps[(hi << m) | lo] = state.amplitude(lo) * plus;
            }
        }
        PureState window(2 * m, std::move(amps));
        PhaseProgram prog = column_terms(col, m);
        for (std::size_t r = 0; r < m; ++r) prog.add_zz(r, m + r, -coupling);
        window = apply_phase_program(std::move(window), prog);
        for (std::size_t r = m; r-- > 0;) {
            const int outcome = static_cast<int>(rng() & 1);
            window = postselect(window, r, Basis::kX, outcome).state;
        }
        state = std::move(window);
    }
    Distribution out = full_distribution(state);
    out.validate();
    return out;
}

}  // namespace brickwork
