#include "brickwork/mbqc.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace brickwork {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kGadgetTolerance = 1e-10;

std::size_t reverse_bits(std::size_t x, std::size_t width) {
    std::size_t r = 0;
    for (std::size_t i = 0; i < width; ++i) {
        if ((x >> i) & 1) r |= std::size_t{1} << (width - 1 - i);
    }
    return r;
}

std::string pi_fraction(int numerator, int denominator) {
    std::ostringstream os;
    os << numerator << "pi/" << denominator;
    return os.str();
}

}  // namespace

RealizedOperator realize_pattern(const Pattern &pattern, const std::vector<int> &outcomes) {
    const std::size_t n = pattern.num_sites;
    const std::size_t k = pattern.inputs.size();
    if (pattern.angles.size() != n || pattern.bases.size() != n) {
        throw std::invalid_argument("pattern needs one angle and one basis per site");
    }
    std::vector<bool> is_output(n, false);
    for (auto o : pattern.outputs) is_output.at(o) = true;
    std::vector<std::size_t> measured;
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_output[i]) measured.push_back(i);
    }
    if (outcomes.size() != measured.size()) {
        throw std::invalid_argument("one outcome per measured site required");
    }
    const std::size_t total = k + n;
    if (total > qubit_cap()) {
        throw std::length_error("pattern exceeds the state-vector cap");
    }

    // References at bits 0..k-1, graph site i at bit k + i.
    const std::size_t dim = std::size_t{1} << total;
    std::vector<Complex> amps(dim, 0.0);
    const double amp = std::pow(2.0, -0.5 * static_cast<double>(n));
    for (std::size_t z = 0; z < dim; ++z) {
        bool match = true;
        for (std::size_t j = 0; j < k && match; ++j) {
            match = ((z >> j) & 1) == ((z >> (k + pattern.inputs[j])) & 1);
        }
        if (match) amps[z] = amp;
    }
    PureState state(total, std::move(amps));
    for (auto [a, b] : pattern.edges) state = apply_cz(std::move(state), k + a, k + b);
    PhaseProgram rotations;
    for (std::size_t i = 0; i < n; ++i) {
        if (pattern.angles[i] != 0.0) rotations.add_z(k + i, pattern.angles[i] / 2.0);
    }
    state = apply_phase_program(std::move(state), rotations);

    double probability = 1.0;
    for (std::size_t idx = measured.size(); idx-- > 0;) {
        const std::size_t site = measured[idx];
        auto branch = postselect(state, k + site, pattern.bases[site], outcomes[idx]);
        probability *= branch.probability;
        state = std::move(branch.state);
    }

    // Surviving graph sites keep ascending order after the references.
    std::vector<std::size_t> surviving;
    for (std::size_t i = 0; i < n; ++i) {
        if (is_output[i]) surviving.push_back(i);
    }
    const std::size_t n_out = pattern.outputs.size();
    std::vector<std::size_t> rank(n_out);
    for (std::size_t j = 0; j < n_out; ++j) {
        rank[j] = static_cast<std::size_t>(
            std::find(surviving.begin(), surviving.end(), pattern.outputs[j]) - surviving.begin());
    }
    const std::size_t dim_in = std::size_t{1} << k;
    const std::size_t dim_out = std::size_t{1} << n_out;
    MatX op(dim_out, dim_in);
    const double scale = std::sqrt(static_cast<double>(dim_in));
    for (std::size_t r = 0; r < dim_in; ++r) {
        for (std::size_t o = 0; o < dim_out; ++o) {
            std::size_t index = r;
            for (std::size_t j = 0; j < n_out; ++j) {
                if ((o >> j) & 1) index |= std::size_t{1} << (k + rank[j]);
            }
            op(reverse_bits(o, n_out), reverse_bits(r, k)) = state.amplitude(index) * scale;
        }
    }
    return {op, probability};
}

Pattern chain_pattern(const std::vector<double> &angles) {
    Pattern p;
    const std::size_t len = angles.size();
    p.num_sites = len + 1;
    for (std::size_t i = 0; i < len; ++i) p.edges.emplace_back(i, i + 1);
    p.angles = angles;
    p.angles.push_back(0.0);
    p.bases.assign(len + 1, Basis::kX);
    p.inputs = {0};
    p.outputs = {len};
    return p;
}

Mat2 simulate_chain(const std::vector<double> &angles, const std::vector<int> &outcomes) {
    return realize_pattern(chain_pattern(angles), outcomes).op;
}

Mat2 chain_product(const std::vector<double> &angles, const std::vector<int> &outcomes) {
    if (angles.size() != outcomes.size()) {
        throw std::invalid_argument("one outcome per chain site required");
    }
    Mat2 u = gates::identity();
    for (std::size_t j = 0; j < angles.size(); ++j) {
        u = propagate_single_measurement(angles[j], outcomes[j]) * u;
    }
    return u;
}

Mat2 propagate_single_measurement(double theta, int s) {
    if (s != 0 && s != 1) throw std::invalid_argument("outcome must be 0 or 1");
    return gates::hadamard() * gates::z_power(s) * gates::rz(theta);
}

Gadget conditional_rotation_gadget(double theta, int s) {
    if (s != 0 && s != 1) throw std::invalid_argument("s must be 0 or 1");
    Gadget g;
    g.name = "conditional_rotation";
    g.angles = {theta / 2.0, 0.0, -theta / 2.0, 0.0};
    g.postselection = {0, s, 0, s};
    g.target = s ? gates::rz(theta) : gates::identity();
    return g;
}

std::vector<int> hrz_postselection(int k, int s3_prime) {
    if (k < 0 || k > 7) throw std::out_of_range("k must lie in 0..7");
    if (s3_prime != 0 && s3_prime != 1) throw std::invalid_argument("s3' must be 0 or 1");
    const int s1 = (k >> 2) & 1;
    const int s2 = (k >> 1) & 1;
    const int s3 = k & 1;
    return {s1 ^ s3_prime, s2, 0, s2, 0, s3, 0};
}

Gadget hrz_k_gadget(int k, int s3_prime) {
    Gadget g;
    g.postselection = hrz_postselection(k, s3_prime);
    g.name = "hrz";
    g.angles = cell_angle_pattern();
    g.left_z = k & 1;
    g.right_z = s3_prime;
    g.target = gates::z_power(g.left_z) * gates::hadamard() * gates::rz(2 * k * kPiOver8) *
               gates::z_power(g.right_z);
    return g;
}

Mat2 realized_gadget_operator(const Gadget &gadget) {
    return simulate_chain(gadget.angles, gadget.postselection);
}

double gadget_fidelity(const Gadget &gadget) {
    return phase_insensitive_fidelity(realized_gadget_operator(gadget), gadget.target);
}

const char *to_string(Pauli p) {
    switch (p) {
        case Pauli::kI:
            return "I";
        case Pauli::kX:
            return "X";
        case Pauli::kY:
            return "Y";
        case Pauli::kZ:
            return "Z";
    }
    return "?";
}

Mat2 pauli_matrix(Pauli p) {
    switch (p) {
        case Pauli::kI:
            return gates::identity();
        case Pauli::kX:
            return gates::pauli_x();
        case Pauli::kY:
            return gates::pauli_y();
        case Pauli::kZ:
            return gates::pauli_z();
    }
    return gates::identity();
}

std::optional<PauliByproduct> flip_byproduct(const Gadget &gadget, std::size_t position) {
    if (position >= gadget.postselection.size()) throw std::out_of_range("no such chain position");
    const Mat2 base = realized_gadget_operator(gadget);
    auto flipped = gadget.postselection;
    flipped[position] ^= 1;
    const Mat2 changed = simulate_chain(gadget.angles, flipped);
    constexpr Pauli all[] = {Pauli::kI, Pauli::kX, Pauli::kY, Pauli::kZ};
    auto matches = [&](Pauli l, Pauli r) {
        return phase_insensitive_fidelity(pauli_matrix(l) * base * pauli_matrix(r), changed) >=
               1.0 - kGadgetTolerance;
    };
    // Prefer a one-sided byproduct: left first, then right.
    for (auto l : all) {
        if (matches(l, Pauli::kI)) return PauliByproduct{l, Pauli::kI};
    }
    for (auto r : all) {
        if (matches(Pauli::kI, r)) return PauliByproduct{Pauli::kI, r};
    }
    for (auto l : all) {
        for (auto r : all) {
            if (matches(l, r)) return PauliByproduct{l, r};
        }
    }
    return std::nullopt;
}

CzDecomposition cz_phase_decomposition() {
    const double q = kPi / 4.0;
    // exp(-i a I(x)Z) and exp(-i a Z(x)I) are diagonal.
    Mat4 iz = Mat4::Zero();
    Mat4 zi = Mat4::Zero();
    for (int idx = 0; idx < 4; ++idx) {
        const double z_first = (idx & 2) ? -1.0 : 1.0;
        const double z_second = (idx & 1) ? -1.0 : 1.0;
        iz(idx, idx) = std::exp(-kI * q * z_second);
        zi(idx, idx) = std::exp(-kI * q * z_first);
    }
    Mat4 product = std::exp(kI * q) * iz * zi * gates::zz_phase(q);
    return {product, max_abs_diff(gates::cz(), product)};
}

AbsorbedField absorb_fields(const Lattice &lattice, const AngleField &raw) {
    validate_field(lattice, raw);
    if (std::abs(raw.coupling - kPi / 4.0) > 1e-12) {
        throw std::invalid_argument("field absorption assumes J = pi/4");
    }
    AbsorbedField out{raw, {}};
    for (std::size_t i = 0; i < lattice.num_sites(); ++i) {
        const std::size_t d = lattice.degree(i);
        SiteAdjustment adj{i, d, 0.0, false};
        switch (d) {
            case 0:
                break;
            case 1:
                adj.angle_shift = kPi / 2.0;
                break;
            case 2:
                adj.flip_outcome = true;
                break;
            case 3:
                adj.angle_shift = -kPi / 2.0;
                out.rules.relabel_sites.push_back(i);
                break;
            default:
                throw std::invalid_argument("field absorption requires site degree <= 3");
        }
        out.field.angles[i] += adj.angle_shift;
        if (adj.flip_outcome) out.rules.flip_mask |= Outcome{1} << i;
        out.rules.adjustments.push_back(adj);
    }
    return out;
}

Outcome apply_flip_rules(Outcome x, const FlipRules &rules) { return x ^ rules.flip_mask; }

Distribution apply_flip_rules(const Distribution &dist, const FlipRules &rules) {
    if (dist.num_bits < 64 && (rules.flip_mask >> dist.num_bits) != 0) {
        throw std::invalid_argument("flip rules address sites beyond the distribution");
    }
    Distribution out{dist.num_bits, std::vector<double>(dist.probs.size())};
    for (std::size_t x = 0; x < dist.probs.size(); ++x) {
        out.probs[apply_flip_rules(x, rules)] = dist.probs[x];
    }
    return out;
}

int degree3_logical_relabel(int k) {
    if (k < 0 || k > 7) throw std::out_of_range("k must lie in 0..7");
    return (k + 6) % 8;
}

RealizedOperator red_site_measurement(Basis basis, int outcome) {
    if (outcome != 0 && outcome != 1) throw std::invalid_argument("outcome must be 0 or 1");
    Pattern p;
    p.num_sites = 3;
    p.edges = {{0, 1}, {0, 2}};
    p.angles = {kPi / 2.0, 0.0, 0.0};
    p.bases = {basis, Basis::kX, Basis::kX};
    p.inputs = {1, 2};
    p.outputs = {1, 2};
    return realize_pattern(p, {outcome});
}

Mat4 expected_red_site_operator(Basis basis, int outcome) {
    const Mat4 zz = gates::kron(gates::pauli_z(), gates::pauli_z());
    if (basis == Basis::kZ) {
        return outcome ? zz : Mat4(Mat4::Identity());
    }
    const Mat4 bridge = gates::zz_phase(kPi / 4.0);
    return outcome ? Mat4(bridge * zz) : bridge;
}

Outcome ReductionPlan::relabel(Outcome c) const {
    Outcome x = 0;
    for (std::size_t t = 0; t < blue_sites.size(); ++t) {
        if ((c >> blue_sites[t]) & 1) x |= Outcome{1} << t;
    }
    for (const auto &r : red_sites) {
        if ((c >> r.cluster_site) & 1) x ^= r.flip_mask;
    }
    return x;
}

Outcome ReductionPlan::red_bits(Outcome c) const {
    Outcome y = 0;
    for (std::size_t j = 0; j < red_sites.size(); ++j) {
        if ((c >> red_sites[j].cluster_site) & 1) y |= Outcome{1} << j;
    }
    return y;
}

std::size_t red_site_count(int m, int n) {
    if (m <= 0 || n <= 0) throw std::invalid_argument("grid dimensions must be positive");
    return static_cast<std::size_t>(3 * m * n - 2 * m - 2 * n + 1);
}

ReductionPlan plan_reduction(const Lattice &cluster, const Lattice &target, const AngleField &target_field) {
    validate_field(target, target_field);
    if (std::abs(target_field.coupling - kPi / 4.0) > 1e-12) {
        throw std::invalid_argument("bridges realize J = pi/4 only");
    }
    if (cluster.kind() != LatticeKind::kCluster) {
        throw std::invalid_argument("reduction source must be a cluster lattice");
    }
    const int tr = target.rows();
    const int tc = target.cols();
    if (target.num_sites() != static_cast<std::size_t>(tr) * tc) {
        throw std::invalid_argument("target sites must fill their grid");
    }
    if (cluster.rows() != 2 * tr - 1 || cluster.cols() != 2 * tc - 1) {
        throw std::invalid_argument("cluster dimensions incompatible with the target grid");
    }
    for (auto [a, b] : target.edges()) {
        const auto &sa = target.site(a);
        const auto &sb = target.site(b);
        if (std::abs(sa.row - sb.row) + std::abs(sa.col - sb.col) != 1) {
            throw std::invalid_argument("target edge does not join grid neighbours");
        }
    }

    ReductionPlan plan{cluster, target, target_field, zero_angle_field(cluster), {}, {}, {}};
    const std::size_t n = cluster.num_sites();
    plan.cluster_bases.assign(n, Basis::kZ);
    plan.blue_sites.assign(target.num_sites(), 0);

    auto target_index = [&](int r, int c) { return *target.index_of(r, c); };
    // Connector between two target sites: bridged iff the target has the edge.
    std::vector<bool> bridged(n, false);
    std::vector<Outcome> connector_mask(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto &s = cluster.site(i);
        const bool even_r = s.row % 2 == 0;
        const bool even_c = s.col % 2 == 0;
        if (even_r && even_c) {
            const std::size_t t = target_index(s.row / 2, s.col / 2);
            plan.blue_sites[t] = i;
            plan.cluster_field.angles[i] = target_field.angles[t];
            plan.cluster_bases[i] = Basis::kX;
        } else if (even_r != even_c) {
            std::size_t a, b;
            if (even_r) {
                a = target_index(s.row / 2, (s.col - 1) / 2);
                b = target_index(s.row / 2, (s.col + 1) / 2);
            } else {
                a = target_index((s.row - 1) / 2, s.col / 2);
                b = target_index((s.row + 1) / 2, s.col / 2);
            }
            connector_mask[i] = (Outcome{1} << a) | (Outcome{1} << b);
            if (target.has_edge(a, b)) {
                bridged[i] = true;
                plan.cluster_field.angles[i] = kPi / 2.0;
                plan.cluster_bases[i] = Basis::kX;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto &s = cluster.site(i);
        if (s.row % 2 == 0 && s.col % 2 == 0) continue;
        RedSite red{i, plan.cluster_bases[i], connector_mask[i]};
        if (s.row % 2 == 1 && s.col % 2 == 1) {
            // A broken centre kicks Z onto its connectors; only bridged ones
            // turn that into outcome flips.
            for (auto j : cluster.neighbors(i)) {
                if (bridged[j]) red.flip_mask ^= connector_mask[j];
            }
        }
        plan.red_sites.push_back(red);
    }
    return plan;
}

ReductionPlan reduce_cluster_to_brickwork(const Lattice &cluster) {
    if (cluster.kind() != LatticeKind::kCluster) {
        throw std::invalid_argument("reduction source must be a cluster lattice");
    }
    const int rows = cluster.rows();
    const int cols = cluster.cols();
    if (rows % 2 == 0 || (cols + 1) % (2 * kCellWidth) != 0) {
        throw std::invalid_argument("cluster must be (2m-1) x (14n-1) to hold whole brickwork cells");
    }
    const Lattice target = build_brickwork((rows + 1) / 2, (cols + 1) / (2 * kCellWidth));
    return plan_reduction(cluster, target, canonical_angle_field(target));
}

PureState reduction_source_state(const ReductionPlan &plan) {
    return rotated_graph_state(plan.cluster, plan.cluster_field);
}

Distribution red_marginal(const Distribution &square, const ReductionPlan &plan) {
    if (square.num_bits != plan.cluster.num_sites()) {
        throw std::invalid_argument("distribution is not over the cluster sites");
    }
    Distribution y{plan.num_red(), std::vector<double>(std::size_t{1} << plan.num_red(), 0.0)};
    for (std::size_t c = 0; c < square.probs.size(); ++c) y.probs[plan.red_bits(c)] += square.probs[c];
    return y;
}

Distribution marginalize_square_to_brickwork(const Distribution &square, const ReductionPlan &plan, double tol) {
    const Distribution y = red_marginal(square, plan);
    const double expected = std::ldexp(1.0, -static_cast<int>(plan.num_red()));
    for (double p : y.probs) {
        if (std::abs(p - expected) > tol) {
            throw std::domain_error("red-site marginal is not uniform");
        }
    }
    Distribution out{plan.target.num_sites(), std::vector<double>(std::size_t{1} << plan.target.num_sites(), 0.0)};
    for (std::size_t c = 0; c < square.probs.size(); ++c) out.probs[plan.relabel(c)] += square.probs[c];
    return out;
}

std::string reduction_plan_to_json(const ReductionPlan &plan) {
    nlohmann::json j;
    j["cluster"] = {{"rows", plan.cluster.rows()}, {"cols", plan.cluster.cols()}};
    j["target"] = nlohmann::json::parse(lattice_spec_to_json(plan.target, plan.target_field));
    j["r"] = plan.num_red();
    j["blue_sites"] = plan.blue_sites;
    auto reds = nlohmann::json::array();
    for (const auto &r : plan.red_sites) {
        const auto &s = plan.cluster.site(r.cluster_site);
        std::vector<std::size_t> flips;
        for (std::size_t t = 0; t < plan.target.num_sites(); ++t) {
            if ((r.flip_mask >> t) & 1) flips.push_back(t);
        }
        reds.push_back({{"site", r.cluster_site},
                        {"row", s.row},
                        {"col", s.col},
                        {"basis", std::string(1, basis_char(r.basis))},
                        {"operation", r.basis == Basis::kX ? "bridge" : "break"},
                        {"flips", flips}});
    }
    j["red_sites"] = reds;
    return j.dump();
}

std::vector<GadgetCheck> run_gadget_suite() {
    std::vector<GadgetCheck> checks;
    for (int s = 0; s <= 1; ++s) {
        for (int k = 0; k < 16; ++k) {
            const double f = gadget_fidelity(conditional_rotation_gadget(k * kPiOver8, s));
            checks.push_back({"conditional_rotation s=" + std::to_string(s) + " theta=" + pi_fraction(k, 8), f,
                              1.0 - f, f >= 1.0 - kGadgetTolerance});
        }
    }
    for (int k = 0; k < 8; ++k) {
        for (int sp = 0; sp <= 1; ++sp) {
            const double f = gadget_fidelity(hrz_k_gadget(k, sp));
            checks.push_back({"hrz k=" + std::to_string(k) + " s3'=" + std::to_string(sp), f, 1.0 - f,
                              f >= 1.0 - kGadgetTolerance});
        }
    }
    const auto cz = cz_phase_decomposition();
    checks.push_back({"cz_decomposition", phase_insensitive_fidelity(cz.product, gates::cz()), cz.residual,
                      cz.residual <= 1e-12});
    return checks;
}

}  // namespace brickwork
