#include "brickwork/cli.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "brickwork/certify.h"
#include "brickwork/ensemble.h"
#include "brickwork/lattice.h"
#include "brickwork/mbqc.h"
#include "brickwork/partition.h"
#include "brickwork/statevec.h"
#include "json.hpp"

namespace brickwork::cli {

namespace {

using nlohmann::json;

struct LatticeOptions {
    int m = 1;
    int n = 1;
    std::string kind = "brickwork";
    std::string path;
};

void add_lattice_options(CLI::App *cmd, LatticeOptions &opt) {
    cmd->add_option("--m", opt.m, "Rows of cells (brickwork) or of sites (cluster)")->capture_default_str();
    cmd->add_option("--n", opt.n, "Cells per row (brickwork) or columns (cluster)")->capture_default_str();
    cmd->add_option("--kind", opt.kind, "Lattice built from --m/--n")
        ->check(CLI::IsMember({"brickwork", "cluster"}))
        ->capture_default_str();
    cmd->add_option("--lattice", opt.path, "JSON lattice spec; overrides --m/--n/--kind");
}

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LatticeSpec resolve(const LatticeOptions &opt) {
    if (!opt.path.empty()) return lattice_spec_from_json(read_file(opt.path));
    if (opt.kind == "cluster") {
        Lattice l = build_cluster(opt.m, opt.n);
        AngleField f = zero_angle_field(l);
        return {std::move(l), std::move(f)};
    }
    Lattice l = build_brickwork(opt.m, opt.n);
    AngleField f = canonical_angle_field(l);
    return {std::move(l), std::move(f)};
}

Outcome parse_outcome(const std::string &bits, std::size_t num_sites) {
    if (bits.size() != num_sites) {
        throw std::invalid_argument("--x needs " + std::to_string(num_sites) + " bits");
    }
    return parse_bitstring(bits);
}

json distribution_json(const Distribution &d) {
    json probs = json::object();
    for (std::size_t x = 0; x < d.probs.size(); ++x) probs[to_bitstring(x, d.num_bits)] = d.probs[x];
    return {{"num_bits", d.num_bits}, {"probabilities", probs}};
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Brickwork Ising sampling toolkit"};
    app.name("brickwork");
    app.require_subcommand(1, 1);

    LatticeOptions lat;
    std::uint64_t seed = 0;
    std::size_t count = 10;
    std::string format = "json";
    std::string x_bits;
    unsigned workers = 0;

    auto *sample_cmd = app.add_subcommand("sample", "Draw X-basis samples from the Ising state");
    add_lattice_options(sample_cmd, lat);
    sample_cmd->add_option("--count", count, "Number of samples")->capture_default_str();
    sample_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();

    auto *dist_cmd = app.add_subcommand("distribution", "Exact X-basis outcome distribution");
    add_lattice_options(dist_cmd, lat);
    dist_cmd->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    auto *amp_cmd = app.add_subcommand("amplitude", "<+_x| exp(-iH) |+>");
    add_lattice_options(amp_cmd, lat);
    amp_cmd->add_option("--x", x_bits, "Outcome bitstring, site 0 first")->required();

    auto *part_cmd = app.add_subcommand("partition", "Partition function Z_x against the state vector");
    add_lattice_options(part_cmd, lat);
    part_cmd->add_option("--x", x_bits, "Outcome bitstring, site 0 first")->required();
    part_cmd->add_option("--workers", workers, "Enumeration threads (0 = hardware)")->capture_default_str();

    auto *gadget_cmd = app.add_subcommand("verify-gadgets", "Exhaustive gadget and CZ identity checks");

    int cluster_rows = 0;
    int cluster_cols = 0;
    auto *reduce_cmd = app.add_subcommand("reduce", "Cluster to brickwork reduction plan");
    reduce_cmd->add_option("--m", lat.m, "Brickwork rows of the target")->capture_default_str();
    reduce_cmd->add_option("--n", lat.n, "Brickwork cells per row of the target")->capture_default_str();
    reduce_cmd->add_option("--cluster-rows", cluster_rows, "Cluster rows (2m-1); overrides --m");
    reduce_cmd->add_option("--cluster-cols", cluster_cols, "Cluster columns (14n-1); overrides --n");

    double epsilon = 0.1;
    double alpha = 0.05;
    double noise_flip = 0.0;
    double depolarize_p = 0.0;
    std::vector<std::size_t> depolarize_sites;
    std::string records_path;
    auto *cert_cmd = app.add_subcommand("certify", "Energy-based certification of the rotated brickwork state");
    add_lattice_options(cert_cmd, lat);
    cert_cmd->add_option("--epsilon", epsilon, "Total distance budget")->capture_default_str();
    cert_cmd->add_option("--alpha", alpha, "Failure probability")->capture_default_str();
    cert_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    cert_cmd->add_option("--noise-flip", noise_flip, "Per-bit readout flip probability")->capture_default_str();
    cert_cmd->add_option("--depolarize", depolarize_p, "Depolarizing weight on --depolarize-site")
        ->capture_default_str();
    cert_cmd->add_option("--depolarize-site", depolarize_sites, "Sites hit by the depolarizing channel");
    cert_cmd->add_option("--records", records_path, "JSON term counts {terms: [{site, shots, ones}]}");

    int cells = 4;
    int layers = 4;
    int trials = 10;
    auto *ens_cmd = app.add_subcommand("ensemble-stats", "Random brick gates and Porter-Thomas statistic");
    ens_cmd->add_option("--cells", cells, "Rows of the random instance")->capture_default_str();
    ens_cmd->add_option("--layers", layers, "Cells per row")->capture_default_str();
    ens_cmd->add_option("--trials", trials, "Instances and gates drawn")->capture_default_str();
    ens_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, err, err);
        err << app.help();
        return kExitUsage;
    }

    try {
        json result;
        if (*sample_cmd) {
            const auto spec = resolve(lat);
            const auto rec = sample(ising_state(spec.lattice, spec.field), count, seed);
            json samples = json::array();
            for (auto x : rec.outcomes) samples.push_back(to_bitstring(x, rec.num_bits));
            result = {{"num_sites", rec.num_bits}, {"seed", seed}, {"count", count}, {"samples", samples}};
        } else if (*dist_cmd) {
            const auto spec = resolve(lat);
            const auto d = full_distribution(ising_state(spec.lattice, spec.field));
            if (format == "csv") {
                out << distribution_to_csv(d);
                return kExitOk;
            }
            result = distribution_json(d);
        } else if (*amp_cmd) {
            const auto spec = resolve(lat);
            const Outcome x = parse_outcome(x_bits, spec.lattice.num_sites());
            const Complex a = x_basis_amplitude(ising_state(spec.lattice, spec.field), x);
            result = {{"x", x_bits}, {"re", a.real()}, {"im", a.imag()}, {"abs2", std::norm(a)}};
        } else if (*part_cmd) {
            const auto spec = resolve(lat);
            const std::size_t n = spec.lattice.num_sites();
            const Outcome x = parse_outcome(x_bits, n);
            const auto z = partition_function(spec.lattice, spec.field, x, workers);
            const double q = born_probability(spec.lattice, spec.field, x);
            const double residual = std::abs(q - std::ldexp(z.abs2(), -2 * static_cast<int>(n)));
            result = {{"x", x_bits},
                      {"re", z.value.real()},
                      {"im", z.value.imag()},
                      {"abs2", z.abs2()},
                      {"q_from_statevec", q},
                      {"residual", residual}};
        } else if (*gadget_cmd) {
            const auto checks = run_gadget_suite();
            json rows = json::array();
            bool all = true;
            err << std::left << std::setw(40) << "check" << std::setw(22) << "fidelity"
                << "result\n";
            for (const auto &c : checks) {
                rows.push_back({{"name", c.name}, {"fidelity", c.fidelity}, {"residual", c.residual}, {"pass", c.pass}});
                all = all && c.pass;
                err << std::left << std::setw(40) << c.name << std::setw(22) << std::setprecision(16) << c.fidelity
                    << (c.pass ? "PASS" : "FAIL") << "\n";
            }
            result = {{"checks", rows}, {"all_pass", all}};
            out << result.dump() << "\n";
            return all ? kExitOk : kExitDomainError;
        } else if (*reduce_cmd) {
            const int rows = cluster_rows > 0 ? cluster_rows : 2 * lat.m - 1;
            const int cols = cluster_cols > 0 ? cluster_cols : 2 * kCellWidth * lat.n - 1;
            const auto plan = reduce_cluster_to_brickwork(build_cluster(rows, cols));
            result = json::parse(reduction_plan_to_json(plan));
        } else if (*cert_cmd) {
            const auto spec = resolve(lat);
            CertifyOptions opts;
            opts.epsilon = epsilon;
            opts.alpha = alpha;
            opts.seed = seed;
            opts.noise.flip_probability = noise_flip;
            opts.noise.depolarizing = depolarize_p;
            opts.noise.depolarized_sites = depolarize_sites;
            CertificationReport report;
            if (!records_path.empty()) {
                report = certify_counts(counts_from_json(read_file(records_path)), spec.lattice, opts);
            } else {
                const auto ideal = rotated_graph_state(spec.lattice, spec.field);
                report = certify(pure(ideal), spec.lattice, spec.field, opts);
            }
            result = json::parse(report_to_json(report));
        } else if (*ens_cmd) {
            if (trials <= 0) throw std::invalid_argument("--trials must be positive");
            std::vector<double> pooled;
            double ks_sum = 0.0;
            int entangling = 0;
            for (int t = 0; t < trials; ++t) {
                const std::uint64_t s = seed + static_cast<std::uint64_t>(t);
                const auto d = random_instance_distribution(cells, layers, s);
                ks_sum += porter_thomas_stat(d);
                const double scale = static_cast<double>(d.probs.size());
                for (double p : d.probs) pooled.push_back(p * scale);
                entangling += is_entangling(random_brick_gate(s)) ? 1 : 0;
            }
            result = {{"ks", ks_exponential(pooled)},
                      {"ks_mean", ks_sum / trials},
                      {"entangling_fraction", static_cast<double>(entangling) / trials},
                      {"trials", trials}};
        }
        out << result.dump() << "\n";
        return kExitOk;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitDomainError;
    }
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    std::vector<const char *> argv{"brickwork"};
    for (const auto &a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace brickwork::cli
