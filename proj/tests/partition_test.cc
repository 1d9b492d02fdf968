#include "brickwork/partition.h"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>

namespace brickwork {
namespace {

// Plain double loop over spin configurations, nothing shared with the library sum.
Complex naive_partition(const Lattice &l, const AngleField &f, Outcome x) {
    const std::size_t n = l.num_sites();
    Complex z = 0.0;
    for (std::size_t c = 0; c < (std::size_t{1} << n); ++c) {
        auto spin = [&](std::size_t i) { return ((c >> i) & 1) ? -1.0 : 1.0; };
        double phase = 0.0;
        for (auto [a, b] : l.edges()) phase += f.coupling * spin(a) * spin(b);
        for (std::size_t i = 0; i < n; ++i) {
            const double shift = ((x >> i) & 1) ? kPi / 2 : 0.0;
            phase += (f.angles[i] / 2 + shift) * spin(i);
        }
        z += std::polar(1.0, phase);
    }
    return z;
}

TEST(Partition, SingleSiteExamples) {
    const Lattice one = build_custom(1, 1, {});
    AngleField f = zero_angle_field(one);
    EXPECT_NEAR(std::abs(partition_function(one, f, 0).value - Complex(2.0, 0.0)), 0.0, 1e-15);
    f.angles[0] = kPi / 2;  // B' = pi/4
    EXPECT_NEAR(std::abs(partition_function(one, f, 0).value - Complex(std::sqrt(2.0), 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(verify_born_partition_identity(one, zero_angle_field(one), 0), 0.0, 1e-15);
}

TEST(Partition, MatchesNaiveSum) {
    const Lattice l = build_custom(2, 3, {{0, 1}, {1, 2}, {0, 3}, {3, 4}, {4, 5}, {2, 5}});
    AngleField f = zero_angle_field(l);
    for (std::size_t i = 0; i < 6; ++i) f.angles[i] = 0.37 * static_cast<double>(i + 1);
    f.coupling = 0.61;
    for (Outcome x = 0; x < 64; ++x) {
        const Complex want = naive_partition(l, f, x);
        EXPECT_NEAR(std::abs(partition_function(l, f, x).value - want), 0.0, 1e-11) << x;
    }
}

TEST(Partition, SingleEdgeBornIdentity) {
    const Lattice l = build_custom(1, 2, {{0, 1}});
    const AngleField f = zero_angle_field(l);
    for (Outcome x = 0; x < 4; ++x) EXPECT_LE(verify_born_partition_identity(l, f, x), 1e-12);
}

TEST(Partition, OneCellBornIdentityAllOutcomes) {
    const Lattice l = build_brickwork(1, 1);
    const AngleField f = canonical_angle_field(l);
    double total = 0.0;
    for (Outcome x = 0; x < 128; ++x) {
        EXPECT_LE(verify_born_partition_identity(l, f, x), 1e-12);
        total += born_probability(l, f, x);
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(Partition, TwoCellBornIdentitySweep) {
    const Lattice l = build_brickwork(2, 1);
    const AngleField f = canonical_angle_field(l);
    Rng rng(3);
    for (int k = 0; k < 40; ++k) {
        const Outcome x = rng() & ((Outcome{1} << 14) - 1);
        EXPECT_LE(verify_born_partition_identity(l, f, x), 1e-12);
    }
}

TEST(Partition, WorkerCountDoesNotChangeResult) {
    const Lattice l = build_brickwork(2, 1);
    const AngleField f = canonical_angle_field(l);
    const Complex one = partition_function(l, f, 0x1a5, 1).value;
    for (unsigned w : {2u, 3u, 8u}) EXPECT_NEAR(std::abs(partition_function(l, f, 0x1a5, w).value - one), 0.0, 1e-12);
}

TEST(Partition, ModulusBounded) {
    const Lattice l = build_brickwork(1, 1);
    const AngleField f = canonical_angle_field(l);
    for (Outcome x = 0; x < 128; x += 9) EXPECT_LE(partition_function(l, f, x).abs2(), std::ldexp(1.0, 14) + 1e-9);
}

TEST(Partition, FieldSignFlipKeepsModulus) {
    // z -> -z sends Z(theta, x) to (-1)^{|x|} Z(-theta, x).
    const Lattice l = build_brickwork(1, 1);
    const AngleField f = canonical_angle_field(l);
    AngleField neg = f;
    for (auto &a : neg.angles) a = -a;
    for (Outcome x = 0; x < 128; ++x) {
        const Complex a = partition_function(l, f, x).value;
        const Complex b = partition_function(l, neg, x).value;
        const double sign = (std::popcount(x) % 2) ? -1.0 : 1.0;
        EXPECT_NEAR(std::abs(a - sign * b), 0.0, 1e-11);
        EXPECT_NEAR(std::abs(a), std::abs(b), 1e-11);
    }
}

TEST(Partition, SizeCap) {
    const Lattice big = build_cluster(5, 5);
    EXPECT_THROW(partition_function(big, zero_angle_field(big), 0), std::length_error);
    const Lattice mid = build_cluster(3, 7);
    EXPECT_THROW(verify_born_partition_identity(mid, zero_angle_field(mid), 0), std::length_error);
}

TEST(Comparators, MultiplicativeError) {
    const Distribution q{1, {0.5, 0.5}};
    EXPECT_TRUE(multiplicative_error_check(q, q, 0.0));
    EXPECT_FALSE(multiplicative_error_check(Distribution{1, {0.8, 0.2}}, q, 0.5));
    EXPECT_FALSE(multiplicative_error_check(Distribution{1, {0.9, 0.1}}, Distribution{1, {1.0, 0.0}}, 0.9));
}

TEST(Comparators, VariationDistance) {
    const Distribution a{1, {0.6, 0.4}};
    const Distribution b{1, {0.5, 0.5}};
    EXPECT_NEAR(variation_distance(a, b), 0.2, 1e-15);
    EXPECT_NEAR(trace_distance(a, b), 0.1, 1e-15);
    EXPECT_NEAR(variation_distance(point_mass(2, 0), point_mass(2, 3)), 2.0, 0.0);
    EXPECT_NEAR(variation_distance(a, a), 0.0, 0.0);
}

TEST(Comparators, VariationDistanceIsMetric) {
    Rng rng(17);
    auto random_dist = [&]() {
        Distribution d{3, std::vector<double>(8)};
        double s = 0;
        for (auto &p : d.probs) s += (p = uniform01(rng));
        for (auto &p : d.probs) p /= s;
        return d;
    };
    for (int t = 0; t < 100; ++t) {
        const auto p = random_dist(), q = random_dist(), r = random_dist();
        EXPECT_NEAR(variation_distance(p, q), variation_distance(q, p), 1e-15);
        EXPECT_LE(variation_distance(p, r), variation_distance(p, q) + variation_distance(q, r) + 1e-15);
    }
}

TEST(Comparators, MixedError) {
    EXPECT_TRUE(mixed_error_check(3.0, 3.0, 2, 10.0, 0.1, 0.5));
    EXPECT_TRUE(mixed_error_check(0.4 * 16, 0.0, 4, 10.0, 0.45, 1.0));
    EXPECT_FALSE(mixed_error_check(0.5 * 16, 0.0, 4, 10.0, 0.45, 1.0));
    EXPECT_THROW(mixed_error_check(1.0, 1.0, 2, 10.0, 0.5, 1.0), std::invalid_argument);
}

}  // namespace
}  // namespace brickwork
