#include "brickwork/cli.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace brickwork::cli {
namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(const std::vector<std::string> &args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

TEST(Cli, UnknownSubcommandIsUsageError) {
    const auto r = call({"frobnicate"});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_FALSE(r.err.empty());
    EXPECT_EQ(call({}).code, kExitUsage);
    EXPECT_EQ(call({"sample", "--bogus"}).code, kExitUsage);
}

TEST(Cli, HelpListsFlags) {
    for (const std::string sub : {"sample", "distribution", "amplitude", "partition", "verify-gadgets", "reduce",
                                  "certify", "ensemble-stats"}) {
        const auto r = call({sub, "--help"});
        EXPECT_EQ(r.code, kExitOk) << sub;
        EXPECT_NE(r.out.find("--help"), std::string::npos) << sub;
    }
    EXPECT_NE(call({"certify", "--help"}).out.find("--noise-flip"), std::string::npos);
}

TEST(Cli, PartitionResidual) {
    const auto r = call({"partition", "--m", "1", "--n", "1", "--x", "0000000"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_LE(j.at("residual").get<double>(), 1e-9);
    for (const char *key : {"x", "re", "im", "abs2", "q_from_statevec"}) EXPECT_TRUE(j.contains(key));
    EXPECT_EQ(call({"partition", "--m", "1", "--n", "1", "--x", "000"}).code, kExitDomainError);
}

TEST(Cli, VerifyGadgets) {
    const auto r = call({"verify-gadgets"});
    EXPECT_EQ(r.code, kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j.at("all_pass").get<bool>());
    EXPECT_EQ(j.at("checks").size(), 49u);
    EXPECT_NE(r.err.find("cz_decomposition"), std::string::npos);
}

TEST(Cli, DistributionFormats) {
    const auto j = call({"distribution"});
    ASSERT_EQ(j.code, kExitOk);
    EXPECT_EQ(nlohmann::json::parse(j.out).at("probabilities").size(), 128u);
    const auto csv = call({"distribution", "--format", "csv"});
    ASSERT_EQ(csv.code, kExitOk);
    EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 128);
    EXPECT_EQ(call({"distribution", "--format", "xml"}).code, kExitUsage);
}

TEST(Cli, AmplitudeMatchesDistribution) {
    const auto a = nlohmann::json::parse(call({"amplitude", "--x", "1010000"}).out);
    const auto d = nlohmann::json::parse(call({"distribution"}).out);
    EXPECT_NEAR(a.at("abs2").get<double>(), d.at("probabilities").at("1010000").get<double>(), 1e-14);
}

TEST(Cli, QubitCapIsDomainError) {
    ::setenv("BRICKWORK_MAX_QUBITS", "6", 1);
    const auto r = call({"sample"});
    ::unsetenv("BRICKWORK_MAX_QUBITS");
    EXPECT_EQ(r.code, kExitDomainError);
}

TEST(Cli, LatticeFile) {
    const std::string path = ::testing::TempDir() + "lattice.json";
    {
        std::ofstream f(path);
        f << R"({"kind":"custom","m":1,"n":2,"edges":[[0,1]]})";
    }
    const auto r = call({"distribution", "--lattice", path});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out).at("num_bits").get<int>(), 2);
    EXPECT_EQ(call({"distribution", "--lattice", path + ".missing"}).code, kExitDomainError);
    std::remove(path.c_str());
}

TEST(Cli, ReduceAndCertify) {
    const auto red = call({"reduce"});
    ASSERT_EQ(red.code, kExitOk) << red.err;
    EXPECT_EQ(nlohmann::json::parse(red.out).at("r").get<int>(), 6);
    EXPECT_EQ(call({"reduce", "--cluster-rows", "2", "--cluster-cols", "13"}).code, kExitDomainError);

    const auto cert = call({"certify"});
    ASSERT_EQ(cert.code, kExitOk) << cert.err;
    EXPECT_EQ(nlohmann::json::parse(cert.out).at("verdict"), "accept");
    const auto noisy = call({"certify", "--depolarize", "0.5", "--depolarize-site", "3"});
    EXPECT_EQ(nlohmann::json::parse(noisy.out).at("verdict"), "reject");
}

TEST(Cli, CertifyRecordsFile) {
    const std::string path = ::testing::TempDir() + "counts.json";
    {
        std::ofstream f(path);
        f << R"({"terms":[)";
        for (int i = 0; i < 7; ++i) f << (i ? "," : "") << R"({"site":)" << i << R"(,"shots":5,"ones":0})";
        f << "]}";
    }
    const auto r = call({"certify", "--records", path});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out).at("verdict"), "insufficient samples");
    std::remove(path.c_str());
}

TEST(Cli, EnsembleStats) {
    const auto r = call({"ensemble-stats", "--cells", "4", "--layers", "1", "--trials", "3"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    for (const char *key : {"ks", "entangling_fraction", "trials"}) EXPECT_TRUE(j.contains(key));
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
    const std::vector<std::vector<std::string>> configs{
        {"sample", "--count", "25", "--seed", "4"},
        {"distribution"},
        {"amplitude", "--x", "0110000"},
        {"partition", "--x", "1111111"},
        {"verify-gadgets"},
        {"reduce", "--m", "2"},
        {"certify", "--noise-flip", "0.001", "--seed", "3"},
        {"ensemble-stats", "--cells", "4", "--layers", "1", "--trials", "2", "--seed", "8"},
    };
    for (const auto &c : configs) {
        const auto a = call(c);
        const auto b = call(c);
        EXPECT_EQ(a.code, kExitOk) << c[0] << ": " << a.err;
        EXPECT_EQ(a.out, b.out) << c[0];
    }
}

}  // namespace
}  // namespace brickwork::cli
