#include <gtest/gtest.h>

#include "moduli_lab/experiments.hpp"

using namespace moduli_lab;
using experiments::RunOptions;

TEST(Experiments, ReportFieldsInOrder) {
    const auto r = experiments::run("hopf-fg", {});
    std::vector<std::string> keys;
    for (const auto& [k, v] : r.document.items()) keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"experiment", "parameters", "samples", "verdict", "provenance", "pass"}));
    EXPECT_EQ(r.document["pass"].get<bool>(), r.pass);
    EXPECT_TRUE(r.pass);
}

TEST(Experiments, SpecExamples) {
    const auto hopf = experiments::run("hopf-counterexample", {});
    EXPECT_TRUE(hopf.pass);
    EXPECT_EQ(hopf.document["verdict"]["probe"]["locally_iso"], "No");
    EXPECT_EQ(hopf.document["verdict"]["probe"]["diagnosis"], "divergence");

    RunOptions torus_model;
    torus_model.model = family::Model::Torus;
    const auto strat = experiments::run("stratify", torus_model);
    EXPECT_TRUE(strat.pass);
    EXPECT_TRUE(strat.document["verdict"]["summary"]["foliation_trivial"].get<bool>());

    const auto jets = experiments::run("jets-degree", {});
    EXPECT_TRUE(jets.pass);
    EXPECT_EQ(jets.document["verdict"]["type2_verdict"], "NotEquivalent");
}

TEST(Experiments, SeedChangesOnlySeededContent) {
    RunOptions a, b;
    b.seed = 2;
    const auto ra = experiments::run("hopf-leaf", a), rb = experiments::run("hopf-leaf", b);
    EXPECT_EQ(ra.document["parameters"]["seed"], 1);
    EXPECT_EQ(rb.document["parameters"]["seed"], 2);
    EXPECT_NE(report::structured(ra.document), report::structured(rb.document));
    EXPECT_TRUE(ra.pass);
    EXPECT_TRUE(rb.pass);
}

TEST(Experiments, FloatsUseSeventeenDigits) {
    report::json j;
    j["x"] = 0.1;
    j["samples"] = report::json::array({report::json{{"t", 1.0 / 3.0}, {"witness_class", "a"}}});
    EXPECT_EQ(report::structured(j), "{\n  \"x\": 0.10000000000000001,\n  \"samples\": [\n    {\n      \"t\": "
                                     "0.33333333333333331,\n      \"witness_class\": \"a\"\n    }\n  ]\n}\n");
    EXPECT_EQ(report::table(j), "t\twitness_class\n0.33333333333333331\ta\n");
}

TEST(Experiments, InvalidOptions) {
    EXPECT_THROW(experiments::run("nope", {}), std::invalid_argument);
    RunOptions o;
    o.bound = 6;
    EXPECT_THROW(experiments::run("torus-counterexample", o), std::invalid_argument);
    o = {};
    o.tol = 0.0;
    EXPECT_THROW(experiments::run("hopf-leaf", o), std::invalid_argument);
    o = {};
    o.grid = 0;
    EXPECT_THROW(experiments::run("hopf-leaf", o), std::invalid_argument);
}

TEST(Experiments, DensityFailsItsThresholdHonestly) {
    const auto r = experiments::run("lemma7-density", {});
    EXPECT_FALSE(r.pass);
    EXPECT_NEAR(r.document["verdict"]["max_gap"].get<double>(), 0.031602669583436584, 1e-12);
    RunOptions wide;
    wide.grid = 800;
    EXPECT_TRUE(experiments::run("lemma7-density", wide).pass);
}
