#include "qfl/errors.hpp"
#include "qfl/parser.hpp"
#include "qfl/simulator.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using qfl::parse;
using qfl::run;
using qfl::SimOptions;

constexpr double kTol = 1e-12;

TEST(Simulator, BellStateExactDistribution) {
    const qfl::Program p = parse("qreg q[2];\ncreg c[2];\n"
                                 "h q[0];\ncx q[0],q[1];\n"
                                 "measure q[0] -> c[0];\nmeasure q[1] -> c[1];\n");
    const qfl::ExecutionTrace t = run(p);
    ASSERT_EQ(t.distribution.size(), 2u);
    EXPECT_NEAR(t.distribution.at("00"), 0.5, kTol);
    EXPECT_NEAR(t.distribution.at("11"), 0.5, kTol);
    EXPECT_EQ(t.covered_ids(), (std::set<int>{0, 1, 2, 3}));
    EXPECT_EQ(t.branch_count, 2);
}

TEST(Simulator, GhzStateExactDistribution) {
    const qfl::Program p = parse("qreg q[3];\ncreg c[3];\n"
                                 "h q[0];\ncx q[0],q[1];\ncx q[1],q[2];\n"
                                 "measure q[0] -> c[0];\nmeasure q[1] -> c[1];\n"
                                 "measure q[2] -> c[2];\n");
    const auto dist = run(p).distribution;
    ASSERT_EQ(dist.size(), 2u);
    EXPECT_NEAR(dist.at("000"), 0.5, kTol);
    EXPECT_NEAR(dist.at("111"), 0.5, kTol);
}

TEST(Simulator, IndependentSuperpositionsBranchFully) {
    const qfl::Program p = parse("qreg q[2];\ncreg c[2];\n"
                                 "h q[0];\nh q[1];\n"
                                 "measure q[0] -> c[0];\nmeasure q[1] -> c[1];\n");
    const qfl::ExecutionTrace t = run(p);
    ASSERT_EQ(t.distribution.size(), 4u);
    for (const auto& [key, mass] : t.distribution)
        EXPECT_NEAR(mass, 0.25, kTol) << key;
    EXPECT_EQ(t.branch_count, 4);
}

TEST(Simulator, KeysAreMsbFirstAcrossRegisters) {
    // a is global clbit 0, b is global clbit 1; leftmost key char is b.
    const qfl::Program p = parse("qreg q[2];\ncreg a[1];\ncreg b[1];\n"
                                 "x q[0];\n"
                                 "measure q[0] -> a[0];\nmeasure q[1] -> b[0];\n");
    const auto dist = run(p).distribution;
    ASSERT_EQ(dist.size(), 1u);
    EXPECT_NEAR(dist.at("01"), 1.0, kTol);
}

TEST(Simulator, NoClassicalBitsYieldsEmptyKey) {
    const qfl::Program p = parse("qreg q[1];\nh q[0];\n");
    const auto dist = run(p).distribution;
    ASSERT_EQ(dist.size(), 1u);
    EXPECT_NEAR(dist.at(""), 1.0, kTol);
}

TEST(Simulator, UnmeasuredClassicalBitsReadZero) {
    const qfl::Program p = parse("qreg q[1];\ncreg c[3];\nx q[0];\nmeasure q[0] -> c[1];\n");
    const auto dist = run(p).distribution;
    EXPECT_NEAR(dist.at("010"), 1.0, kTol);
}

TEST(Simulator, MeasurementOverwritesClbit) {
    const qfl::Program p = parse("qreg q[2];\ncreg c[1];\n"
                                 "x q[0];\nmeasure q[0] -> c[0];\nmeasure q[1] -> c[0];\n");
    const auto dist = run(p).distribution;
    EXPECT_NEAR(dist.at("0"), 1.0, kTol);
}

TEST(Simulator, GuardFalseBranchSkipsStatement) {
    const qfl::Program p = parse("qreg q[1];\ncreg c[1];\n"
                                 "x q[0];\nmeasure q[0] -> c[0];\nif (c==0) x q[0];\n");
    const qfl::ExecutionTrace t = run(p);
    EXPECT_FALSE(t.covered[2]);
    EXPECT_NEAR(t.distribution.at("1"), 1.0, kTol);
}

TEST(Simulator, GuardTrueBranchExecutes) {
    const qfl::Program p = parse("qreg q[1];\ncreg c[2];\n"
                                 "x q[0];\nmeasure q[0] -> c[0];\n"
                                 "if (c==1) x q[0];\nmeasure q[0] -> c[1];\n");
    const qfl::ExecutionTrace t = run(p);
    EXPECT_TRUE(t.covered[2]);
    // q flipped back to 0, so c[1]=0 and c[0]=1 -> key "01".
    EXPECT_NEAR(t.distribution.at("01"), 1.0, kTol);
}

TEST(Simulator, GuardComparesWholeRegister) {
    // c==2 means bit pattern 10: c[1]=1, c[0]=0.
    const qfl::Program p = parse("qreg q[2];\ncreg c[2];\ncreg out[1];\n"
                                 "x q[1];\n"
                                 "measure q[0] -> c[0];\nmeasure q[1] -> c[1];\n"
                                 "if (c==2) x q[0];\nmeasure q[0] -> out[0];\n");
    const auto dist = run(p).distribution;
    EXPECT_NEAR(dist.at("110"), 1.0, kTol);
}

TEST(Simulator, GuardEvaluatedPerBranch) {
    // After measuring |+>, only the c==1 branch flips q back.
    const qfl::Program p = parse("qreg q[1];\ncreg c[1];\ncreg out[1];\n"
                                 "h q[0];\nmeasure q[0] -> c[0];\n"
                                 "if (c==1) x q[0];\nmeasure q[0] -> out[0];\n");
    const qfl::ExecutionTrace t = run(p);
    EXPECT_TRUE(t.covered[2]);
    ASSERT_EQ(t.distribution.size(), 2u);
    EXPECT_NEAR(t.distribution.at("00"), 0.5, kTol);
    EXPECT_NEAR(t.distribution.at("01"), 0.5, kTol);
}

TEST(Simulator, TeleportationGolden) {
    // ry(1.8) prepares the payload; after teleportation the inverse rotation
    // returns q2 to |0>, so the output bit is deterministic while both
    // correction bits stay uniform.
    const qfl::Program p = parse("qreg q[3];\ncreg c0[1];\ncreg c1[1];\ncreg m[1];\n"
                                 "ry(1.8) q[0];\n"
                                 "h q[1];\ncx q[1],q[2];\n"
                                 "cx q[0],q[1];\nh q[0];\n"
                                 "measure q[0] -> c0[0];\nmeasure q[1] -> c1[0];\n"
                                 "if (c1==1) x q[2];\nif (c0==1) z q[2];\n"
                                 "ry(-1.8) q[2];\nmeasure q[2] -> m[0];\n");
    const auto dist = run(p).distribution;
    ASSERT_EQ(dist.size(), 4u);
    EXPECT_NEAR(dist.at("000"), 0.25, kTol);
    EXPECT_NEAR(dist.at("001"), 0.25, kTol);
    EXPECT_NEAR(dist.at("010"), 0.25, kTol);
    EXPECT_NEAR(dist.at("011"), 0.25, kTol);
}

TEST(Simulator, TeleportationWithoutCorrectionIsWrong) {
    const qfl::Program p = parse("qreg q[3];\ncreg c0[1];\ncreg c1[1];\ncreg m[1];\n"
                                 "ry(1.8) q[0];\n"
                                 "h q[1];\ncx q[1],q[2];\n"
                                 "cx q[0],q[1];\nh q[0];\n"
                                 "measure q[0] -> c0[0];\nmeasure q[1] -> c1[0];\n"
                                 "if (c1==1) x q[2];\n"
                                 "ry(-1.8) q[2];\nmeasure q[2] -> m[0];\n");
    const auto dist = run(p).distribution;
    // Dropping the z correction leaks payload mass into m=1 outcomes.
    double wrong = 0.0;
    for (const auto& [key, mass] : dist) {
        if (key[0] == '1')
            wrong += mass;
    }
    EXPECT_GT(wrong, 0.1);
}

TEST(Simulator, ResetForcesZeroWithoutTouchingClbits) {
    const qfl::Program p = parse("qreg q[1];\ncreg c[1];\n"
                                 "x q[0];\nreset q[0];\nmeasure q[0] -> c[0];\n");
    EXPECT_NEAR(run(p).distribution.at("0"), 1.0, kTol);

    const qfl::Program sup = parse("qreg q[1];\ncreg c[1];\n"
                                   "h q[0];\nreset q[0];\nmeasure q[0] -> c[0];\n");
    const qfl::ExecutionTrace t = run(sup);
    EXPECT_NEAR(t.distribution.at("0"), 1.0, kTol);
    EXPECT_EQ(t.branch_count, 2);
}

TEST(Simulator, ResetOnEntangledQubitLeavesPartnerMixed) {
    const qfl::Program p = parse("qreg q[2];\ncreg c[2];\n"
                                 "h q[0];\ncx q[0],q[1];\nreset q[0];\n"
                                 "measure q[0] -> c[0];\nmeasure q[1] -> c[1];\n");
    const auto dist = run(p).distribution;
    ASSERT_EQ(dist.size(), 2u);
    EXPECT_NEAR(dist.at("00"), 0.5, kTol);
    EXPECT_NEAR(dist.at("10"), 0.5, kTol);
}

TEST(Simulator, BarrierIsCoveredNoOp) {
    const qfl::Program p = parse("qreg q[1];\ncreg c[1];\n"
                                 "x q[0];\nbarrier q[0];\nmeasure q[0] -> c[0];\n");
    const qfl::ExecutionTrace t = run(p);
    EXPECT_TRUE(t.covered[1]);
    EXPECT_NEAR(t.distribution.at("1"), 1.0, kTol);
}

TEST(Simulator, MatchesDenseMatrixOracleOnRandomPrograms) {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        qfl::Program p = oracle::random_gate_program(seed, 5, 25);
        const std::map<std::string, double> expected = oracle::dense_distribution(p);

        // Append a full measurement layer mapping q[i] -> c[i].
        const int n = p.qubit_count();
        p.registers.push_back({"c", n, false, 0});
        for (int i = 0; i < n; ++i) {
            qfl::Statement m;
            m.id = static_cast<int>(p.statements.size());
            m.kind = qfl::StatementKind::Measure;
            m.qubit_operands.push_back({"q", i});
            m.clbit_operands.push_back({"c", i});
            p.statements.push_back(std::move(m));
        }

        const auto dist = run(p).distribution;
        double total = 0.0;
        for (const auto& [key, mass] : dist) {
            const auto it = expected.find(key);
            ASSERT_NE(it, expected.end()) << "seed " << seed << " unexpected key " << key;
            EXPECT_NEAR(mass, it->second, 1e-9) << "seed " << seed << " key " << key;
            total += mass;
        }
        EXPECT_NEAR(total, 1.0, 1e-9) << "seed " << seed;
        // Only keys the simulator pruned as negligible may be absent.
        for (const auto& [key, mass] : expected) {
            if (!dist.count(key))
                EXPECT_LE(mass, 1e-9) << "seed " << seed << " missing key " << key;
        }
    }
}

TEST(Simulator, BranchExplosionThrows) {
    const qfl::Program p = parse("qreg q[2];\ncreg c[2];\n"
                                 "h q[0];\nh q[1];\n"
                                 "measure q[0] -> c[0];\nmeasure q[1] -> c[1];\n");
    SimOptions opts;
    opts.max_branches = 2;
    try {
        run(p, opts);
        FAIL() << "expected SimError";
    } catch (const qfl::SimError& e) {
        EXPECT_EQ(e.kind(), qfl::SimErrorKind::BranchExplosion);
    }
}

TEST(Simulator, ZeroBudgetTimesOutImmediately) {
    const qfl::Program p = parse("qreg q[1];\nh q[0];\n");
    SimOptions opts;
    opts.budget = std::chrono::milliseconds{0};
    try {
        run(p, opts);
        FAIL() << "expected SimError";
    } catch (const qfl::SimError& e) {
        EXPECT_EQ(e.kind(), qfl::SimErrorKind::BudgetExceeded);
    }
}

TEST(Simulator, QubitCapIsPlainError) {
    const qfl::Program p = parse("qreg q[3];\nh q[0];\n");
    SimOptions opts;
    opts.qubit_cap = 2;
    try {
        run(p, opts);
        FAIL() << "expected Error";
    } catch (const qfl::SimError&) {
        FAIL() << "qubit cap must not be a SimError";
    } catch (const qfl::Error& e) {
        EXPECT_NE(std::string(e.what()).find("qubit"), std::string::npos);
    }
}

TEST(Simulator, DivisionByZeroParameterSurfacesAtRun) {
    const qfl::Program p = parse("qreg q[1];\nrx(1/0) q[0];\n");
    try {
        run(p);
        FAIL() << "expected SimError";
    } catch (const qfl::SimError& e) {
        EXPECT_EQ(e.kind(), qfl::SimErrorKind::DivisionByZero);
    }
}

TEST(Simulator, PrunedOutcomesAreDropped) {
    // ry(1e-8) leaves ~2.5e-17 mass on |1>, below the 1e-12 prune threshold.
    const qfl::Program p = parse("qreg q[1];\ncreg c[1];\nry(1e-8) q[0];\nmeasure q[0] -> c[0];\n");
    const auto dist = run(p).distribution;
    ASSERT_EQ(dist.size(), 1u);
    EXPECT_NEAR(dist.at("0"), 1.0, 1e-12);
}

TEST(Simulator, SampleIsDeterministicAndConsistent) {
    const qfl::Program p = parse("qreg q[2];\ncreg c[2];\n"
                                 "h q[0];\ncx q[0],q[1];\n"
                                 "measure q[0] -> c[0];\nmeasure q[1] -> c[1];\n");
    const qfl::ExecutionTrace t = run(p);
    const auto counts1 = qfl::sample(t, 10000, 42);
    const auto counts2 = qfl::sample(t, 10000, 42);
    EXPECT_EQ(counts1, counts2);

    std::int64_t total = 0;
    for (const auto& [key, n] : counts1) {
        EXPECT_TRUE(t.distribution.count(key)) << key;
        total += n;
    }
    EXPECT_EQ(total, 10000);
    EXPECT_GT(counts1.at("00"), 4000);
    EXPECT_LT(counts1.at("00"), 6000);

    const auto other_seed = qfl::sample(t, 10000, 43);
    EXPECT_NE(counts1, other_seed);
}

TEST(Simulator, SampleRejectsNonPositiveShots) {
    const qfl::Program p = parse("qreg q[1];\ncreg c[1];\nmeasure q[0] -> c[0];\n");
    const qfl::ExecutionTrace t = run(p);
    EXPECT_THROW(qfl::sample(t, 0, 1), qfl::EmptyInput);
    EXPECT_THROW(qfl::sample(t, -5, 1), qfl::EmptyInput);
}

TEST(Simulator, ApplyGateMatchesDenseOracle) {
    std::mt19937_64 rng(99);
    const auto& cat = qfl::GateCatalog::instance();
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 4;
        std::vector<qfl::cplx> state(1u << n);
        double norm = 0.0;
        for (auto& a : state) {
            a = {static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5,
                 static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5};
            norm += std::norm(a);
        }
        for (auto& a : state)
            a /= std::sqrt(norm);

        const auto& gates = cat.gates();
        const qfl::GateInfo& g = gates[rng() % gates.size()];
        std::vector<int> targets(static_cast<std::size_t>(n));
        std::iota(targets.begin(), targets.end(), 0);
        for (int a = 0; a < g.arity; ++a) {
            const std::size_t lo = static_cast<std::size_t>(a);
            const std::size_t pick = lo + static_cast<std::size_t>(rng() % (targets.size() - lo));
            std::swap(targets[lo], targets[pick]);
        }
        targets.resize(static_cast<std::size_t>(g.arity));
        std::vector<double> params;
        for (int i = 0; i < g.param_count; ++i)
            params.push_back(static_cast<double>(rng() >> 11) * 0x1.0p-53 * 6.28);

        const qfl::GateMatrix u = g.build(params);
        std::vector<qfl::cplx> mine = state;
        qfl::apply_gate(mine, u, targets);
        const std::vector<qfl::cplx> reference = oracle::apply_dense(state, u, targets, n);
        for (std::size_t i = 0; i < mine.size(); ++i)
            EXPECT_NEAR(std::abs(mine[i] - reference[i]), 0.0, 1e-12)
                << g.name << " index " << i;
    }
}

TEST(Simulator, DeferredMeasurementEquivalence) {
    // Measuring early then continuing on other qubits matches measuring late.
    const qfl::Program early = parse("qreg q[2];\ncreg c[2];\n"
                                     "h q[0];\ncx q[0],q[1];\n"
                                     "measure q[0] -> c[0];\n"
                                     "h q[1];\n"
                                     "measure q[1] -> c[1];\n");
    const qfl::Program late = parse("qreg q[2];\ncreg c[2];\n"
                                    "h q[0];\ncx q[0],q[1];\n"
                                    "h q[1];\n"
                                    "measure q[0] -> c[0];\n"
                                    "measure q[1] -> c[1];\n");
    const auto de = run(early).distribution;
    const auto dl = run(late).distribution;
    ASSERT_EQ(de.size(), dl.size());
    for (const auto& [key, mass] : de)
        EXPECT_NEAR(mass, dl.at(key), kTol) << key;
}

} // namespace
