#include "qfl/errors.hpp"
#include "qfl/mutate.hpp"
#include "qfl/parser.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>

namespace {

using qfl::generate_mutants;
using qfl::Mutant;
using qfl::MutationOp;
using qfl::parse;

std::vector<std::string> ids(const std::vector<Mutant>& ms) {
    std::vector<std::string> out;
    for (const auto& m : ms)
        out.push_back(m.id);
    return out;
}

TEST(Mutate, SingleHGateReplacementFamily) {
    const qfl::Program p = parse("qreg q[1];\nh q[0];\n");
    const std::vector<MutationOp> ops = {MutationOp::QGR};
    const auto ms = generate_mutants(p, ops);
    ASSERT_EQ(ms.size(), 8u);
    std::vector<std::string> gates;
    for (const auto& m : ms) {
        EXPECT_EQ(m.op, MutationOp::QGR);
        EXPECT_EQ(m.target_stmt, 0);
        ASSERT_EQ(m.program.statements.size(), 1u);
        gates.push_back(m.program.statements[0].gate_name);
    }
    EXPECT_EQ(gates, (std::vector<std::string>{"id", "x", "y", "z", "s", "sdg", "t", "tdg"}));
    EXPECT_EQ(ms[0].id, "QGR-0-0");
    EXPECT_EQ(ms[7].id, "QGR-0-7");
}

TEST(Mutate, MutOfCountsPerStatement) {
    const qfl::Program p = parse("qreg q[1];\nh q[0];\n");
    const std::vector<MutationOp> ops = {MutationOp::QGR, MutationOp::QGD};
    const auto ms = generate_mutants(p, ops);
    ASSERT_EQ(ms.size(), 9u);
    const auto index = qfl::mut_of(ms);
    ASSERT_EQ(index.size(), 1u);
    EXPECT_EQ(index.at(0).size(), 9u);
}

TEST(Mutate, CcxHasOneDeletionAndOneReplacement) {
    const qfl::Program p = parse("qreg q[3];\nccx q[0],q[1],q[2];\n");
    const std::vector<MutationOp> ops = {MutationOp::QGD, MutationOp::QGR};
    const auto ms = generate_mutants(p, ops);
    ASSERT_EQ(ms.size(), 2u);
    EXPECT_EQ(ms[0].op, MutationOp::QGD);
    EXPECT_TRUE(ms[0].program.statements.empty());
    EXPECT_EQ(ms[1].op, MutationOp::QGR);
    EXPECT_EQ(ms[1].program.statements[0].gate_name, "cswap");
}

TEST(Mutate, DeletionRenumbersRemainingStatements) {
    const qfl::Program p = parse("qreg q[2];\ncreg c[2];\n"
                                 "h q[0];\ncx q[0],q[1];\n"
                                 "measure q[0] -> c[0];\nmeasure q[1] -> c[1];\n");
    const std::vector<MutationOp> ops = {MutationOp::QGD};
    const auto ms = generate_mutants(p, ops);
    ASSERT_EQ(ms.size(), 2u); // h and cx; measures are QMD territory
    for (const auto& m : ms) {
        ASSERT_EQ(m.program.statements.size(), 3u);
        for (std::size_t i = 0; i < m.program.statements.size(); ++i)
            EXPECT_EQ(m.program.statements[i].id, static_cast<int>(i));
    }
}

TEST(Mutate, MeasureDeletionIsSeparateOperator) {
    const qfl::Program p = parse("qreg q[1];\ncreg c[1];\nh q[0];\nmeasure q[0] -> c[0];\n");
    const std::vector<MutationOp> qmd = {MutationOp::QMD};
    const auto ms = generate_mutants(p, qmd);
    ASSERT_EQ(ms.size(), 1u);
    EXPECT_EQ(ms[0].target_stmt, 1);
    EXPECT_EQ(ms[0].program.statements.size(), 1u);
    EXPECT_EQ(ms[0].program.statements[0].gate_name, "h");

    // QGD never touches measures, QMD never touches gates.
    const std::vector<MutationOp> qgd = {MutationOp::QGD};
    const auto dels = generate_mutants(p, qgd);
    ASSERT_EQ(dels.size(), 1u);
    EXPECT_EQ(dels[0].target_stmt, 0);
}

TEST(Mutate, CrpPoolWithDedupe) {
    const std::vector<MutationOp> ops = {MutationOp::CRP};

    // c=0: candidates 0 (self), 1, -0 (dup), 1 (dup) -> one mutant.
    auto ms = generate_mutants(parse("qreg q[1];\np(0) q[0];\n"), ops);
    ASSERT_EQ(ms.size(), 1u);
    EXPECT_DOUBLE_EQ(ms[0].program.statements[0].params[0].evaluate(), 1.0);

    // c=1: 0, -1, 2.
    ms = generate_mutants(parse("qreg q[1];\np(1) q[0];\n"), ops);
    ASSERT_EQ(ms.size(), 3u);
    EXPECT_DOUBLE_EQ(ms[0].program.statements[0].params[0].evaluate(), 0.0);
    EXPECT_DOUBLE_EQ(ms[1].program.statements[0].params[0].evaluate(), -1.0);
    EXPECT_DOUBLE_EQ(ms[2].program.statements[0].params[0].evaluate(), 2.0);

    // c=2: 0, 1, -2, 3.
    ms = generate_mutants(parse("qreg q[1];\np(2) q[0];\n"), ops);
    ASSERT_EQ(ms.size(), 4u);
}

TEST(Mutate, CrpTargetsEveryLiteralInCompoundExpressions) {
    // pi/2 has one literal (2); the pi node is not a literal.
    const std::vector<MutationOp> ops = {MutationOp::CRP};
    const auto ms = generate_mutants(parse("qreg q[1];\nrx(pi/2) q[0];\n"), ops);
    ASSERT_EQ(ms.size(), 4u); // 0, 1, -2, 3
    // Candidate 0 yields pi/0: still a valid (crashing) program, kept.
    bool has_zero_denominator = false;
    for (const auto& m : ms) {
        const auto& e = m.program.statements[0].params[0];
        if (e.children[1].kind == qfl::ParamExpr::Kind::Literal && e.children[1].value == 0.0)
            has_zero_denominator = true;
    }
    EXPECT_TRUE(has_zero_denominator);
}

TEST(Mutate, AorSwapsArithmeticOperators) {
    const std::vector<MutationOp> ops = {MutationOp::AOR};
    const auto ms = generate_mutants(parse("qreg q[1];\nrx(pi/2+1) q[0];\n"), ops);
    // Two binary nodes: / -> *, + -> -.
    ASSERT_EQ(ms.size(), 2u);
    std::vector<std::string> texts;
    for (const auto& m : ms)
        texts.push_back(m.program.statements[0].params[0].to_string());
    std::sort(texts.begin(), texts.end());
    EXPECT_EQ(texts[0], "pi*2+1");
    EXPECT_EQ(texts[1], "pi/2-1");
}

TEST(Mutate, GcrCoversRegisterDomainExceptCurrent) {
    const std::vector<MutationOp> ops = {MutationOp::GCR};
    const auto ms = generate_mutants(
        parse("qreg q[1];\ncreg c[2];\nmeasure q[0] -> c[0];\nif (c==1) x q[0];\n"), ops);
    ASSERT_EQ(ms.size(), 3u);
    std::vector<std::uint64_t> values;
    for (const auto& m : ms) {
        EXPECT_EQ(m.target_stmt, 1);
        values.push_back(m.program.statements[1].guard->value);
    }
    EXPECT_EQ(values, (std::vector<std::uint64_t>{0, 2, 3}));
}

TEST(Mutate, QihPrependsHadamardLayerOnce) {
    const qfl::Program p = parse("qreg q[2];\ncreg c[2];\n"
                                 "cx q[0],q[1];\nmeasure q[0] -> c[0];\n");
    const std::vector<MutationOp> ops = {MutationOp::QIH};
    const auto ms = generate_mutants(p, ops);
    ASSERT_EQ(ms.size(), 1u);
    EXPECT_EQ(ms[0].id, "QIH-init-0");
    EXPECT_EQ(ms[0].target_stmt, -1);
    ASSERT_EQ(ms[0].program.statements.size(), 4u);
    EXPECT_EQ(ms[0].program.statements[0].gate_name, "h");
    EXPECT_EQ(ms[0].program.statements[1].gate_name, "h");
    EXPECT_EQ(ms[0].program.statements[2].gate_name, "cx");

    // QIH mutants have no per-statement attribution.
    EXPECT_TRUE(qfl::mut_of(ms).empty());
}

TEST(Mutate, DefaultSetExcludesQih) {
    const auto def = qfl::default_operator_set();
    EXPECT_EQ(def.size(), 6u);
    EXPECT_EQ(std::count(def.begin(), def.end(), MutationOp::QIH), 0);
    const qfl::Program p = parse("qreg q[1];\nh q[0];\n");
    for (const auto& m : generate_mutants(p))
        EXPECT_NE(m.op, MutationOp::QIH);
}

TEST(Mutate, OperatorSetParsing) {
    EXPECT_EQ(qfl::parse_operator_set("QGD,QGR"),
              (std::vector<MutationOp>{MutationOp::QGD, MutationOp::QGR}));
    // Duplicates collapse; order normalizes to enum order.
    EXPECT_EQ(qfl::parse_operator_set("QGR,QGD,QGR"),
              (std::vector<MutationOp>{MutationOp::QGD, MutationOp::QGR}));
    EXPECT_EQ(qfl::parse_operator_set("QIH"), (std::vector<MutationOp>{MutationOp::QIH}));
    EXPECT_THROW(qfl::parse_operator_set("QXX"), qfl::Error);
    EXPECT_THROW(qfl::parse_operator_set(""), qfl::Error);
    // Blank tokens are skipped, not errors.
    EXPECT_EQ(qfl::parse_operator_set("QGD,,QGR"),
              (std::vector<MutationOp>{MutationOp::QGD, MutationOp::QGR}));
}

TEST(Mutate, OpCodeRoundTrip) {
    for (MutationOp op : {MutationOp::QGD, MutationOp::QGR, MutationOp::QMD, MutationOp::CRP,
                          MutationOp::AOR, MutationOp::GCR, MutationOp::QIH}) {
        const auto back = qfl::op_from_code(qfl::op_code(op));
        ASSERT_TRUE(back.has_value());
        EXPECT_EQ(*back, op);
    }
    EXPECT_FALSE(qfl::op_from_code("???").has_value());
    EXPECT_TRUE(qfl::is_quantum_op(MutationOp::QGD));
    EXPECT_TRUE(qfl::is_quantum_op(MutationOp::QIH));
    EXPECT_FALSE(qfl::is_quantum_op(MutationOp::CRP));
    EXPECT_FALSE(qfl::is_quantum_op(MutationOp::GCR));
}

TEST(Mutate, OrderingIsByStatementThenOperatorThenVariant) {
    const qfl::Program p = parse("qreg q[2];\ncreg c[1];\n"
                                 "rx(pi/2) q[0];\ncx q[0],q[1];\n"
                                 "measure q[1] -> c[0];\nif (c==1) z q[0];\n");
    const auto ms = generate_mutants(p);
    // Mutants arrive grouped by target statement in ascending order; op codes
    // sort lexicographically within a statement, variants ascending within.
    int last_stmt = -2;
    std::string last_op;
    std::string last_id;
    for (const auto& m : ms) {
        if (m.target_stmt != last_stmt) {
            EXPECT_GT(m.target_stmt, last_stmt);
            last_stmt = m.target_stmt;
            last_op.clear();
        }
        const std::string code = qfl::op_code(m.op);
        EXPECT_GE(code, last_op);
        last_op = code;
        EXPECT_NE(m.id, last_id);
        last_id = m.id;
    }

    // Statement 0 (rx): CRP 4, AOR 1, QGD 1, QGR 3 = 9 mutants.
    const auto index = qfl::mut_of(ms);
    EXPECT_EQ(index.at(0).size(), 9u);
    EXPECT_EQ(index.at(1).size(), 3u); // cx: QGD + cz + swap
    EXPECT_EQ(index.at(2).size(), 1u); // measure: QMD
    EXPECT_EQ(index.at(3).size(), 10u); // z: QGD + 8 QGR + GCR k=0
}

TEST(Mutate, GenerationIsDeterministic) {
    const qfl::Program p = oracle::random_gate_program(5, 4, 20);
    const auto a = generate_mutants(p);
    const auto b = generate_mutants(p);
    ASSERT_EQ(a.size(), b.size());
    EXPECT_EQ(ids(a), ids(b));
    for (std::size_t i = 0; i < a.size(); ++i)
        EXPECT_TRUE(a[i].program.structurally_equal(b[i].program));
}

TEST(Mutate, MutantsAreValidProgramsAndDistinct) {
    for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
        const qfl::Program p = oracle::random_gate_program(seed, 4, 15);
        const auto ms = generate_mutants(p);
        std::set<std::string> seen_ids;
        for (const auto& m : ms) {
            EXPECT_TRUE(seen_ids.insert(m.id).second) << "duplicate id " << m.id;
            // Every mutant reparses to a structurally equal program.
            const qfl::Program back = parse(qfl::serialize(m.program));
            EXPECT_TRUE(back.structurally_equal(m.program)) << m.id;
            // No mutant equals the original. (Two mutants may coincide with
            // each other, e.g. deleting either of two identical statements.)
            EXPECT_FALSE(m.program.structurally_equal(p)) << m.id;
        }
    }
}

TEST(Mutate, QgrIsReversible) {
    const std::vector<MutationOp> ops = {MutationOp::QGR};
    for (std::uint64_t seed : {21ull, 22ull, 23ull}) {
        const qfl::Program p = oracle::random_gate_program(seed, 4, 10);
        for (const auto& m : generate_mutants(p, ops)) {
            bool found = false;
            for (const auto& back : generate_mutants(m.program, ops)) {
                if (back.program.structurally_equal(p)) {
                    found = true;
                    break;
                }
            }
            EXPECT_TRUE(found) << "no reverse mutant for " << m.id << " (seed " << seed << ")";
        }
    }
}

TEST(Mutate, NoOperatorsNoTargetsYieldNothing) {
    // A measure-only program has no gates to delete or replace.
    const qfl::Program p = parse("qreg q[1];\ncreg c[1];\nmeasure q[0] -> c[0];\n");
    const std::vector<MutationOp> ops = {MutationOp::QGD, MutationOp::QGR};
    EXPECT_TRUE(generate_mutants(p, ops).empty());

    // Barriers are not mutation targets at all.
    const qfl::Program b = parse("qreg q[2];\nbarrier q[0],q[1];\n");
    EXPECT_TRUE(generate_mutants(b).empty());
}

TEST(Mutate, GuardedStatementKeepsGuardUnderQgr) {
    const qfl::Program p =
        parse("qreg q[1];\ncreg c[1];\nmeasure q[0] -> c[0];\nif (c==1) x q[0];\n");
    const std::vector<MutationOp> ops = {MutationOp::QGR};
    const auto ms = generate_mutants(p, ops);
    ASSERT_EQ(ms.size(), 8u);
    for (const auto& m : ms) {
        ASSERT_TRUE(m.program.statements[1].guard.has_value());
        EXPECT_EQ(m.program.statements[1].guard->value, 1u);
    }
}

} // namespace
