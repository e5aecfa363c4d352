#include "qfl/errors.hpp"
#include "qfl/parser.hpp"
#include "qfl/program.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

namespace {

using qfl::parse;
using qfl::ParseError;
using qfl::ParseErrorKind;

qfl::ParseError capture(const std::string& src) {
    try {
        parse(src);
    } catch (const ParseError& e) {
        return e;
    }
    throw std::logic_error("expected ParseError for: " + src);
}

TEST(Parser, ParsesBellProgram) {
    const qfl::Program p = parse("qreg q[2];\n"
                                 "creg c[2];\n"
                                 "h q[0];\n"
                                 "cx q[0],q[1];\n"
                                 "measure q[0] -> c[0];\n"
                                 "measure q[1] -> c[1];\n");
    EXPECT_EQ(p.qubit_count(), 2);
    EXPECT_EQ(p.clbit_count(), 2);
    ASSERT_EQ(p.statements.size(), 4u);
    EXPECT_EQ(p.statements[0].gate_name, "h");
    EXPECT_EQ(p.statements[1].qubit_operands.size(), 2u);
    EXPECT_EQ(p.statements[2].kind, qfl::StatementKind::Measure);
    for (std::size_t i = 0; i < p.statements.size(); ++i)
        EXPECT_EQ(p.statements[i].id, static_cast<int>(i));
    EXPECT_EQ(p.statements[3].line, 6);
}

TEST(Parser, CommentsAndBlankLinesDoNotAffectIds) {
    const qfl::Program p = parse("// leading comment\n"
                                 "qreg q[1];\n"
                                 "\n"
                                 "h q[0]; // trailing comment\n"
                                 "// interleaved\n"
                                 "\n"
                                 "x q[0];\n");
    ASSERT_EQ(p.statements.size(), 2u);
    EXPECT_EQ(p.statements[0].id, 0);
    EXPECT_EQ(p.statements[1].id, 1);
    EXPECT_EQ(p.statements[1].line, 7);
}

TEST(Parser, ParsesGuardsParamsAndReset) {
    const qfl::Program p = parse("qreg q[2];\n"
                                 "creg c[2];\n"
                                 "rx(pi/4) q[0];\n"
                                 "measure q[0] -> c[0];\n"
                                 "if (c==1) x q[1];\n"
                                 "reset q[0];\n"
                                 "barrier q[0],q[1];\n");
    ASSERT_EQ(p.statements.size(), 5u);
    ASSERT_EQ(p.statements[0].params.size(), 1u);
    EXPECT_DOUBLE_EQ(p.statements[0].params[0].evaluate(), M_PI / 4.0);
    ASSERT_TRUE(p.statements[2].guard.has_value());
    EXPECT_EQ(p.statements[2].guard->reg, "c");
    EXPECT_EQ(p.statements[2].guard->value, 1u);
    EXPECT_EQ(p.statements[3].kind, qfl::StatementKind::Reset);
    EXPECT_EQ(p.statements[4].kind, qfl::StatementKind::Barrier);
    EXPECT_EQ(p.statements[4].qubit_operands.size(), 2u);
}

TEST(Parser, SyntaxErrors) {
    EXPECT_EQ(capture("qreg q[1];\nh q[0]\n").kind(), ParseErrorKind::Syntax);
    EXPECT_EQ(capture("qreg q[0];\n").kind(), ParseErrorKind::Syntax);
    EXPECT_EQ(capture("qreg q[65];\n").kind(), ParseErrorKind::Syntax);
    EXPECT_EQ(capture("qreg q[1];\nqreg q[1];\n").kind(), ParseErrorKind::Syntax);
    EXPECT_EQ(capture("qreg q[1];\nh q[0];\nqreg r[1];\n").kind(), ParseErrorKind::Syntax);
    EXPECT_EQ(capture("qreg q[1];\nrx() q[0];\n").kind(), ParseErrorKind::Syntax);
    EXPECT_EQ(capture("qreg q[1];\nrx(1,2) q[0];\n").kind(), ParseErrorKind::Syntax);
    EXPECT_EQ(capture("qreg q[2];\ncx q[0];\n").kind(), ParseErrorKind::Syntax);
    EXPECT_EQ(capture("qreg q[1];\ncreg c[1];\nif (q==1) x q[0];\n").kind(),
              ParseErrorKind::Syntax);
    EXPECT_EQ(capture("qreg q[1];\nh c[0];\n").kind(), ParseErrorKind::Syntax);
}

TEST(Parser, ErrorsCarryLineAndColumn) {
    const ParseError e = capture("qreg q[2];\n\nfoo q[0];\n");
    EXPECT_EQ(e.kind(), ParseErrorKind::UnknownGate);
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 1);
    EXPECT_NE(std::string(e.what()).find("3:1"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("foo"), std::string::npos);
}

TEST(Parser, UnknownGate) {
    EXPECT_EQ(capture("qreg q[1];\nhadamard q[0];\n").kind(), ParseErrorKind::UnknownGate);
}

TEST(Parser, OperandOutOfRange) {
    EXPECT_EQ(capture("qreg q[2];\nh q[2];\n").kind(), ParseErrorKind::OperandOutOfRange);
    EXPECT_EQ(capture("qreg q[1];\ncreg c[1];\nmeasure q[0] -> c[1];\n").kind(),
              ParseErrorKind::OperandOutOfRange);
    EXPECT_EQ(capture("qreg q[1];\ncreg c[2];\nif (c==4) x q[0];\n").kind(),
              ParseErrorKind::OperandOutOfRange);
}

TEST(Parser, DuplicateQubitOperand) {
    EXPECT_EQ(capture("qreg q[2];\ncx q[1],q[1];\n").kind(),
              ParseErrorKind::DuplicateQubitOperand);
    EXPECT_EQ(capture("qreg q[3];\nccx q[0],q[2],q[0];\n").kind(),
              ParseErrorKind::DuplicateQubitOperand);
}

TEST(Parser, UnsupportedConstructs) {
    EXPECT_EQ(capture("OPENQASM 2.0;\nqreg q[1];\n").kind(),
              ParseErrorKind::UnsupportedConstruct);
    EXPECT_EQ(capture("include \"qelib1.inc\";\n").kind(),
              ParseErrorKind::UnsupportedConstruct);
    EXPECT_EQ(capture("gate foo a { }\n").kind(), ParseErrorKind::UnsupportedConstruct);
    EXPECT_EQ(capture("qreg q[2];\nh q;\n").kind(), ParseErrorKind::UnsupportedConstruct);
}

TEST(Parser, GuardValueMustFitRegister) {
    // 2-bit register: guard constants 0..3 are fine, 4 is not.
    EXPECT_NO_THROW(parse("qreg q[1];\ncreg c[2];\nif (c==3) x q[0];\n"));
    EXPECT_EQ(capture("qreg q[1];\ncreg c[2];\nif (c==4) x q[0];\n").kind(),
              ParseErrorKind::OperandOutOfRange);
}

TEST(Parser, SerializeParsesBackStructurallyEqual) {
    const std::string src = "qreg q[3];\n"
                            "creg c0[1];\n"
                            "creg m[2];\n"
                            "ry(1.8) q[0];\n"
                            "h q[1];\n"
                            "cx q[1],q[2];\n"
                            "p(pi/8*3) q[2];\n"
                            "measure q[0] -> c0[0];\n"
                            "if (c0==1) x q[2];\n"
                            "ry(-1.8) q[2];\n"
                            "barrier q[0],q[2];\n"
                            "reset q[1];\n"
                            "measure q[2] -> m[1];\n";
    const qfl::Program p = parse(src);
    const qfl::Program q = parse(qfl::serialize(p));
    EXPECT_TRUE(p.structurally_equal(q));
    EXPECT_EQ(qfl::serialize(p), qfl::serialize(q));
}

TEST(Parser, RandomProgramsRoundTripThroughSerialize) {
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
        const qfl::Program p = oracle::random_gate_program(seed);
        qfl::Program q;
        try {
            q = parse(qfl::serialize(p));
        } catch (const ParseError& e) {
            FAIL() << "seed " << seed << ": " << e.what() << "\n" << qfl::serialize(p);
        }
        EXPECT_TRUE(p.structurally_equal(q)) << "seed " << seed;
    }
}

TEST(Parser, ParseFilePutsPathInErrors) {
    const std::string path = ::testing::TempDir() + "/qfl_parse_error.qasm";
    {
        std::ofstream out(path);
        out << "qreg q[1];\nbogus q[0];\n";
    }
    try {
        qfl::parse_file(path);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find(path), std::string::npos) << what;
        EXPECT_NE(what.find("2:1"), std::string::npos) << what;
    }
    std::remove(path.c_str());
    EXPECT_THROW(qfl::parse_file(path), qfl::Error);
}

TEST(Parser, ParseFileRecordsSourcePath) {
    const std::string path = ::testing::TempDir() + "/qfl_ok.qasm";
    {
        std::ofstream out(path);
        out << "qreg q[1];\nh q[0];\n";
    }
    const qfl::Program p = qfl::parse_file(path);
    ASSERT_TRUE(p.source_path.has_value());
    EXPECT_EQ(*p.source_path, path);
    std::remove(path.c_str());
}

} // namespace
