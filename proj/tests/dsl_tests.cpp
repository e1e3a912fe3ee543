#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "photonic/dsl.hpp"
#include "photonic/protocols.hpp"
#include "support.hpp"

using namespace photonic;

namespace {

const char* kBellText =
    "levels 4\n"
    "load 2\n"
    "raman 2 3 theta=pi/2\n"
    "feed target=4 control=3\n"
    "feed target=1 control=2\n"
    "emit 2:L 3:R\n"
    "emit 1:L 4:R\n";

}  // namespace

TEST_CASE("the pair-production schedule serializes to its canonical text") {
    CHECK(serialize_schedule(bell_schedule()) == kBellText);
}

TEST_CASE("parsing the canonical text recovers the builtin schedule") {
    const ParseResult result = parse_schedule(kBellText);
    REQUIRE(result.ok());
    CHECK(result.schedule.level_count == 4);
    CHECK(result.schedule.expected_mode_count == 2);
    CHECK(structurally_equal(result.schedule, bell_schedule()));
}

TEST_CASE("every builtin schedule roundtrips through text byte for byte") {
    for (const Schedule& schedule :
         {bell_schedule(), ghz_schedule(2), ghz_schedule(5), trine_schedule(1),
          trine_schedule(2), trine_schedule(3), cluster1d_schedule(3),
          cluster1d_schedule(10), cluster2d_schedule(2), cluster2d_schedule(4)}) {
        const std::string text = serialize_schedule(schedule);
        const ParseResult result = parse_schedule(text);
        REQUIRE_MESSAGE(result.ok(), text);
        CHECK(structurally_equal(result.schedule, schedule));
        CHECK(serialize_schedule(result.schedule) == text);
    }
}

TEST_CASE("pi fractions parse bit-exactly through the shared helper") {
    const ParseResult result = parse_schedule(
        "levels 2\n"
        "supload 1 theta=pi\n"
        "supload 2 theta=3pi/4 phi=-pi/2\n"
        "raman 1 2 theta=2pi phi=0.125\n");
    REQUIRE(result.ok());
    REQUIRE(result.schedule.instructions.size() == 3);
    CHECK(result.schedule.instructions[0].theta == angle_from_pi_fraction(1, 1));
    CHECK(result.schedule.instructions[1].theta == angle_from_pi_fraction(3, 4));
    CHECK(result.schedule.instructions[1].phi == angle_from_pi_fraction(-1, 2));
    CHECK(result.schedule.instructions[2].theta == angle_from_pi_fraction(2, 1));
    CHECK(result.schedule.instructions[2].phi == 0.125);
}

TEST_CASE("canonical angle text prefers the shortest exact pi fraction") {
    Schedule schedule;
    schedule.name = "angles";
    schedule.level_count = 2;
    schedule.instructions = {
        PulseInstruction::superposition_load(1, angle_from_pi_fraction(1, 1)),
        PulseInstruction::superposition_load(1, angle_from_pi_fraction(1, 2),
                                             angle_from_pi_fraction(-3, 4)),
        PulseInstruction::superposition_load(1, 1.25),
        PulseInstruction::superposition_load(1, angle_from_pi_fraction(2, 1)),
    };
    schedule.expected_mode_count = 0;
    const std::string text = serialize_schedule(schedule);
    CHECK(text ==
          "levels 2\n"
          "supload 1 theta=pi\n"
          "supload 1 theta=pi/2 phi=-3pi/4\n"
          "supload 1 theta=1.25\n"
          "supload 1 theta=2pi\n");
}

TEST_CASE("plain decimals roundtrip exactly via shortest representation") {
    std::mt19937_64 rng(15u);
    std::uniform_real_distribution<double> dist(-7.0, 7.0);
    for (int trial = 0; trial < 200; ++trial) {
        Schedule schedule;
        schedule.level_count = 2;
        schedule.instructions = {
            PulseInstruction::superposition_load(1, dist(rng), dist(rng))};
        schedule.expected_mode_count = 0;
        const ParseResult result = parse_schedule(serialize_schedule(schedule));
        REQUIRE(result.ok());
        CHECK(result.schedule.instructions[0].theta == schedule.instructions[0].theta);
        CHECK(result.schedule.instructions[0].phi == schedule.instructions[0].phi);
    }
}

TEST_CASE("comments, blank lines, and CRLF endings are ignored") {
    const ParseResult result = parse_schedule(
        "# leading comment\r\n"
        "\r\n"
        "levels 2   # header comment\r\n"
        "load 1 # trailing words\r\n"
        "   \r\n"
        "emit 1:R\r\n");
    REQUIRE(result.ok());
    CHECK(result.schedule.level_count == 2);
    REQUIRE(result.schedule.instructions.size() == 2);
    CHECK(result.schedule.instructions[0] == PulseInstruction::load(1));
}

TEST_CASE("a missing header yields exactly one extra diagnostic") {
    const ParseResult result = parse_schedule("load 1\nemit 1:R\n");
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].span.line == 1);
    CHECK(result.errors[0].message.find("levels") != std::string::npos);
    // The instructions still parse so later lines get their own checks.
    CHECK(result.schedule.instructions.size() == 2);
}

TEST_CASE("diagnostics carry one-based spans pointing at the offending token") {
    SUBCASE("unknown keyword") {
        const ParseResult result = parse_schedule("levels 2\nblorp 1\n");
        REQUIRE(result.errors.size() == 1);
        CHECK(result.errors[0].span == SourceSpan{2, 1, 5});
        CHECK(result.errors[0].expected.find("load") != std::string::npos);
    }
    SUBCASE("bad level count") {
        const ParseResult result = parse_schedule("levels zero\n");
        REQUIRE(result.errors.size() == 1);
        CHECK(result.errors[0].span == SourceSpan{1, 8, 4});
    }
    SUBCASE("duplicate header") {
        const ParseResult result = parse_schedule("levels 2\nlevels 3\n");
        REQUIRE(result.errors.size() == 1);
        CHECK(result.errors[0].span.line == 2);
    }
    SUBCASE("level out of range") {
        const ParseResult result = parse_schedule("levels 2\nload 7\n");
        REQUIRE(result.errors.size() == 1);
        CHECK(result.errors[0].span == SourceSpan{2, 6, 1});
        CHECK(result.errors[0].message.find("range") != std::string::npos);
    }
    SUBCASE("identical raman levels") {
        const ParseResult result = parse_schedule("levels 2\nraman 2 2 theta=pi\n");
        REQUIRE(result.errors.size() == 1);
        CHECK(result.errors[0].span == SourceSpan{2, 9, 1});
    }
    SUBCASE("missing angle") {
        const ParseResult result = parse_schedule("levels 2\nsupload 1\n");
        REQUIRE(result.errors.size() == 1);
        CHECK(result.errors[0].span.line == 2);
        CHECK(result.errors[0].expected.find("theta=") != std::string::npos);
    }
    SUBCASE("malformed angle") {
        const ParseResult result = parse_schedule("levels 2\nsupload 1 theta=pie\n");
        REQUIRE(result.errors.size() == 1);
        CHECK(result.errors[0].span == SourceSpan{2, 11, 9});
    }
    SUBCASE("zero denominator") {
        const ParseResult result = parse_schedule("levels 2\nsupload 1 theta=pi/0\n");
        REQUIRE(result.errors.size() == 1);
    }
    SUBCASE("swapped feed keys") {
        const ParseResult result = parse_schedule("levels 2\nfeed control=2 target=1\n");
        REQUIRE(result.errors.size() == 1);
        CHECK(result.errors[0].span.line == 2);
        CHECK(result.errors[0].expected.find("target=") != std::string::npos);
    }
    SUBCASE("emit letter outside R and L") {
        const ParseResult result = parse_schedule("levels 2\nemit 1:Q\n");
        REQUIRE(result.errors.size() == 1);
        CHECK(result.errors[0].span == SourceSpan{2, 6, 3});
    }
    SUBCASE("emit level mapped twice") {
        const ParseResult result = parse_schedule("levels 2\nemit 1:R 1:L\n");
        REQUIRE(result.errors.size() == 1);
        CHECK(result.errors[0].span == SourceSpan{2, 10, 3});
    }
    SUBCASE("empty emit") {
        const ParseResult result = parse_schedule("levels 2\nemit\n");
        REQUIRE(result.errors.size() == 1);
    }
    SUBCASE("measure before any emission") {
        const ParseResult result = parse_schedule("levels 2\nmeasure last basis=RL\n");
        REQUIRE(result.errors.size() == 1);
        CHECK(result.errors[0].span == SourceSpan{2, 9, 4});
    }
    SUBCASE("measure index beyond emitted modes") {
        const ParseResult result =
            parse_schedule("levels 2\nemit 1:R\nmeasure 2 basis=RL\n");
        REQUIRE(result.errors.size() == 1);
        CHECK(result.errors[0].span.line == 3);
        CHECK(result.errors[0].expected == "1..1");
    }
    SUBCASE("measure with a wrong basis") {
        const ParseResult result =
            parse_schedule("levels 2\nemit 1:R\nmeasure last basis=XY\n");
        REQUIRE(result.errors.size() == 1);
        CHECK(result.errors[0].expected == "basis=RL");
    }
    SUBCASE("trailing tokens") {
        const ParseResult result = parse_schedule("levels 2\nrandom-emit 3\n");
        REQUIRE(result.errors.size() == 1);
        CHECK(result.errors[0].span == SourceSpan{2, 13, 1});
    }
}

TEST_CASE("a file with k bad lines yields exactly k diagnostics") {
    const std::string text =
        "levels 4\n"
        "load 9\n"             // out of range
        "supload 1 theta=x\n"  // malformed angle
        "load 1\n"             // fine
        "emit 1:R\n"           // fine
        "measure 3 basis=RL\n" // only one mode emitted
        "blorp\n";             // unknown keyword
    const ParseResult result = parse_schedule(text);
    REQUIRE(result.errors.size() == 4);
    CHECK(result.errors[0].span.line == 2);
    CHECK(result.errors[1].span.line == 3);
    CHECK(result.errors[2].span.line == 6);
    CHECK(result.errors[3].span.line == 7);
    // Good lines survive into the partial schedule.
    CHECK(result.schedule.instructions.size() == 2);
}

TEST_CASE("randomly generated schedules roundtrip through the text format") {
    std::mt19937_64 rng(1234u);
    for (int trial = 0; trial < 200; ++trial) {
        const Schedule schedule = testsupport::random_schedule(rng);
        const std::string text = serialize_schedule(schedule);
        const ParseResult result = parse_schedule(text);
        REQUIRE_MESSAGE(result.ok(), text);
        CHECK(structurally_equal(result.schedule, schedule));
        CHECK(serialize_schedule(result.schedule) == text);
    }
}
