#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "photonic/protocols.hpp"

namespace photonic {

/// 1-based position of a token in the source text.
struct SourceSpan {
    int line = 1;
    int column = 1;
    int length = 1;

    bool operator==(const SourceSpan&) const = default;
};

struct ParseError {
    SourceSpan span;
    std::string message;
    std::string expected;  // what would have been accepted here; may be empty
};

struct ParseResult {
    Schedule schedule;  // meaningful only when ok(); bad lines are skipped
    std::vector<ParseError> errors;

    bool ok() const { return errors.empty(); }
};

/// Parses the line-oriented pulse format:
///
///   levels INT                          (header, first contentful line)
///   load LEVEL
///   supload LEVEL theta=ANGLE [phi=ANGLE]
///   raman LEVEL LEVEL theta=ANGLE [phi=ANGLE]
///   feed target=LEVEL control=LEVEL
///   toggle LEVEL
///   cphase LEVEL LEVEL
///   emit LEVEL:R LEVEL:L ...
///   random-emit
///   measure (last | INT) basis=RL
///
/// ANGLE is decimal radians or a pi fraction (pi, pi/2, 3pi/4, -pi/2).
/// '#' starts a comment; blank lines are ignored. Diagnostics are
/// collected rather than fail-fast, at most one per line, each with a
/// source span.
ParseResult parse_schedule(std::string_view text);

/// Canonical text: lowercase keywords, single spaces, angles as the
/// shortest exact pi fraction (decimal otherwise), phi omitted when
/// zero. Reparsing yields a structurally equal schedule, angles
/// bit-exact.
std::string serialize_schedule(const Schedule& schedule);

/// (numerator * pi) / denominator. Both the parser and the serializer
/// evaluate pi fractions through this, which is what makes the
/// roundtrip bit-exact.
double angle_from_pi_fraction(long long numerator, long long denominator);

}  // namespace photonic
