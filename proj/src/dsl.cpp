#include "photonic/dsl.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

namespace photonic {

double angle_from_pi_fraction(long long numerator, long long denominator) {
    return (static_cast<double>(numerator) * std::numbers::pi) /
           static_cast<double>(denominator);
}

namespace {

constexpr long long kMaxLevelCount = 1'000'000;
constexpr long long kMaxPiDenominator = 96;  // serializer search bound

struct Token {
    std::string text;
    int column = 1;
};

// First problem on a line; thrown to abort that line only.
struct LineDiagnostic {
    SourceSpan span;
    std::string message;
    std::string expected;
};

[[noreturn]] void fail(int line, const Token& token, std::string message,
                       std::string expected = {}) {
    throw LineDiagnostic{{line, token.column, static_cast<int>(token.text.size())},
                         std::move(message), std::move(expected)};
}

[[noreturn]] void fail_after(int line, const Token& last, std::string message,
                             std::string expected = {}) {
    throw LineDiagnostic{{line, last.column + static_cast<int>(last.text.size()), 1},
                         std::move(message), std::move(expected)};
}

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> tokens;
    const std::size_t end = std::min(line.find('#'), line.size());
    std::size_t i = 0;
    while (i < end) {
        if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < end && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
            ++i;
        tokens.push_back({std::string(line.substr(start, i - start)),
                          static_cast<int>(start) + 1});
    }
    return tokens;
}

std::optional<long long> parse_int(std::string_view text) {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        return std::nullopt;
    return value;
}

std::optional<double> parse_decimal(std::string_view text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        return std::nullopt;
    return value;
}

std::optional<double> parse_angle_text(std::string_view body) {
    const std::size_t pi_pos = body.find("pi");
    if (pi_pos == std::string_view::npos)
        return parse_decimal(body);

    std::string_view head = body.substr(0, pi_pos);
    bool negative = false;
    if (!head.empty() && head.front() == '-') {
        negative = true;
        head.remove_prefix(1);
    }
    long long numerator = 1;
    if (!head.empty()) {
        const auto n = parse_int(head);
        if (!n || *n < 1)
            return std::nullopt;
        numerator = *n;
    }

    std::string_view tail = body.substr(pi_pos + 2);
    long long denominator = 1;
    if (!tail.empty()) {
        if (tail.front() != '/')
            return std::nullopt;
        tail.remove_prefix(1);
        const auto d = parse_int(tail);
        if (!d || *d < 1)
            return std::nullopt;
        denominator = *d;
    }
    return angle_from_pi_fraction(negative ? -numerator : numerator, denominator);
}

const Token& arg(int line, const std::vector<Token>& tokens, std::size_t index,
                 const std::string& expected) {
    if (index >= tokens.size())
        fail_after(line, tokens.back(), "missing " + expected, expected);
    return tokens[index];
}

void no_more(int line, const std::vector<Token>& tokens, std::size_t count) {
    if (tokens.size() > count)
        fail(line, tokens[count], "unexpected token", "end of line");
}

// Levels are validated against the header when it parsed (level_count > 0).
int require_level(int line, const Token& token, std::string_view text, int column,
                  int level_count) {
    const auto value = parse_int(text);
    if (!value || *value < 1) {
        Token sub{std::string(text), column};
        if (text.empty())
            sub = token;
        fail(line, sub, "expected a level number", "positive integer");
    }
    if (level_count > 0 && *value > level_count)
        fail(line, Token{std::string(text), column}, "level out of range",
             "1.." + std::to_string(level_count));
    return static_cast<int>(*value);
}

int require_level(int line, const Token& token, int level_count) {
    return require_level(line, token, token.text, token.column, level_count);
}

int require_keyed_level(int line, const Token& token, std::string_view key, int level_count) {
    if (token.text.rfind(key, 0) != 0)
        fail(line, token, "expected " + std::string(key) + "LEVEL",
             std::string(key) + "LEVEL");
    const std::string_view rest = std::string_view(token.text).substr(key.size());
    return require_level(line, token, rest, token.column + static_cast<int>(key.size()),
                         level_count);
}

double require_angle(int line, const Token& token, std::string_view key) {
    if (token.text.rfind(key, 0) != 0)
        fail(line, token, "expected " + std::string(key) + "ANGLE", std::string(key) + "ANGLE");
    const std::string_view body = std::string_view(token.text).substr(key.size());
    const auto value = parse_angle_text(body);
    if (!value)
        fail(line, token, "malformed angle", "radians or a pi fraction like pi/2");
    return *value;
}

std::pair<int, Letter> require_emit_entry(int line, const Token& token, int level_count) {
    const std::size_t colon = token.text.find(':');
    if (colon == std::string::npos)
        fail(line, token, "expected LEVEL:LETTER", "like 2:L");
    const std::string_view text(token.text);
    const int level = require_level(line, token, text.substr(0, colon), token.column,
                                    level_count);
    const std::string_view letter = text.substr(colon + 1);
    if (letter == "R")
        return {level, Letter::R};
    if (letter == "L")
        return {level, Letter::L};
    fail(line, token, "emitted letter must be R or L", "R or L");
}

PulseInstruction parse_instruction(int line, const std::vector<Token>& tokens, int level_count,
                                   int modes_so_far) {
    const std::string& keyword = tokens[0].text;

    if (keyword == "load" || keyword == "toggle") {
        const int level = require_level(line, arg(line, tokens, 1, "LEVEL"), level_count);
        no_more(line, tokens, 2);
        return keyword == "load" ? PulseInstruction::load(level)
                                 : PulseInstruction::toggle(level);
    }

    if (keyword == "supload") {
        const int level = require_level(line, arg(line, tokens, 1, "LEVEL"), level_count);
        const double theta = require_angle(line, arg(line, tokens, 2, "theta=ANGLE"), "theta=");
        double phi = 0.0;
        std::size_t count = 3;
        if (tokens.size() > 3) {
            phi = require_angle(line, tokens[3], "phi=");
            count = 4;
        }
        no_more(line, tokens, count);
        return PulseInstruction::superposition_load(level, theta, phi);
    }

    if (keyword == "raman" || keyword == "cphase") {
        const Token& first = arg(line, tokens, 1, "LEVEL");
        const int j = require_level(line, first, level_count);
        const Token& second = arg(line, tokens, 2, "LEVEL");
        const int j2 = require_level(line, second, level_count);
        if (j == j2)
            fail(line, second, "levels must be distinct", "a different level");
        if (keyword == "cphase") {
            no_more(line, tokens, 3);
            return PulseInstruction::cphase(j, j2);
        }
        const double theta = require_angle(line, arg(line, tokens, 3, "theta=ANGLE"), "theta=");
        double phi = 0.0;
        std::size_t count = 4;
        if (tokens.size() > 4) {
            phi = require_angle(line, tokens[4], "phi=");
            count = 5;
        }
        no_more(line, tokens, count);
        return PulseInstruction::raman(j, j2, theta, phi);
    }

    if (keyword == "feed") {
        const int target =
            require_keyed_level(line, arg(line, tokens, 1, "target=LEVEL"), "target=",
                                level_count);
        const Token& control_token = arg(line, tokens, 2, "control=LEVEL");
        const int control = require_keyed_level(line, control_token, "control=", level_count);
        if (target == control)
            fail(line, control_token, "levels must be distinct", "a different level");
        no_more(line, tokens, 3);
        return PulseInstruction::feed(target, control);
    }

    if (keyword == "emit") {
        if (tokens.size() < 2)
            fail_after(line, tokens.back(), "missing LEVEL:LETTER", "like 2:L");
        EmissionMap map;
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            const auto [level, letter] = require_emit_entry(line, tokens[i], level_count);
            for (const auto& entry : map)
                if (entry.first == level)
                    fail(line, tokens[i], "level " + std::to_string(level) + " mapped twice",
                         "a distinct level");
            map.emplace_back(level, letter);
        }
        return PulseInstruction::emit(std::move(map));
    }

    if (keyword == "random-emit") {
        no_more(line, tokens, 1);
        return PulseInstruction::random_emit();
    }

    if (keyword == "measure") {
        const Token& which = arg(line, tokens, 1, "'last' or a mode number");
        PulseInstruction instruction = PulseInstruction::measure_last();
        if (which.text == "last") {
            if (modes_so_far == 0)
                fail(line, which, "no emitted mode to measure", "an emit before this line");
        } else {
            const auto value = parse_int(which.text);
            if (!value || *value < 1)
                fail(line, which, "expected a mode number or 'last'", "positive integer");
            if (*value > modes_so_far)
                fail(line, which,
                     "mode " + std::to_string(*value) + " not yet emitted (" +
                         std::to_string(modes_so_far) + " so far)",
                     "1.." + std::to_string(modes_so_far));
            instruction = PulseInstruction::measure(static_cast<int>(*value));
        }
        const Token& basis = arg(line, tokens, 2, "basis=RL");
        if (basis.text != "basis=RL")
            fail(line, basis, "expected measurement basis", "basis=RL");
        no_more(line, tokens, 3);
        return instruction;
    }

    fail(line, tokens[0], "unknown instruction",
         "load, supload, raman, feed, toggle, cphase, emit, random-emit, or measure");
}

}  // namespace

ParseResult parse_schedule(std::string_view text) {
    ParseResult result;
    result.schedule.level_count = -1;  // unknown until the header parses
    bool header_seen = false;
    int modes_so_far = 0;

    int line_number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t newline = std::min(text.find('\n', pos), text.size());
        const std::string_view line = text.substr(pos, newline - pos);
        pos = newline + 1;
        ++line_number;

        const std::vector<Token> tokens = tokenize(line);
        if (tokens.empty())
            continue;

        try {
            if (!header_seen) {
                header_seen = true;
                if (tokens[0].text == "levels") {
                    const Token& count = arg(line_number, tokens, 1, "level count");
                    const auto value = parse_int(count.text);
                    if (!value || *value < 1 || *value > kMaxLevelCount)
                        fail(line_number, count, "expected a positive level count",
                             "integer 1.." + std::to_string(kMaxLevelCount));
                    no_more(line_number, tokens, 2);
                    result.schedule.level_count = static_cast<int>(*value);
                    continue;
                }
                // Missing header: one diagnostic, then still parse the line
                // so its own problems are reported independently.
                result.errors.push_back({{line_number, tokens[0].column,
                                          static_cast<int>(tokens[0].text.size())},
                                         "expected 'levels' header before instructions",
                                         "levels INT"});
            } else if (tokens[0].text == "levels") {
                fail(line_number, tokens[0], "duplicate levels header", "an instruction");
            }

            PulseInstruction instruction = parse_instruction(
                line_number, tokens, result.schedule.level_count, modes_so_far);
            if (is_emission_kind(instruction.kind))
                ++modes_so_far;
            result.schedule.instructions.push_back(std::move(instruction));
        } catch (const LineDiagnostic& diagnostic) {
            result.errors.push_back({diagnostic.span, diagnostic.message, diagnostic.expected});
        }
    }

    if (result.schedule.level_count < 0)
        result.schedule.level_count = 0;
    result.schedule.expected_mode_count = emission_count(result.schedule.instructions);
    return result;
}

namespace {

std::string format_decimal(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

// Shortest exact pi fraction (smallest denominator first), else the
// shortest-roundtrip decimal.
std::string format_angle(double value) {
    if (value == 0.0)
        return "0";
    for (long long denominator = 1; denominator <= kMaxPiDenominator; ++denominator) {
        const long long numerator =
            std::llround(value * static_cast<double>(denominator) / std::numbers::pi);
        if (numerator == 0)
            continue;
        if (angle_from_pi_fraction(numerator, denominator) != value)
            continue;
        std::string out;
        long long n = numerator;
        if (n < 0) {
            out += '-';
            n = -n;
        }
        if (n != 1)
            out += std::to_string(n);
        out += "pi";
        if (denominator != 1)
            out += "/" + std::to_string(denominator);
        return out;
    }
    return format_decimal(value);
}

}  // namespace

std::string serialize_schedule(const Schedule& schedule) {
    std::string out = "levels " + std::to_string(schedule.level_count) + "\n";
    for (const PulseInstruction& ins : schedule.instructions) {
        out += kind_keyword(ins.kind);
        switch (ins.kind) {
            case PulseKind::Load:
            case PulseKind::Toggle:
                out += " " + std::to_string(ins.level);
                break;
            case PulseKind::SuperpositionLoad:
                out += " " + std::to_string(ins.level) + " theta=" + format_angle(ins.theta);
                if (ins.phi != 0.0)
                    out += " phi=" + format_angle(ins.phi);
                break;
            case PulseKind::Raman:
                out += " " + std::to_string(ins.level) + " " + std::to_string(ins.level2) +
                       " theta=" + format_angle(ins.theta);
                if (ins.phi != 0.0)
                    out += " phi=" + format_angle(ins.phi);
                break;
            case PulseKind::Feed:
                out += " target=" + std::to_string(ins.level) +
                       " control=" + std::to_string(ins.level2);
                break;
            case PulseKind::Cphase:
                out += " " + std::to_string(ins.level) + " " + std::to_string(ins.level2);
                break;
            case PulseKind::Emit:
                for (const auto& [level, letter] : ins.emission_map) {
                    out += " " + std::to_string(level) + ":";
                    out += letter_char(letter);
                }
                break;
            case PulseKind::RandomEmit:
                break;
            case PulseKind::Measure:
                out += ins.mode_index == 0 ? " last" : " " + std::to_string(ins.mode_index);
                out += " basis=RL";
                break;
        }
        out += "\n";
    }
    return out;
}

}  // namespace photonic
