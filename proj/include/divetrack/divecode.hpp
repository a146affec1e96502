#pragma once

#include <string>
#include <string_view>

#include "divetrack/error.hpp"

namespace divetrack {

// Dive codes follow the FINA numbering:
//
//   <group 1-4><flying 0|1><somersault halves 1-9><pose A-D>       e.g. 201B
//   5<group 1-4><somersault halves 1-9><twist halves 1-9><pose>     twisting, e.g. 5132D
//   6<direction 1-3><somersault halves 1-9><pose>                   armstand, e.g. 611C
//
// Groups/directions: 1 forward, 2 back, 3 reverse, 4 inward (not valid after 6).
// Poses: A straight, B pike, C tuck, D free. Twisting armstand codes are not supported.

enum class Rotation { Forward = 1, Back = 2, Reverse = 3, Inward = 4 };
enum class Pose { Straight, Pike, Tuck, Free };

struct DiveCode {
    Rotation rotation = Rotation::Forward;
    int somersault_halves = 1;
    int twist_halves = 0;
    Pose pose = Pose::Straight;
    bool handstand = false;
    bool flying = false;

    friend bool operator==(const DiveCode&, const DiveCode&) = default;
};

inline std::string_view to_string(Rotation r) {
    switch (r) {
        case Rotation::Forward: return "forward";
        case Rotation::Back: return "back";
        case Rotation::Reverse: return "reverse";
        case Rotation::Inward: return "inward";
    }
    return "?";
}

inline std::string_view to_string(Pose p) {
    switch (p) {
        case Pose::Straight: return "straight";
        case Pose::Pike: return "pike";
        case Pose::Tuck: return "tuck";
        case Pose::Free: return "free";
    }
    return "?";
}

namespace detail {

inline bool is_digit_in(char c, char lo, char hi) { return c >= lo && c <= hi; }

inline Pose parse_pose(std::string_view text, std::size_t i) {
    if (i >= text.size()) throw ParseError(i + 1, "missing pose letter");
    switch (text[i]) {
        case 'A': return Pose::Straight;
        case 'B': return Pose::Pike;
        case 'C': return Pose::Tuck;
        case 'D': return Pose::Free;
        default: throw ParseError(i + 1, "unknown pose letter (expected A-D)");
    }
}

inline char pose_letter(Pose p) { return static_cast<char>('A' + static_cast<int>(p)); }

inline int digit(std::string_view text, std::size_t i, char lo, char hi, const char* what) {
    if (i >= text.size()) throw ParseError(i + 1, std::string("missing ") + what);
    const char c = text[i];
    if (c < '0' || c > '9') throw ParseError(i + 1, std::string("expected digit for ") + what);
    if (!is_digit_in(c, lo, hi)) throw ParseError(i + 1, std::string("digit out of range for ") + what);
    return c - '0';
}

inline void expect_end(std::string_view text, std::size_t len) {
    if (text.size() > len) throw ParseError(len + 1, "unexpected trailing characters");
}

}  // namespace detail

/// Parse a dive code; every failure is a ParseError carrying the 1-based offending position.
inline DiveCode parse_code(std::string_view text) {
    using detail::digit;
    if (text.empty()) throw ParseError(1, "empty dive code");
    const char lead = text[0];
    if (lead < '0' || lead > '9') throw ParseError(1, "expected leading group digit");

    DiveCode code;
    switch (lead) {
        case '1':
        case '2':
        case '3':
        case '4':
            code.rotation = static_cast<Rotation>(lead - '0');
            code.flying = digit(text, 1, '0', '1', "flying flag") == 1;
            code.somersault_halves = digit(text, 2, '1', '9', "somersault halves");
            code.pose = detail::parse_pose(text, 3);
            detail::expect_end(text, 4);
            return code;
        case '5':
            code.rotation = static_cast<Rotation>(digit(text, 1, '1', '4', "twisting group"));
            code.somersault_halves = digit(text, 2, '1', '9', "somersault halves");
            code.twist_halves = digit(text, 3, '1', '9', "twist halves");
            code.pose = detail::parse_pose(text, 4);
            detail::expect_end(text, 5);
            return code;
        case '6':
            code.handstand = true;
            code.rotation = static_cast<Rotation>(digit(text, 1, '1', '3', "armstand direction"));
            code.somersault_halves = digit(text, 2, '1', '9', "somersault halves");
            code.pose = detail::parse_pose(text, 3);
            detail::expect_end(text, 4);
            return code;
        default:
            throw ParseError(1, "unknown dive group digit");
    }
}

inline void validate(const DiveCode& c) {
    const int rot = static_cast<int>(c.rotation);
    if (rot < 1 || rot > 4) throw InvalidInput("unknown rotation");
    if (static_cast<int>(c.pose) < 0 || static_cast<int>(c.pose) > 3) throw InvalidInput("unknown pose");
    if (c.somersault_halves < 1 || c.somersault_halves > 9) throw InvalidInput("somersault halves must be 1-9");
    if (c.twist_halves < 0 || c.twist_halves > 9) throw InvalidInput("twist halves must be 0-9");
    if (c.twist_halves > 0 && (c.handstand || c.flying)) {
        throw InvalidInput("twists are only encodable in the twisting group");
    }
    if (c.handstand && (c.flying || c.rotation == Rotation::Inward)) {
        throw InvalidInput("armstand dives take forward/back/reverse and no flying flag");
    }
}

inline std::string format_code(const DiveCode& c) {
    validate(c);
    const char rot = static_cast<char>('0' + static_cast<int>(c.rotation));
    const char halves = static_cast<char>('0' + c.somersault_halves);
    const char pose = detail::pose_letter(c.pose);
    if (c.twist_halves > 0) {
        return std::string{'5', rot, halves, static_cast<char>('0' + c.twist_halves), pose};
    }
    if (c.handstand) return std::string{'6', rot, halves, pose};
    return std::string{rot, c.flying ? '1' : '0', halves, pose};
}

}  // namespace divetrack
