#pragma once

#include <cctype>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "divetrack/error.hpp"
#include "divetrack/segmask.hpp"

// Binary 8-bit PGM (P5) for hot-spot masks. Grey level g maps to g / 255.

namespace divetrack::io {

inline std::string mask_filename(long frame) { return "mask_" + std::to_string(frame) + ".pgm"; }

inline std::string write_pgm(const HotSpotMask& mask) {
    std::string out = "P5\n" + std::to_string(mask.width()) + " " + std::to_string(mask.height()) + "\n255\n";
    out.reserve(out.size() + mask.values().size());
    for (double v : mask.values()) out += static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0)));
    return out;
}

inline HotSpotMask read_pgm(std::string_view bytes, long frame) {
    std::size_t pos = 0;
    auto skip_space = [&] {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&](const char* what) {
        skip_space();
        long v = 0;
        std::size_t digits = 0;
        while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
            v = v * 10 + (bytes[pos] - '0');
            ++pos;
            if (++digits > 9) throw InvalidInput(std::string("PGM ") + what + " too large");
        }
        if (digits == 0) throw InvalidInput(std::string("PGM header: missing ") + what);
        return v;
    };

    if (bytes.substr(0, 2) != "P5") throw InvalidInput("not a binary PGM (P5) file");
    pos = 2;
    const long width = read_int("width");
    const long height = read_int("height");
    const long maxval = read_int("maxval");
    if (width <= 0 || height <= 0) throw InvalidInput("PGM dimensions must be positive");
    if (maxval != 255) throw InvalidInput("only 8-bit PGM (maxval 255) is supported");
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        throw InvalidInput("PGM header must end with a single whitespace byte");
    }
    ++pos;
    const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() - pos < count) throw InvalidInput("PGM pixel data truncated");
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        values[i] = static_cast<unsigned char>(bytes[pos + i]) / 255.0;
    }
    return HotSpotMask(frame, static_cast<int>(width), static_cast<int>(height), std::move(values));
}

}  // namespace divetrack::io
