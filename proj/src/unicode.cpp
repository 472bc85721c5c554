// Letter classification, case mapping and UTF-8 coding for the tokenizer.
// Ranges cover the letters of the scripts the corpus filters care about; they
// are not a full Unicode property table.

#include "gda/error.hpp"
#include "gda/textpipe.hpp"

#include <array>

namespace gda {

namespace {

struct Range {
    char32_t lo, hi;
    Script script;
};

// Sorted, non-overlapping.
constexpr std::array kLetters{
    Range{U'A', U'Z', Script::latin},
    Range{U'a', U'z', Script::latin},
    Range{0x00AA, 0x00AA, Script::latin},
    Range{0x00BA, 0x00BA, Script::latin},
    Range{0x00C0, 0x00D6, Script::latin},
    Range{0x00D8, 0x00F6, Script::latin},
    Range{0x00F8, 0x024F, Script::latin},
    Range{0x0250, 0x02AF, Script::latin},
    Range{0x0300, 0x036F, Script::inherited},
    Range{0x0370, 0x0373, Script::greek},
    Range{0x0376, 0x0377, Script::greek},
    Range{0x037B, 0x037D, Script::greek},
    Range{0x0386, 0x0386, Script::greek},
    Range{0x0388, 0x03FF, Script::greek},
    Range{0x0400, 0x0481, Script::cyrillic},
    Range{0x0483, 0x0489, Script::inherited},
    Range{0x048A, 0x052F, Script::cyrillic},
    Range{0x0531, 0x0556, Script::armenian},
    Range{0x0561, 0x0587, Script::armenian},
    Range{0x0591, 0x05C7, Script::inherited},
    Range{0x05D0, 0x05EA, Script::hebrew},
    Range{0x0620, 0x064A, Script::arabic},
    Range{0x064B, 0x065F, Script::inherited},
    Range{0x0671, 0x06D3, Script::arabic},
    Range{0x0900, 0x0903, Script::inherited},
    Range{0x0904, 0x0939, Script::devanagari},
    Range{0x093A, 0x094F, Script::inherited},
    Range{0x0E01, 0x0E30, Script::thai},
    Range{0x1100, 0x11FF, Script::hangul},
    Range{0x1E00, 0x1EFF, Script::latin},
    Range{0x1F00, 0x1FFF, Script::greek},
    Range{0x2C60, 0x2C7F, Script::latin},
    Range{0x3041, 0x3096, Script::hiragana},
    Range{0x3099, 0x309A, Script::inherited},
    Range{0x309D, 0x309F, Script::hiragana},
    Range{0x30A1, 0x30FA, Script::katakana},
    Range{0x30FC, 0x30FF, Script::katakana},
    Range{0x31F0, 0x31FF, Script::katakana},
    Range{0x3400, 0x4DBF, Script::han},
    Range{0x4E00, 0x9FFF, Script::han},
    Range{0xA720, 0xA7FF, Script::latin},
    Range{0xAC00, 0xD7A3, Script::hangul},
    Range{0xF900, 0xFAFF, Script::han},
    Range{0xFB00, 0xFB06, Script::latin},
    Range{0xFF21, 0xFF3A, Script::latin},
    Range{0xFF41, 0xFF5A, Script::latin},
    Range{0x20000, 0x2A6DF, Script::han},
};

constexpr std::array<const char*, 14> kScriptNames{
    "latin", "greek", "cyrillic", "armenian", "hebrew", "arabic",    "devanagari",
    "thai",  "hangul", "hiragana", "katakana", "han",   "inherited", "none"};

}  // namespace

const char* to_string(Script s) {
    return kScriptNames[static_cast<std::size_t>(s)];
}

Script script_from_string(const std::string& s) {
    for (std::size_t i = 0; i < kScriptNames.size(); ++i)
        if (s == kScriptNames[i]) return static_cast<Script>(i);
    throw InputError("unknown script '" + s + "'");
}

Script script_of(char32_t cp) {
    std::size_t lo = 0, hi = kLetters.size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (cp < kLetters[mid].lo)
            hi = mid;
        else if (cp > kLetters[mid].hi)
            lo = mid + 1;
        else
            return kLetters[mid].script;
    }
    return Script::none;
}

char32_t to_lower(char32_t cp) {
    if (cp < 0x80) return (cp >= U'A' && cp <= U'Z') ? cp + 0x20 : cp;
    if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
    if (cp == 0x0178) return 0x00FF;
    if (cp >= 0x0100 && cp <= 0x017F) {
        // Paired upper/lower: even-upper in two runs, odd-upper in two others.
        if ((cp <= 0x0137 || (cp >= 0x014A && cp <= 0x0177)) && cp % 2 == 0) return cp + 1;
        if (((cp >= 0x0139 && cp <= 0x0148) || (cp >= 0x0179 && cp <= 0x017E)) && cp % 2 == 1)
            return cp + 1;
        return cp;
    }
    if (cp >= 0x0391 && cp <= 0x03AB && cp != 0x03A2) return cp + 0x20;
    if (cp == 0x0386) return 0x03AC;
    if (cp >= 0x0388 && cp <= 0x038A) return cp + 0x25;
    if (cp == 0x038C) return 0x03CC;
    if (cp == 0x038E || cp == 0x038F) return cp + 0x3F;
    if (cp >= 0x0410 && cp <= 0x042F) return cp + 0x20;
    if (cp >= 0x0400 && cp <= 0x040F) return cp + 0x50;
    if (((cp >= 0x0460 && cp <= 0x0481) || (cp >= 0x048A && cp <= 0x04BF) ||
         (cp >= 0x04D0 && cp <= 0x052F)) &&
        cp % 2 == 0)
        return cp + 1;
    if (cp >= 0x1E00 && cp <= 0x1EFF && cp % 2 == 0 && !(cp >= 0x1E96 && cp <= 0x1E9F)) return cp + 1;
    if (cp >= 0xFF21 && cp <= 0xFF3A) return cp + 0x20;
    return cp;
}

std::u32string decode_utf8(std::string_view bytes) {
    std::u32string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    const auto fail = [&](std::size_t at) {
        throw InputError("invalid UTF-8 at byte offset " + std::to_string(at));
    };
    while (i < bytes.size()) {
        const auto b0 = static_cast<unsigned char>(bytes[i]);
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        std::size_t len = 0;
        char32_t cp = 0;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            fail(i);
        }
        if (i + len > bytes.size()) fail(i);
        for (std::size_t k = 1; k < len; ++k) {
            const auto b = static_cast<unsigned char>(bytes[i + k]);
            if ((b & 0xC0) != 0x80) fail(i);
            cp = (cp << 6) | (b & 0x3F);
        }
        // Overlong forms, surrogates and out-of-range values.
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
            (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF)
            fail(i);
        out.push_back(cp);
        i += len;
    }
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

}  // namespace gda
