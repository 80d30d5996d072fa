#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fairsynth {

// True when `s` is well-formed UTF-8.
bool utf8_valid(std::string_view s);

// Splits a UTF-8 string into one std::string per Unicode scalar value.
// Throws InputError on malformed input.
std::vector<std::string> utf8_codepoints(std::string_view s);

// Canonical composition (NFC). ASCII input is returned unchanged; everything
// else goes through ICU. All manifest strings pass through here once at parse
// time so later comparisons are plain byte equality.
std::string nfc_normalize(std::string_view s);

}  // namespace fairsynth
