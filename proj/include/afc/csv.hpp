#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace afc {

// FNV-1a 64-bit; used to stamp output files with the effective config.
std::uint64_t fnv1a64(std::string_view text);

// "# config-hash: <hex>" plus one "# key: value" line per metadata entry.
void write_csv_preamble(std::ostream& os, std::uint64_t config_hash,
                        const std::string& metadata);

// Doubles with enough digits to round-trip (bit-identical reruns).
std::string fmt_double(double v);

}  // namespace afc
