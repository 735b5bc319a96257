#pragma once

#include <string>
#include <string_view>

namespace gramprof {

// printf("%.<decimals>f"); negative zero is printed as zero.
std::string format_fixed(double value, int decimals = 6);

// RFC 4180 field: quoted only when it contains a comma, quote or newline.
std::string csv_field(std::string_view field);

// Escapes &, <, >, " for XML text and attribute values.
std::string xml_escape(std::string_view text);

}  // namespace gramprof
