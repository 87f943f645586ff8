#pragma once

#include <string>

#include <json.hpp>

#include "twh/symbol.hpp"

namespace twh {

// Symbol spec text: one `key = value` per line, `#` starts a comment.
//
//   preset  = sigma0                  (alone, or overridden by later keys)
//   p       = 1
//   zeros   = [[0.3, 0.5]]            tau zeros as [re, im] pairs
//   poles   = [[0, 1], [0, -2]]
//   scale   = auto | [re, im]         auto rescales to sigma(inf) = 1
//   contour = C1 | C2
//   regular = false                   true: zeros/poles describe sigma itself
//
// Values are JSON literals. Throws InputError on malformed input or a symbol
// that fails validation.
SingularSymbol parse_symbol_spec(const std::string& text);

// A preset name, or a path to a spec file.
SingularSymbol load_symbol(const std::string& name_or_path);

nlohmann::json to_json(cplx z);
nlohmann::json to_json(const Root& r);
nlohmann::json to_json(const RationalFunction& r);
nlohmann::json to_json(const SingularSymbol& s);

// Formats with 17 significant digits.
std::string format_double(double v);

}  // namespace twh
