#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "renormlab/param.hpp"

namespace renormlab::io {

using json = nlohmann::json;

/// Malformed or out-of-domain user input (the CLI maps it to exit code 2).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json pure_to_json(const PureMap& m);
PureMap pure_from_json(const json& j);

json decomposition_to_json(const Decomposition& d);
Decomposition decomposition_from_json(const json& j);

/// {"alpha", "u", "v", "c", "phi": [s...], "psi": [s...]}
json map_to_json(const LorenzMap& f);
LorenzMap map_from_json(const json& j);

/// {"alpha", "c", "phi": [s...], "psi": [s...]}; missing phi/psi mean identity.
json slice_to_json(const Slice& s);
Slice slice_from_json(const json& j);

/// Inline JSON when the argument starts with '{' or '[', otherwise a file path.
json load_json(const std::string& arg);

/// "a,b" or the word form "01,100".
MonotoneType parse_type(const std::string& text);
/// "a0,b0;a1,b1;..."
std::vector<MonotoneType> parse_types(const std::string& text);
/// "a,bxN"
std::vector<MonotoneType> parse_repeat(const std::string& text);
std::string type_word(MonotoneType t);

/// Shortest round-trip decimal, '.' separator, independent of locale.
std::string number(double x);

}  // namespace renormlab::io
