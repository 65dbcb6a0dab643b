#pragma once

#include <complex>
#include <initializer_list>
#include <string>
#include <vector>

namespace hyperlac::csv {

/// Round-trip-stable decimal form (%.12g) so that CSV bodies are byte-identical across runs.
std::string num(double x);

/// Quote a field if it contains a comma, quote or newline.
std::string field(const std::string& s);

std::string join(const std::vector<std::string>& fields);

}  // namespace hyperlac::csv
