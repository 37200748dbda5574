#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>

namespace ocb {

using ExpressionScope = std::map<std::string, std::int64_t, std::less<>>;

// Integer arithmetic used by preset files to derive sizes from sub-parameters:
// + - * / % ^, parentheses, identifiers from `scope`, and
// sum(var, low, high, body) for inclusive finite sums.
// Throws ConfigError on syntax errors, unknown names, or division by zero.
std::int64_t evaluate_expression(std::string_view text, const ExpressionScope& scope);

}  // namespace ocb
