#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "error.hpp"
#include "types.hpp"

namespace fbt::json {

using Json = nlohmann::ordered_json;

// Parses text, reporting syntax errors as kParseError with line and column.
Json parse(std::string_view text, std::string_view source);

std::string readFile(const std::string& path);
void writeFile(const std::string& path, std::string_view contents);

// Field accessors: every failure is a kParseError naming the JSON path.
const Json& field(const Json& object, std::string_view key, const std::string& path);
double number(const Json& value, const std::string& path);
std::string string(const Json& value, const std::string& path);
Point point(const Json& value, const std::string& path);
void requireObject(const Json& value, const std::string& path);
void requireArray(const Json& value, const std::string& path);

Json point(Point p);

}  // namespace fbt::json
