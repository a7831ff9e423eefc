#include "json_util.hpp"

#include <fstream>
#include <sstream>

namespace fbt::json {

namespace {

std::pair<std::size_t, std::size_t> lineAndColumn(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < offset; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

Json parse(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, column] = lineAndColumn(text, e.byte);
    throw Error(ErrorCode::kParseError, std::string(source) + ":" + std::to_string(line) + ":" +
                                            std::to_string(column) + ": malformed JSON");
  }
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void writeFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path + "'");
}

void requireObject(const Json& value, const std::string& path) {
  if (!value.is_object()) throw Error(ErrorCode::kParseError, path + ": expected an object");
}

void requireArray(const Json& value, const std::string& path) {
  if (!value.is_array()) throw Error(ErrorCode::kParseError, path + ": expected an array");
}

const Json& field(const Json& object, std::string_view key, const std::string& path) {
  requireObject(object, path);
  auto it = object.find(key);
  if (it == object.end()) {
    throw Error(ErrorCode::kParseError, path + ": missing field '" + std::string(key) + "'");
  }
  return *it;
}

double number(const Json& value, const std::string& path) {
  if (!value.is_number()) throw Error(ErrorCode::kParseError, path + ": expected a number");
  return value.get<double>();
}

std::string string(const Json& value, const std::string& path) {
  if (!value.is_string()) throw Error(ErrorCode::kParseError, path + ": expected a string");
  return value.get<std::string>();
}

Point point(const Json& value, const std::string& path) {
  return {number(field(value, "x", path), path + ".x"), number(field(value, "y", path), path + ".y")};
}

Json point(Point p) {
  Json out = Json::object();
  out["x"] = p.x;
  out["y"] = p.y;
  return out;
}

}  // namespace fbt::json
