#pragma once

#include <string>
#include <string_view>

#include "json_util.hpp"
#include "layout.hpp"

namespace fbt {

inline constexpr std::string_view kLayoutFormat = "fbt-layout";
inline constexpr int kLayoutFormatVersion = 1;

// Layout document, fields in canonical order:
//   format, version, geometry, anchors, mode, parameters, regions, keymap.
json::Json layoutToJson(const LayoutSpec& layout);
LayoutSpec layoutFromJson(const json::Json& document, std::string_view source = "layout");

std::string serializeLayout(const LayoutSpec& layout);  // pretty, trailing newline
LayoutSpec parseLayout(std::string_view text, std::string_view source = "layout");

void saveLayout(const LayoutSpec& layout, const std::string& path);
LayoutSpec loadLayout(const std::string& path);

}  // namespace fbt
