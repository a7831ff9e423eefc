#include "layout_io.hpp"

#include <array>

namespace fbt {

namespace {

using json::Json;

constexpr std::array<std::string_view, 5> kFingerKeys = {"index", "middle", "ring", "little",
                                                          "thumb"};

std::string_view handednessName(Handedness h) {
  return h == Handedness::kLeftHold ? "left-hold" : "right-hold";
}

Handedness parseHandedness(const std::string& text, const std::string& path) {
  if (text == "left-hold") return Handedness::kLeftHold;
  if (text == "right-hold") return Handedness::kRightHold;
  throw Error(ErrorCode::kParseError, path + ": expected \"left-hold\" or \"right-hold\"");
}

}  // namespace

Json layoutToJson(const LayoutSpec& layout) {
  Json doc = Json::object();
  doc["format"] = kLayoutFormat;
  doc["version"] = kLayoutFormatVersion;

  const auto& g = layout.geometry();
  doc["geometry"] = Json::object();
  doc["geometry"]["width"] = g.width;
  doc["geometry"]["height"] = g.height;
  doc["geometry"]["handedness"] = handednessName(g.handedness);

  const auto& a = layout.anchors();
  doc["anchors"] = Json::object();
  const std::array<Point, 5> anchorPoints = {a.index, a.middle, a.ring, a.little, a.thumb};
  for (std::size_t i = 0; i < kFingerKeys.size(); ++i) {
    doc["anchors"][std::string(kFingerKeys[i])] = json::point(anchorPoints[i]);
  }

  doc["mode"] = entryModeName(layout.mode());

  const auto& p = layout.parameters();
  doc["parameters"] = Json::object();
  doc["parameters"]["inset"] = p.inset;
  doc["parameters"]["edge_margin"] = p.edgeMargin;
  doc["parameters"]["bottom_margin"] = p.bottomMargin;
  doc["parameters"]["activation_radius"] = p.activationRadius;

  doc["regions"] = Json::array();
  for (const Region& r : layout.regions()) {
    Json entry = Json::object();
    entry["id"] = regionName(r.id);
    entry["x"] = r.center.x;
    entry["y"] = r.center.y;
    doc["regions"].push_back(std::move(entry));
  }

  doc["keymap"] = Json::object();
  for (RegionId id : kAllRegions) {
    doc["keymap"][std::string(regionName(id))] = layout.action(id).toString();
  }
  return doc;
}

LayoutSpec layoutFromJson(const Json& doc, std::string_view source) {
  const std::string root(source);
  json::requireObject(doc, root);
  if (json::string(json::field(doc, "format", root), root + ".format") != kLayoutFormat) {
    throw Error(ErrorCode::kParseError, root + ".format: expected \"fbt-layout\"");
  }
  if (json::number(json::field(doc, "version", root), root + ".version") != kLayoutFormatVersion) {
    throw Error(ErrorCode::kParseError, root + ".version: unsupported layout version");
  }

  const std::string gp = root + ".geometry";
  const Json& gj = json::field(doc, "geometry", root);
  ScreenGeometry geometry{
      json::number(json::field(gj, "width", gp), gp + ".width"),
      json::number(json::field(gj, "height", gp), gp + ".height"),
      parseHandedness(json::string(json::field(gj, "handedness", gp), gp + ".handedness"),
                      gp + ".handedness"),
  };

  const std::string ap = root + ".anchors";
  const Json& aj = json::field(doc, "anchors", root);
  std::array<Point, 5> anchorPoints{};
  for (std::size_t i = 0; i < kFingerKeys.size(); ++i) {
    const std::string fp = ap + "." + std::string(kFingerKeys[i]);
    anchorPoints[i] = json::point(json::field(aj, kFingerKeys[i], ap), fp);
  }
  AnchorSet anchors{anchorPoints[0], anchorPoints[1], anchorPoints[2], anchorPoints[3],
                    anchorPoints[4]};

  const std::string modeText = json::string(json::field(doc, "mode", root), root + ".mode");
  auto mode = parseEntryMode(modeText);
  if (!mode) throw Error(ErrorCode::kParseError, root + ".mode: expected \"single\" or \"double\"");

  const std::string pp = root + ".parameters";
  const Json& pj = json::field(doc, "parameters", root);
  LayoutParameters params{
      json::number(json::field(pj, "inset", pp), pp + ".inset"),
      json::number(json::field(pj, "edge_margin", pp), pp + ".edge_margin"),
      json::number(json::field(pj, "bottom_margin", pp), pp + ".bottom_margin"),
      json::number(json::field(pj, "activation_radius", pp), pp + ".activation_radius"),
  };

  const std::string rp = root + ".regions";
  const Json& rj = json::field(doc, "regions", root);
  json::requireArray(rj, rp);
  if (rj.size() != static_cast<std::size_t>(kRegionCount)) {
    throw Error(ErrorCode::kInvariantViolation,
                "regions: expected exactly " + std::to_string(kRegionCount) +
                    " regions, found " + std::to_string(rj.size()));
  }
  RegionSet regions{};
  std::array<bool, kRegionCount> seen{};
  for (std::size_t i = 0; i < rj.size(); ++i) {
    const std::string ep = rp + "[" + std::to_string(i) + "]";
    const std::string name = json::string(json::field(rj[i], "id", ep), ep + ".id");
    auto id = parseRegionName(name);
    if (!id) throw Error(ErrorCode::kParseError, ep + ".id: unknown region '" + name + "'");
    if (seen[regionIndex(*id)]) {
      throw Error(ErrorCode::kInvariantViolation, "regions: duplicate region " + name);
    }
    seen[regionIndex(*id)] = true;
    regions[regionIndex(*id)] = Region{*id, json::point(rj[i], ep)};
  }

  const std::string kp = root + ".keymap";
  const Json& kj = json::field(doc, "keymap", root);
  json::requireObject(kj, kp);
  Keymap keymap{};
  for (RegionId id : kAllRegions) {
    auto it = kj.find(regionName(id));
    if (it == kj.end()) {
      throw Error(ErrorCode::kInvariantViolation,
                  "keymap: no entry for region " + std::string(regionName(id)));
    }
    keymap[regionIndex(id)] =
        KeyAction::parse(json::string(*it, kp + "." + std::string(regionName(id))));
  }
  for (const auto& [key, value] : kj.items()) {
    if (!parseRegionName(key)) {
      throw Error(ErrorCode::kParseError, kp + ": unknown region '" + key + "'");
    }
  }

  return LayoutSpec::assemble(geometry, anchors, *mode, regions, keymap, params);
}

std::string serializeLayout(const LayoutSpec& layout) { return layoutToJson(layout).dump(2) + "\n"; }

LayoutSpec parseLayout(std::string_view text, std::string_view source) {
  return layoutFromJson(json::parse(text, source), source);
}

void saveLayout(const LayoutSpec& layout, const std::string& path) {
  json::writeFile(path, serializeLayout(layout));
}

LayoutSpec loadLayout(const std::string& path) { return parseLayout(json::readFile(path), path); }

}  // namespace fbt
