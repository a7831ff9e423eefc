#include "layout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"

namespace fbt {

namespace {

bool fingersOnRight(Handedness h) { return h == Handedness::kLeftHold; }

Point clampTo(const ScreenGeometry& g, Point p) {
  return {std::clamp(p.x, 0.0, g.width), std::clamp(p.y, 0.0, g.height)};
}

bool finitePoint(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

std::string describe(Point p) {
  return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
}

// Returns the first pair of regions whose centers coincide, if any.
std::optional<std::pair<RegionId, RegionId>> coincidentPair(const RegionSet& regions) {
  for (int i = 0; i < kRegionCount; ++i) {
    for (int j = i + 1; j < kRegionCount; ++j) {
      if (regions[i].center == regions[j].center) return std::pair{regions[i].id, regions[j].id};
    }
  }
  return std::nullopt;
}

void requireGeometry(const ScreenGeometry& geometry, ErrorCode code) {
  if (!(geometry.width > 0.0) || !(geometry.height > 0.0) || !std::isfinite(geometry.width) ||
      !std::isfinite(geometry.height)) {
    throw Error(code, "geometry: width and height must be finite and > 0");
  }
}

}  // namespace

AnchorSet defaultAnchors(const ScreenGeometry& geometry) {
  const double fingerX = fingersOnRight(geometry.handedness) ? geometry.width : 0.0;
  const double thumbX = fingersOnRight(geometry.handedness) ? 0.0 : geometry.width;
  const double h = geometry.height;
  return AnchorSet{
      .index = {fingerX, h * 25 / 100},
      .middle = {fingerX, h * 40 / 100},
      .ring = {fingerX, h * 55 / 100},
      .little = {fingerX, h * 70 / 100},
      .thumb = {thumbX, h * 45 / 100},
  };
}

void validateAnchors(const ScreenGeometry& geometry, const AnchorSet& anchors, double edgeMargin) {
  requireGeometry(geometry, ErrorCode::kInvalidArgument);
  const std::array<std::pair<const char*, Point>, 5> named = {{
      {"index", anchors.index},
      {"middle", anchors.middle},
      {"ring", anchors.ring},
      {"little", anchors.little},
      {"thumb", anchors.thumb},
  }};
  for (const auto& [name, p] : named) {
    if (!finitePoint(p) || !geometry.contains(p)) {
      throw Error(ErrorCode::kInvalidAnchors,
                  std::string("anchor-in-screen: ") + name + " anchor " + describe(p) +
                      " lies outside the screen rectangle");
    }
  }

  const bool right = fingersOnRight(geometry.handedness);
  auto onFingerEdge = [&](Point p) {
    return right ? p.x >= geometry.width - edgeMargin : p.x <= edgeMargin;
  };
  auto onThumbEdge = [&](Point p) {
    return right ? p.x <= edgeMargin : p.x >= geometry.width - edgeMargin;
  };
  for (int i = 0; i < 4; ++i) {
    if (!onFingerEdge(named[i].second)) {
      throw Error(ErrorCode::kInvalidAnchors,
                  std::string("finger-edge-band: ") + named[i].first + " anchor must lie within " +
                      std::to_string(edgeMargin) + " of the " + (right ? "right" : "left") +
                      " edge");
    }
  }
  if (!onThumbEdge(anchors.thumb)) {
    throw Error(ErrorCode::kInvalidAnchors,
                std::string("thumb-edge-band: thumb anchor must lie within ") +
                    std::to_string(edgeMargin) + " of the " + (right ? "left" : "right") + " edge");
  }
  for (int i = 0; i < 3; ++i) {
    if (!(named[i].second.y < named[i + 1].second.y)) {
      throw Error(ErrorCode::kInvalidAnchors,
                  std::string("finger-order: ") + named[i].first + " anchor must be above the " +
                      named[i + 1].first + " anchor");
    }
  }
}

DerivedRegions deriveRegions(const ScreenGeometry& geometry, const AnchorSet& anchors,
                             const LayoutOptions& options) {
  requireGeometry(geometry, ErrorCode::kInvalidArgument);
  LayoutParameters params;
  params.inset = options.inset.value_or(kDefaultEdgeFraction * geometry.width);
  params.edgeMargin = options.edgeMargin.value_or(kDefaultEdgeFraction * geometry.width);
  params.bottomMargin = options.bottomMargin.value_or(kDefaultEdgeFraction * geometry.width);
  for (double v : {params.inset, params.edgeMargin, params.bottomMargin}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "inset and margins must be finite and >= 0");
    }
  }
  validateAnchors(geometry, anchors, params.edgeMargin);

  const double fingerInward = fingersOnRight(geometry.handedness) ? -params.inset : params.inset;
  const double thumbInward = -fingerInward;
  const double gap = (anchors.little.y - anchors.index.y) / 3.0;

  auto finger = [&](Point anchor) { return Point{anchor.x + fingerInward, anchor.y}; };
  const Point index = finger(anchors.index);
  const Point middle = finger(anchors.middle);
  const Point little = finger(anchors.little);
  const Point thumb{anchors.thumb.x + thumbInward, anchors.thumb.y};

  std::array<Point, kRegionCount> centers{};
  auto put = [&](RegionId id, Point p) { centers[regionIndex(id)] = p; };
  put(RegionId::kAboveIndex, {index.x, index.y - gap});
  put(RegionId::kIndex, index);
  put(RegionId::kMiddle, middle);
  put(RegionId::kRing, finger(anchors.ring));
  put(RegionId::kLittle, little);
  put(RegionId::kBelowLittle, {little.x, little.y + gap});
  put(RegionId::kAboveThumb, {thumb.x, thumb.y - gap});
  put(RegionId::kThumb, thumb);
  put(RegionId::kBelowThumb, {thumb.x, thumb.y + gap});
  put(RegionId::kBetweenThumbAndMiddle, {(thumb.x + middle.x) / 2.0, (thumb.y + middle.y) / 2.0});
  put(RegionId::kBottomCentre, {geometry.width / 2.0, geometry.height - params.bottomMargin});
  put(RegionId::kScreenCentre, {geometry.width / 2.0, geometry.height / 2.0});

  DerivedRegions out;
  for (RegionId id : kAllRegions) {
    out.regions[regionIndex(id)] = Region{id, clampTo(geometry, centers[regionIndex(id)])};
  }
  if (auto clash = coincidentPair(out.regions)) {
    throw Error(ErrorCode::kInvalidAnchors,
                std::string("distinct-centers: derived centers of ") +
                    std::string(regionName(clash->first)) + " and " +
                    std::string(regionName(clash->second)) + " coincide");
  }
  if (options.activationRadius) {
    params.activationRadius = *options.activationRadius;
    if (!(params.activationRadius > 0.0) || !std::isfinite(params.activationRadius)) {
      throw Error(ErrorCode::kInvalidArgument, "activation radius must be finite and > 0");
    }
  } else {
    params.activationRadius = kDefaultRadiusFactor * 0.5 * minimumCenterDistance(out.regions);
  }
  out.parameters = params;
  return out;
}

double minimumCenterDistance(const RegionSet& regions) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kRegionCount; ++i) {
    for (int j = i + 1; j < kRegionCount; ++j) {
      best = std::min(best, distance(regions[i].center, regions[j].center));
    }
  }
  return best;
}

LayoutSpec LayoutSpec::derive(const ScreenGeometry& geometry, const AnchorSet& anchors,
                              EntryMode mode, const LayoutOptions& options) {
  auto derived = deriveRegions(geometry, anchors, options);
  LayoutSpec spec;
  spec.geometry_ = geometry;
  spec.anchors_ = anchors;
  spec.mode_ = mode;
  spec.regions_ = derived.regions;
  spec.keymap_ = canonicalKeymap(mode);
  spec.parameters_ = derived.parameters;
  return spec;
}

LayoutSpec LayoutSpec::assemble(const ScreenGeometry& geometry, const AnchorSet& anchors,
                                EntryMode mode, const RegionSet& regions, const Keymap& keymap,
                                const LayoutParameters& parameters) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvariantViolation, what); };

  requireGeometry(geometry, ErrorCode::kInvariantViolation);
  const auto& p = parameters;
  if (!(p.inset >= 0.0) || !(p.edgeMargin >= 0.0) || !(p.bottomMargin >= 0.0) ||
      !std::isfinite(p.inset) || !std::isfinite(p.edgeMargin) || !std::isfinite(p.bottomMargin)) {
    fail("parameters: inset and margins must be finite and >= 0");
  }
  if (!(p.activationRadius > 0.0) || !std::isfinite(p.activationRadius)) {
    fail("parameters: activation radius must be finite and > 0");
  }
  try {
    validateAnchors(geometry, anchors, p.edgeMargin);
  } catch (const Error& e) {
    fail(std::string("anchors: ") + e.what());
  }
  for (int i = 0; i < kRegionCount; ++i) {
    const Region& r = regions[i];
    if (regionIndex(r.id) != i) fail("regions: one region per RegionId, in RegionId order");
    if (!finitePoint(r.center) || !geometry.contains(r.center)) {
      fail("regions: center of " + std::string(regionName(r.id)) + " " + describe(r.center) +
           " lies outside the screen rectangle");
    }
  }
  if (auto clash = coincidentPair(regions)) {
    fail("regions: centers of " + std::string(regionName(clash->first)) + " and " +
         std::string(regionName(clash->second)) + " coincide");
  }
  const Keymap& expected = canonicalKeymap(mode);
  for (RegionId id : kAllRegions) {
    const int i = regionIndex(id);
    if (!(keymap[i] == expected[i])) {
      fail("keymap: " + std::string(regionName(id)) + " must be " + expected[i].toString() +
           " in " + std::string(entryModeName(mode)) + " mode (found " + keymap[i].toString() +
           ")");
    }
  }

  LayoutSpec spec;
  spec.geometry_ = geometry;
  spec.anchors_ = anchors;
  spec.mode_ = mode;
  spec.regions_ = regions;
  spec.keymap_ = keymap;
  spec.parameters_ = parameters;
  return spec;
}

std::optional<RegionId> LayoutSpec::regionFor(ActionKind kind) const {
  for (RegionId id : kAllRegions) {
    if (keymap_[regionIndex(id)].kind == kind) return id;
  }
  return std::nullopt;
}

std::optional<RegionId> hitTest(const LayoutSpec& layout, Point point) {
  if (!finitePoint(point) || !layout.geometry().contains(point)) {
    throw Error(ErrorCode::kOutOfBounds, "point " + describe(point) + " lies outside the screen");
  }
  const auto& regions = layout.regions();
  int best = 0;
  double bestDistance = distanceSquared(regions[0].center, point);
  for (int i = 1; i < kRegionCount; ++i) {
    const double d = distanceSquared(regions[i].center, point);
    if (d < bestDistance) {
      best = i;
      bestDistance = d;
    }
  }
  const double r = layout.parameters().activationRadius;
  if (bestDistance > r * r) return std::nullopt;
  return regions[best].id;
}

LayoutSpec mirror(const LayoutSpec& layout) {
  ScreenGeometry geometry = layout.geometry();
  const double w = geometry.width;
  geometry.handedness = geometry.handedness == Handedness::kLeftHold ? Handedness::kRightHold
                                                                     : Handedness::kLeftHold;
  auto flip = [w](Point p) { return Point{w - p.x, p.y}; };
  AnchorSet anchors = layout.anchors();
  for (Point* p : {&anchors.index, &anchors.middle, &anchors.ring, &anchors.little, &anchors.thumb}) {
    *p = flip(*p);
  }
  RegionSet regions = layout.regions();
  for (Region& r : regions) r.center = flip(r.center);
  return LayoutSpec::assemble(geometry, anchors, layout.mode(), regions, layout.keymap(),
                              layout.parameters());
}

LayoutSpec withMode(const LayoutSpec& layout, EntryMode mode) {
  return LayoutSpec::assemble(layout.geometry(), layout.anchors(), mode, layout.regions(),
                              canonicalKeymap(mode), layout.parameters());
}

}  // namespace fbt
