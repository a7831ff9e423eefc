#pragma once

#include <array>
#include <optional>
#include <string>

#include "keymap.hpp"
#include "types.hpp"

namespace fbt {

// LeftHold: device held in the left hand, index..little fingertips on the
// right edge and the thumb on the left edge. RightHold is the mirror image.
enum class Handedness { kLeftHold, kRightHold };

struct ScreenGeometry {
  double width = 0.0;
  double height = 0.0;
  Handedness handedness = Handedness::kLeftHold;

  bool contains(Point p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
  }

  friend bool operator==(const ScreenGeometry&, const ScreenGeometry&) = default;
};

struct AnchorSet {
  Point index;
  Point middle;
  Point ring;
  Point little;
  Point thumb;

  friend bool operator==(const AnchorSet&, const AnchorSet&) = default;
};

struct Region {
  RegionId id = RegionId::kAboveIndex;
  Point center;

  friend bool operator==(const Region&, const Region&) = default;
};

using RegionSet = std::array<Region, kRegionCount>;

struct LayoutParameters {
  double inset = 0.0;        // finger/thumb anchor -> region center, horizontally
  double edgeMargin = 0.0;   // width of the band an anchor must lie in
  double bottomMargin = 0.0; // BottomCentre distance from the bottom edge
  double activationRadius = 0.0;

  friend bool operator==(const LayoutParameters&, const LayoutParameters&) = default;
};

// Unset fields take their defaults: inset, edge margin and bottom margin are
// 8% of the screen width; the activation radius is 0.9 x half the smallest
// distance between two derived region centers.
struct LayoutOptions {
  std::optional<double> inset;
  std::optional<double> edgeMargin;
  std::optional<double> bottomMargin;
  std::optional<double> activationRadius;
};

inline constexpr double kDefaultEdgeFraction = 0.08;
inline constexpr double kDefaultRadiusFactor = 0.9;

// Default grip: fingertips at 25/40/55/70% of the height on the finger edge,
// thumb at 45% on the opposite edge. Anchors sit on the screen border.
AnchorSet defaultAnchors(const ScreenGeometry& geometry);

// Throws kInvalidAnchors naming the violated rule.
void validateAnchors(const ScreenGeometry& geometry, const AnchorSet& anchors, double edgeMargin);

struct DerivedRegions {
  RegionSet regions;
  LayoutParameters parameters;
};

DerivedRegions deriveRegions(const ScreenGeometry& geometry, const AnchorSet& anchors,
                             const LayoutOptions& options = {});

// Immutable once built; every constructor path validates all invariants.
class LayoutSpec {
 public:
  // Derives regions from the anchors and uses the mode's canonical keymap.
  static LayoutSpec derive(const ScreenGeometry& geometry, const AnchorSet& anchors,
                           EntryMode mode, const LayoutOptions& options = {});

  // Assembles a layout from stored parts (e.g. a layout file). Throws
  // kInvariantViolation naming the first failing invariant.
  static LayoutSpec assemble(const ScreenGeometry& geometry, const AnchorSet& anchors,
                             EntryMode mode, const RegionSet& regions, const Keymap& keymap,
                             const LayoutParameters& parameters);

  const ScreenGeometry& geometry() const { return geometry_; }
  const AnchorSet& anchors() const { return anchors_; }
  EntryMode mode() const { return mode_; }
  const RegionSet& regions() const { return regions_; }
  const Keymap& keymap() const { return keymap_; }
  const LayoutParameters& parameters() const { return parameters_; }

  Point center(RegionId id) const { return regions_[regionIndex(id)].center; }
  const KeyAction& action(RegionId id) const { return keymap_[regionIndex(id)]; }

  // First region (in RegionId order) carrying the given action kind.
  std::optional<RegionId> regionFor(ActionKind kind) const;

  friend bool operator==(const LayoutSpec&, const LayoutSpec&) = default;

 private:
  LayoutSpec() = default;

  ScreenGeometry geometry_;
  AnchorSet anchors_;
  EntryMode mode_ = EntryMode::kSingleDigit;
  RegionSet regions_{};
  Keymap keymap_{};
  LayoutParameters parameters_;
};

// Nearest region center within the activation radius; ties go to the lowest
// RegionId. Throws kOutOfBounds for points outside the screen rectangle.
std::optional<RegionId> hitTest(const LayoutSpec& layout, Point point);

// Reflects every x coordinate about width/2 and flips handedness. The keymap
// is kept as is.
LayoutSpec mirror(const LayoutSpec& layout);

// Same geometry, anchors and parameters under the other mode's keymap.
LayoutSpec withMode(const LayoutSpec& layout, EntryMode mode);

double minimumCenterDistance(const RegionSet& regions);

}  // namespace fbt
