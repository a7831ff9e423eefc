#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string_view>

namespace fbt {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distanceSquared(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double distance(Point a, Point b) { return std::sqrt(distanceSquared(a, b)); }

enum class EntryMode { kSingleDigit, kDoubleDigit };

std::string_view entryModeName(EntryMode mode);  // "single" / "double"
std::optional<EntryMode> parseEntryMode(std::string_view text);

// Finger-anchored screen positions. The first eleven are the accessible
// points of the grip model, in their canonical order (this order is also the
// hit-test tie-break order). kScreenCentre is the widget position "centre of
// the touch screen" used by the single-digit dialer for the digit nine.
enum class RegionId : int {
  kAboveIndex = 0,
  kIndex,
  kMiddle,
  kRing,
  kLittle,
  kBelowLittle,
  kAboveThumb,
  kThumb,
  kBelowThumb,
  kBetweenThumbAndMiddle,
  kBottomCentre,
  kScreenCentre,
};

inline constexpr int kRegionCount = 12;
inline constexpr int kAccessiblePointCount = 11;

inline constexpr std::array<RegionId, kRegionCount> kAllRegions = {
    RegionId::kAboveIndex,  RegionId::kIndex,
    RegionId::kMiddle,      RegionId::kRing,
    RegionId::kLittle,      RegionId::kBelowLittle,
    RegionId::kAboveThumb,  RegionId::kThumb,
    RegionId::kBelowThumb,  RegionId::kBetweenThumbAndMiddle,
    RegionId::kBottomCentre, RegionId::kScreenCentre,
};

constexpr int regionIndex(RegionId id) { return static_cast<int>(id); }

std::string_view regionName(RegionId id);
std::optional<RegionId> parseRegionName(std::string_view name);

}  // namespace fbt
