#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "error.hpp"
#include "layout.hpp"
#include "test_support.hpp"

namespace fbt {
namespace {

using testing::defaultLayout;
using testing::randomLayout;

const ScreenGeometry kPhone{480, 800, Handedness::kLeftHold};

AnchorSet phoneAnchors() {
  return {{480, 200}, {480, 320}, {480, 440}, {480, 560}, {0, 360}};
}

void expectInvalidAnchors(const AnchorSet& a, const std::string& rule, const ScreenGeometry& g = kPhone) {
  try {
    LayoutSpec::derive(g, a, EntryMode::kSingleDigit);
    FAIL() << "expected InvalidAnchors (" << rule << ")";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidAnchors);
    EXPECT_NE(std::string(e.what()).find(rule), std::string::npos) << e.what();
  }
}

TEST(DeriveRegions, PhoneScreenGivesDistinctInBoundsCenters) {
  const auto layout = LayoutSpec::derive(kPhone, phoneAnchors(), EntryMode::kSingleDigit);
  std::set<std::pair<double, double>> seen;
  for (std::size_t i = 0; i < layout.regions().size(); ++i) {
    const Region& r = layout.regions()[i];
    EXPECT_EQ(regionIndex(r.id), static_cast<int>(i));
    EXPECT_TRUE(kPhone.contains(r.center)) << regionName(r.id);
    seen.insert({r.center.x, r.center.y});
  }
  EXPECT_EQ(seen.size(), static_cast<std::size_t>(kRegionCount));
}

TEST(DeriveRegions, PlacementRules) {
  const auto layout = LayoutSpec::derive(kPhone, phoneAnchors(), EntryMode::kSingleDigit);
  const double inset = 0.08 * 480;
  const double gap = (560.0 - 200.0) / 3.0;
  EXPECT_EQ(layout.center(RegionId::kIndex), (Point{480 - inset, 200}));
  EXPECT_EQ(layout.center(RegionId::kRing), (Point{480 - inset, 440}));
  EXPECT_EQ(layout.center(RegionId::kThumb), (Point{inset, 360}));
  EXPECT_DOUBLE_EQ(layout.center(RegionId::kAboveIndex).y, 200 - gap);
  EXPECT_DOUBLE_EQ(layout.center(RegionId::kBelowLittle).y, 560 + gap);
  EXPECT_DOUBLE_EQ(layout.center(RegionId::kAboveThumb).y, 360 - gap);
  EXPECT_DOUBLE_EQ(layout.center(RegionId::kBelowThumb).y, 360 + gap);
  EXPECT_EQ(layout.center(RegionId::kBetweenThumbAndMiddle), (Point{240, 340}));
  EXPECT_EQ(layout.center(RegionId::kBottomCentre), (Point{240, 800 - inset}));
  EXPECT_EQ(layout.center(RegionId::kScreenCentre), (Point{240, 400}));
  EXPECT_DOUBLE_EQ(layout.parameters().activationRadius, 0.9 * 0.5 * minimumCenterDistance(layout.regions()));
}

TEST(DeriveRegions, DefaultAnchorsUseHeightFractions) {
  const auto a = defaultAnchors(kPhone);
  EXPECT_EQ(a.index, (Point{480, 200}));
  EXPECT_EQ(a.middle, (Point{480, 320}));
  EXPECT_EQ(a.ring, (Point{480, 440}));
  EXPECT_EQ(a.little, (Point{480, 560}));
  EXPECT_EQ(a.thumb, (Point{0, 360}));
  const auto r = defaultAnchors({480, 800, Handedness::kRightHold});
  EXPECT_EQ(r.index.x, 0);
  EXPECT_EQ(r.thumb.x, 480);
}

TEST(DeriveRegions, TabletScreenKeepsEveryRegionInBounds) {
  const ScreenGeometry tablet{800, 1280, Handedness::kLeftHold};
  const double sx = 800.0 / 480.0;
  const double sy = 1280.0 / 800.0;
  AnchorSet a = phoneAnchors();
  for (Point* p : {&a.index, &a.middle, &a.ring, &a.little, &a.thumb}) *p = {p->x * sx, p->y * sy};
  const auto layout = LayoutSpec::derive(tablet, a, EntryMode::kSingleDigit);
  for (const Region& r : layout.regions()) EXPECT_TRUE(tablet.contains(r.center)) << regionName(r.id);
  EXPECT_EQ(layout.regions().size(), static_cast<std::size_t>(kRegionCount));
}

TEST(DeriveRegions, CentersAreClampedToTheScreen) {
  AnchorSet a{{480, 20}, {480, 40}, {480, 60}, {480, 780}, {0, 790}};
  const auto layout = LayoutSpec::derive(kPhone, a, EntryMode::kSingleDigit);
  EXPECT_EQ(layout.center(RegionId::kAboveIndex).y, 0.0);
  EXPECT_EQ(layout.center(RegionId::kBelowLittle).y, 800.0);
  EXPECT_EQ(layout.center(RegionId::kBelowThumb).y, 800.0);
}

TEST(ValidateAnchors, RejectsMiddleAboveIndex) {
  AnchorSet a = phoneAnchors();
  std::swap(a.index, a.middle);
  expectInvalidAnchors(a, "finger-order");
}

TEST(ValidateAnchors, RejectsAnchorOutsideScreen) {
  AnchorSet a = phoneAnchors();
  a.thumb = {-1, 360};
  expectInvalidAnchors(a, "anchor-in-screen");
}

TEST(ValidateAnchors, RejectsFingerOffTheEdgeBand) {
  AnchorSet a = phoneAnchors();
  a.ring = {300, 440};
  expectInvalidAnchors(a, "finger-edge-band");
}

TEST(ValidateAnchors, RejectsThumbOnTheFingerSide) {
  AnchorSet a = phoneAnchors();
  a.thumb = {470, 360};
  expectInvalidAnchors(a, "thumb-edge-band");
}

TEST(ValidateAnchors, RightHoldExpectsFingersOnTheLeft) {
  const ScreenGeometry g{480, 800, Handedness::kRightHold};
  expectInvalidAnchors(phoneAnchors(), "finger-edge-band", g);
  EXPECT_NO_THROW(LayoutSpec::derive(g, defaultAnchors(g), EntryMode::kDoubleDigit));
}

TEST(ValidateAnchors, RejectsCoincidentDerivedCenters) {
  // Thumb anchor on the screen centre row with zero inset: the midpoint of
  // thumb and middle lands where the screen centre region sits.
  const AnchorSet a{{480, 200}, {480, 400}, {480, 440}, {480, 560}, {0, 400}};
  LayoutOptions o;
  o.inset = 0.0;
  try {
    LayoutSpec::derive(kPhone, a, EntryMode::kSingleDigit, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidAnchors);
    EXPECT_NE(std::string(e.what()).find("distinct-centers"), std::string::npos) << e.what();
  }
}

TEST(DeriveRegions, RejectsNonPositiveGeometryAndBadOptions) {
  EXPECT_THROW(LayoutSpec::derive({0, 800}, phoneAnchors(), EntryMode::kSingleDigit), Error);
  LayoutOptions o;
  o.activationRadius = 0.0;
  EXPECT_THROW(LayoutSpec::derive(kPhone, phoneAnchors(), EntryMode::kSingleDigit, o), Error);
  o = {};
  o.inset = -1.0;
  EXPECT_THROW(LayoutSpec::derive(kPhone, phoneAnchors(), EntryMode::kSingleDigit, o), Error);
}

TEST(HitTest, CenterMapsToItsRegion) {
  const auto layout = defaultLayout();
  for (const Region& r : layout.regions()) EXPECT_EQ(hitTest(layout, r.center), r.id);
  EXPECT_EQ(hitTest(layout, layout.center(RegionId::kThumb)), RegionId::kThumb);
}

TEST(HitTest, EquidistantPointGoesToLowerRegionId) {
  LayoutOptions o;
  o.activationRadius = 100.0;
  const auto layout = LayoutSpec::derive(kPhone, phoneAnchors(), EntryMode::kSingleDigit, o);
  const Point i = layout.center(RegionId::kIndex);
  const Point m = layout.center(RegionId::kMiddle);
  const Point mid{(i.x + m.x) / 2, (i.y + m.y) / 2};
  ASSERT_EQ(distanceSquared(mid, i), distanceSquared(mid, m));
  EXPECT_EQ(hitTest(layout, mid), RegionId::kIndex);
}

TEST(HitTest, FarPointIsNoRegion) {
  const auto layout = defaultLayout();
  EXPECT_EQ(hitTest(layout, {240, 0}), std::nullopt);
  EXPECT_EQ(hitTest(layout, {10, 10}), std::nullopt);
}

TEST(HitTest, OutsideScreenThrows) {
  const auto layout = defaultLayout();
  for (Point p : {Point{-0.1, 10}, Point{480.1, 10}, Point{10, 800.5}, Point{NAN, 1}}) {
    try {
      hitTest(layout, p);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kOutOfBounds);
    }
  }
  EXPECT_NO_THROW(hitTest(layout, {480, 800}));
  EXPECT_NO_THROW(hitTest(layout, {0, 0}));
}

TEST(HitTest, MatchesIndependentNearestSearchOnRandomLayouts) {
  std::mt19937_64 rng(101);
  for (int l = 0; l < 20; ++l) {
    const auto layout = randomLayout(rng);
    std::uniform_real_distribution<double> ux(0, layout.geometry().width);
    std::uniform_real_distribution<double> uy(0, layout.geometry().height);
    for (int i = 0; i < 2000; ++i) {
      const Point p{ux(rng), uy(rng)};
      ASSERT_EQ(hitTest(layout, p), testing::nearestWithin(layout, p));
    }
    for (const Region& r : layout.regions()) ASSERT_EQ(hitTest(layout, r.center), r.id);
  }
}

TEST(Keymap, SingleDigitFollowsTheWidgetTable) {
  const auto layout = defaultLayout(EntryMode::kSingleDigit);
  EXPECT_EQ(layout.action(RegionId::kAboveIndex), KeyAction::of(ActionKind::kBackspace));
  EXPECT_EQ(layout.action(RegionId::kIndex), KeyAction::digit(4));
  EXPECT_EQ(layout.action(RegionId::kMiddle), KeyAction::digit(5));
  EXPECT_EQ(layout.action(RegionId::kRing), KeyAction::digit(6));
  EXPECT_EQ(layout.action(RegionId::kLittle), KeyAction::digit(7));
  EXPECT_EQ(layout.action(RegionId::kBelowLittle), KeyAction::digit(8));
  EXPECT_EQ(layout.action(RegionId::kAboveThumb), KeyAction::digit(1));
  EXPECT_EQ(layout.action(RegionId::kThumb), KeyAction::digit(2));
  EXPECT_EQ(layout.action(RegionId::kBelowThumb), KeyAction::digit(3));
  EXPECT_EQ(layout.action(RegionId::kBetweenThumbAndMiddle), KeyAction::digit(0));
  EXPECT_EQ(layout.action(RegionId::kBottomCentre), KeyAction::of(ActionKind::kCall));
  EXPECT_EQ(layout.action(RegionId::kScreenCentre), KeyAction::digit(9));
}

TEST(Keymap, DoubleDigitFollowsTheWidgetTable) {
  const auto layout = defaultLayout(EntryMode::kDoubleDigit);
  EXPECT_EQ(layout.action(RegionId::kAboveIndex), KeyAction::of(ActionKind::kBackspace));
  EXPECT_EQ(layout.action(RegionId::kIndex), KeyAction::pair(1, 2));
  EXPECT_EQ(layout.action(RegionId::kMiddle), KeyAction::pair(3, 4));
  EXPECT_EQ(layout.action(RegionId::kRing), KeyAction::pair(5, 6));
  EXPECT_EQ(layout.action(RegionId::kLittle), KeyAction::pair(7, 8));
  EXPECT_EQ(layout.action(RegionId::kBelowLittle), KeyAction::pair(9, 0));
  EXPECT_EQ(layout.action(RegionId::kAboveThumb), KeyAction::of(ActionKind::kUnassigned));
  EXPECT_EQ(layout.action(RegionId::kThumb), KeyAction::of(ActionKind::kEnter));
  EXPECT_EQ(layout.action(RegionId::kBelowThumb), KeyAction::of(ActionKind::kContacts));
  EXPECT_EQ(layout.action(RegionId::kBetweenThumbAndMiddle), KeyAction::of(ActionKind::kUnassigned));
  EXPECT_EQ(layout.action(RegionId::kBottomCentre), KeyAction::of(ActionKind::kCall));
  EXPECT_EQ(layout.action(RegionId::kScreenCentre), KeyAction::of(ActionKind::kUnassigned));
}

TEST(Keymap, EveryDigitHasExactlyOneKeyPerMode) {
  for (EntryMode mode : {EntryMode::kSingleDigit, EntryMode::kDoubleDigit}) {
    std::array<int, 10> seen{};
    for (const KeyAction& a : canonicalKeymap(mode)) {
      if (a.kind == ActionKind::kDigit) ++seen[a.first];
      if (a.kind == ActionKind::kDoubleDigitKey) {
        ++seen[a.first];
        ++seen[a.second];
      }
    }
    for (int d = 0; d < 10; ++d) EXPECT_EQ(seen[d], 1) << "digit " << d;
  }
}

TEST(Keymap, ActionStringsRoundTrip) {
  for (EntryMode mode : {EntryMode::kSingleDigit, EntryMode::kDoubleDigit}) {
    for (const KeyAction& a : canonicalKeymap(mode)) EXPECT_EQ(KeyAction::parse(a.toString()), a);
  }
  EXPECT_EQ(KeyAction::pair(9, 0).toString(), "pair:9/0");
  EXPECT_THROW(KeyAction::parse("digit:12"), Error);
  EXPECT_THROW(KeyAction::parse("pair:1-2"), Error);
  EXPECT_THROW(KeyAction::parse("dial"), Error);
}

TEST(Mirror, IsAnInvolution) {
  std::mt19937_64 rng(7);
  for (int l = 0; l < 10; ++l) {
    const auto layout = randomLayout(rng);
    const auto twice = mirror(mirror(layout));
    EXPECT_EQ(twice.geometry(), layout.geometry());
    for (int i = 0; i < kRegionCount; ++i) {
      EXPECT_NEAR(twice.regions()[i].center.x, layout.regions()[i].center.x, 1e-9);
      EXPECT_EQ(twice.regions()[i].center.y, layout.regions()[i].center.y);
    }
  }
}

TEST(Mirror, ReflectsAboutTheVerticalMidline) {
  const ScreenGeometry g{480, 800, Handedness::kRightHold};
  LayoutOptions o;
  o.inset = 100.0;
  const auto layout = LayoutSpec::derive(g, defaultAnchors(g), EntryMode::kSingleDigit, o);
  ASSERT_EQ(layout.center(RegionId::kIndex).x, 100.0);
  const auto m = mirror(layout);
  EXPECT_EQ(m.center(RegionId::kIndex).x, 380.0);
  EXPECT_EQ(m.geometry().handedness, Handedness::kLeftHold);
  EXPECT_EQ(m.keymap(), layout.keymap());
}

TEST(Mirror, CommutesWithHitTestOnAGrid) {
  for (EntryMode mode : {EntryMode::kSingleDigit, EntryMode::kDoubleDigit}) {
    const auto layout = defaultLayout(mode);
    const auto m = mirror(layout);
    for (int i = 0; i <= 96; ++i) {
      for (int j = 0; j <= 160; ++j) {
        const Point p{480.0 * i / 96, 800.0 * j / 160};
        ASSERT_EQ(hitTest(m, {480 - p.x, p.y}), hitTest(layout, p)) << p.x << "," << p.y;
      }
    }
  }
}

LayoutSpec scaled(const LayoutSpec& layout, double s) {
  ScreenGeometry g = layout.geometry();
  g.width *= s;
  g.height *= s;
  AnchorSet a = layout.anchors();
  for (Point* p : {&a.index, &a.middle, &a.ring, &a.little, &a.thumb}) *p = {p->x * s, p->y * s};
  return LayoutSpec::derive(g, a, layout.mode());
}

TEST(ScaleEquivariance, PowersOfTwoScaleCentersExactly) {
  std::mt19937_64 rng(3);
  for (int l = 0; l < 5; ++l) {
    const auto layout = randomLayout(rng);
    for (double s : {0.5, 2.0}) {
      const auto big = scaled(layout, s);
      for (int i = 0; i < kRegionCount; ++i) {
        EXPECT_EQ(big.regions()[i].center.x, layout.regions()[i].center.x * s);
        EXPECT_EQ(big.regions()[i].center.y, layout.regions()[i].center.y * s);
      }
    }
  }
}

TEST(ScaleEquivariance, OtherFactorsAgreeToRounding) {
  std::mt19937_64 rng(4);
  for (int l = 0; l < 5; ++l) {
    const auto layout = randomLayout(rng);
    const auto big = scaled(layout, 3.0);
    for (int i = 0; i < kRegionCount; ++i) {
      const Point want{layout.regions()[i].center.x * 3, layout.regions()[i].center.y * 3};
      EXPECT_NEAR(big.regions()[i].center.x, want.x, 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, want.x));
      EXPECT_NEAR(big.regions()[i].center.y, want.y, 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, want.y));
    }
  }
}

TEST(LayoutSpec, AssembleRejectsWrongKeymap) {
  const auto layout = defaultLayout();
  Keymap keymap = layout.keymap();
  keymap[regionIndex(RegionId::kThumb)] = KeyAction::digit(5);
  try {
    LayoutSpec::assemble(layout.geometry(), layout.anchors(), layout.mode(), layout.regions(), keymap,
                         layout.parameters());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvariantViolation);
    EXPECT_NE(std::string(e.what()).find("Thumb"), std::string::npos);
  }
}

TEST(LayoutSpec, AssembleRejectsBadRegions) {
  const auto layout = defaultLayout();
  RegionSet regions = layout.regions();
  regions[3].center = regions[4].center;
  EXPECT_THROW(LayoutSpec::assemble(layout.geometry(), layout.anchors(), layout.mode(), regions,
                                    layout.keymap(), layout.parameters()),
               Error);
  regions = layout.regions();
  regions[0].center = {-5, 0};
  EXPECT_THROW(LayoutSpec::assemble(layout.geometry(), layout.anchors(), layout.mode(), regions,
                                    layout.keymap(), layout.parameters()),
               Error);
  regions = layout.regions();
  std::swap(regions[1], regions[2]);
  EXPECT_THROW(LayoutSpec::assemble(layout.geometry(), layout.anchors(), layout.mode(), regions,
                                    layout.keymap(), layout.parameters()),
               Error);
}

TEST(LayoutSpec, WithModeSwapsOnlyTheKeymap) {
  const auto single = defaultLayout(EntryMode::kSingleDigit);
  const auto dbl = withMode(single, EntryMode::kDoubleDigit);
  EXPECT_EQ(dbl.mode(), EntryMode::kDoubleDigit);
  EXPECT_EQ(dbl.regions(), single.regions());
  EXPECT_EQ(dbl.keymap(), canonicalKeymap(EntryMode::kDoubleDigit));
  EXPECT_EQ(dbl.regionFor(ActionKind::kEnter), RegionId::kThumb);
  EXPECT_EQ(single.regionFor(ActionKind::kEnter), std::nullopt);
  EXPECT_EQ(single.regionFor(ActionKind::kCall), RegionId::kBottomCentre);
}

}  // namespace
}  // namespace fbt
