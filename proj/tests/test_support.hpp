#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "entry.hpp"
#include "layout.hpp"

namespace fbt::testing {

inline LayoutSpec defaultLayout(EntryMode mode = EntryMode::kSingleDigit, double w = 480, double h = 800) {
  const ScreenGeometry g{w, h, Handedness::kLeftHold};
  return LayoutSpec::derive(g, defaultAnchors(g), mode);
}

// A valid layout with random screen size, grip and anchor positions.
inline LayoutSpec randomLayout(std::mt19937_64& rng, EntryMode mode = EntryMode::kSingleDigit) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double w = 300.0 + 900.0 * unit(rng);
  const double h = w * (1.2 + unit(rng));
  const Handedness hand = unit(rng) < 0.5 ? Handedness::kLeftHold : Handedness::kRightHold;
  const ScreenGeometry g{w, h, hand};
  const double band = 0.08 * w;
  const bool fingersRight = hand == Handedness::kLeftHold;
  auto fingerX = [&] { return fingersRight ? w - band * unit(rng) : band * unit(rng); };
  const double thumbX = fingersRight ? band * unit(rng) : w - band * unit(rng);
  std::vector<double> ys(4);
  const double top = h * (0.1 + 0.15 * unit(rng));
  const double step = h * (0.08 + 0.07 * unit(rng));
  for (int i = 0; i < 4; ++i) ys[i] = top + step * i + step * 0.3 * (unit(rng) - 0.5);
  const AnchorSet a{{fingerX(), ys[0]}, {fingerX(), ys[1]}, {fingerX(), ys[2]}, {fingerX(), ys[3]},
                    {thumbX, h * (0.3 + 0.3 * unit(rng))}};
  return LayoutSpec::derive(g, a, mode);
}

// Taps at the region centers, `spacingMs` apart, starting at 0.
inline std::vector<TapEvent> tapsAtCenters(const LayoutSpec& layout, const std::vector<RegionId>& presses,
                                           double spacingMs = 300.0) {
  std::vector<TapEvent> taps;
  for (std::size_t i = 0; i < presses.size(); ++i) {
    taps.push_back(TapEvent{layout.center(presses[i]), spacingMs * static_cast<double>(i)});
  }
  return taps;
}

struct Replayed {
  EntryState state;
  std::vector<FeedbackEvent> feedback;
};

inline Replayed feed(const LayoutSpec& layout, const std::vector<TapEvent>& taps) {
  Replayed out{EntryState::initial(layout.mode()), {}};
  for (const auto& tap : taps) {
    auto r = step(out.state, layout, tap);
    out.state = std::move(r.state);
    out.feedback.insert(out.feedback.end(), r.feedback.begin(), r.feedback.end());
  }
  return out;
}

inline std::string randomNumber(std::mt19937_64& rng, std::size_t length) {
  std::uniform_int_distribution<int> digit(0, 9);
  std::string s;
  for (std::size_t i = 0; i < length; ++i) s.push_back(static_cast<char>('0' + digit(rng)));
  return s;
}

// Builds n values with exactly the given mean and sample sd from a fixed
// standardized base vector.
inline std::vector<double> groupWith(double mean, double sd, std::size_t n = 6) {
  std::vector<double> base(n);
  for (std::size_t i = 0; i < n; ++i) base[i] = static_cast<double>(i);
  double m = 0.0;
  for (double v : base) m += v;
  m /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : base) ss += (v - m) * (v - m);
  const double s = std::sqrt(ss / static_cast<double>(n - 1));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = mean + sd * (base[i] - m) / s;
  return out;
}

// Nearest-center search written independently of hitTest.
inline std::optional<RegionId> nearestWithin(const LayoutSpec& layout, Point p) {
  std::optional<RegionId> best;
  double bestD = 0.0;
  for (const Region& r : layout.regions()) {
    const double d = std::hypot(r.center.x - p.x, r.center.y - p.y);
    if (!best || d < bestD) {
      best = r.id;
      bestD = d;
    }
  }
  if (bestD > layout.parameters().activationRadius) return std::nullopt;
  return best;
}

}  // namespace fbt::testing
