#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ots {

struct IVPoint {
  double v = 0.0;
  double i = 0.0;

  friend bool operator==(const IVPoint&, const IVPoint&) = default;
};

struct IVMeta {
  std::string source;
  bool normalized = false;
  std::optional<std::string> sweep_direction;

  friend bool operator==(const IVMeta&, const IVMeta&) = default;
};

// Ordered (v, i) samples, measured or simulated.
struct IVCurve {
  std::vector<IVPoint> points;
  IVMeta meta;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

// Throws ParseError if any value is not finite.
void validate(const IVCurve& c);

}  // namespace ots
