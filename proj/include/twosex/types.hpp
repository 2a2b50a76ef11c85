#pragma once

#include <cstdint>

namespace twosex {

using Count = std::int64_t;

/// Numbers of female and male offspring, or totals thereof.
struct FemaleMale {
  Count females = 0;
  Count males = 0;

  friend bool operator==(const FemaleMale&, const FemaleMale&) = default;
};

}  // namespace twosex
