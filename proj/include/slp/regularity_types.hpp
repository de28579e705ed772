#pragma once

#include <compare>
#include <cstdint>

#include "slp/core.hpp"

namespace slp {

/// A maximal repetition s[b..e] with smallest period c.
struct Run {
  Pos b = 0;
  Pos e = 0;
  Pos c = 0;
  friend auto operator<=>(const Run&, const Run&) = default;
};

/// A maximal gapped palindrome s[b..e]; the gap length is implied by context.
struct GappedPal {
  Pos b = 0;
  Pos e = 0;
  friend auto operator<=>(const GappedPal&, const GappedPal&) = default;
};

enum class LceMode { RR, LL, LR, RL };

}  // namespace slp
