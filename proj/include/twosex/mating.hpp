#pragma once

#include <functional>
#include <optional>
#include <string>

#include "twosex/types.hpp"

namespace twosex {

/// Deterministic mating function: (total females, total males) -> mating units.
class MatingRule {
 public:
  enum class Kind { Promiscuous, Polygamous, Identity, Custom };
  using Function = std::function<Count(Count, Count)>;

  /// x * min{1, y}: one male can mate with every female.
  static MatingRule promiscuous();
  /// min{x, k y}: each male takes up to k mates, each female at most one.
  static MatingRule polygamous(Count k);
  /// x: reduces the process to the asexual females-generate-females process.
  static MatingRule identity();
  /// Arbitrary rule; no structural assumption is taken for granted.
  static MatingRule custom(std::string name, Function fn);

  Count operator()(Count females, Count males) const;

  Kind kind() const noexcept { return kind_; }
  /// Mates per male for Polygamous; 0 otherwise.
  Count k() const noexcept { return k_; }
  bool is_builtin() const noexcept { return kind_ != Kind::Custom; }
  std::string name() const;

 private:
  MatingRule(Kind kind, Count k, std::string name, Function fn)
      : kind_(kind), k_(k), name_(std::move(name)), fn_(std::move(fn)) {}

  Kind kind_;
  Count k_;
  std::string name_;
  Function fn_;
};

struct SuperadditivityViolation {
  Count x1, y1, x2, y2;
  Count merged;  ///< zeta(x1 + x2, y1 + y2)
  Count split;   ///< zeta(x1, y1) + zeta(x2, y2)
};

struct DominationViolation {
  Count x, y;
  Count value;  ///< zeta(x, y) > x
};

/// Outcome of a grid check. `holds_analytically` is set for built-in rules,
/// whose properties hold for all arguments, not just on the grid.
template <typename Violation>
struct PropertyReport {
  bool holds = true;
  Count cap = 0;
  bool holds_analytically = false;
  std::optional<Violation> counterexample;
};

/// Exhaustive check of zeta(x1+x2, y1+y2) >= zeta(x1,y1) + zeta(x2,y2) for all
/// arguments in 0..cap. Reports the first violation in lexicographic order of
/// (x1, y1, x2, y2).
PropertyReport<SuperadditivityViolation> check_superadditive(const MatingRule& rule, Count cap);

/// Check of zeta(x, y) <= x for x, y in 0..cap.
PropertyReport<DominationViolation> check_female_dominated(const MatingRule& rule, Count cap);

}  // namespace twosex
