#include "twosex/mating.hpp"

#include <algorithm>
#include <vector>

#include "twosex/error.hpp"

namespace twosex {

MatingRule MatingRule::promiscuous() { return MatingRule(Kind::Promiscuous, 0, "promiscuous", {}); }

MatingRule MatingRule::polygamous(Count k) {
  if (k < 1) throw ModelError("polygamous mating requires k >= 1");
  return MatingRule(Kind::Polygamous, k, "polygamous", {});
}

MatingRule MatingRule::identity() { return MatingRule(Kind::Identity, 0, "identity", {}); }

MatingRule MatingRule::custom(std::string name, Function fn) {
  if (!fn) throw ModelError("custom mating rule needs a callable");
  return MatingRule(Kind::Custom, 0, std::move(name), std::move(fn));
}

Count MatingRule::operator()(Count females, Count males) const {
  switch (kind_) {
    case Kind::Promiscuous: return males > 0 ? females : 0;
    case Kind::Polygamous: return std::min(females, k_ * males);
    case Kind::Identity: return females;
    case Kind::Custom: return fn_(females, males);
  }
  return 0;
}

std::string MatingRule::name() const {
  if (kind_ == Kind::Polygamous) return name_ + "(k=" + std::to_string(k_) + ")";
  return name_;
}

PropertyReport<SuperadditivityViolation> check_superadditive(const MatingRule& rule, Count cap) {
  if (cap < 1) throw ModelError("property check cap must be >= 1");
  PropertyReport<SuperadditivityViolation> report;
  report.cap = cap;
  report.holds_analytically = rule.is_builtin();

  // Tabulate zeta once on the doubled grid; the scan is then pure lookups.
  const Count side = 2 * cap + 1;
  std::vector<Count> table(static_cast<std::size_t>(side * side));
  for (Count x = 0; x < side; ++x)
    for (Count y = 0; y < side; ++y) table[static_cast<std::size_t>(x * side + y)] = rule(x, y);
  auto zeta = [&](Count x, Count y) { return table[static_cast<std::size_t>(x * side + y)]; };

  for (Count x1 = 0; x1 <= cap; ++x1)
    for (Count y1 = 0; y1 <= cap; ++y1)
      for (Count x2 = 0; x2 <= cap; ++x2)
        for (Count y2 = 0; y2 <= cap; ++y2) {
          const Count merged = zeta(x1 + x2, y1 + y2);
          const Count split = zeta(x1, y1) + zeta(x2, y2);
          if (merged < split) {
            report.holds = false;
            report.holds_analytically = false;
            report.counterexample = SuperadditivityViolation{x1, y1, x2, y2, merged, split};
            return report;
          }
        }
  return report;
}

PropertyReport<DominationViolation> check_female_dominated(const MatingRule& rule, Count cap) {
  if (cap < 1) throw ModelError("property check cap must be >= 1");
  PropertyReport<DominationViolation> report;
  report.cap = cap;
  report.holds_analytically = rule.is_builtin();
  for (Count x = 0; x <= cap; ++x)
    for (Count y = 0; y <= cap; ++y) {
      const Count v = rule(x, y);
      if (v > x) {
        report.holds = false;
        report.holds_analytically = false;
        report.counterexample = DominationViolation{x, y, v};
        return report;
      }
    }
  return report;
}

}  // namespace twosex
