// SPDX-License-Identifier: Apache-2.0
#include "ubmc/target.hpp"

#include <cmath>

#include "ubmc/error.hpp"

namespace ubmc {

Vec DiscretizedTarget::grad_log_gamma(int, const Vec&) const {
  throw Error(ErrorKind::HmcUnsupported, name() + " does not provide gradients");
}

double DiscretizedTarget::level_cost(int level) const {
  return std::pow(schedule().delta(level), -cost_exponent());
}

Density eval_density(const DiscretizedTarget& target, int level, const Vec& x, CostLedger& ledger) {
  if (x.size() != target.dim()) {
    throw Error(ErrorKind::InvalidDimension, "state has dimension " + std::to_string(x.size()) +
                                                 ", target expects " + std::to_string(target.dim()));
  }
  ledger.charge(target.level_cost(level));
  ledger.count_evaluation();
  return target.evaluate(level, x);
}

double eval_log_gamma(const DiscretizedTarget& target, int level, const Vec& x, CostLedger& ledger) {
  return eval_density(target, level, x, ledger).log_gamma;
}

}  // namespace ubmc
