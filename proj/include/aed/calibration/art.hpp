#pragma once

#include <cstdint>

#include "aed/sim/history.hpp"
#include "aed/sim/policy.hpp"
#include "aed/sim/rng.hpp"
#include "aed/stats/tests.hpp"

namespace aed::calibration {

/// Adaptive randomization test p-value for an exact (one draw per entry)
/// history.  Each resample re-runs the policy's arm selection from scratch
/// while feeding the observed time-indexed rewards r_1..r_T, whatever arm is
/// picked.  Resampled statistics that tie the observed one are broken
/// uniformly at random, so a policy whose resamples always reproduce the
/// observed history yields a Uniform(0,1) p-value.  An Undefined observed
/// statistic yields p = 1.
double art_pvalue(const sim::CompressedHistory& observed, const stats::TestSpec& spec,
                  const sim::Policy& policy, std::int64_t resamples, sim::Rng& rng);

}  // namespace aed::calibration
