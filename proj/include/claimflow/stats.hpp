#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace claimflow {

struct SurvivalObservation {
  int duration = 0;     // whole years, >= 0
  bool event = false;   // false: right-censored at `duration`
  friend bool operator==(const SurvivalObservation&, const SurvivalObservation&) = default;
};

struct SurvivalPoint {
  int time = 0;
  double survival = 1.0;   // S(time), after the drop at `time`
  std::size_t at_risk = 0; // observations with duration >= time
  std::size_t events = 0;  // events at exactly `time`
};

struct SurvivalCurve {
  /// One point per distinct observed time, ascending. Times carrying only
  /// censored observations appear with events == 0 and no drop.
  std::vector<SurvivalPoint> points;

  /// Step function value; 1 before the first point.
  double at(int time) const;
};

/// Kaplan-Meier product-limit estimator. Observations censored at t stay in
/// the risk set for events at t. Throws InvalidArgument on empty input or a
/// negative duration.
SurvivalCurve kaplan_meier(std::span<const SurvivalObservation> observations);

/// CSV with header time,survival,at_risk,events.
void write_survival_csv(std::ostream& out, const SurvivalCurve& curve);

/// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of the average-rank transforms. Throws InvalidArgument
/// on length mismatch, fewer than two points, or a constant input.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace claimflow
