#include "claimflow/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "claimflow/error.hpp"
#include "claimflow/io.hpp"

namespace claimflow {

double SurvivalCurve::at(int time) const {
  double s = 1.0;
  for (const auto& p : points) {
    if (p.time > time) break;
    s = p.survival;
  }
  return s;
}

SurvivalCurve kaplan_meier(std::span<const SurvivalObservation> observations) {
  if (observations.empty()) throw InvalidArgument("kaplan_meier: empty input");
  std::vector<SurvivalObservation> obs(observations.begin(), observations.end());
  for (const auto& o : obs)
    if (o.duration < 0) throw InvalidArgument("kaplan_meier: negative duration");
  std::sort(obs.begin(), obs.end(),
            [](const auto& a, const auto& b) { return a.duration < b.duration; });

  SurvivalCurve curve;
  double s = 1.0;
  std::size_t at_risk = obs.size();
  for (std::size_t i = 0; i < obs.size();) {
    const int t = obs[i].duration;
    std::size_t events = 0, total = 0;
    for (; i < obs.size() && obs[i].duration == t; ++i, ++total)
      if (obs[i].event) ++events;
    if (events > 0)
      s *= 1.0 - static_cast<double>(events) / static_cast<double>(at_risk);
    curve.points.push_back({t, s, at_risk, events});
    at_risk -= total;
  }
  return curve;
}

void write_survival_csv(std::ostream& out, const SurvivalCurve& curve) {
  out << "time,survival,at_risk,events\n";
  for (const auto& p : curve.points)
    out << p.time << ',' << format_real(p.survival) << ',' << p.at_risk << ',' << p.events << '\n';
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j (0-based) hold ranks i+1..j+1
    const double mean_rank = (static_cast<double>(i + j) + 2.0) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("spearman: length mismatch");
  if (x.size() < 2) throw InvalidArgument("spearman: need at least two observations");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  // Both rank vectors have mean (n+1)/2.
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw InvalidArgument("spearman: constant input, correlation undefined");
  const double rho = sxx == syy ? sxy / sxx : sxy / std::sqrt(sxx * syy);
  return std::clamp(rho, -1.0, 1.0);
}

}  // namespace claimflow
