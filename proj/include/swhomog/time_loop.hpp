#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "swhomog/errors.hpp"

namespace swhomog {

template <class State>
struct TimeLoopResult {
  State final_state;
  std::vector<State> snapshots;  // in the order the times were requested
  std::size_t steps = 0;
};

/// Generic fixed-stop time loop shared by the solvers. `dt_for(state)` gives
/// the step the solver would like; steps are shortened so that every snapshot
/// time and t_end are hit exactly. `step(state, dt)` returns the advanced
/// state; `after(state)` runs validity checks and observers.
template <class State, class DtFn, class StepFn, class AfterFn>
TimeLoopResult<State> run_time_loop(State s, double t_end, std::span<const double> snapshot_times, DtFn&& dt_for,
                                    StepFn&& step, AfterFn&& after) {
  require(t_end >= s.t, ErrorKind::invalid_argument, "t_end precedes the initial time");
  std::vector<double> stops(snapshot_times.begin(), snapshot_times.end());
  for (double ts : stops)
    require(ts >= s.t && ts <= t_end, ErrorKind::invalid_argument, "snapshot time outside the run interval");
  std::vector<double> targets = stops;
  targets.push_back(t_end);
  std::sort(targets.begin(), targets.end());

  TimeLoopResult<State> result;
  std::vector<std::optional<State>> taken(stops.size());
  auto record = [&](double t) {
    for (std::size_t k = 0; k < stops.size(); ++k)
      if (stops[k] == t && !taken[k]) taken[k] = s;
  };
  record(s.t);

  for (double target : targets) {
    while (s.t < target) {
      const double wanted = dt_for(s);
      require(wanted > 0.0, ErrorKind::non_finite, "time step collapsed to zero");
      double dt = std::min(wanted, target - s.t);
      // No sliver steps just before a stop.
      const bool last = target - s.t - dt < 1e-9 * wanted;
      if (last) dt = target - s.t;
      s = step(s, dt);
      if (last) s.t = target;
      ++result.steps;
      after(s);
    }
    record(target);
  }

  for (auto& snap : taken) result.snapshots.push_back(std::move(*snap));
  result.final_state = std::move(s);
  return result;
}

}  // namespace swhomog
