#pragma once

#include <limits>
#include <string_view>
#include <vector>

#include "plap/grid.hpp"

namespace plap {

/// Recorded state of a run.
struct Snapshot {
  double t = 0.0;
  /// Step that produced this state (0 for the initial snapshot).
  double dt = 0.0;
  Field u;
  double supnorm = 0.0;
  /// int_0^t int u_t^2, accumulated per step from (u^{n+1} - u^n) / dt.
  double cumulative_ut2 = 0.0;
  /// int_0^t int u^2, per-step trapezoid in t.
  double cumulative_u2 = 0.0;
};

enum class EventTag { BlowUp, Decayed, Horizon, DtUnderflow };

struct Event {
  double t = 0.0;
  EventTag tag = EventTag::Horizon;
};

enum class Outcome { BlownUp, Completed, Decayed, DtUnderflow };

std::string_view to_string(EventTag tag);
std::string_view to_string(Outcome outcome);

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::vector<Event> events;
  Outcome outcome = Outcome::Completed;
  /// Extrapolated blow-up time; NaN unless outcome is BlownUp.
  double T_num = std::numeric_limits<double>::quiet_NaN();
  bool T_num_low_confidence = false;
  /// Sup-norm was growing faster than linearly when dt underflowed.
  bool superlinear_growth = false;
  long steps = 0;
  /// Steps in which negative values were clipped, and the largest clipped
  /// magnitude.
  long clipped_steps = 0;
  double max_clip = 0.0;

  const Snapshot& initial() const { return snapshots.front(); }
  const Snapshot& final() const { return snapshots.back(); }
};

}  // namespace plap
