#pragma once

#include <optional>
#include <vector>

#include "lac/engine.hpp"

namespace lac {

struct AgentResult {
  AgentId id = 0;
  std::optional<double> arrival_time_s;
  double path_length = 0.0;
  double straight_distance = 0.0;
};

struct RunResult {
  std::optional<double> completion_time_s;
  double addr = 1.0;
  double adtr = 1.0;
  std::optional<double> ctime_p90_s;
  int unfinished = 0;
  int excluded = 0;  ///< agents with start == target, left out of the ratio means
  std::vector<AgentResult> per_agent;
};

/// Time the last agent arrives; none if any agent never arrived.
std::optional<double> completion_time(const SimTrace& trace);

/// Mean of path length over straight-line distance, over arrived agents that have to move.
double avg_detour_distance_ratio(const SimTrace& trace);

/// Mean of travel time over straight-line time at v_max, same agent set as above.
double avg_detour_time_ratio(const SimTrace& trace);

/// Arrival time of the ceil(0.9 n)-th agent to arrive.
std::optional<double> completion_time_p90(const SimTrace& trace);

RunResult evaluate(const SimTrace& trace);

}  // namespace lac
