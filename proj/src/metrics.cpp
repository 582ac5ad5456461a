#include "lac/metrics.hpp"

#include <algorithm>

namespace lac {

namespace {

double straight(const AgentSummary& a) { return (a.target - a.start).norm(); }

bool counts_for_ratios(const AgentSummary& a) {
  return a.arrival_step.has_value() && straight(a) > 0.0;
}

template <typename Ratio>
double mean_ratio(const SimTrace& trace, Ratio ratio) {
  double sum = 0.0;
  int n = 0;
  for (const auto& a : trace.agents) {
    if (!counts_for_ratios(a)) continue;
    sum += ratio(a);
    ++n;
  }
  return n == 0 ? 1.0 : sum / n;
}

}  // namespace

std::optional<double> completion_time(const SimTrace& trace) {
  int last = 0;
  for (const auto& a : trace.agents) {
    if (!a.arrival_step) return std::nullopt;
    last = std::max(last, *a.arrival_step);
  }
  return last * trace.header.delta;
}

double avg_detour_distance_ratio(const SimTrace& trace) {
  return mean_ratio(trace, [](const AgentSummary& a) { return a.path_length / straight(a); });
}

double avg_detour_time_ratio(const SimTrace& trace) {
  const double delta = trace.header.delta;
  const double v_max = trace.header.v_max;
  return mean_ratio(trace, [&](const AgentSummary& a) {
    return (*a.arrival_step * delta) / (straight(a) / v_max);
  });
}

std::optional<double> completion_time_p90(const SimTrace& trace) {
  const std::size_t n = trace.agents.size();
  const std::size_t rank = (9 * n + 9) / 10;  // ceil(0.9 n) in integers
  std::vector<int> arrivals;
  for (const auto& a : trace.agents) {
    if (a.arrival_step) arrivals.push_back(*a.arrival_step);
  }
  if (rank == 0 || arrivals.size() < rank) return std::nullopt;
  std::sort(arrivals.begin(), arrivals.end());
  return arrivals[rank - 1] * trace.header.delta;
}

RunResult evaluate(const SimTrace& trace) {
  RunResult r;
  r.completion_time_s = completion_time(trace);
  r.addr = avg_detour_distance_ratio(trace);
  r.adtr = avg_detour_time_ratio(trace);
  r.ctime_p90_s = completion_time_p90(trace);
  for (const auto& a : trace.agents) {
    if (!a.arrival_step) ++r.unfinished;
    if (straight(a) == 0.0) ++r.excluded;
    AgentResult ar;
    ar.id = a.id;
    if (a.arrival_step) ar.arrival_time_s = *a.arrival_step * trace.header.delta;
    ar.path_length = a.path_length;
    ar.straight_distance = straight(a);
    r.per_agent.push_back(ar);
  }
  return r;
}

}  // namespace lac
