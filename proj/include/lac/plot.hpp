#pragma once

#include <string>

#include "lac/engine.hpp"

namespace lac {

/// Static SVG of a run: start and target markers plus one trajectory
/// polyline per agent. Output bytes depend only on the trace.
std::string render_svg(const SimTrace& trace);

}  // namespace lac
