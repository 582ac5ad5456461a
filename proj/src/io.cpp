#include "lac/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace lac {

using nlohmann::json;

namespace {

// Walks a JSON object, remembering which keys were read so leftovers can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!obj_.contains(key)) return;
    seen_.insert(key);
    try {
      out = obj_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(field(key) + ": wrong type");
    }
  }

  const json& child(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw ConfigError(field(key) + ": unknown field");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

json vec_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

Vec2 vec_from(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(field + ": expected [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

ScenarioSpec scenario_from(const json& j) {
  ObjectReader r(j, "scenario");
  ScenarioSpec s;
  std::string kind = std::string(to_string(s.kind));
  r.read("kind", kind);
  const auto parsed = parse_scenario_kind(kind);
  if (!parsed) throw ConfigError("scenario.kind: unknown scenario '" + kind + "'");
  s.kind = *parsed;
  r.read("agents", s.agents);
  r.read("seed", s.seed);
  r.read("clearance", s.clearance);
  r.read("rows", s.rows);
  r.read("spacing", s.spacing);
  r.read("gap", s.gap);
  r.read("rings", s.rings);
  r.read("base_radius", s.base_radius);
  r.read("ring_gap", s.ring_gap);
  r.read("area_side", s.area_side);
  r.read("target_spacing", s.target_spacing);
  if (r.has("tasks")) {
    const json& tasks = r.child("tasks");
    if (!tasks.is_array()) throw ConfigError("scenario.tasks: expected an array");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const std::string path = "scenario.tasks[" + std::to_string(i) + "]";
      ObjectReader t(tasks[i], path);
      AgentTask task;
      if (!t.has("start") || !t.has("target")) {
        throw ConfigError(path + ": needs start and target");
      }
      task.start = vec_from(t.child("start"), path + ".start");
      task.target = vec_from(t.child("target"), path + ".target");
      t.read("group", task.group);
      t.reject_unknown();
      s.tasks.push_back(task);
    }
  }
  r.reject_unknown();
  if (s.kind == ScenarioKind::custom && !r.has("agents")) {
    s.agents = static_cast<int>(s.tasks.size());
  }
  return s;
}

SimConfig sim_from(const json& j, ScenarioKind kind) {
  ObjectReader r(j, "sim");
  SimConfig c;
  // Mixing factor defaults follow the scenario family.
  c.learn.gamma = kind == ScenarioKind::crowd ? 0.95 : 0.75;

  std::string policy = std::string(to_string(c.policy));
  r.read("policy", policy);
  const auto p = parse_policy(policy);
  if (!p) throw ConfigError("sim.policy: unknown policy '" + policy + "'");
  c.policy = *p;

  r.read("radius", c.lac.r);
  r.read("v_max", c.lac.v_max);
  r.read("delta", c.lac.delta);
  r.read("tau", c.lac.tau);
  r.read("lambda", c.lac.lambda);
  r.read("n_actions", c.lac.n_actions);
  r.read("zeta", c.penalty.zeta);
  std::string mode = std::string(to_string(c.penalty.angle_mode));
  r.read("penalty_angle_mode", mode);
  const auto m = parse_penalty_angle_mode(mode);
  if (!m) throw ConfigError("sim.penalty_angle_mode: expected symmetric or literal");
  c.penalty.angle_mode = *m;
  r.read("gamma", c.learn.gamma);
  r.read("eta", c.learn.eta);
  r.read("beta", c.learn.beta);
  r.read("window", c.learn.window);
  r.read("arrival_tol", c.arrival_tol);
  r.read("max_steps", c.max_steps);
  r.read("seed", c.seed);
  r.read("threads", c.threads);
  r.reject_unknown();
  return c;
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    sim.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("sim: ") + e.what());
  }
  if (scenario.agents < 1) throw ConfigError("scenario.agents: must be >= 1");
  if (scenario.kind == ScenarioKind::custom &&
      scenario.agents != static_cast<int>(scenario.tasks.size())) {
    throw ConfigError("scenario.agents: must equal the number of custom tasks");
  }
  if (scenario.clearance < 0.0) throw ConfigError("scenario.clearance: must be >= 0");
  if (scenario.target_spacing < 0.0) throw ConfigError("scenario.target_spacing: must be >= 0");
}

std::string config_to_json(const ExperimentConfig& c) {
  json scenario = {
      {"kind", to_string(c.scenario.kind)},
      {"agents", c.scenario.agents},
      {"seed", c.scenario.seed},
      {"clearance", c.scenario.clearance},
      {"rows", c.scenario.rows},
      {"spacing", c.scenario.spacing},
      {"gap", c.scenario.gap},
      {"rings", c.scenario.rings},
      {"base_radius", c.scenario.base_radius},
      {"ring_gap", c.scenario.ring_gap},
      {"area_side", c.scenario.area_side},
      {"target_spacing", c.scenario.target_spacing},
  };
  if (!c.scenario.tasks.empty()) {
    json tasks = json::array();
    for (const auto& t : c.scenario.tasks) {
      tasks.push_back({{"start", vec_json(t.start)},
                       {"target", vec_json(t.target)},
                       {"group", t.group}});
    }
    scenario["tasks"] = tasks;
  }
  const SimConfig& s = c.sim;
  json sim = {
      {"policy", to_string(s.policy)},
      {"radius", s.lac.r},
      {"v_max", s.lac.v_max},
      {"delta", s.lac.delta},
      {"tau", s.lac.tau},
      {"lambda", s.lac.lambda},
      {"n_actions", s.lac.n_actions},
      {"zeta", s.penalty.zeta},
      {"penalty_angle_mode", to_string(s.penalty.angle_mode)},
      {"gamma", s.learn.gamma},
      {"eta", s.learn.eta},
      {"beta", s.learn.beta},
      {"window", s.learn.window},
      {"arrival_tol", s.arrival_tol},
      {"max_steps", s.max_steps},
      {"seed", s.seed},
      {"threads", s.threads},
  };
  json output = {{"dir", c.output_dir},
                 {"trace", c.emit.trace},
                 {"results", c.emit.results},
                 {"plot", c.emit.plot}};
  json root = {{"schema_version", kConfigSchemaVersion},
               {"scenario", scenario},
               {"sim", sim},
               {"output", output}};
  return root.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ObjectReader r(root, "");
  int version = kConfigSchemaVersion;
  r.read("schema_version", version);
  if (version != kConfigSchemaVersion) {
    throw ConfigError("schema_version: unsupported version " + std::to_string(version));
  }

  ExperimentConfig c;
  if (r.has("scenario")) c.scenario = scenario_from(r.child("scenario"));
  c.sim = r.has("sim") ? sim_from(r.child("sim"), c.scenario.kind)
                       : sim_from(json::object(), c.scenario.kind);
  if (r.has("output")) {
    ObjectReader o(r.child("output"), "output");
    o.read("dir", c.output_dir);
    o.read("trace", c.emit.trace);
    o.read("results", c.emit.results);
    o.read("plot", c.emit.plot);
    o.reject_unknown();
  }
  r.reject_unknown();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string results_to_json(const SimTrace& trace, const RunResult& result) {
  json agents = json::array();
  for (const auto& a : result.per_agent) {
    agents.push_back({{"id", a.id},
                      {"arrival_time_s", optional_json(a.arrival_time_s)},
                      {"path_length", a.path_length},
                      {"straight_distance", a.straight_distance}});
  }
  json root = {
      {"schema_version", kResultsSchemaVersion},
      {"policy", trace.header.policy},
      {"scenario", trace.header.scenario},
      {"seed", trace.header.seed},
      {"agents", trace.agents.size()},
      {"termination", to_string(trace.termination)},
      {"steps", trace.steps_taken},
      {"ctime_s", optional_json(result.completion_time_s)},
      {"addr", result.addr},
      {"adtr", result.adtr},
      {"ctime_p90_s", optional_json(result.ctime_p90_s)},
      {"unfinished", result.unfinished},
      {"excluded_from_ratios", result.excluded},
      {"min_separation", std::isfinite(trace.min_separation) ? json(trace.min_separation)
                                                             : json(nullptr)},
      {"per_agent", agents},
  };
  return root.dump(2) + "\n";
}

std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_trace(std::ostream& out, const SimTrace& trace) {
  const TraceHeader& h = trace.header;
  const int recorded = trace.steps.empty() ? 0 : static_cast<int>(trace.steps.size()) - 1;
  out << "# lac-trace schema=" << kTraceSchemaVersion << " delta=" << format_real(h.delta)
      << " radius=" << format_real(h.radius) << " agents=" << trace.agents.size()
      << " seed=" << h.seed << " steps=" << recorded << " v_max=" << format_real(h.v_max)
      << " arrival_tol=" << format_real(h.arrival_tol) << " policy=" << h.policy
      << " scenario=" << h.scenario << " termination=" << to_string(trace.termination) << "\n";
  for (const auto& a : trace.agents) {
    out << "#agent," << a.id << ',' << a.group << ',' << format_real(a.start.x()) << ','
        << format_real(a.start.y()) << ',' << format_real(a.target.x()) << ','
        << format_real(a.target.y()) << ',' << (a.arrival_step ? *a.arrival_step : -1) << "\n";
  }
  out << "step,id,x,y,vx,vy,action\n";
  for (const auto& rec : trace.steps) {
    for (std::size_t i = 0; i < rec.agents.size(); ++i) {
      const AgentRecord& r = rec.agents[i];
      out << rec.step << ',' << trace.agents[i].id << ',' << format_real(r.position.x()) << ','
          << format_real(r.position.y()) << ',' << format_real(r.velocity.x()) << ','
          << format_real(r.velocity.y()) << ',' << r.action << "\n";
    }
  }
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double to_real(const std::string& s, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw TraceParseError("line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
}

long long to_int(const std::string& s, int line_no) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw TraceParseError("line " + std::to_string(line_no) + ": bad integer '" + s + "'");
  }
}

}  // namespace

SimTrace read_trace(std::istream& in) {
  SimTrace trace;
  std::string line;
  int line_no = 1;
  if (!std::getline(in, line) || line.rfind("# lac-trace ", 0) != 0) {
    throw TraceParseError("line 1: missing lac-trace header");
  }
  std::size_t n_agents = 0;
  int n_steps = -1;
  std::set<std::string> keys;
  for (const auto& token : split(line.substr(12), ' ')) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    keys.insert(key);
    if (key == "schema") {
      trace.header.schema = static_cast<int>(to_int(value, 1));
      if (trace.header.schema != kTraceSchemaVersion) {
        throw TraceParseError("line 1: unsupported trace schema " + value);
      }
    } else if (key == "delta") {
      trace.header.delta = to_real(value, 1);
    } else if (key == "radius") {
      trace.header.radius = to_real(value, 1);
    } else if (key == "agents") {
      n_agents = static_cast<std::size_t>(to_int(value, 1));
    } else if (key == "seed") {
      trace.header.seed = std::stoull(value);
    } else if (key == "steps") {
      n_steps = static_cast<int>(to_int(value, 1));
    } else if (key == "v_max") {
      trace.header.v_max = to_real(value, 1);
    } else if (key == "arrival_tol") {
      trace.header.arrival_tol = to_real(value, 1);
    } else if (key == "policy") {
      trace.header.policy = value;
    } else if (key == "scenario") {
      trace.header.scenario = value;
    } else if (key == "termination") {
      trace.termination = value == "completed" ? Termination::completed : Termination::step_cap;
    }
  }
  for (const char* required : {"schema", "delta", "radius", "agents", "steps", "v_max"}) {
    if (!keys.count(required)) {
      throw TraceParseError(std::string("line 1: header lacks ") + required);
    }
  }

  for (std::size_t i = 0; i < n_agents; ++i) {
    ++line_no;
    if (!std::getline(in, line) || line.rfind("#agent,", 0) != 0) {
      throw TraceParseError("line " + std::to_string(line_no) + ": expected agent line");
    }
    const auto f = split(line, ',');
    if (f.size() != 8) throw TraceParseError("line " + std::to_string(line_no) + ": agent line");
    AgentSummary a;
    a.id = static_cast<AgentId>(to_int(f[1], line_no));
    a.group = static_cast<int>(to_int(f[2], line_no));
    a.start = {to_real(f[3], line_no), to_real(f[4], line_no)};
    a.target = {to_real(f[5], line_no), to_real(f[6], line_no)};
    const long long arrival = to_int(f[7], line_no);
    if (arrival >= 0) a.arrival_step = static_cast<int>(arrival);
    trace.agents.push_back(a);
  }
  ++line_no;
  if (!std::getline(in, line) || line != "step,id,x,y,vx,vy,action") {
    throw TraceParseError("line " + std::to_string(line_no) + ": expected column header");
  }

  for (int s = 0; s <= n_steps; ++s) {
    StepRecord rec;
    rec.step = s;
    for (std::size_t i = 0; i < n_agents; ++i) {
      ++line_no;
      if (!std::getline(in, line)) {
        throw TraceParseError("line " + std::to_string(line_no) + ": trace truncated at step " +
                              std::to_string(s));
      }
      const auto f = split(line, ',');
      if (f.size() != 7) {
        throw TraceParseError("line " + std::to_string(line_no) + ": expected 7 fields");
      }
      if (to_int(f[0], line_no) != s ||
          to_int(f[1], line_no) != static_cast<long long>(trace.agents[i].id)) {
        throw TraceParseError("line " + std::to_string(line_no) + ": rows out of order");
      }
      rec.agents.push_back({{to_real(f[2], line_no), to_real(f[3], line_no)},
                            {to_real(f[4], line_no), to_real(f[5], line_no)},
                            static_cast<int>(to_int(f[6], line_no))});
    }
    trace.steps.push_back(std::move(rec));
  }
  if (std::getline(in, line) && !line.empty()) {
    throw TraceParseError("line " + std::to_string(line_no + 1) + ": trailing data");
  }
  trace.steps_taken = std::max(n_steps, 0);

  // Path lengths from the recorded positions.
  for (std::size_t s = 1; s < trace.steps.size(); ++s) {
    for (std::size_t i = 0; i < n_agents; ++i) {
      trace.agents[i].path_length +=
          (trace.steps[s].agents[i].position - trace.steps[s - 1].agents[i].position).norm();
    }
  }
  return trace;
}

void save_trace(const std::string& path, const SimTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write trace file " + path);
  write_trace(out, trace);
  if (!out) throw std::runtime_error("error writing trace file " + path);
}

SimTrace load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceParseError("cannot read trace file " + path);
  return read_trace(in);
}

namespace {

// Worst-case error of one coordinate after 9-significant-digit rendering.
double render_error(double v) { return 5e-9 * std::abs(v) + 1e-300; }

double render_error(const Vec2& v) { return render_error(v.x()) + render_error(v.y()); }

}  // namespace

VerifyReport verify_trace(const SimTrace& trace) {
  const double r = trace.header.radius;
  const double delta = trace.header.delta;
  const std::size_t n = trace.agents.size();
  auto fail = [](int step, std::string msg) { return VerifyReport{false, step, std::move(msg)}; };

  for (std::size_t s = 0; s < trace.steps.size(); ++s) {
    const StepRecord& rec = trace.steps[s];
    const int step = rec.step;

    std::vector<Vec2> pts;
    pts.reserve(n);
    for (const auto& a : rec.agents) pts.push_back(a.position);
    const KdTree2 tree(pts);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j : tree.radius_query(pts[i], 2.0 * r)) {
        if (j <= i) continue;
        const double d = (pts[j] - pts[i]).norm();
        const double slack = kOverlapSlack + 2.0 * (render_error(pts[i]) + render_error(pts[j]));
        if (d < 2.0 * r - slack) {
          return fail(step, "step " + std::to_string(step) + ": agents " +
                                std::to_string(trace.agents[i].id) + " and " +
                                std::to_string(trace.agents[j].id) + " overlap (distance " +
                                format_real(d) + ")");
        }
      }
    }

    for (std::size_t i = 0; i < n; ++i) {
      const AgentSummary& agent = trace.agents[i];
      const AgentRecord& cur = rec.agents[i];
      const auto arrival = agent.arrival_step;
      const std::string who = "step " + std::to_string(step) + ": agent " + std::to_string(agent.id);

      if (s == 0) {
        if ((cur.position - agent.start).norm() > 2.0 * render_error(cur.position) + 1e-12) {
          return fail(step, who + " does not start at its recorded start");
        }
        continue;
      }
      const AgentRecord& prev = trace.steps[s - 1].agents[i];
      const Vec2 moved = cur.position - prev.position;
      const Vec2 expected = delta * cur.velocity;
      const double tol = 2.0 * (render_error(cur.position) + render_error(prev.position) +
                                delta * render_error(cur.velocity)) +
                         1e-12;
      if ((moved - expected).cwiseAbs().maxCoeff() > tol) {
        return fail(step, who + " displacement differs from delta * velocity");
      }
      if (arrival && step > *arrival) {
        if (cur.position != prev.position || !cur.velocity.isZero(0.0)) {
          return fail(step, who + " moved after arriving at step " + std::to_string(*arrival));
        }
      }
      if (arrival && step == *arrival) {
        const double slack = trace.header.arrival_tol + 2.0 * render_error(cur.position) +
                             2.0 * render_error(agent.target);
        if ((agent.target - cur.position).norm() > slack) {
          return fail(step, who + " marked arrived away from its target");
        }
      }
    }
  }

  if (trace.termination == Termination::completed) {
    for (const auto& a : trace.agents) {
      if (!a.arrival_step) {
        return fail(-1, "run marked completed but agent " + std::to_string(a.id) +
                            " never arrived");
      }
    }
  }
  return {};
}

}  // namespace lac
