#include "adhdp/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "adhdp/errors.hpp"

namespace adhdp {

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  return s;
}

double parse_double(const std::string& key, const std::string& v) {
  std::istringstream in(v);
  in.imbue(std::locale::classic());
  double out = 0;
  in >> out;
  if (in.fail() || !(in >> std::ws).eof() || !std::isfinite(out))
    throw ConfigError("key '" + key + "': expected a finite number, got '" + v + "'");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* first = v.data();
  const auto* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last)
    throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + v + "'");
  return out;
}

std::vector<double> parse_vector(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) out.push_back(parse_double(key, trim(item)));
  if (out.empty()) throw ConfigError("key '" + key + "': expected a comma-separated list");
  return out;
}

// Shortest text that round-trips the double exactly.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct KeyDef {
  const char* section;
  const char* name;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define ADHDP_DOUBLE(sec, field)                                                             \
  KeyDef {                                                                                  \
    sec, #field, [](ExperimentConfig& c, const std::string& v) { c.field = parse_double(#field, v); }, \
        [](const ExperimentConfig& c) { return fmt(c.field); }                               \
  }
#define ADHDP_SIZE(sec, field)                                                                      \
  KeyDef {                                                                                         \
    sec, #field, [](ExperimentConfig& c, const std::string& v) { c.field = parse_u64(#field, v); }, \
        [](const ExperimentConfig& c) { return std::to_string(c.field); }                           \
  }

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table = {
      {"experiment", "plant",
       [](ExperimentConfig& c, const std::string& v) {
         const std::string s = lower(v);
         if (s == "linear") c.plant = PlantKind::Linear;
         else if (s == "cartpole" || s == "cart-pole") c.plant = PlantKind::CartPole;
         else throw ConfigError("key 'plant': expected linear or cartpole, got '" + v + "'");
       },
       [](const ExperimentConfig& c) { return to_string(c.plant); }},
      ADHDP_SIZE("experiment", seed),
      ADHDP_SIZE("experiment", trials_per_run),
      ADHDP_SIZE("experiment", success_steps),
      ADHDP_SIZE("experiment", eval_steps),
      {"experiment", "output_dir", [](ExperimentConfig& c, const std::string& v) { c.output_dir = v; },
       [](const ExperimentConfig& c) { return c.output_dir.string(); }},

      {"learner", "mode",
       [](ExperimentConfig& c, const std::string& v) {
         const std::string s = lower(v);
         if (s == "full" || s == "adpfull") c.mode = TrainingMode::Full;
         else if (s == "part" || s == "adppart") c.mode = TrainingMode::Part;
         else throw ConfigError("key 'mode': expected full or part, got '" + v + "'");
       },
       [](const ExperimentConfig& c) { return to_string(c.mode); }},
      ADHDP_DOUBLE("learner", alpha),
      ADHDP_DOUBLE("learner", lc),
      ADHDP_DOUBLE("learner", la),
      ADHDP_SIZE("learner", hidden_c),
      ADHDP_SIZE("learner", hidden_a),
      ADHDP_SIZE("learner", internal_iterations),
      ADHDP_SIZE("learner", internal_iterations_critic),
      ADHDP_SIZE("learner", internal_iterations_action),
      ADHDP_DOUBLE("learner", stop_tolerance),
      ADHDP_DOUBLE("learner", uc),
      ADHDP_DOUBLE("learner", weight_scale),

      {"gate", "gate_policy",
       [](ExperimentConfig& c, const std::string& v) {
         const std::string s = lower(v);
         if (s == "off") c.gate_policy = GatePolicy::Off;
         else if (s == "observe") c.gate_policy = GatePolicy::Observe;
         else if (s == "clamp") c.gate_policy = GatePolicy::Clamp;
         else throw ConfigError("key 'gate_policy': expected off, observe or clamp, got '" + v + "'");
       },
       [](const ExperimentConfig& c) { return to_string(c.gate_policy); }},
      ADHDP_DOUBLE("gate", gate_margin),
      {"gate", "gamma1", [](ExperimentConfig& c, const std::string& v) { c.gammas.gamma1 = parse_double("gamma1", v); },
       [](const ExperimentConfig& c) { return fmt(c.gammas.gamma1); }},
      {"gate", "gamma2", [](ExperimentConfig& c, const std::string& v) { c.gammas.gamma2 = parse_double("gamma2", v); },
       [](const ExperimentConfig& c) { return fmt(c.gammas.gamma2); }},
      {"gate", "gamma3", [](ExperimentConfig& c, const std::string& v) { c.gammas.gamma3 = parse_double("gamma3", v); },
       [](const ExperimentConfig& c) { return fmt(c.gammas.gamma3); }},

      {"plant", "initial_state",
       [](ExperimentConfig& c, const std::string& v) { c.initial_state = parse_vector("initial_state", v); },
       [](const ExperimentConfig& c) {
         std::string out;
         for (std::size_t i = 0; i < c.initial_state.size(); ++i) out += (i ? ", " : "") + fmt(c.initial_state[i]);
         return out;
       }},
      ADHDP_DOUBLE("plant", init_perturbation),
      ADHDP_SIZE("plant", max_steps_linear),
      ADHDP_DOUBLE("plant", linear_settle_tolerance),
      ADHDP_SIZE("plant", linear_settle_window),
      ADHDP_SIZE("plant", linear_settle_deadline),
      ADHDP_DOUBLE("plant", linear_divergence_bound),
      ADHDP_DOUBLE("plant", cartpole.g),
      ADHDP_DOUBLE("plant", cartpole.m_c),
      ADHDP_DOUBLE("plant", cartpole.m_p),
      ADHDP_DOUBLE("plant", cartpole.l),
      ADHDP_DOUBLE("plant", cartpole.force_mag),
      ADHDP_DOUBLE("plant", cartpole.dt),
      {"plant", "cartpole.theta_limit_deg",
       [](ExperimentConfig& c, const std::string& v) {
         c.cartpole.theta_limit = parse_double("cartpole.theta_limit_deg", v) * kDegToRad;
       },
       [](const ExperimentConfig& c) { return fmt(c.cartpole.theta_limit / kDegToRad); }},
      ADHDP_DOUBLE("plant", cartpole.x_limit),
      ADHDP_DOUBLE("plant", cartpole.theta_dot_scale),
      ADHDP_DOUBLE("plant", cartpole.x_dot_scale),
  };
  return table;
}

#undef ADHDP_DOUBLE
#undef ADHDP_SIZE

const KeyDef& find_key(const std::string& key) {
  for (const auto& def : key_table())
    if (key == def.name) return def;
  throw ConfigError("unknown configuration key '" + key + "'");
}

}  // namespace

std::string to_string(PlantKind kind) { return kind == PlantKind::Linear ? "linear" : "cartpole"; }
std::string to_string(TrainingMode mode) { return mode == TrainingMode::Full ? "full" : "part"; }
std::string to_string(GatePolicy policy) {
  switch (policy) {
    case GatePolicy::Off: return "off";
    case GatePolicy::Observe: return "observe";
    case GatePolicy::Clamp: return "clamp";
  }
  return "off";
}

LearnerConfig ExperimentConfig::learner_config() const {
  LearnerConfig lc_cfg;
  lc_cfg.alpha = alpha;
  lc_cfg.lc = lc;
  lc_cfg.la = la;
  lc_cfg.mode = mode;
  lc_cfg.internal_iterations_critic = internal_iterations_critic ? internal_iterations_critic : internal_iterations;
  lc_cfg.internal_iterations_action = internal_iterations_action ? internal_iterations_action : internal_iterations;
  lc_cfg.uc = uc;
  lc_cfg.stop_tolerance = stop_tolerance;
  return lc_cfg;
}

void ExperimentConfig::validate() const {
  learner_config().validate();
  if (hidden_c == 0 || hidden_a == 0) throw ConfigError("hidden layer sizes must be positive");
  if (trials_per_run == 0) throw ConfigError("trials_per_run must be positive");
  if (success_steps == 0) throw ConfigError("success_steps must be positive");
  if (!(weight_scale > 0.0)) throw ConfigError("weight_scale must be positive");
  if (!(init_perturbation >= 0.0)) throw ConfigError("init_perturbation must be non-negative");
  if (gate_policy != GatePolicy::Off) {
    if (!(gate_margin > 0.0 && gate_margin <= 1.0)) throw ConfigError("gate_margin must lie in (0, 1]");
    const auto violations = validate_gammas(alpha, gammas);
    if (!violations.empty()) throw ConfigError("gamma constraint violated: " + violations.front().inequality);
  }
  const std::size_t want = plant == PlantKind::Linear ? 1 : 4;
  if (initial_state.size() != want)
    throw ConfigError("initial_state must have " + std::to_string(want) + " component(s) for plant " +
                      to_string(plant));
  if (plant == PlantKind::Linear) {
    if (max_steps_linear == 0) throw ConfigError("max_steps_linear must be positive");
    if (linear_settle_window == 0) throw ConfigError("linear_settle_window must be positive");
    if (!(linear_divergence_bound > 0.0)) throw ConfigError("linear_divergence_bound must be positive");
  } else {
    const auto& p = cartpole;
    for (double v : {p.g, p.m_c, p.m_p, p.l, p.force_mag, p.dt, p.theta_limit, p.x_limit, p.theta_dot_scale,
                     p.x_dot_scale})
      if (!(v > 0.0)) throw ConfigError("cart-pole parameters must all be positive");
  }
}

ExperimentConfig linear_preset() {
  ExperimentConfig c;
  c.plant = PlantKind::Linear;
  c.internal_iterations = 50;
  c.eval_steps = 50;
  c.gate_policy = GatePolicy::Clamp;
  c.initial_state = {1.0};
  return c;
}

ExperimentConfig cartpole_preset(double initial_angle_deg) {
  ExperimentConfig c;
  c.plant = PlantKind::CartPole;
  c.internal_iterations = 100;
  c.success_steps = 600;
  c.eval_steps = 6000;
  c.gate_policy = GatePolicy::Observe;
  c.initial_state = {initial_angle_deg, 0.0, 0.0, 0.0};
  return c;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& def : key_table()) out.emplace_back(def.name);
    return out;
  }();
  return keys;
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  find_key(key).set(cfg, trim(value));
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      const KeyDef& def = find_key(key);
      if (!section.empty() && section != def.section)
        throw ConfigError("key '" + key + "' belongs in section [" + def.section + "], found in [" + section + "]");
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
    entries.emplace_back(key, value);
  }

  ExperimentConfig cfg = linear_preset();
  for (const auto& [key, value] : entries) {
    if (key != "plant") continue;
    ExperimentConfig probe;
    set_config_value(probe, key, value);
    cfg = probe.plant == PlantKind::Linear ? linear_preset() : cartpole_preset();
  }
  for (const auto& [key, value] : entries) {
    try {
      set_config_value(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

void apply_overrides(ExperimentConfig& cfg, const std::vector<std::pair<std::string, std::string>>& overrides) {
  for (const auto& [key, value] : overrides) set_config_value(cfg, key, value);
}

std::string render_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  std::string section;
  for (const auto& def : key_table()) {
    if (section != def.section) {
      if (!section.empty()) out << '\n';
      section = def.section;
      out << '[' << section << "]\n";
    }
    out << def.name << " = " << def.get(cfg) << '\n';
  }
  return out.str();
}

}  // namespace adhdp
