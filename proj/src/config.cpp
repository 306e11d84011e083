#include "wavemaps/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace wm {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

const std::map<std::string, Experiment>& experiment_names() {
  static const std::map<std::string, Experiment> m{
      {"exact_residuals", Experiment::exact_residuals},
      {"transport_decay", Experiment::transport_decay},
      {"descent_roundtrip", Experiment::descent_roundtrip},
      {"spectrum_scan", Experiment::spectrum_scan},
      {"stability_run", Experiment::stability_run},
      {"energy_monotonicity", Experiment::energy_monotonicity}};
  return m;
}

double to_double(const std::string& field, const std::string& v, int line) {
  size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size() || !std::isfinite(x))
    throw ConfigError("line " + std::to_string(line) + ": field '" + field + "': not a number: '" + v + "'");
  return x;
}

long long to_int(const std::string& field, const std::string& v, int line) {
  size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size())
    throw ConfigError("line " + std::to_string(line) + ": field '" + field + "': not an integer: '" + v + "'");
  return x;
}

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [k, v] : experiment_names())
    if (v == e) return k;
  return "unknown";
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  bool width_set = false, have_experiment = false;
  using Setter = std::function<void(const std::string&, const std::string&, int)>;
  auto dbl = [](double& dst) -> Setter {
    return [&dst](const std::string& f, const std::string& v, int l) { dst = to_double(f, v, l); };
  };
  const std::map<std::string, Setter> keys{
      {"experiment",
       [&](const std::string& f, const std::string& v, int l) {
         const auto it = experiment_names().find(v);
         if (it == experiment_names().end())
           throw ConfigError("line " + std::to_string(l) + ": field '" + f + "': unknown experiment '" + v + "'");
         c.experiment = it->second;
         have_experiment = true;
       }},
      {"seed",
       [&](const std::string& f, const std::string& v, int l) {
         const long long s = to_int(f, v, l);
         if (s < 0) throw ConfigError("line " + std::to_string(l) + ": field 'seed' must be >= 0");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"output_dir", [&](const std::string&, const std::string& v, int) { c.output_dir = v; }},
      {"b", dbl(c.b)},
      {"epsilon", dbl(c.epsilon)},
      {"s_max", dbl(c.s_max)},
      {"grid.n_points",
       [&](const std::string& f, const std::string& v, int l) { c.n_points = static_cast<int>(to_int(f, v, l)); }},
      {"grid.r_max", dbl(c.r_max)},
      {"perturbation.amplitude", dbl(c.perturbation.amplitude)},
      {"perturbation.width",
       [&](const std::string& f, const std::string& v, int l) {
         c.perturbation.width = to_double(f, v, l);
         width_set = true;
       }},
      {"perturbation.center", dbl(c.perturbation.center)},
      {"perturbation.g_scale", dbl(c.perturbation.g_scale)},
      {"perturbation.profile",
       [&](const std::string& f, const std::string& v, int l) {
         if (v == "gaussian_bump")
           c.perturbation.profile = cauchy::Profile::gaussian_bump;
         else if (v == "polynomial_bump")
           c.perturbation.profile = cauchy::Profile::polynomial_bump;
         else
           throw ConfigError("line " + std::to_string(l) + ": field '" + f + "': unknown profile '" + v + "'");
       }},
      {"tolerances.T_tol", dbl(c.tol.T_tol)},
      {"tolerances.match", dbl(c.tol.match)},
      {"tolerances.shoot", dbl(c.tol.shoot)},
      {"tolerances.energy", dbl(c.tol.energy)},
      {"tolerances.finite_speed", dbl(c.tol.finite_speed)},
  };
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find_first_of("#;");
    if (hash != std::string::npos) s.erase(hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("line " + std::to_string(line) + ": malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "grid" && section != "perturbation" && section != "tolerances" && section != "run")
        throw ConfigError("line " + std::to_string(line) + ": unknown section [" + section + "]");
      if (section == "run") section.clear();
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;
    const auto it = keys.find(full);
    if (it == keys.end()) throw ConfigError("line " + std::to_string(line) + ": unknown field '" + full + "'");
    if (value.empty()) throw ConfigError("line " + std::to_string(line) + ": field '" + full + "': empty value");
    it->second(full, value, line);
  }
  if (!have_experiment) throw ConfigError("field 'experiment' is required");
  c.perturbation.eps = c.epsilon;
  if (!width_set) c.perturbation.width = c.epsilon / 6.0;
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (!(c.b > 0 && c.b <= 0.9)) fail("field 'b' must lie in (0, 0.9]");
  if (c.n_points < 64) fail("field 'grid.n_points' must be >= 64");
  if (c.n_points > 4097) fail("field 'grid.n_points' must be <= 4097");
  if (!(c.epsilon > 0 && c.epsilon < 1.0 / 9.0)) fail("field 'epsilon' must lie in (0, 1/9)");
  if (!(c.s_max > 0)) fail("field 's_max' must be > 0");
  if (c.r_max < 0) fail("field 'grid.r_max' must be >= 0");
  if (!(c.perturbation.width > 0)) fail("field 'perturbation.width' must be > 0");
  if (c.perturbation.amplitude < 0) fail("field 'perturbation.amplitude' must be >= 0");
  const std::pair<const char*, double> tols[] = {{"tolerances.T_tol", c.tol.T_tol},
                                                 {"tolerances.match", c.tol.match},
                                                 {"tolerances.shoot", c.tol.shoot},
                                                 {"tolerances.energy", c.tol.energy},
                                                 {"tolerances.finite_speed", c.tol.finite_speed}};
  for (const auto& [name, v] : tols)
    if (!(v > 0)) fail(std::string("field '") + name + "' must be > 0");
  if (c.output_dir.empty()) fail("field 'output_dir' must not be empty");
}

nlohmann::ordered_json config_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["experiment"] = to_string(c.experiment);
  j["seed"] = c.seed;
  j["b"] = c.b;
  j["epsilon"] = c.epsilon;
  j["s_max"] = c.s_max;
  j["grid"] = {{"n_points", c.n_points}, {"r_max", c.r_max}};
  j["perturbation"] = {
      {"amplitude", c.perturbation.amplitude},
      {"width", c.perturbation.width},
      {"center", c.perturbation.center},
      {"profile",
       c.perturbation.profile == cauchy::Profile::gaussian_bump ? "gaussian_bump" : "polynomial_bump"},
      {"g_scale", c.perturbation.g_scale}};
  j["tolerances"] = {{"T_tol", c.tol.T_tol},
                     {"match", c.tol.match},
                     {"shoot", c.tol.shoot},
                     {"energy", c.tol.energy},
                     {"finite_speed", c.tol.finite_speed}};
  return j;
}

}  // namespace wm
