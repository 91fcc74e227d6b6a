#include "skdv/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "skdv/csv.hpp"

namespace skdv {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"grid", {"n", "half_length"}},
      {"stepper",
       {"dt", "scheme", "t_end", "snapshot_stride", "dealias", "boundary_threshold", "splitting_phase_bound",
        "allow_test_regime"}},
      {"model", {"alpha", "beta", "gamma"}},
      {"initial",
       {"u", "u_amplitude", "u_width", "u_center", "u_carrier", "v", "v_amplitude", "v_width", "v_center",
        "v_carrier", "v_speed", "mollify_level", "scale"}},
      {"virial", {"p1", "p2", "theta2", "theta3"}},
      {"windows", {"specs"}},
      {"diagnostics",
       {"residual_every", "decay_start", "accumulator_power_excess", "power_k", "gn_constant", "blowup_factor"}},
      {"output", {"directory", "strict"}},
      {"sweep", {"seed"}},
  };
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  if (!std::isfinite(v)) throw ConfigError(key + ": value must be finite");
  return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::optional<double> to_auto_double(const std::string& key, const std::string& text) {
  if (trim(text) == "auto") return std::nullopt;
  return to_double(key, text);
}

struct Reader {
  const pt::ptree& tree;

  const pt::ptree* section(const std::string& name) const {
    const auto it = tree.find(name);
    return it == tree.not_found() ? nullptr : &it->second;
  }
  template <class F>
  void get(const std::string& sec, const std::string& key, F&& apply) const {
    if (const auto* s = section(sec)) {
      const auto it = s->find(key);
      if (it != s->not_found()) apply(sec + "." + key, it->second.data());
    }
  }
};

ProfileFamily family_from(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "zero") return ProfileFamily::zero;
  if (t == "gaussian") return ProfileFamily::gaussian;
  if (t == "modulated_gaussian") return ProfileFamily::modulated_gaussian;
  if (t == "kdv_soliton") return ProfileFamily::kdv_soliton;
  throw ConfigError(key + ": unknown profile '" + text + "'");
}

std::string family_name(ProfileFamily f) {
  switch (f) {
    case ProfileFamily::zero: return "zero";
    case ProfileFamily::gaussian: return "gaussian";
    case ProfileFamily::modulated_gaussian: return "modulated_gaussian";
    case ProfileFamily::kdv_soliton: return "kdv_soliton";
    case ProfileFamily::sum: return "sum";
    case ProfileFamily::samples: return "samples";
  }
  return "unknown";
}

std::vector<WindowSpec> parse_windows(const std::string& key, const std::string& text) {
  std::vector<WindowSpec> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream is(item);
    std::string part;
    while (std::getline(is, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw ConfigError(key + ": window '" + item + "' must be p:m:constant");
    out.push_back({to_double(key, parts[0]), to_double(key, parts[1]), to_double(key, parts[2])});
  }
  if (out.empty()) throw ConfigError(key + ": at least one window is required");
  return out;
}

void check_unknown(const pt::ptree& tree) {
  const auto& s = schema();
  for (const auto& [name, sec] : tree) {
    const auto it = s.find(name);
    if (it == s.end()) throw ConfigError("unknown section '" + name + "'");
    if (!sec.data().empty()) throw ConfigError("top-level key '" + name + "' outside a section");
    for (const auto& [key, value] : sec) {
      if (!it->second.contains(key)) throw ConfigError("unknown key '" + name + "." + key + "'");
      if (!value.empty()) throw ConfigError("nested key under '" + name + "." + key + "'");
    }
  }
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

GridPtr RunConfig::make_grid() const { return SpectralGrid::make(grid.n, grid.half_length); }

SystemState RunConfig::make_initial_state() const {
  try {
    return make_initial_data(initial, make_grid(), stepper.boundary_threshold);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("initial data rejected: ") + e.what());
  }
}

void RunConfig::validate() const {
  try {
    const auto g = make_grid();
    if (!(stepper.dt > 0.0)) throw ConfigError("stepper.dt must be positive");
    if (!(stepper.t_end > 0.0)) throw ConfigError("stepper.t_end must be positive");
    if (stepper.snapshot_stride == 0) throw ConfigError("stepper.snapshot_stride must be positive");
    stepper.num_steps();
    if (!(stepper.boundary_threshold > 0.0)) throw ConfigError("stepper.boundary_threshold must be positive");
    const Regime r = model.regime();
    if (r == Regime::invalid) throw ConfigError("model: alpha * gamma < 0 is not supported");
    if (r == Regime::decoupled_test && !stepper.allow_test_regime)
      throw ConfigError("model: alpha or gamma is zero; set stepper.allow_test_regime = true");
    initial.u.validate();
    initial.v.validate();
    if (!initial.v.is_real()) throw ConfigError("initial.v must be real");
    if (initial.u.family == ProfileFamily::kdv_soliton) throw ConfigError("initial.u cannot be a KdV soliton");
    if (initial.mollify_level && *initial.mollify_level < 1) throw ConfigError("initial.mollify_level must be >= 1");
    if (!std::isfinite(initial.scale)) throw ConfigError("initial.scale must be finite");
    virial.validate();
    for (const auto& w : windows) w.validate();
    if (windows.empty()) throw ConfigError("at least one window is required");
    if (!(diagnostics.decay_start >= 2.0)) throw ConfigError("diagnostics.decay_start must be >= 2");
    if (!(diagnostics.accumulator_power_excess > 0.0))
      throw ConfigError("diagnostics.accumulator_power_excess must be positive");
    if (!(diagnostics.power_k > 2.0)) throw ConfigError("diagnostics.power_k must exceed 2");
    if (diagnostics.gn_constant && !(*diagnostics.gn_constant > 0.0))
      throw ConfigError("diagnostics.gn_constant must be positive");
    if (!(diagnostics.blowup_factor > 1.0)) throw ConfigError("diagnostics.blowup_factor must exceed 1");
    // Building the data surfaces profiles that do not fit the box.
    make_initial_state();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

std::string RunConfig::canonical() const {
  std::map<std::string, std::string> kv;
  auto num = [](double x) { return format_double(x); };
  auto boolean = [](bool b) { return std::string(b ? "true" : "false"); };
  kv["grid.n"] = std::to_string(grid.n);
  kv["grid.half_length"] = num(grid.half_length);
  kv["stepper.dt"] = num(stepper.dt);
  kv["stepper.scheme"] = to_string(stepper.scheme);
  kv["stepper.t_end"] = num(stepper.t_end);
  kv["stepper.snapshot_stride"] = std::to_string(stepper.snapshot_stride);
  kv["stepper.dealias"] = boolean(stepper.dealias);
  kv["stepper.boundary_threshold"] = num(stepper.boundary_threshold);
  kv["stepper.splitting_phase_bound"] = num(stepper.splitting_phase_bound);
  kv["stepper.allow_test_regime"] = boolean(stepper.allow_test_regime);
  kv["model.alpha"] = num(model.alpha);
  kv["model.beta"] = num(model.beta);
  kv["model.gamma"] = num(model.gamma);
  auto profile = [&](const std::string& name, const Profile& pr) {
    kv["initial." + name] = family_name(pr.family);
    kv["initial." + name + "_amplitude"] = num(pr.amplitude);
    kv["initial." + name + "_width"] = num(pr.width);
    kv["initial." + name + "_center"] = num(pr.center);
    kv["initial." + name + "_carrier"] = num(pr.carrier);
    if (name == "v") kv["initial.v_speed"] = num(pr.speed);
  };
  profile("u", initial.u);
  profile("v", initial.v);
  kv["initial.mollify_level"] = initial.mollify_level ? std::to_string(*initial.mollify_level) : "none";
  kv["initial.scale"] = num(initial.scale);
  kv["virial.p1"] = num(virial.p1);
  kv["virial.p2"] = num(virial.p2);
  kv["virial.theta2"] = num(virial.theta2);
  kv["virial.theta3"] = virial.theta3 ? num(*virial.theta3) : "auto";
  std::string w;
  for (const auto& spec : windows) {
    if (!w.empty()) w += ",";
    w += num(spec.p) + ":" + num(spec.m) + ":" + num(spec.constant);
  }
  kv["windows.specs"] = w;
  kv["diagnostics.residual_every"] = std::to_string(diagnostics.residual_every);
  kv["diagnostics.decay_start"] = num(diagnostics.decay_start);
  kv["diagnostics.accumulator_power_excess"] = num(diagnostics.accumulator_power_excess);
  kv["diagnostics.power_k"] = num(diagnostics.power_k);
  kv["diagnostics.gn_constant"] = diagnostics.gn_constant ? num(*diagnostics.gn_constant) : "auto";
  kv["diagnostics.blowup_factor"] = num(diagnostics.blowup_factor);
  kv["output.strict"] = boolean(output.strict);
  kv["sweep.seed"] = std::to_string(seed);
  // The output directory is deliberately excluded: moving a run must not change its hash.
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::uint64_t RunConfig::hash() const { return fnv1a64(canonical()); }

std::string RunConfig::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  check_unknown(tree);
  const Reader r{tree};
  RunConfig c;

  r.get("grid", "n", [&](const auto& k, const auto& v) { c.grid.n = to_unsigned(k, v); });
  r.get("grid", "half_length", [&](const auto& k, const auto& v) { c.grid.half_length = to_double(k, v); });

  r.get("stepper", "dt", [&](const auto& k, const auto& v) { c.stepper.dt = to_double(k, v); });
  r.get("stepper", "scheme", [&](const auto& k, const auto& v) {
    const auto t = trim(v);
    if (t == "strang")
      c.stepper.scheme = Scheme::strang;
    else if (t == "lie")
      c.stepper.scheme = Scheme::lie;
    else
      throw ConfigError(k + ": expected strang or lie");
  });
  r.get("stepper", "t_end", [&](const auto& k, const auto& v) { c.stepper.t_end = to_double(k, v); });
  r.get("stepper", "snapshot_stride", [&](const auto& k, const auto& v) { c.stepper.snapshot_stride = to_unsigned(k, v); });
  r.get("stepper", "dealias", [&](const auto& k, const auto& v) { c.stepper.dealias = to_bool(k, v); });
  r.get("stepper", "boundary_threshold", [&](const auto& k, const auto& v) { c.stepper.boundary_threshold = to_double(k, v); });
  r.get("stepper", "splitting_phase_bound",
        [&](const auto& k, const auto& v) { c.stepper.splitting_phase_bound = to_double(k, v); });
  r.get("stepper", "allow_test_regime", [&](const auto& k, const auto& v) { c.stepper.allow_test_regime = to_bool(k, v); });

  r.get("model", "alpha", [&](const auto& k, const auto& v) { c.model.alpha = to_double(k, v); });
  r.get("model", "beta", [&](const auto& k, const auto& v) { c.model.beta = to_double(k, v); });
  r.get("model", "gamma", [&](const auto& k, const auto& v) { c.model.gamma = to_double(k, v); });

  for (const std::string name : {"u", "v"}) {
    Profile& pr = name == "u" ? c.initial.u : c.initial.v;
    r.get("initial", name, [&](const auto& k, const auto& v) { pr.family = family_from(k, v); });
    r.get("initial", name + "_amplitude", [&](const auto& k, const auto& v) { pr.amplitude = to_double(k, v); });
    r.get("initial", name + "_width", [&](const auto& k, const auto& v) { pr.width = to_double(k, v); });
    r.get("initial", name + "_center", [&](const auto& k, const auto& v) { pr.center = to_double(k, v); });
    r.get("initial", name + "_carrier", [&](const auto& k, const auto& v) { pr.carrier = to_double(k, v); });
  }
  r.get("initial", "v_speed", [&](const auto& k, const auto& v) { c.initial.v.speed = to_double(k, v); });
  r.get("initial", "mollify_level", [&](const auto& k, const auto& v) {
    if (trim(v) == "none")
      c.initial.mollify_level.reset();
    else
      c.initial.mollify_level = static_cast<int>(to_unsigned(k, v));
  });
  r.get("initial", "scale", [&](const auto& k, const auto& v) { c.initial.scale = to_double(k, v); });

  r.get("virial", "p1", [&](const auto& k, const auto& v) { c.virial.p1 = to_double(k, v); });
  r.get("virial", "p2", [&](const auto& k, const auto& v) { c.virial.p2 = to_double(k, v); });
  r.get("virial", "theta2", [&](const auto& k, const auto& v) { c.virial.theta2 = to_double(k, v); });
  r.get("virial", "theta3", [&](const auto& k, const auto& v) { c.virial.theta3 = to_auto_double(k, v); });

  r.get("windows", "specs", [&](const auto& k, const auto& v) { c.windows = parse_windows(k, v); });

  r.get("diagnostics", "residual_every", [&](const auto& k, const auto& v) { c.diagnostics.residual_every = to_unsigned(k, v); });
  r.get("diagnostics", "decay_start", [&](const auto& k, const auto& v) { c.diagnostics.decay_start = to_double(k, v); });
  r.get("diagnostics", "accumulator_power_excess",
        [&](const auto& k, const auto& v) { c.diagnostics.accumulator_power_excess = to_double(k, v); });
  r.get("diagnostics", "power_k", [&](const auto& k, const auto& v) { c.diagnostics.power_k = to_double(k, v); });
  r.get("diagnostics", "gn_constant", [&](const auto& k, const auto& v) { c.diagnostics.gn_constant = to_auto_double(k, v); });
  r.get("diagnostics", "blowup_factor", [&](const auto& k, const auto& v) { c.diagnostics.blowup_factor = to_double(k, v); });

  r.get("output", "directory", [&](const auto&, const auto& v) { c.output.directory = trim(v); });
  r.get("output", "strict", [&](const auto& k, const auto& v) { c.output.strict = to_bool(k, v); });
  r.get("sweep", "seed", [&](const auto& k, const auto& v) { c.seed = to_unsigned(k, v); });

  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace skdv
