#include "omrl/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "omrl/errors.hpp"
#include "omrl/io.hpp"

namespace omrl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
  throw ConfigError("config key '" + key + "': " + why);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0') bad_key(key, "expected a number, got '" + value + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0') bad_key(key, "expected an integer, got '" + value + "'");
  return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0') bad_key(key, "expected an unsigned integer");
  return v;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::istringstream ss(value);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_double(key, trim(tok)));
  if (out.empty()) bad_key(key, "expected a comma-separated list");
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::istringstream ss(value);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_int(key, trim(tok)));
  if (out.empty()) bad_key(key, "expected a comma-separated list");
  return out;
}

struct RawEntry {
  std::string key;  // "section.name"
  std::string value;
  int line;
};

std::vector<RawEntry> tokenize(const std::string& text, const std::string& origin) {
  std::vector<RawEntry> entries;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside any [section]");
    const std::string key = section + "." + trim(t.substr(0, eq));
    if (!seen.insert(key).second)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    entries.push_back({key, trim(t.substr(eq + 1)), lineno});
  }
  return entries;
}

std::string find_value(const std::vector<RawEntry>& entries, const std::string& key) {
  for (const auto& e : entries)
    if (e.key == key) return e.value;
  return "";
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    system.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config section 'system': ") + e.what());
  }
  try {
    target.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config section 'target': ") + e.what());
  }
  try {
    rl.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config section 'rl': ") + e.what());
  }
  if (schedule.steps < 1) throw ConfigError("config key 'schedule.steps': must be >= 1");
  if (!(schedule.total_time > 0))
    throw ConfigError("config key 'schedule.total_time': must be > 0");
  if (!(schedule.omega_max > 0)) throw ConfigError("config key 'schedule.omega_max': must be > 0");

  const bool single = system.is_single();
  if (target.family == TargetFamily::Bell && single)
    throw ConfigError("config key 'target.family': bell targets need system.kind = double");
  if (target.family != TargetFamily::Bell && !single)
    throw ConfigError("config key 'target.family': fock/superposition targets need system.kind = single");
  if (single && target.max_index() >= system.nm1)
    throw ConfigError("config key 'target.n': index must be below system.nm");
  if (output.dir.empty()) throw ConfigError("config key 'output.dir': must be non-empty");
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  const auto entries = tokenize(text, origin);

  const std::string kind = find_value(entries, "system.kind");
  if (kind.empty()) throw ConfigError("config key 'system.kind' is required (single or double)");
  ExperimentConfig cfg;
  if (kind == "single") {
    cfg.system.kind = SystemKind::Single;
    cfg.system.nm2 = 1;
  } else if (kind == "double") {
    cfg.system.kind = SystemKind::Double;
    cfg.system.nm2 = 2;
  } else {
    bad_key("system.kind", "expected single or double");
  }
  const bool single = cfg.system.is_single();

  const std::string family = find_value(entries, "target.family");
  if (family.empty())
    throw ConfigError("config key 'target.family' is required (fock, superposition, or bell)");

  std::vector<double> weights;
  bool weights_given = false;

  for (const auto& e : entries) {
    const std::string& k = e.key;
    const std::string& v = e.value;
    if (k == "system.kind" || k == "target.family") continue;

    if (k == "system.omega_m" && single) cfg.system.omega_m1 = parse_double(k, v);
    else if (k == "system.g0" && single) cfg.system.g01 = parse_double(k, v);
    else if (k == "system.gamma_m" && single) cfg.system.gamma_m1 = parse_double(k, v);
    else if (k == "system.n_th" && single) cfg.system.n_th1 = parse_double(k, v);
    else if (k == "system.nm" && single) cfg.system.nm1 = parse_int(k, v);
    else if (k == "system.omega_m1" && !single) cfg.system.omega_m1 = parse_double(k, v);
    else if (k == "system.omega_m2" && !single) cfg.system.omega_m2 = parse_double(k, v);
    else if (k == "system.g01" && !single) cfg.system.g01 = parse_double(k, v);
    else if (k == "system.g02" && !single) cfg.system.g02 = parse_double(k, v);
    else if (k == "system.gamma_m1" && !single) cfg.system.gamma_m1 = parse_double(k, v);
    else if (k == "system.gamma_m2" && !single) cfg.system.gamma_m2 = parse_double(k, v);
    else if (k == "system.n_th1" && !single) cfg.system.n_th1 = parse_double(k, v);
    else if (k == "system.n_th2" && !single) cfg.system.n_th2 = parse_double(k, v);
    else if (k == "system.nm1" && !single) cfg.system.nm1 = parse_int(k, v);
    else if (k == "system.nm2" && !single) cfg.system.nm2 = parse_int(k, v);
    else if (k == "system.kappa") cfg.system.kappa = parse_double(k, v);
    else if (k == "system.nc") cfg.system.nc = parse_int(k, v);

    else if (k == "target.n") {
      if (family != "fock") bad_key(k, "only valid for target.family = fock");
      cfg.target.indices = {parse_int(k, v)};
    } else if (k == "target.indices") {
      if (family != "superposition") bad_key(k, "only valid for target.family = superposition");
      cfg.target.indices = parse_int_list(k, v);
    } else if (k == "target.weights") {
      if (family != "superposition") bad_key(k, "only valid for target.family = superposition");
      weights = parse_double_list(k, v);
      weights_given = true;
    } else if (k == "target.state") {
      if (family != "bell") bad_key(k, "only valid for target.family = bell");
      if (v == "phi_plus") cfg.target.bell = BellState::PhiPlus;
      else if (v == "phi_minus") cfg.target.bell = BellState::PhiMinus;
      else if (v == "psi_plus") cfg.target.bell = BellState::PsiPlus;
      else if (v == "psi_minus") cfg.target.bell = BellState::PsiMinus;
      else bad_key(k, "expected phi_plus, phi_minus, psi_plus, or psi_minus");
    }

    else if (k == "schedule.total_time") cfg.schedule.total_time = parse_double(k, v);
    else if (k == "schedule.steps") cfg.schedule.steps = parse_int(k, v);
    else if (k == "schedule.omega_max") cfg.schedule.omega_max = parse_double(k, v);
    else if (k == "schedule.fidelity") {
      if (v == "reduced") cfg.schedule.fidelity_mode = FidelityMode::Reduced;
      else if (v == "projected") cfg.schedule.fidelity_mode = FidelityMode::JointProjected;
      else bad_key(k, "expected reduced or projected");
    }

    else if (k == "rl.epochs") cfg.rl.epochs = parse_int(k, v);
    else if (k == "rl.warmup") cfg.rl.warmup_epochs = parse_int(k, v);
    else if (k == "rl.batch") cfg.rl.batch_size = parse_int(k, v);
    else if (k == "rl.tau") cfg.rl.tau = parse_double(k, v);
    else if (k == "rl.gamma") cfg.rl.gamma_discount = parse_double(k, v);
    else if (k == "rl.actor_lr") cfg.rl.actor_lr = parse_double(k, v);
    else if (k == "rl.critic_lr") cfg.rl.critic_lr = parse_double(k, v);
    else if (k == "rl.noise_sigma") cfg.rl.noise_sigma = parse_double(k, v);
    else if (k == "rl.noise_decay") cfg.rl.noise_decay = parse_double(k, v);
    else if (k == "rl.capacity") cfg.rl.buffer_capacity = parse_int(k, v);
    else if (k == "rl.hidden1") cfg.rl.hidden1 = parse_int(k, v);
    else if (k == "rl.hidden2") cfg.rl.hidden2 = parse_int(k, v);
    else if (k == "rl.seed") cfg.rl.seed = parse_u64(k, v);
    else if (k == "rl.checkpoint_every") cfg.rl.checkpoint_every = parse_int(k, v);
    else if (k == "rl.stop_fidelity") cfg.rl.stop_fidelity = parse_double(k, v);

    else if (k == "output.dir") cfg.output.dir = v;

    else bad_key(k, "unknown key");
  }

  if (family == "fock") {
    cfg.target.family = TargetFamily::Fock;
    if (cfg.target.indices.empty()) throw ConfigError("config key 'target.n' is required for fock targets");
    cfg.target.weights = {1.0};
  } else if (family == "superposition") {
    cfg.target.family = TargetFamily::Superposition;
    if (cfg.target.indices.empty())
      throw ConfigError("config key 'target.indices' is required for superposition targets");
    if (!weights_given) {
      weights.assign(cfg.target.indices.size(), 1.0);
    } else if (weights.size() != cfg.target.indices.size()) {
      bad_key("target.weights", "must have one weight per index");
    }
    double norm2 = 0.0;
    for (double w : weights) norm2 += w * w;
    if (norm2 <= 0.0) bad_key("target.weights", "must not all be zero");
    // normalize, but keep already-normalized weights verbatim so a config
    // echo round-trips byte for byte
    const double scale = (std::abs(norm2 - 1.0) <= 1e-12) ? 1.0 : 1.0 / std::sqrt(norm2);
    cfg.target.weights.clear();
    for (double w : weights) cfg.target.weights.push_back(w * scale);
  } else if (family == "bell") {
    cfg.target.family = TargetFamily::Bell;
  } else {
    bad_key("target.family", "expected fock, superposition, or bell");
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  return parse_config(read_text_file(path), path);
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  const bool single = cfg.system.is_single();
  os << "[system]\n";
  os << "kind = " << (single ? "single" : "double") << "\n";
  if (single) {
    os << "omega_m = " << format_double(cfg.system.omega_m1) << "\n";
    os << "g0 = " << format_double(cfg.system.g01) << "\n";
    os << "kappa = " << format_double(cfg.system.kappa) << "\n";
    os << "gamma_m = " << format_double(cfg.system.gamma_m1) << "\n";
    os << "n_th = " << format_double(cfg.system.n_th1) << "\n";
    os << "nc = " << cfg.system.nc << "\n";
    os << "nm = " << cfg.system.nm1 << "\n";
  } else {
    os << "omega_m1 = " << format_double(cfg.system.omega_m1) << "\n";
    os << "omega_m2 = " << format_double(cfg.system.omega_m2) << "\n";
    os << "g01 = " << format_double(cfg.system.g01) << "\n";
    os << "g02 = " << format_double(cfg.system.g02) << "\n";
    os << "kappa = " << format_double(cfg.system.kappa) << "\n";
    os << "gamma_m1 = " << format_double(cfg.system.gamma_m1) << "\n";
    os << "gamma_m2 = " << format_double(cfg.system.gamma_m2) << "\n";
    os << "n_th1 = " << format_double(cfg.system.n_th1) << "\n";
    os << "n_th2 = " << format_double(cfg.system.n_th2) << "\n";
    os << "nc = " << cfg.system.nc << "\n";
    os << "nm1 = " << cfg.system.nm1 << "\n";
    os << "nm2 = " << cfg.system.nm2 << "\n";
  }
  os << "\n[target]\n";
  switch (cfg.target.family) {
    case TargetFamily::Fock:
      os << "family = fock\n";
      os << "n = " << cfg.target.indices.front() << "\n";
      break;
    case TargetFamily::Superposition: {
      os << "family = superposition\n";
      os << "indices = ";
      for (std::size_t i = 0; i < cfg.target.indices.size(); ++i)
        os << (i ? "," : "") << cfg.target.indices[i];
      os << "\nweights = ";
      for (std::size_t i = 0; i < cfg.target.weights.size(); ++i)
        os << (i ? "," : "") << format_double(cfg.target.weights[i].real());
      os << "\n";
      break;
    }
    case TargetFamily::Bell: {
      os << "family = bell\n";
      const char* name = "phi_plus";
      if (cfg.target.bell == BellState::PhiMinus) name = "phi_minus";
      if (cfg.target.bell == BellState::PsiPlus) name = "psi_plus";
      if (cfg.target.bell == BellState::PsiMinus) name = "psi_minus";
      os << "state = " << name << "\n";
      break;
    }
  }
  os << "\n[schedule]\n";
  os << "total_time = " << format_double(cfg.schedule.total_time) << "\n";
  os << "steps = " << cfg.schedule.steps << "\n";
  os << "omega_max = " << format_double(cfg.schedule.omega_max) << "\n";
  os << "fidelity = "
     << (cfg.schedule.fidelity_mode == FidelityMode::Reduced ? "reduced" : "projected") << "\n";
  os << "\n[rl]\n";
  os << "epochs = " << cfg.rl.epochs << "\n";
  os << "warmup = " << cfg.rl.warmup_epochs << "\n";
  os << "batch = " << cfg.rl.batch_size << "\n";
  os << "tau = " << format_double(cfg.rl.tau) << "\n";
  os << "gamma = " << format_double(cfg.rl.gamma_discount) << "\n";
  os << "actor_lr = " << format_double(cfg.rl.actor_lr) << "\n";
  os << "critic_lr = " << format_double(cfg.rl.critic_lr) << "\n";
  os << "noise_sigma = " << format_double(cfg.rl.noise_sigma) << "\n";
  os << "noise_decay = " << format_double(cfg.rl.noise_decay) << "\n";
  os << "capacity = " << cfg.rl.buffer_capacity << "\n";
  os << "hidden1 = " << cfg.rl.hidden1 << "\n";
  os << "hidden2 = " << cfg.rl.hidden2 << "\n";
  os << "seed = " << cfg.rl.seed << "\n";
  os << "checkpoint_every = " << cfg.rl.checkpoint_every << "\n";
  os << "stop_fidelity = " << format_double(cfg.rl.stop_fidelity) << "\n";
  os << "\n[output]\n";
  os << "dir = " << cfg.output.dir << "\n";
  return os.str();
}

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig cfg;
  cfg.system.kind = SystemKind::Single;
  cfg.system.omega_m1 = 1.0;
  cfg.system.kappa = 0.002;
  cfg.system.gamma_m1 = 0.0004;
  cfg.system.n_th1 = 0.0;
  cfg.system.nc = 3;
  cfg.system.nm2 = 1;
  cfg.schedule.omega_max = 0.2;

  if (name == "fock2") {
    cfg.system.g01 = 0.839;
    cfg.system.nm1 = 10;
    cfg.schedule.total_time = 50.0;
    cfg.schedule.steps = 50;
    cfg.target = TargetSpec::fock(2);
  } else if (name == "fock6") {
    cfg.system.g01 = 1.752;
    cfg.system.nm1 = 13;
    cfg.schedule.total_time = 98.0;
    cfg.schedule.steps = 98;
    cfg.target = TargetSpec::fock(6);
  } else if (name == "sup02") {
    cfg.system.g01 = 0.78;
    cfg.system.nm1 = 11;
    cfg.schedule.total_time = 50.0;
    cfg.schedule.steps = 50;
    cfg.target = TargetSpec::superposition({0, 2});
  } else if (name == "sup06") {
    cfg.system.g01 = 1.716;
    cfg.system.nm1 = 13;
    cfg.schedule.total_time = 98.0;
    cfg.schedule.steps = 98;
    cfg.target = TargetSpec::superposition({0, 6});
  } else if (name == "sup12") {
    cfg.system.g01 = 0.89;
    cfg.system.nm1 = 10;
    cfg.schedule.total_time = 50.0;
    cfg.schedule.steps = 50;
    cfg.target = TargetSpec::superposition({1, 2});
  } else if (name == "bell_phi_plus" || name == "bell_psi_plus") {
    cfg.system.kind = SystemKind::Double;
    cfg.system.omega_m1 = 1.0;
    cfg.system.g01 = 1.0;
    cfg.system.nm1 = 5;
    cfg.system.nm2 = 5;
    cfg.schedule.total_time = 100.0;
    cfg.schedule.steps = 100;
    if (name == "bell_phi_plus") {
      cfg.system.omega_m2 = 0.918;
      cfg.system.g02 = 0.918;
      cfg.system.kappa = 0.002;
      cfg.system.gamma_m1 = cfg.system.gamma_m2 = 0.0004;
      cfg.target = TargetSpec::bell_state(BellState::PhiPlus);
    } else {
      cfg.system.omega_m2 = 0.598;
      cfg.system.g02 = 0.595;
      cfg.system.kappa = 0.001;
      cfg.system.gamma_m1 = cfg.system.gamma_m2 = 0.0002;
      cfg.target = TargetSpec::bell_state(BellState::PsiPlus);
    }
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  cfg.output.dir = "runs/" + name;
  cfg.validate();
  return cfg;
}

std::vector<std::string> preset_names() {
  return {"fock2", "fock6", "sup02", "sup06", "sup12", "bell_phi_plus", "bell_psi_plus"};
}

}  // namespace omrl
