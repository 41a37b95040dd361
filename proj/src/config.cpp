#include "nascd/config.hpp"

#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <string_view>

#include "json.hpp"

#include "nascd/controller.hpp"
#include "nascd/errors.hpp"

namespace nascd {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + " must be an object");
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& ctx) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const std::string_view a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError("unknown key '" + key + "' in " + ctx);
  }
}

const json& require_key(const json& obj, const char* key, const std::string& ctx) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(ctx + " is missing required key '" + key + "'");
  return *it;
}

double as_number(const json& j, const std::string& ctx) {
  if (!j.is_number()) throw ConfigError(ctx + " must be a number");
  return j.get<double>();
}

double get_number(const json& obj, const char* key, const std::string& ctx) {
  return as_number(require_key(obj, key, ctx), ctx + "." + key);
}

std::string get_string(const json& obj, const char* key, const std::string& ctx) {
  const json& j = require_key(obj, key, ctx);
  if (!j.is_string()) throw ConfigError(ctx + "." + key + " must be a string");
  return j.get<std::string>();
}

Polynomial parse_poly(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(ctx + " must be a non-empty array of coefficients");
  }
  std::vector<double> coeffs;
  coeffs.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    coeffs.push_back(as_number(j[i], ctx + "[" + std::to_string(i) + "]"));
  }
  return Polynomial(std::move(coeffs));
}

TransferFunction parse_tf(const json& obj, const std::string& ctx) {
  require_object(obj, ctx);
  check_keys(obj, {"num", "den"}, ctx);
  return {parse_poly(require_key(obj, "num", ctx), ctx + ".num"),
          parse_poly(require_key(obj, "den", ctx), ctx + ".den")};
}

ControllerSpec parse_controller(const json& obj) {
  const std::string ctx = "controller";
  require_object(obj, ctx);
  check_keys(obj, {"id", "initial_state", "bank"}, ctx);
  ControllerSpec spec;
  if (obj.contains("id")) spec.id = get_string(obj, "id", ctx);
  spec.initial_state = get_string(obj, "initial_state", ctx);
  const json& bank = require_key(obj, "bank", ctx);
  require_object(bank, ctx + ".bank");
  if (bank.empty()) throw ConfigError(ctx + ".bank must not be empty");
  for (const auto& [label, tf] : bank.items()) {
    spec.bank.emplace_back(label, parse_tf(tf, ctx + ".bank." + label));
  }
  return spec;
}

DelayFamily parse_family(const json& obj, const std::string& ctx) {
  if (!obj.contains("family")) return DelayFamily::TruncatedNormal;
  const std::string name = get_string(obj, "family", ctx);
  if (name == "truncated_normal") return DelayFamily::TruncatedNormal;
  if (name == "uniform") return DelayFamily::Uniform;
  throw ConfigError(ctx + ".family must be 'truncated_normal' or 'uniform', got '" + name + "'");
}

MarkovDelayModel parse_markov(const json& obj) {
  const std::string ctx = "markov";
  require_object(obj, ctx);
  check_keys(obj, {"states", "transition", "delays"}, ctx);

  const json& states_j = require_key(obj, "states", ctx);
  if (!states_j.is_array() || states_j.empty()) {
    throw ConfigError(ctx + ".states must be a non-empty array of labels");
  }
  std::vector<std::string> states;
  for (const json& s : states_j) {
    if (!s.is_string()) throw ConfigError(ctx + ".states entries must be strings");
    states.push_back(s.get<std::string>());
  }

  const json& trans_j = require_key(obj, "transition", ctx);
  if (!trans_j.is_array()) throw ConfigError(ctx + ".transition must be an array of rows");
  std::vector<std::vector<double>> transition;
  for (std::size_t i = 0; i < trans_j.size(); ++i) {
    const json& row = trans_j[i];
    const std::string row_ctx = ctx + ".transition[" + std::to_string(i) + "]";
    if (!row.is_array()) throw ConfigError(row_ctx + " must be an array");
    std::vector<double> r;
    for (std::size_t c = 0; c < row.size(); ++c) {
      r.push_back(as_number(row[c], row_ctx + "[" + std::to_string(c) + "]"));
    }
    transition.push_back(std::move(r));
  }

  const json& delays_j = require_key(obj, "delays", ctx);
  if (!delays_j.is_array()) throw ConfigError(ctx + ".delays must be an array");
  std::vector<StateDelay> delays;
  for (std::size_t i = 0; i < delays_j.size(); ++i) {
    const json& d = delays_j[i];
    const std::string d_ctx = ctx + ".delays[" + std::to_string(i) + "]";
    require_object(d, d_ctx);
    check_keys(d, {"mean", "std", "min", "max", "family"}, d_ctx);
    StateDelay sd;
    sd.mean = get_number(d, "mean", d_ctx);
    sd.stddev = get_number(d, "std", d_ctx);
    sd.min = get_number(d, "min", d_ctx);
    sd.max = get_number(d, "max", d_ctx);
    sd.family = parse_family(d, d_ctx);
    delays.push_back(sd);
  }

  try {
    return {std::move(states), std::move(transition), std::move(delays)};
  } catch (const Error& e) {
    throw ConfigError(std::string("markov: ") + e.what());
  }
}

TolcContract parse_contract(const json& obj) {
  const std::string ctx = "contract";
  require_object(obj, ctx);
  check_keys(obj, {"machine", "h", "tau", "j_h", "j_tau"}, ctx);
  TolcContract c;
  c.machine_id = get_string(obj, "machine", ctx);
  c.h = get_number(obj, "h", ctx);
  c.tau = get_number(obj, "tau", ctx);
  c.j_h = get_number(obj, "j_h", ctx);
  c.j_tau = get_number(obj, "j_tau", ctx);
  return c;
}

SynthesisConfig parse_synthesis(const json& obj) {
  const std::string ctx = "synthesis";
  require_object(obj, ctx);
  check_keys(obj, {"h", "tau", "rho", "gamma"}, ctx);
  SynthesisConfig s;
  s.h = get_number(obj, "h", ctx);
  s.tau = get_number(obj, "tau", ctx);
  if (obj.contains("rho")) s.policy.rho = get_number(obj, "rho", ctx);
  if (obj.contains("gamma")) s.policy.gamma = get_number(obj, "gamma", ctx);
  return s;
}

SweepOptions parse_margin(const json& obj) {
  const std::string ctx = "margin";
  require_object(obj, ctx);
  check_keys(obj, {"omega_lo", "omega_hi", "grid_points"}, ctx);
  SweepOptions opts;
  if (obj.contains("omega_lo")) opts.omega_lo = get_number(obj, "omega_lo", ctx);
  if (obj.contains("omega_hi")) opts.omega_hi = get_number(obj, "omega_hi", ctx);
  if (obj.contains("grid_points")) {
    const double p = get_number(obj, "grid_points", ctx);
    if (p < 2.0 || p != static_cast<double>(static_cast<int>(p))) {
      throw ConfigError(ctx + ".grid_points must be an integer >= 2");
    }
    opts.grid_points = static_cast<int>(p);
  }
  return opts;
}

ReferenceSpec parse_reference(const json& obj, const std::string& ctx) {
  require_object(obj, ctx);
  check_keys(obj, {"type", "value", "time"}, ctx);
  ReferenceSpec ref;
  const std::string type = get_string(obj, "type", ctx);
  if (type == "constant") {
    ref.kind = ReferenceSpec::Kind::Constant;
  } else if (type == "step") {
    ref.kind = ReferenceSpec::Kind::Step;
  } else {
    throw ConfigError(ctx + ".type must be 'constant' or 'step', got '" + type + "'");
  }
  ref.value = get_number(obj, "value", ctx);
  if (obj.contains("time")) {
    if (ref.kind == ReferenceSpec::Kind::Constant) {
      throw ConfigError(ctx + ".time applies to step references only");
    }
    ref.step_time = get_number(obj, "time", ctx);
  }
  return ref;
}

ScenarioSpec parse_scenario(const json& obj) {
  const std::string ctx = "scenario";
  require_object(obj, ctx);
  check_keys(obj, {"duration", "seed", "reference", "sampling_jitter"}, ctx);
  ScenarioSpec spec;
  spec.duration = get_number(obj, "duration", ctx);
  if (obj.contains("seed")) {
    const json& s = obj["seed"];
    if (!s.is_number_integer() || s.get<double>() < 0) {
      throw ConfigError(ctx + ".seed must be a non-negative integer");
    }
    spec.seed = s.get<std::uint64_t>();
  }
  spec.reference = parse_reference(require_key(obj, "reference", ctx), ctx + ".reference");
  if (obj.contains("sampling_jitter")) {
    const std::string dist = get_string(obj, "sampling_jitter", ctx);
    if (dist == "uniform") {
      spec.sampling_jitter = SamplingJitterDist::Uniform;
    } else if (dist == "none") {
      spec.sampling_jitter = SamplingJitterDist::None;
    } else {
      throw ConfigError(ctx + ".sampling_jitter must be 'uniform' or 'none', got '" + dist + "'");
    }
  }
  return spec;
}

}  // namespace

WorkspaceConfig load_workspace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");

  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "': " + e.what());
  }
  require_object(root, "config root");
  check_keys(root,
             {"plant", "controller", "markov", "software", "hardware", "contract", "synthesis",
              "margin", "scenario", "output_dir"},
             "config root");

  WorkspaceConfig cfg;
  try {
    if (root.contains("plant")) cfg.plant = parse_tf(root["plant"], "plant");
    if (root.contains("controller")) cfg.controller = parse_controller(root["controller"]);
    if (root.contains("markov")) cfg.markov = parse_markov(root["markov"]);
    if (root.contains("software")) {
      const std::string ctx = "software";
      require_object(root[ctx], ctx);
      check_keys(root[ctx], {"tau_s", "j_exec"}, ctx);
      cfg.software = SoftwareJitter{get_number(root[ctx], "tau_s", ctx),
                                    get_number(root[ctx], "j_exec", ctx)};
      validate(*cfg.software);
    }
    if (root.contains("hardware")) {
      const std::string ctx = "hardware";
      require_object(root[ctx], ctx);
      check_keys(root[ctx], {"alpha_c"}, ctx);
      cfg.hardware = HardwareJitter{get_number(root[ctx], "alpha_c", ctx)};
      validate(*cfg.hardware);
    }
    if (root.contains("contract")) cfg.contract = parse_contract(root["contract"]);
    if (root.contains("synthesis")) cfg.synthesis = parse_synthesis(root["synthesis"]);
    if (root.contains("margin")) cfg.margin = parse_margin(root["margin"]);
    if (root.contains("scenario")) cfg.scenario = parse_scenario(root["scenario"]);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    // Domain validation during parsing (bad polynomials, jitter bounds, ...)
    // is still a config problem from the caller's point of view.
    throw ConfigError("config file '" + path.string() + "': " + e.what());
  }

  if (cfg.contract && cfg.synthesis) {
    throw ConfigError("config must carry either a contract block or a synthesis block, not both");
  }

  if (root.contains("output_dir")) {
    const json& od = root["output_dir"];
    if (!od.is_string()) throw ConfigError("output_dir must be a string");
    cfg.output_dir = od.get<std::string>();
  } else if (const char* env = std::getenv("NASCD_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    cfg.output_dir = env;
  } else {
    cfg.output_dir = "out";
  }
  return cfg;
}

Scenario build_scenario(const WorkspaceConfig& cfg) {
  if (!cfg.plant) throw ConfigError("scenario requires a 'plant' block");
  if (!cfg.controller) throw ConfigError("scenario requires a 'controller' block");
  if (!cfg.markov) throw ConfigError("scenario requires a 'markov' block");
  if (!cfg.software) throw ConfigError("scenario requires a 'software' block");
  if (!cfg.hardware) throw ConfigError("scenario requires a 'hardware' block");
  if (!cfg.contract) throw ConfigError("scenario requires a 'contract' block");
  if (!cfg.scenario) throw ConfigError("scenario requires a 'scenario' block");

  return Scenario{
      .plant = *cfg.plant,
      .controller = make_switching_controller(cfg.controller->bank, cfg.contract->h,
                                              cfg.controller->initial_state, cfg.controller->id),
      .hw = *cfg.hardware,
      .sw = *cfg.software,
      .net = *cfg.markov,
      .contract = *cfg.contract,
      .reference = cfg.scenario->reference,
      .duration = cfg.scenario->duration,
      .seed = cfg.scenario->seed,
      .sampling_jitter = cfg.scenario->sampling_jitter,
  };
}

}  // namespace nascd
