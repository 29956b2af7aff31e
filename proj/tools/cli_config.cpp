#include "cli_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>

namespace lclab::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double to_number(const std::string& tok, const std::string& path) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail(path, "cannot parse number '" + tok + "'");
  }
}

std::vector<double> to_numbers(const std::string& tok, const std::string& path) {
  std::vector<double> out;
  for (const auto& piece : split(tok, ',')) out.push_back(to_number(piece, path));
  return out;
}

/// Tracks which keys of an object were consumed; leftover keys are errors.
class StrictObject {
 public:
  StrictObject(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) fail(path_ + "." + key, "missing required key");
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) fail(path_ + "." + key, "expected a number");
    return v.get<double>();
  }

  int integer(const std::string& key, int fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail(path_ + "." + key, "expected an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail(path_ + "." + key, "expected a boolean");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) fail(path_ + "." + key, "expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail(path_ + "." + it.key(), "unknown key");
    }
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

const json kEmptyObject = json::object();

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "verify") return Command::verify;
  if (name == "criterion") return Command::criterion;
  if (name == "bounds") return Command::bounds;
  if (name == "sharpness") return Command::sharpness;
  if (name == "duality") return Command::duality;
  if (name == "reduce") return Command::reduce;
  if (name == "multinomial") return Command::multinomial;
  if (name == "sweep") return Command::sweep;
  throw ConfigError("unknown command '" + name + "'");
}

std::string command_name(Command c) {
  switch (c) {
    case Command::verify: return "verify";
    case Command::criterion: return "criterion";
    case Command::bounds: return "bounds";
    case Command::sharpness: return "sharpness";
    case Command::duality: return "duality";
    case Command::reduce: return "reduce";
    case Command::multinomial: return "multinomial";
    case Command::sweep: return "sweep";
  }
  return "?";
}

RadialProfile parse_profile(const std::string& desc, const HomogeneousGroup& g,
                            double beta, const std::string& path) {
  const auto parts = split(desc, ':');
  const std::string& kind = parts[0];
  const auto want = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() - 1 < lo || parts.size() - 1 > hi) {
      fail(path, "descriptor '" + kind + "' has the wrong number of arguments");
    }
  };
  try {
    if (kind == "constant") {
      want(1, 1);
      return RadialProfile::constant(to_number(parts[1], path));
    }
    if (kind == "power_law") {
      want(1, 1);
      return RadialProfile::power_law(to_number(parts[1], path));
    }
    if (kind == "ball_power") {
      want(1, 1);
      return RadialProfile::ball_power(to_number(parts[1], path), g);
    }
    if (kind == "exp_power") {
      want(2, 3);
      auto p = RadialProfile::exp_power(to_number(parts[1], path),
                                        to_number(parts[2], path));
      if (parts.size() == 4) p = p.scaled(to_number(parts[3], path));
      return p;
    }
    if (kind == "cutoff_tail") {
      want(2, 4);
      const double r0 = parts[1] == "auto" ? std::exp(1.0 / (beta * g.Q))
                                           : to_number(parts[1], path);
      const double gamma = to_number(parts[2], path);
      const double inner = parts.size() > 3 ? to_number(parts[3], path) : 1.0;
      const double mult = parts.size() > 4 ? to_number(parts[4], path) : 1.0;
      return RadialProfile::cutoff_power_tail(r0, inner, gamma, mult);
    }
    if (kind == "sum_power") {
      want(2, 2);
      const auto a = to_numbers(parts[1], path);
      const double k = to_number(parts[2], path);
      if (k != std::floor(k)) fail(path, "sum_power exponent k must be an integer");
      return RadialProfile::sum_power(a, g, static_cast<int>(k));
    }
    if (kind == "sampled") {
      want(1, 1);
      std::vector<double> nodes, values;
      for (const auto& pair : split(parts[1], ',')) {
        const auto kv = split(pair, '=');
        if (kv.size() != 2) fail(path, "sampled wants r1=v1,r2=v2,...");
        nodes.push_back(to_number(kv[0], path));
        values.push_back(to_number(kv[1], path));
      }
      return RadialProfile::sampled(std::move(nodes), std::move(values));
    }
    if (kind == "product") {
      if (parts.size() < 2) fail(path, "product wants ';'-separated factors");
      // re-join and split on ';' so factors keep their ':' arguments
      const std::string rest = desc.substr(kind.size() + 1);
      std::vector<RadialProfile> factors;
      for (const auto& sub : split(rest, ';')) {
        factors.push_back(parse_profile(sub, g, beta, path));
      }
      return RadialProfile::product(std::move(factors));
    }
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
  fail(path, "unknown profile descriptor '" + kind + "'");
}

WeightSpec parse_weight(const std::string& desc, const HomogeneousGroup& g, double beta,
                        const std::string& path) {
  const auto parts = split(desc, ':');
  const std::string& kind = parts[0];
  try {
    if (kind == "ball_power" && parts.size() == 2) {
      return WeightSpec::ball_power(to_number(parts[1], path));
    }
    if (kind == "exp_power" && (parts.size() == 3 || parts.size() == 4)) {
      const double scale = parts.size() == 4 ? to_number(parts[3], path) : 1.0;
      return WeightSpec::exp_power(to_number(parts[1], path), to_number(parts[2], path),
                                   scale);
    }
    if (kind == "multinomial" && parts.size() == 3) {
      const double k = to_number(parts[2], path);
      if (k != std::floor(k) || k < 0) fail(path, "multinomial k must be a natural number");
      return WeightSpec::multinomial(to_numbers(parts[1], path), static_cast<int>(k));
    }
    if (kind == "matched") {
      if (parts.size() == 1) fail(path, "matched weight wants 'matched:<v descriptor>'");
      const std::string rest = desc.substr(kind.size() + 1);
      return WeightSpec::matched(parse_weight(rest, g, beta, path));
    }
    if (kind == "custom") {
      if (parts.size() == 1) fail(path, "custom weight wants 'custom:<profile>'");
      const std::string rest = desc.substr(kind.size() + 1);
      return WeightSpec::custom(parse_profile(rest, g, beta, path));
    }
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
  // any plain profile descriptor doubles as a custom weight
  return WeightSpec::custom(parse_profile(desc, g, beta, path));
}

RunConfig parse_config(const nlohmann::json& j) {
  RunConfig cfg;
  StrictObject root(j, "config");

  const std::string group_preset = root.string("group", "euclidean:1");
  try {
    cfg.group = parse_group(group_preset);
  } catch (const DomainError& e) {
    fail("config.group", e.what());
  }

  {
    StrictObject params(root.has("params") ? root.at("params") : kEmptyObject,
                        "config.params");
    cfg.params.p = params.number("p", 1.0);
    cfg.params.q = params.number("q", 1.0);
    cfg.params.beta = params.number("beta", 1.0);
    params.finish();
  }

  {
    StrictObject crit(root.has("criterion") ? root.at("criterion") : kEmptyObject,
                      "config.criterion");
    cfg.params.alpha = crit.number("alpha", cfg.group.Q);
    crit.finish();
  }
  try {
    cfg.params.validate();
  } catch (const DomainError& e) {
    fail("config.params", e.what());
  }

  {
    StrictObject quad(root.has("quadrature") ? root.at("quadrature") : kEmptyObject,
                      "config.quadrature");
    cfg.quadrature.rel_tol = quad.number("rel_tol", cfg.quadrature.rel_tol);
    cfg.quadrature.abs_tol = quad.number("abs_tol", cfg.quadrature.abs_tol);
    cfg.quadrature.max_subdivisions =
        quad.integer("max_subdivisions", cfg.quadrature.max_subdivisions);
    cfg.quadrature.r_min_hint = quad.number("r_min_hint", cfg.quadrature.r_min_hint);
    cfg.quadrature.r_max_hint = quad.number("r_max_hint", cfg.quadrature.r_max_hint);
    const std::string policy = quad.string("tail_policy", "analytic_power_tail");
    if (policy == "analytic_power_tail") {
      cfg.quadrature.tail_policy = TailPolicy::analytic_power_tail;
    } else if (policy == "truncate_with_bound") {
      cfg.quadrature.tail_policy = TailPolicy::truncate_with_bound;
    } else {
      fail("config.quadrature.tail_policy", "unknown policy '" + policy + "'");
    }
    quad.finish();
    try {
      cfg.quadrature.validate();
    } catch (const DomainError& e) {
      fail("config.quadrature", e.what());
    }
  }

  std::string u_desc = "ball_power:0";
  std::string v_desc = "ball_power:0";
  {
    StrictObject weights(root.has("weights") ? root.at("weights") : kEmptyObject,
                         "config.weights");
    u_desc = weights.string("u", u_desc);
    v_desc = weights.string("v", v_desc);
    weights.finish();
  }
  cfg.u = parse_weight(u_desc, cfg.group, cfg.params.beta, "config.weights.u");
  cfg.v = parse_weight(v_desc, cfg.group, cfg.params.beta, "config.weights.v");

  std::string f_desc = "cutoff_tail:auto:" + std::to_string(cfg.group.Q * 3.0);
  if (root.has("function")) {
    const json& fv = root.at("function");
    if (!fv.is_string()) fail("config.function", "expected a descriptor string");
    f_desc = fv.get<std::string>();
  }
  cfg.f = parse_profile(f_desc, cfg.group, cfg.params.beta, "config.function");

  {
    StrictObject sh(root.has("sharpness") ? root.at("sharpness") : kEmptyObject,
                    "config.sharpness");
    cfg.sharpness.a = sh.number("a", 0.0);
    cfg.sharpness.probes = sh.integer("probes", 11);
    cfg.sharpness.dual = sh.boolean("dual", false);
    if (cfg.sharpness.probes < 1) fail("config.sharpness.probes", "must be >= 1");
    sh.finish();
  }

  {
    StrictObject mn(root.has("multinomial") ? root.at("multinomial") : kEmptyObject,
                    "config.multinomial");
    if (mn.has("a")) {
      const json& av = mn.at("a");
      if (!av.is_array()) fail("config.multinomial.a", "expected an array of numbers");
      cfg.multinomial.a.clear();
      for (const auto& x : av) {
        if (!x.is_number()) fail("config.multinomial.a", "expected numbers");
        cfg.multinomial.a.push_back(x.get<double>());
      }
    }
    cfg.multinomial.k = mn.integer("k", 1);
    mn.finish();
  }

  {
    StrictObject sw(root.has("sweep") ? root.at("sweep") : kEmptyObject, "config.sweep");
    cfg.sweep.command = sw.string("command", "bounds");
    if (sw.has("axes")) {
      const json& axes = sw.at("axes");
      if (!axes.is_array()) fail("config.sweep.axes", "expected an array");
      for (std::size_t i = 0; i < axes.size(); ++i) {
        const std::string path = "config.sweep.axes[" + std::to_string(i) + "]";
        StrictObject axis(axes[i], path);
        SweepAxis out;
        out.path = axis.string("path", "");
        if (out.path.empty()) fail(path + ".path", "missing sweep path");
        const json& vals = axis.at("values");
        if (!vals.is_array() || vals.empty()) fail(path + ".values", "expected a non-empty array");
        for (const auto& v : vals) out.values.push_back(v);
        axis.finish();
        cfg.sweep.axes.push_back(std::move(out));
      }
    }
    sw.finish();
  }

  root.finish();

  // Canonical form with every default materialized.
  json n;
  n["group"] = group_preset;
  n["params"] = {{"p", cfg.params.p}, {"q", cfg.params.q}, {"beta", cfg.params.beta}};
  n["criterion"] = {{"alpha", cfg.params.alpha}};
  n["weights"] = {{"u", u_desc}, {"v", v_desc}};
  n["function"] = f_desc;
  n["quadrature"] = {
      {"rel_tol", cfg.quadrature.rel_tol},
      {"abs_tol", cfg.quadrature.abs_tol},
      {"max_subdivisions", cfg.quadrature.max_subdivisions},
      {"r_min_hint", cfg.quadrature.r_min_hint},
      {"r_max_hint", cfg.quadrature.r_max_hint},
      {"tail_policy", cfg.quadrature.tail_policy == TailPolicy::analytic_power_tail
                          ? "analytic_power_tail"
                          : "truncate_with_bound"},
  };
  n["sharpness"] = {{"a", cfg.sharpness.a},
                    {"probes", cfg.sharpness.probes},
                    {"dual", cfg.sharpness.dual}};
  n["multinomial"] = {{"a", cfg.multinomial.a}, {"k", cfg.multinomial.k}};
  json axes = json::array();
  for (const auto& axis : cfg.sweep.axes) {
    axes.push_back({{"path", axis.path}, {"values", axis.values}});
  }
  n["sweep"] = {{"command", cfg.sweep.command}, {"axes", axes}};
  cfg.normalized = std::move(n);
  return cfg;
}

nlohmann::json serialize_config(const RunConfig& c) { return c.normalized; }

std::string config_hash(const nlohmann::json& normalized) {
  const std::string dump = normalized.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace lclab::cli
