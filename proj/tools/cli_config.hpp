#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lclab/operators.hpp"
#include "lclab/profile.hpp"
#include "lclab/quadrature.hpp"

#include "json.hpp"

namespace lclab::cli {

/// Malformed configuration; the message carries the offending field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { verify, criterion, bounds, sharpness, duality, reduce, multinomial, sweep };

Command parse_command(const std::string& name);
std::string command_name(Command c);

struct SweepAxis {
  std::string path;                    // e.g. "params.beta" or "weights.u"
  std::vector<nlohmann::json> values;
};

struct RunConfig {
  HomogeneousGroup group;
  InequalityParams params;  // alpha resolved from the criterion block
  WeightSpec u;
  WeightSpec v;
  RadialProfile f;
  QuadratureSpec quadrature;

  struct Sharpness {
    double a = 0.0;
    int probes = 11;
    bool dual = false;
  } sharpness;

  struct Multinomial {
    std::vector<double> a{1.0};
    int k = 1;
  } multinomial;

  struct Sweep {
    std::string command = "bounds";
    std::vector<SweepAxis> axes;
  } sweep;

  nlohmann::json normalized;  // canonical form: defaults materialized
};

/// Strict parse: unknown keys are rejected with their field path.
RunConfig parse_config(const nlohmann::json& j);

/// Canonical serialization; parsing it again yields an identical object.
nlohmann::json serialize_config(const RunConfig& c);

/// Profile descriptor ("power_law:2", "cutoff_tail:auto:3", ...). beta and
/// the group resolve "auto" cutoffs.
RadialProfile parse_profile(const std::string& desc, const HomogeneousGroup& g,
                            double beta, const std::string& path);

/// Weight descriptor; accepts the weight variants plus any profile
/// descriptor (wrapped as a custom weight).
WeightSpec parse_weight(const std::string& desc, const HomogeneousGroup& g, double beta,
                        const std::string& path);

std::string config_hash(const nlohmann::json& normalized);

}  // namespace lclab::cli
