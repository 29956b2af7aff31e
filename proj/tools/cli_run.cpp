#include "cli_run.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "lclab/verifier.hpp"

namespace lclab::cli {

namespace {

using nlohmann::json;

std::string fmt_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return fmt_double(v.get<double>());
  if (v.is_string()) return csv_quote(v.get<std::string>());
  return csv_quote(v.dump());
}

json duality_report(const RunConfig& cfg) {
  auto dual = evaluate_inequality(cfg.f, cfg.u, cfg.v, cfg.params, cfg.group,
                                  cfg.quadrature, InequalitySide::dual);
  auto u_prof = cfg.u.to_profile(cfg.group, cfg.params.beta, cfg.quadrature);
  auto v_prof = cfg.v.to_profile(cfg.group, cfg.params.beta, cfg.quadrature);
  auto fwd = evaluate_inequality(
      cfg.f.inverted(), WeightSpec::custom(dual_weight_transform(u_prof, cfg.group)),
      WeightSpec::custom(dual_weight_transform(v_prof, cfg.group)), cfg.params,
      cfg.group, cfg.quadrature);
  json j;
  j["dual"] = to_json(dual);
  j["forward_transformed"] = to_json(fwd);
  if (dual.ratio && fwd.ratio) {
    const double diff = relative_diff(*dual.ratio, *fwd.ratio);
    j["ratio_rel_diff"] = diff;
    j["agreement"] = diff < 1e-7;
  } else {
    j["ratio_rel_diff"] = nullptr;
    j["agreement"] = nullptr;
  }
  return j;
}

json reduce_report(const RunConfig& cfg) {
  auto chk = check_beta_reduction(cfg.u, cfg.v, cfg.f, cfg.params, cfg.group,
                                  cfg.quadrature);
  json j;
  j["ratio_direct"] = chk.ratio_direct;
  j["ratio_reduced"] = chk.ratio_reduced;
  j["agreement"] = chk.agreement ? json(*chk.agreement) : json(nullptr);
  return j;
}

json multinomial_report(const RunConfig& cfg) {
  auto rep = verify_multinomial(cfg.multinomial.a, cfg.multinomial.k, cfg.params.beta,
                                cfg.group, cfg.f, cfg.quadrature);
  auto bounds = multinomial_constant_bounds(cfg.multinomial.a, cfg.multinomial.k,
                                            cfg.params.beta, cfg.group);
  json j = to_json(rep);
  j["lower_collection"] = bounds.lower_collection;
  return j;
}

ProbeSequence sharpness_sequence(const RunConfig& cfg) {
  auto gammas = default_probe_gammas(cfg.sharpness.a, cfg.sharpness.probes);
  if (cfg.sharpness.dual) {
    return sharpness_probe_dual(cfg.sharpness.a, cfg.params.beta, cfg.group, gammas,
                                cfg.quadrature);
  }
  return sharpness_probe_power(cfg.sharpness.a, cfg.params.beta, cfg.group, gammas,
                               cfg.quadrature);
}

json probe_json(const ProbeSequence& seq) {
  json rows = json::array();
  for (const auto& p : seq.points) {
    rows.push_back({{"gamma_over_Q", p.gamma_over_Q},
                    {"ratio_numeric", p.ratio_numeric},
                    {"ratio_closed_form", p.ratio_closed_form}});
  }
  return json{{"points", rows},
              {"limit_constant", seq.limit_constant},
              {"monotone", seq.monotone}};
}

struct SingleResult {
  json report;
  int exit_code = kExitOk;
};

SingleResult run_single(Command cmd, const RunConfig& cfg) {
  SingleResult out;
  switch (cmd) {
    case Command::verify: {
      auto rep = evaluate_inequality(cfg.f, cfg.u, cfg.v, cfg.params, cfg.group,
                                     cfg.quadrature);
      out.report = to_json(rep);
      out.exit_code = rep.ratio ? kExitOk : kExitDivergence;
      break;
    }
    case Command::criterion: {
      auto fwd = A_alpha(cfg.u, cfg.v, cfg.params, cfg.group, cfg.quadrature);
      auto dual = dual_A_alpha(cfg.u, cfg.v, cfg.params, cfg.group, cfg.quadrature);
      out.report = json{{"forward", to_json(fwd)}, {"dual", to_json(dual)}};
      out.exit_code = fwd.finite ? kExitOk : kExitDivergence;
      break;
    }
    case Command::bounds: {
      auto b = constant_bounds(cfg.u, cfg.v, cfg.params, cfg.group, cfg.quadrature);
      out.report = to_json(b);
      out.exit_code = b.finite ? kExitOk : kExitDivergence;
      break;
    }
    case Command::duality: {
      out.report = duality_report(cfg);
      out.exit_code = out.report["agreement"].is_null() ? kExitDivergence : kExitOk;
      break;
    }
    case Command::reduce: {
      out.report = reduce_report(cfg);
      if (out.report["agreement"].is_null()) {
        out.exit_code = kExitDivergence;
      } else if (!out.report["agreement"].get<bool>()) {
        out.exit_code = kExitTolerance;
      }
      break;
    }
    case Command::multinomial: {
      out.report = multinomial_report(cfg);
      out.exit_code = out.report["ratio"].is_null() ? kExitDivergence : kExitOk;
      break;
    }
    default:
      throw ConfigError("command not runnable as a single point");
  }
  return out;
}

const std::vector<std::string>& sweep_columns(Command cmd) {
  static const std::vector<std::string> verify_cols = {
      "lhs", "rhs", "ratio", "bound_lower", "bound_upper", "holds"};
  static const std::vector<std::string> bounds_cols = {
      "lower", "upper", "alpha_star_lower", "alpha_star_upper", "finite"};
  static const std::vector<std::string> criterion_cols = {"A_forward", "A_dual",
                                                          "finite"};
  static const std::vector<std::string> reduce_cols = {"ratio_direct", "ratio_reduced",
                                                       "agreement"};
  static const std::vector<std::string> duality_cols = {"ratio_rel_diff", "agreement"};
  static const std::vector<std::string> multinomial_cols = {
      "ratio", "bound_lower", "bound_upper", "holds"};
  switch (cmd) {
    case Command::verify: return verify_cols;
    case Command::bounds: return bounds_cols;
    case Command::criterion: return criterion_cols;
    case Command::reduce: return reduce_cols;
    case Command::duality: return duality_cols;
    case Command::multinomial: return multinomial_cols;
    default: throw ConfigError("command cannot be swept");
  }
}

json sweep_metrics(Command cmd, const json& report) {
  json row = json::object();
  switch (cmd) {
    case Command::criterion:
      row["A_forward"] = report["forward"]["A_value"];
      row["A_dual"] = report["dual"]["A_value"];
      row["finite"] = report["forward"]["finite"];
      break;
    default:
      for (const auto& col : sweep_columns(cmd)) {
        row[col] = report.contains(col) ? report[col] : json(nullptr);
      }
      break;
  }
  return row;
}

json set_by_path(json base, const std::string& dotted, const json& value) {
  std::string pointer = "/";
  for (char c : dotted) pointer += (c == '.') ? '/' : c;
  base[json::json_pointer(pointer)] = value;
  return base;
}

struct SweepOutcome {
  std::string csv;
  json rows;
  int exit_code = kExitOk;
};

SweepOutcome run_sweep(const RunConfig& cfg, const RunOptions& options) {
  const Command sub = parse_command(cfg.sweep.command);
  if (cfg.sweep.axes.empty()) throw ConfigError("config.sweep.axes: empty sweep");

  // Cartesian product, last axis fastest.
  std::vector<std::size_t> radix(cfg.sweep.axes.size());
  std::size_t total = 1;
  for (std::size_t i = 0; i < cfg.sweep.axes.size(); ++i) {
    radix[i] = cfg.sweep.axes[i].values.size();
    total *= radix[i];
  }

  std::vector<json> points(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    json point = cfg.normalized;
    std::size_t rest = idx;
    for (std::size_t ax = cfg.sweep.axes.size(); ax-- > 0;) {
      const auto& axis = cfg.sweep.axes[ax];
      point = set_by_path(std::move(point), axis.path, axis.values[rest % radix[ax]]);
      rest /= radix[ax];
    }
    points[idx] = std::move(point);
  }

  std::vector<json> reports(total);
  std::vector<int> codes(total, kExitOk);
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  const int jobs = std::max(1, options.jobs);
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      try {
        RunConfig point_cfg = parse_config(points[i]);
        SingleResult res = run_single(sub, point_cfg);
        reports[i] = sweep_metrics(sub, res.report);
        codes[i] = res.exit_code;
      } catch (...) {
        std::scoped_lock lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  const auto& cols = sweep_columns(sub);
  std::string csv;
  for (const auto& axis : cfg.sweep.axes) csv += axis.path + ",";
  for (std::size_t c = 0; c < cols.size(); ++c) {
    csv += cols[c];
    csv += (c + 1 < cols.size()) ? ',' : '\n';
  }
  json rows = json::array();
  for (std::size_t idx = 0; idx < total; ++idx) {
    json row = json::object();
    std::size_t rest = idx;
    std::vector<std::string> axis_cells(cfg.sweep.axes.size());
    for (std::size_t ax = cfg.sweep.axes.size(); ax-- > 0;) {
      const auto& axis = cfg.sweep.axes[ax];
      const json& v = axis.values[rest % radix[ax]];
      axis_cells[ax] = csv_cell(v);
      row[axis.path] = v;
      rest /= radix[ax];
    }
    for (const auto& cell : axis_cells) csv += cell + ",";
    for (std::size_t c = 0; c < cols.size(); ++c) {
      row[cols[c]] = reports[idx].contains(cols[c]) ? reports[idx][cols[c]] : json(nullptr);
      csv += csv_cell(row[cols[c]]);
      csv += (c + 1 < cols.size()) ? ',' : '\n';
    }
    rows.push_back(std::move(row));
  }

  SweepOutcome out;
  out.csv = std::move(csv);
  out.rows = std::move(rows);
  for (int code : codes) out.exit_code = std::max(out.exit_code, code);
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open output file " + path.string());
  os << content;
}

}  // namespace

int run_command(Command cmd, const nlohmann::json& config_json, const RunOptions& options,
                std::ostream& log) {
  try {
    RunConfig cfg = parse_config(config_json);
    if (options.tol) {
      if (!(*options.tol > 0.0)) throw ConfigError("--tol must be > 0");
      cfg.quadrature.rel_tol = *options.tol;
      cfg.normalized["quadrature"]["rel_tol"] = *options.tol;
    }

    const std::string hash = config_hash(cfg.normalized);
    std::string format = options.format;
    if (format.empty()) {
      format = (cmd == Command::sharpness || cmd == Command::sweep) ? "csv" : "json";
    }
    if (format != "json" && format != "csv") {
      throw ConfigError("unknown format '" + format + "'");
    }

    std::filesystem::create_directories(options.out_dir);
    const std::filesystem::path out_path =
        std::filesystem::path(options.out_dir) /
        (command_name(cmd) + "-" + hash + "." + format);

    int code = kExitOk;
    if (cmd == Command::sweep) {
      SweepOutcome sw = run_sweep(cfg, options);
      write_file(out_path, format == "csv" ? sw.csv : sw.rows.dump(2) + "\n");
      code = sw.exit_code;
      log << "sweep: " << sw.rows.size() << " points -> " << out_path.string() << "\n";
    } else if (cmd == Command::sharpness) {
      ProbeSequence seq = sharpness_sequence(cfg);
      if (format == "csv") {
        std::ostringstream os;
        write_probe_csv(os, seq);
        write_file(out_path, os.str());
      } else {
        write_file(out_path, probe_json(seq).dump(2) + "\n");
      }
      log << "sharpness: " << seq.points.size() << " probes, limit "
          << fmt_double(seq.limit_constant) << " -> " << out_path.string() << "\n";
    } else {
      SingleResult res = run_single(cmd, cfg);
      if (format == "csv") {
        json flat = cmd == Command::criterion ? sweep_metrics(cmd, res.report)
                                              : res.report;
        std::string csv;
        std::string header, row;
        for (auto it = flat.begin(); it != flat.end(); ++it) {
          if (it.value().is_array() || it.value().is_object()) continue;
          if (!header.empty()) {
            header += ',';
            row += ',';
          }
          header += it.key();
          row += csv_cell(it.value());
        }
        csv = header + "\n" + row + "\n";
        write_file(out_path, csv);
      } else {
        write_file(out_path, res.report.dump(2) + "\n");
      }
      code = res.exit_code;
      log << command_name(cmd) << " -> " << out_path.string() << "\n";
    }
    return code;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const DomainError& e) {
    log << "domain error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const DivergenceError& e) {
    log << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const ToleranceError& e) {
    log << "tolerance failure: " << e.what() << "\n";
    return kExitTolerance;
  }
}

}  // namespace lclab::cli
