#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "cli_run.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  double tol = 0.0;
  CLI::Option* tol_opt = nullptr;
  lclab::cli::RunOptions run;
};

void add_common(CLI::App* sub, CommonOptions& opts) {
  sub->add_option("--config", opts.config_path, "Path to the run configuration (JSON)")
      ->required();
  sub->add_option("--out", opts.run.out_dir, "Output directory for report files");
  sub->add_option("--format", opts.run.format, "Report format: json or csv");
  sub->add_option("--jobs", opts.run.jobs, "Worker threads for sweeps");
  opts.tol_opt =
      sub->add_option("--tol", opts.tol, "Override the relative quadrature tolerance");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "lclab: weighted exponential-mean inequality laboratory on homogeneous groups"};
  app.require_subcommand(1);

  const std::vector<std::string> commands = {"verify",  "criterion",   "bounds",
                                             "sharpness", "duality",   "reduce",
                                             "multinomial", "sweep"};
  std::map<std::string, CommonOptions> opts;
  for (const auto& name : commands) {
    auto* sub = app.add_subcommand(name);
    add_common(sub, opts[name]);
  }

  CLI11_PARSE(app, argc, argv);

  for (const auto& name : commands) {
    if (!app.got_subcommand(name)) continue;
    CommonOptions& o = opts[name];
    if (o.tol_opt->count() > 0) o.run.tol = o.tol;
    std::ifstream in(o.config_path);
    if (!in) {
      std::cerr << "config error: cannot open " << o.config_path << "\n";
      return lclab::cli::kExitDomainError;
    }
    nlohmann::json config;
    try {
      in >> config;
    } catch (const std::exception& e) {
      std::cerr << "config error: invalid JSON in " << o.config_path << ": " << e.what()
                << "\n";
      return lclab::cli::kExitDomainError;
    }
    return lclab::cli::run_command(lclab::cli::parse_command(name), config, o.run,
                                   std::cout);
  }
  return lclab::cli::kExitDomainError;
}
