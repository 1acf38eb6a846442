#include "cli.hpp"

#include "commands.hpp"
#include "config.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <functional>
#include <map>

namespace chainglue::cli {

namespace {

using Command = std::function<CommandResult(const ExperimentConfig&, const RunOptions&)>;

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"glue", cmd_glue},
      {"certify", cmd_certify},
      {"truncation", cmd_truncation},
      {"lr", cmd_lr},
  };
  return table;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gluing ground states of gapped spin chains: sweeps and bound checks"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  int jobs = 1;
  int cap = kDefaultMaxSites;
  for (const auto& [name, fn] : commands()) {
    (void)fn;
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory (default: config output_dir)");
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--cap", cap, "maximum number of sites")->check(CLI::PositiveNumber);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  if (const char* env = std::getenv(kCapEnvVar)) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 30) {
      err << "error: " << kCapEnvVar << "='" << env << "' is not a site count in [1, 30]\n";
      return kExitConfig;
    }
    err << "warning: " << kCapEnvVar << "=" << v << " overrides the site cap (" << cap << ")\n";
    cap = static_cast<int>(v);
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const ExperimentConfig config = load_config(config_path);
    RunOptions options;
    options.out_dir = out_dir.empty() ? config.output_dir : out_dir;
    options.jobs = jobs;
    options.max_sites = cap;
    const CommandResult r = commands().at(name)(config, options);
    for (const auto& f : r.files) out << "wrote " << f.string() << '\n';
    for (const auto& f : r.failures) err << "failed: " << f << '\n';
    return r.exit_code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ResourceLimitError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const GapCollapseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace chainglue::cli
