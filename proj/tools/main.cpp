// novikov run|trace|compare|perturb --config <path> [--out <dir>]

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "novikov/novikov.h"

int main(int argc, char** argv) {
  CLI::App app{"Conservative solutions of the Novikov equation in characteristic coordinates"};
  app.set_version_flag("--version", std::string(nv_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  struct Entry {
    const char* name;
    const char* help;
    int (*fn)(const nv_config*, const char*);
  };
  const Entry entries[] = {
      {"run", "integrate and write energies, snapshots and summary.json", nv_cmd_run},
      {"trace", "trace characteristics through a run", nv_cmd_trace},
      {"compare", "cross-check the solvers over a resolution ladder", nv_cmd_compare},
      {"perturb", "continuous dependence on a perturbation ladder", nv_cmd_perturb},
  };
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (default: output.dir)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  nv_config* config = nullptr;
  if (nv_config_load(config_path.c_str(), &config) != NV_OK) {
    std::fprintf(stderr, "error: %s\n", nv_last_error());
    return 2;
  }
  int status = 2;
  for (const Entry& e : entries) {
    if (app.got_subcommand(e.name)) {
      status = e.fn(config, out_dir.empty() ? nullptr : out_dir.c_str());
      break;
    }
  }
  nv_config_free(config);
  return status;
}
