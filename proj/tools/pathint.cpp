#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pathint/cli/experiments.hpp"

namespace {

using namespace pathint::cli;

// --key value and --key=value pairs left over after CLI11 parsing.
void apply_overrides(ExperimentConfig& c, const std::vector<std::string>& extra) {
  for (std::size_t i = 0; i < extra.size(); ++i) {
    const std::string& tok = extra[i];
    if (tok.rfind("--", 0) != 0 || tok.size() < 3) throw usage_error("unexpected argument '" + tok + "'");
    const auto eq = tok.find('=');
    if (eq != std::string::npos) {
      set_value(c, tok.substr(2, eq - 2), tok.substr(eq + 1));
      continue;
    }
    if (i + 1 >= extra.size()) throw usage_error("missing value for '" + tok + "'");
    set_value(c, tok.substr(2), extra[++i]);
  }
}

void print_list() {
  for (const auto& e : list_experiments()) {
    std::cout << e.name << "  " << e.description << "\n";
    for (const auto& p : e.schema)
      std::cout << "    " << p.name << " (" << type_name(p.type) << ", default " << p.default_value << ")  "
                << p.description << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Path-integral experiment runner"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run one experiment");
  std::string config_path;
  run_cmd->add_option("--config", config_path, "key = value configuration file")->required();
  run_cmd->allow_extras();
  run_cmd->footer("Any other --key value pair overrides the configuration file.");

  app.add_subcommand("list", "list experiments and their parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (app.got_subcommand("list")) {
    print_list();
    return 0;
  }

  try {
    ExperimentConfig cfg = load_config(config_path);
    apply_overrides(cfg, run_cmd->remaining());
    const auto rep = run(cfg);
    std::cout << rep.to_text();
    std::printf("wall time: %.3f s\n", rep.wall_time);
    return rep.pass() ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
