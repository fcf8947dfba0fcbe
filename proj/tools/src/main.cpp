#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "robin_plap_cli/runner.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace robin_plap::cli;

  CLI::App app{"Robin p-Laplacian scenario runner"};
  std::string command;
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("command", command, "eigen | solve | resonance | antimax | subsuper | third | verify-all")
      ->required()
      ->check(CLI::IsMember(known_commands()));
  app.add_option("--config", config_path, "INI scenario file")->required();
  app.add_option("--out", out_dir, "Output directory (overrides [run] out)");
  app.add_option("--seed", seed, "Random seed (overrides [run] seed)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  ScenarioConfig cfg;
  try {
    cfg = load_config(config_path);
    cfg.command = command;
    if (out_dir) cfg.out_dir = *out_dir;
    if (seed) cfg.seed = *seed;
    cfg.validate();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    OutputLock lock(cfg.out_dir);
    const RunReport report = run(cfg);
    {
      std::ofstream txt(cfg.out_dir / "report.txt", std::ios::trunc);
      write_report_txt(txt, report);
      std::ofstream kv(cfg.out_dir / "report.kv", std::ios::binary | std::ios::trunc);
      write_report_kv(kv, report);
    }
    write_report_txt(std::cout, report);
    return report.all_pass() ? 0 : kExitFailure;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const LockBusyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
