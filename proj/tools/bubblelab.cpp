// Command-line front end: run a scenario file or sweep one of its parameters.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bubblelab/scenario.hpp"

namespace fs = std::filesystem;
using bubblelab::scenario::Config;

namespace {

void write_file(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw bubblelab::Error(bubblelab::ErrorCode::Config, "cannot write " + file.string());
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bubblelab: equilibrium asset-price paths and bubble diagnostics"};
  app.require_subcommand(1);

  std::string config_file;
  std::string out_dir = ".";
  std::string param;
  std::string grid;

  auto* run = app.add_subcommand("run", "Solve one scenario; writes <name>.csv and <name>.verdict.json");
  run->add_option("config", config_file, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory");

  auto* sweep = app.add_subcommand("sweep", "Re-run a scenario over a grid of one parameter");
  sweep->add_option("config", config_file, "Scenario file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", param, "Scalar key, or PATH.level / PATH.ratio / PATH.tail")->required();
  sweep->add_option("--grid", grid, "Comma-separated values")->required();
  sweep->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help comes through here with code 0
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const Config config = Config::load(config_file);
    fs::create_directories(out_dir);
    if (*run) {
      const auto rep = bubblelab::scenario::run(config);
      write_file(fs::path(out_dir) / (rep.name + ".csv"), rep.csv);
      write_file(fs::path(out_dir) / (rep.name + ".verdict.json"), rep.json.dump(2) + "\n");
      std::cout << rep.name << ": " << rep.json["verdict"]["label"].get<std::string>();
      for (const auto& d : rep.json["diagnostics"]) std::cout << " [" << d["code"].get<std::string>() << "]";
      std::cout << '\n';
      return rep.exit_code;
    }
    const std::string csv = bubblelab::scenario::sweep(config, param, bubblelab::scenario::parse_grid(grid));
    const std::string name = config.str("name", config.str("model"));
    const fs::path file = fs::path(out_dir) / (name + ".sweep." + param + ".csv");
    write_file(file, csv);
    std::cout << file.string() << '\n';
    return 0;
  } catch (const bubblelab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
