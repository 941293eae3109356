#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "motivic/error.hpp"
#include "motivic/session.hpp"

namespace {

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"motivic: point counts, Grothendieck classes and arc measures of sieves"};
  app.require_subcommand(1);

  motivic::Config config;
  std::string field, script_path, out_path;

  auto* run = app.add_subcommand("run", "evaluate a script and print its report");
  run->add_option("script", script_path, "script file, - for stdin")->required();
  run->add_option("-o,--output", out_path, "write the report here instead of stdout");
  run->add_option("--field", field, "Q or F p; overrides the script's field")->envname("MOTIVIC_FIELD");
  run->add_option("--horizon", config.horizon, "default measure horizon")
      ->envname("MOTIVIC_HORIZON")
      ->check(CLI::Range(2, 32));
  run->add_option("--window", config.window, "default stability window")
      ->envname("MOTIVIC_WINDOW")
      ->check(CLI::Range(2, 32));
  run->add_option("--battery-size", config.battery_size, "jets k[t]/(t^n), n = 1..size, used by checks")
      ->envname("MOTIVIC_BATTERY_SIZE")
      ->check(CLI::Range(1, 6));
  run->add_option("--seed", config.seed, "seed for randomized probes")->envname("MOTIVIC_SEED");
  run->add_option("--max-candidates", config.max_candidates, "enumeration cap")
      ->envname("MOTIVIC_MAX_CANDIDATES");
  run->add_option("--skeletal-level", config.skeletal_level, "default top level of simplicial sieves")
      ->envname("MOTIVIC_SKELETAL_LEVEL")
      ->check(CLI::Range(0, 16));

  auto* fmt = app.add_subcommand("fmt", "print a script in canonical form");
  fmt->add_option("script", script_path, "script file, - for stdin")->required();

  CLI11_PARSE(app, argc, argv);

  std::string text;
  try {
    text = slurp(script_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  if (fmt->parsed()) {
    try {
      std::cout << motivic::print_script(motivic::parse_script(text));
      return 0;
    } catch (const motivic::ParseError& e) {
      std::cerr << script_path << ":" << e.line << ":" << e.column << ": " << e.what() << " (at '" << e.token
                << "')\n";
      return 3;
    }
  }

  if (!field.empty()) {
    try {
      config.field = motivic::parse_field(field);
    } catch (const motivic::Error& e) {
      std::cerr << "--field: " << e.what() << "\n";
      return 2;
    }
  }
  auto report = motivic::run_text(text, config);
  if (out_path.empty()) {
    std::cout << report.text();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    out << report.text();
  }
  return static_cast<int>(report.exit);
}
