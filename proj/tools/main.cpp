#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "legendre_cs/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Legendre Gabor frame compressive sensing experiments"};
  app.footer(lcs::config_schema());

  std::string command;
  std::string config_path;
  app.add_option("command", command, "verify|coherence|sine-sum|scaling|flat-rip|decompose|char-sums|recover");
  app.add_option("--config", config_path, "key=value config file");

  const std::vector<std::pair<std::string, std::string>> flags = {
      {"p", "N"},          {"p-range", "LO:HI"}, {"points", "N"},      {"sigma", "F"},
      {"delta", "F"},      {"epsilon", "F"},     {"m1len", "N"},       {"m2len", "N"},
      {"k", "N"},          {"k-range", "LO:HI"}, {"trials", "N"},      {"seed", "N"},
      {"convention", "paper|unit"}, {"mode", "theorem|free"}, {"method", "omp|ista"},
      {"workers", "N"},    {"out", "PATH"},
  };
  std::vector<std::string> values(flags.size());
  std::vector<CLI::Option*> options;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    options.push_back(app.add_option("--" + flags[i].first, values[i])->type_name(flags[i].second));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::string text;
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot read config " << config_path << '\n';
      return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }

  std::vector<std::pair<std::string, std::string>> overrides;
  if (!command.empty()) overrides.emplace_back("command", command);
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (options[i]->count() == 0) continue;
    std::string key = flags[i].first;
    for (char& c : key)
      if (c == '-') c = '_';
    overrides.emplace_back(key, values[i]);
  }

  const lcs::ParseOutcome parsed = lcs::parse_config(text, overrides);
  if (!parsed.config) {
    for (const auto& e : parsed.errors) std::cerr << e.where << ": " << e.message << '\n';
    return 2;
  }
  return lcs::run(*parsed.config, std::cout, std::cerr);
}
