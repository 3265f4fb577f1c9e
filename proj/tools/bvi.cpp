#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bvi/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bregman variational inequality solvers: experiments, plots and property checks"};
  app.require_subcommand(1);

  std::string config;
  auto* solve = app.add_subcommand("solve", "Run an experiment described by a JSON config");
  solve->add_option("config", config, "Path to the config file")->required();

  std::vector<std::string> csvs;
  std::string cols;
  std::string svg;
  auto* plot = app.add_subcommand("plot", "Render CSV columns as a log-scale SVG line plot");
  plot->add_option("csv", csvs, "CSV files written by 'solve'")->required();
  plot->add_option("--cols", cols, "Comma-separated column names")->required();
  plot->add_option("-o,--output", svg, "Output SVG path")->required();

  std::string problem;
  std::string property;
  bvi::cli::CheckOptions check_opts;
  double constant = 0.0;
  auto* check = app.add_subcommand("check", "Sample-check a declared constant of a built-in problem");
  check->add_option("problem", problem, "Problem id")->required();
  check->add_option("--property", property, "rel-strong-monotone | rel-bounded | rel-smooth")->required();
  check->add_option("--n", check_opts.params.n, "Dimension");
  check->add_option("--p", check_opts.params.p, "Power-norm exponent");
  check->add_option("--alpha", check_opts.params.alpha, "Box half-width");
  check->add_option("--m", check_opts.params.m, "ERM machine count");
  check->add_option("--delta", check_opts.params.delta, "ERM similarity");
  check->add_option("--mu-base", check_opts.params.mu_base, "ERM strong convexity");
  check->add_option("--eps", check_opts.params.eps, "Lagrangian regularization");
  check->add_option("--seed", check_opts.seed, "Seed for problem generation and sampling");
  check->add_option("--samples", check_opts.samples, "Number of sampled pairs or triples");
  check->add_option("--scale", check_opts.scale, "Multiply the tested constant by this factor");
  auto* constant_opt = check->add_option("--constant", constant, "Test this constant instead of the declared one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*solve) return bvi::cli::run_solve(config, std::cout, std::cerr);
  if (*plot) {
    std::vector<std::string> names;
    std::string item;
    for (char c : cols + ",") {
      if (c == ',') {
        if (!item.empty()) names.push_back(item);
        item.clear();
      } else {
        item += c;
      }
    }
    return bvi::cli::run_plot({csvs.begin(), csvs.end()}, names, svg, std::cout, std::cerr);
  }
  check_opts.params.seed = check_opts.seed;
  if (*constant_opt) check_opts.constant = constant;
  return bvi::cli::run_check(problem, property, check_opts, std::cout, std::cerr);
}
