#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ermakov/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"solvers and symmetry checks for oscillator-reducible equations"};
  app.require_subcommand(1);

  struct SubState {
    std::string spec;
    ermakov::cli::CliOverrides ov;
    double rtol = 0.0, atol = 0.0;
    int grid = 0;
  };

  const std::vector<std::string> names = {"solve",     "verify-symmetry",
                                          "first-integral", "linearize",
                                          "reduce",    "catalog"};
  const std::vector<std::string> blurbs = {
      "closed-form solution vs. direct integration (CSV)",
      "generator residuals and commutator table (JSON)",
      "first-integral drift along an integrated curve (CSV)",
      "point-linearization test of the cubic H (JSON)",
      "reduction-to-quadratures pipeline vs. direct integration (CSV)",
      "list the analytic bases and equation families"};

  std::vector<SubState> states(names.size());
  for (size_t i = 0; i < names.size(); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
    SubState& st = states[i];
    auto* spec = sub->add_option("--spec", st.spec, "equation spec file (JSON)");
    if (names[i] != "catalog") spec->required();
    sub->add_option("--out", st.ov.out_dir, "output directory")
        ->default_val(".");
    sub->add_option("--rtol", st.rtol, "relative tolerance override");
    sub->add_option("--atol", st.atol, "absolute tolerance override");
    sub->add_option("--grid", st.grid, "sample count override");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  for (size_t i = 0; i < names.size(); ++i) {
    CLI::App* sub = app.get_subcommand(names[i]);
    if (!sub->parsed()) continue;
    SubState& st = states[i];
    if (sub->count("--rtol")) st.ov.rtol = st.rtol;
    if (sub->count("--atol")) st.ov.atol = st.atol;
    if (sub->count("--grid")) st.ov.grid = st.grid;
    return ermakov::cli::run_command(names[i], st.spec, st.ov, std::cout, std::cerr);
  }
  return 1;
}
