// qfed_cli - scenario runner for 1D stratified lossy structures.
//
//   qfed_cli run <file> [--out <path>] [--threads N] [--tol T]
//   qfed_cli calibrate <file> --target-ev E
//   qfed_cli units
//
// Exit codes: 0 success, 2 validation error, 3 convergence error, 4 I/O error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qfed/qfed.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_convergence = 3;
constexpr int exit_io = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::ios_base::failure("error while reading " + path);
  return buf.str();
}

int run_command(const std::string& scenario_path, const std::string& out_path, int threads,
                double tol) {
  qfed::Scenario scenario = qfed::parse_scenario(read_file(scenario_path));
  if (threads >= 0) scenario.threads = threads;
  if (tol > 0.0) scenario.quadrature_rtol = tol;

  const qfed::ResultTable table = qfed::run_scenario(scenario);
  if (out_path.empty()) {
    qfed::write_csv(table, std::cout);
    if (!std::cout) throw std::ios_base::failure("error writing to standard output");
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open " + out_path + " for writing");
    qfed::write_csv(table, out);
    out.flush();
    if (!out) throw std::ios_base::failure("error writing " + out_path);
  }
  return exit_ok;
}

int calibrate_command(const std::string& scenario_path, double target_ev) {
  const qfed::Scenario scenario = qfed::parse_scenario(read_file(scenario_path));
  const qfed::CalibrationResult r = qfed::calibrate_thickness(scenario, target_ev);
  std::cout << "d2_um = " << r.d2_um << "\n";
  std::cout << "resonances_ev =";
  for (double e : r.resonances_ev) std::cout << " " << e;
  std::cout << "\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(qfed::version_string) +
               " - photon numbers, DOS kernels, and effective temperatures "
               "of 1D stratified lossy structures"};
  app.require_subcommand(1);

  std::string scenario_path, out_path;
  int threads = -1;
  double tol = 0.0;
  double target_ev = 0.0;

  CLI::App* run = app.add_subcommand("run", "evaluate a scenario file, emit long-format CSV");
  run->add_option("file", scenario_path, "scenario file")->required();
  run->add_option("--out", out_path, "write CSV here instead of standard output");
  run->add_option("--threads", threads, "worker threads (0 = one per core)");
  run->add_option("--tol", tol, "quadrature relative tolerance override");

  CLI::App* cal = app.add_subcommand(
      "calibrate", "find the middle-layer thickness putting the first resonance at a target");
  cal->add_option("file", scenario_path, "three-layer scenario file")->required();
  cal->add_option("--target-ev", target_ev, "target energy of the first resonance, eV")
      ->required();

  CLI::App* units = app.add_subcommand("units", "print constants and unit conventions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? exit_ok : exit_validation;
  }

  try {
    if (units->parsed()) {
      std::cout << qfed::unit_report();
      return exit_ok;
    }
    if (run->parsed()) return run_command(scenario_path, out_path, threads, tol);
    if (cal->parsed()) return calibrate_command(scenario_path, target_ev);
  } catch (const qfed::ScenarioError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return exit_validation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return exit_validation;
  } catch (const qfed::QuadratureNotConverged& e) {
    std::cerr << "convergence error at x = " << e.x_um << " um, E = " << e.energy_ev
              << " eV: " << e.what() << "\n";
    return exit_convergence;
  } catch (const qfed::NoResonanceFound& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return exit_convergence;
  } catch (const qfed::DegenerateWronskian& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return exit_convergence;
  } catch (const qfed::LosslessOuterLayer& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return exit_validation;
  } catch (const qfed::PoleAtResonance& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return exit_convergence;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return exit_io;
  }
  return exit_ok;
}
