// sweep.hpp - grid evaluation engine, thickness calibration, unit report.
//
// A sweep dispatches the (x, E) grid points of a scenario to a worker pool.
// Workers share one immutable OutgoingSolutions per energy; every point is an
// independent pure evaluation, and results land in preassigned slots, so the
// emitted table is byte-identical for any thread count.

#pragma once

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "qfed/constants.hpp"
#include "qfed/dos.hpp"
#include "qfed/errors.hpp"
#include "qfed/lossless.hpp"
#include "qfed/observables.hpp"
#include "qfed/scenario.hpp"

namespace qfed {

inline constexpr const char* version_string = "qfed1d 0.1.0";

struct ResultRow {
  double x_um;
  double energy_ev;
  Quantity quantity;
  double value;
  double error_estimate;
};

// Long-format result set. Row order is deterministic: x-major, then energy,
// then quantity name.
struct ResultTable {
  std::vector<Quantity> quantities;
  std::vector<ResultRow> rows;
};

namespace sweep_detail {

inline void extract(const FieldPointResult& r, Quantity q, double& value, double& error) {
  const double unit = constants::pi * constants::hbar_c_ev_um / 2.0;  // raw -> 2/(pi c S)
  switch (q) {
    case Quantity::LdosNormalized: value = r.ldos_raw * unit; error = r.ldos_error * unit; return;
    case Quantity::LdosRaw: value = r.ldos_raw; error = r.ldos_error; return;
    case Quantity::LdosElectric:
      value = r.ldos_electric * unit;
      error = r.ldos_electric_error * unit;
      return;
    case Quantity::LdosMagnetic:
      value = r.ldos_magnetic * unit;
      error = r.ldos_magnetic_error * unit;
      return;
    case Quantity::NTotal: value = r.n_total; error = r.n_total_error; return;
    case Quantity::NPlus: value = r.n_plus; error = r.n_plus_error; return;
    case Quantity::NMinus: value = r.n_minus; error = r.n_minus_error; return;
    case Quantity::Poynting: value = r.poynting; error = r.poynting_error; return;
    case Quantity::EnergyDensity:
      value = r.energy_density;
      error = r.energy_density_error;
      return;
    case Quantity::TEffTotal: value = r.t_eff_total; error = r.t_eff_total_error; return;
    case Quantity::TEffPlus: value = r.t_eff_plus; error = r.t_eff_plus_error; return;
    case Quantity::TEffMinus: value = r.t_eff_minus; error = r.t_eff_minus_error; return;
    case Quantity::CommutatorNormPlus:
      value = r.commutator_norm_plus;
      error = r.commutator_norm_error;
      return;
    case Quantity::CommutatorNormMinus:
      value = r.commutator_norm_minus;
      error = r.commutator_norm_error;
      return;
  }
  value = 0.0;
  error = 0.0;
}

}  // namespace sweep_detail

inline ResultTable run_scenario(const Scenario& scenario) {
  const LayerStack stack = scenario.stack();
  const QuadratureOptions opts{scenario.quadrature_rtol, 20000};

  const std::size_t nx = scenario.positions_um.size();
  const std::size_t ne = scenario.energies_ev.size();

  std::vector<std::unique_ptr<const OutgoingSolutions>> solutions;
  solutions.reserve(ne);
  for (double energy : scenario.energies_ev)
    solutions.push_back(std::make_unique<const OutgoingSolutions>(stack, energy));

  std::vector<FieldPointResult> grid(nx * ne);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  unsigned n_threads = scenario.threads > 0
                           ? static_cast<unsigned>(scenario.threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, std::max<std::size_t>(1, nx * ne));

  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t task = next.fetch_add(1, std::memory_order_relaxed);
      if (task >= nx * ne) return;
      const std::size_t ix = task / ne;
      const std::size_t ie = task % ne;
      try {
        grid[task] = analyze_point(stack, *solutions[ie], scenario.positions_um[ix], opts);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  ResultTable table;
  table.quantities = scenario.outputs;
  table.rows.reserve(nx * ne * scenario.outputs.size());
  for (std::size_t ix = 0; ix < nx; ++ix)
    for (std::size_t ie = 0; ie < ne; ++ie)
      for (Quantity q : scenario.outputs) {
        ResultRow row{scenario.positions_um[ix], scenario.energies_ev[ie], q, 0.0, 0.0};
        sweep_detail::extract(grid[ix * ne + ie], q, row.value, row.error_estimate);
        table.rows.push_back(row);
      }
  return table;
}

namespace sweep_detail {

// Locale-independent shortest round-trip formatting.
inline void append_double(std::string& out, double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace sweep_detail

inline constexpr const char* csv_header = "x_um,E_eV,quantity,value,error_estimate";

inline void write_csv(const ResultTable& table, std::ostream& os) {
  std::string out;
  out.reserve(table.rows.size() * 48 + 64);
  out += csv_header;
  out += '\n';
  for (const ResultRow& row : table.rows) {
    sweep_detail::append_double(out, row.x_um);
    out += ',';
    sweep_detail::append_double(out, row.energy_ev);
    out += ',';
    out += quantity_name(row.quantity);
    out += ',';
    sweep_detail::append_double(out, row.value);
    out += ',';
    sweep_detail::append_double(out, row.error_estimate);
    out += '\n';
  }
  os << out;
}

// ---------------------------------------------------------------------------
// Thickness calibration
// ---------------------------------------------------------------------------

// The resonant energies of the three-layer cavity are the maxima of the
// cavity enhancement factor 1/|1 + r1 r2 e^{2 i k2 d2}|^2 evaluated with the
// complex layer indices. These are the x-independent ridge energies of the
// LDOS map; pointwise LDOS maxima additionally ride position-dependent
// standing-wave backgrounds (even modes have a node at the cavity center),
// which makes them unusable as a resonance locator.
namespace calibration_detail {

inline double enhancement(const complexd& n1, const complexd& n2, const complexd& n3,
                          double d2, double energy_ev) {
  const complexd k2 = energy_ev / constants::hbar_c_ev_um * n2;
  const complexd r1 = (n1 - n2) / (n1 + n2);
  const complexd r2 = (n2 - n3) / (n2 + n3);
  return 1.0 / std::norm(1.0 + r1 * r2 * std::exp(complexd(0.0, 2.0) * k2 * d2));
}

template <class F>
double golden_maximize(F&& f, double a, double b, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// All local maxima of the enhancement factor inside [emin, emax].
inline std::vector<double> resonance_energies(const complexd& n1, const complexd& n2,
                                              const complexd& n3, double d2, double emin,
                                              double emax) {
  auto f = [&](double e) { return enhancement(n1, n2, n3, d2, e); };
  // Grid fine enough to separate maxima one free spectral range apart.
  const double fsr = constants::pi * constants::hbar_c_ev_um / (n2.real() * d2);
  const int count = std::max(200, static_cast<int>(std::ceil(12.0 * (emax - emin) / fsr)));
  std::vector<double> out;
  double e_back2 = 0.0, e_back1 = 0.0, v_back2 = 0.0, v_back1 = 0.0;
  for (int i = 0; i <= count; ++i) {
    const double e = emin + (emax - emin) * i / count;
    const double v = f(e);
    if (i >= 2 && v_back1 > v_back2 && v_back1 > v)
      out.push_back(golden_maximize(f, e_back2, e, 1e-9));
    e_back2 = e_back1;
    v_back2 = v_back1;
    e_back1 = e;
    v_back1 = v;
  }
  return out;
}

}  // namespace calibration_detail

struct CalibrationResult {
  double d2_um;                         // calibrated cavity thickness
  std::vector<double> resonances_ev;    // first three resonances at d2_um
};

// Adjust the middle-layer thickness of a three-layer scenario so the first
// resonance sits at `target_ev`. The scan range in energy is the scenario's
// energy grid extent. Returns the thickness and the first three resonant
// energies (the calibration target plus the two predicted ones).
inline CalibrationResult calibrate_thickness(const Scenario& scenario, double target_ev) {
  if (scenario.layers.size() != 3)
    throw ScenarioError("calibrate: requires a three-layer scenario");
  const double emin = scenario.energies_ev.front();
  const double emax = scenario.energies_ev.back();
  if (!(target_ev > emin && target_ev < emax))
    throw NoResonanceFound("calibrate: target energy lies outside the scenario energy grid");

  const complexd n1 = scenario.layers[0].refractive_index;
  const complexd n2 = scenario.layers[1].refractive_index;
  const complexd n3 = scenario.layers[2].refractive_index;

  auto first_resonance = [&](double d2) -> double {
    const auto res =
        calibration_detail::resonance_energies(n1, n2, n3, d2, emin, emax);
    return res.empty() ? -1.0 : res.front();
  };

  // Free-spectral-range guess, then a bisection bracket on the monotone
  // relation between thickness and first-resonance energy (thicker cavity,
  // lower resonance). Gentle expansion steps keep the first resonance inside
  // the scan range while the bracket forms.
  const double d_guess = constants::pi * constants::hbar_c_ev_um / (n2.real() * target_ev);
  double lo = d_guess, hi = d_guess;
  double e_lo = first_resonance(lo);
  double e_hi = e_lo;
  if (e_lo < 0.0)
    throw NoResonanceFound("calibrate: no resonance in the scan range near the estimate");
  for (int i = 0; i < 60 && e_lo <= target_ev; ++i) {
    lo *= 0.85;
    e_lo = first_resonance(lo);
    if (e_lo < 0.0)
      throw NoResonanceFound("calibrate: first resonance left the scan range while bracketing");
  }
  for (int i = 0; i < 60 && e_hi > target_ev; ++i) {
    hi *= 1.2;
    e_hi = first_resonance(hi);
    if (e_hi < 0.0)
      throw NoResonanceFound("calibrate: first resonance left the scan range while bracketing");
  }
  if (!(e_lo > target_ev) || !(e_hi <= target_ev))
    throw NoResonanceFound("calibrate: could not bracket the target energy in the scan range");

  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double e1 = first_resonance(mid);
    if (e1 < 0.0) throw NoResonanceFound("calibrate: resonance left the scan range");
    if (e1 > target_ev)
      lo = mid;
    else
      hi = mid;
  }

  CalibrationResult out;
  out.d2_um = 0.5 * (lo + hi);
  auto res = calibration_detail::resonance_energies(n1, n2, n3, out.d2_um, emin, emax);
  if (res.empty()) throw NoResonanceFound("calibrate: no resonance found at calibrated d2");
  if (res.size() > 3) res.resize(3);
  out.resonances_ev = std::move(res);
  return out;
}

// ---------------------------------------------------------------------------
// Unit report
// ---------------------------------------------------------------------------

inline std::string unit_report() {
  std::string s;
  s += version_string;
  s += "\n\n";
  s += "Constants (CODATA 2018):\n";
  s += "  hbar*c = 197.3269804 eV nm = 0.1973269804 eV um\n";
  s += "  k_B    = 8.617333262e-5 eV/K\n";
  s += "  c      = 2.99792458e8 m/s\n";
  s += "  S      = 1 (quantization area; cancels in photon numbers and T_eff)\n\n";
  s += "Unit conventions:\n";
  s += "  photon energy E = hbar*omega in eV; positions in um; temperatures in K\n";
  s += "  wave number k = (E/hbar c) n(x), 1/um\n\n";
  s += "Output columns (long-format CSV: x_um,E_eV,quantity,value,error_estimate):\n";
  s += "  ldos, ldos_electric, ldos_magnetic ... in units of 2/(pi c S)\n";
  s += "  ldos_raw ........................... 1/(eV um) per unit S\n";
  s += "  n_total, n_plus, n_minus ........... photon numbers (dimensionless)\n";
  s += "  poynting ........................... eV/s per eV bandwidth per unit S\n";
  s += "  energy_density ..................... eV/um per eV bandwidth per unit S\n";
  s += "  t_eff_total, t_eff_plus, t_eff_minus ... K\n";
  s += "  commutator_norm_plus/minus ......... dimensionless (contract: 1)\n";
  return s;
}

}  // namespace qfed
