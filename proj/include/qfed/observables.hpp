// observables.hpp - physical observables assembled from the DOS source
// integrals and the thermal source field.
//
// Every photon number is a weighted average of the per-layer source
// occupations: the total number weights with rho_NL, the directional numbers
// with rho_NL +- rho_IF (denominator equal to the LDOS, since rho_IF
// integrates to zero). The Poynting vector and energy density follow either
// directly from the interference integral or from the directional photon
// numbers with rho_+ = rho_- = rho/2; both routes are exposed and agree to
// rounding.
//
// Spectral unit conventions (per unit S, per eV of bandwidth):
//   energy density  u = hbar w rho (n + 1/2)         -> eV/um
//   Poynting        S = hbar w v int rho_IF <eta> dx' -> eV/s   (v in um/s)

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "qfed/constants.hpp"
#include "qfed/dos.hpp"
#include "qfed/stack.hpp"

namespace qfed {

// Thermal source occupation <eta(x', w)>: Bose-Einstein at the local layer
// temperature, piecewise constant per layer.
class SourceField {
 public:
  SourceField(const LayerStack& stack, double energy_ev) {
    per_layer_.reserve(stack.size());
    for (const Layer& l : stack.layers())
      per_layer_.push_back(bose_einstein(energy_ev, l.temperature_k));
  }
  double layer_value(std::size_t i) const { return per_layer_[i]; }
  const std::vector<double>& per_layer() const { return per_layer_; }

 private:
  std::vector<double> per_layer_;
};

// Effective field temperature: the temperature whose Bose-Einstein occupation
// reproduces n at this photon energy. Continuously extended to 0 K at n = 0.
inline double effective_temperature(double energy_ev, double n) {
  if (!(energy_ev > 0.0)) throw std::invalid_argument("effective_temperature: requires E > 0");
  if (n < 0.0) throw std::invalid_argument("effective_temperature: requires n >= 0");
  if (n == 0.0) return 0.0;
  return energy_ev / (constants::k_boltzmann_ev_per_k * std::log1p(1.0 / n));
}

namespace obs_detail {

struct WeightedSums {
  double rho;        // int rho_NL dx' = LDOS
  double rho_err;
  double nl_eta;     // int rho_NL <eta> dx'
  double nl_eta_err;
  double if_total;   // int rho_IF dx' (zero up to quadrature error)
  double if_err;
  double if_eta;     // int rho_IF <eta> dx'
  double if_eta_err;
};

inline WeightedSums weighted_sums(const SourceIntegrals& s, const SourceField& eta) {
  WeightedSums w{};
  for (std::size_t j = 0; j < s.per_layer.size(); ++j) {
    const SourceTerms& v = s.per_layer[j].value;
    const SourceTerms& e = s.per_layer[j].error;
    const double occupancy = eta.layer_value(j);
    const double nl = v.electric + v.magnetic;
    const double nl_err = e.electric + e.magnetic;
    w.rho += nl;
    w.rho_err += nl_err;
    w.nl_eta += occupancy * nl;
    w.nl_eta_err += occupancy * nl_err;
    w.if_total += v.interference;
    w.if_err += e.interference;
    w.if_eta += occupancy * v.interference;
    w.if_eta_err += occupancy * e.interference;
  }
  return w;
}

inline double ratio_error(double num, double num_err, double den, double den_err) {
  return (num_err + std::abs(num / den) * den_err) / std::abs(den);
}

}  // namespace obs_detail

// <n(x, w)>: weighted average of the source occupations with rho_NL weights.
inline double photon_number_total(const LayerStack& stack, const OutgoingSolutions& sol,
                                  double x, const QuadratureOptions& opts = {}) {
  const auto w = obs_detail::weighted_sums(integrate_sources(stack, sol, x, opts),
                                           SourceField(stack, sol.energy_ev()));
  return w.nl_eta / w.rho;
}

inline double photon_number_total(const LayerStack& stack, double energy_ev, double x,
                                  const QuadratureOptions& opts = {}) {
  return photon_number_total(stack, OutgoingSolutions(stack, energy_ev), x, opts);
}

// <n_+-(x, w)>: directional photon numbers, weights rho_NL +- rho_IF over the
// LDOS denominator.
inline double photon_number_directional(const LayerStack& stack, const OutgoingSolutions& sol,
                                        double x, int sign,
                                        const QuadratureOptions& opts = {}) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("photon_number_directional: sign must be +1 or -1");
  const auto w = obs_detail::weighted_sums(integrate_sources(stack, sol, x, opts),
                                           SourceField(stack, sol.energy_ev()));
  return (w.nl_eta + static_cast<double>(sign) * w.if_eta) / w.rho;
}

inline double photon_number_directional(const LayerStack& stack, double energy_ev, double x,
                                        int sign, const QuadratureOptions& opts = {}) {
  return photon_number_directional(stack, OutgoingSolutions(stack, energy_ev), x, sign, opts);
}

// <S(x)>_w = hbar w v int rho_IF <eta> dx'   [eV/s per eV bandwidth per S]
inline double poynting(const LayerStack& stack, const OutgoingSolutions& sol, double x,
                       const QuadratureOptions& opts = {}) {
  const double energy = sol.energy_ev();
  const auto w = obs_detail::weighted_sums(integrate_sources(stack, sol, x, opts),
                                           SourceField(stack, energy));
  const double v = constants::speed_of_light_um_per_s /
                   stack.layer(stack.layer_index_at(x)).refractive_index.real();
  return energy * v * w.if_eta;
}

inline double poynting(const LayerStack& stack, double energy_ev, double x,
                       const QuadratureOptions& opts = {}) {
  return poynting(stack, OutgoingSolutions(stack, energy_ev), x, opts);
}

// Same observable through the directional photon numbers,
// S = hbar w v (rho/2) (n_+ - n_-); agrees with poynting() to rounding.
inline double poynting_directional(const LayerStack& stack, const OutgoingSolutions& sol,
                                   double x, const QuadratureOptions& opts = {}) {
  const double energy = sol.energy_ev();
  const auto w = obs_detail::weighted_sums(integrate_sources(stack, sol, x, opts),
                                           SourceField(stack, energy));
  const double n_plus = (w.nl_eta + w.if_eta) / w.rho;
  const double n_minus = (w.nl_eta - w.if_eta) / w.rho;
  const double v = constants::speed_of_light_um_per_s /
                   stack.layer(stack.layer_index_at(x)).refractive_index.real();
  return energy * v * (w.rho / 2.0) * (n_plus - n_minus);
}

// <u(x)>_w = hbar w rho (n + 1/2)   [eV/um per eV bandwidth per S]
inline double energy_density(const LayerStack& stack, const OutgoingSolutions& sol, double x,
                             const QuadratureOptions& opts = {}) {
  const double energy = sol.energy_ev();
  const auto w = obs_detail::weighted_sums(integrate_sources(stack, sol, x, opts),
                                           SourceField(stack, energy));
  return energy * w.rho * (w.nl_eta / w.rho + 0.5);
}

inline double energy_density(const LayerStack& stack, double energy_ev, double x,
                             const QuadratureOptions& opts = {}) {
  return energy_density(stack, OutgoingSolutions(stack, energy_ev), x, opts);
}

// Two-term directional decomposition u = hbar w (rho/2) [(n_+ + 1/2) + (n_- + 1/2)];
// identical to energy_density() by construction.
inline double energy_density_directional(const LayerStack& stack, const OutgoingSolutions& sol,
                                         double x, const QuadratureOptions& opts = {}) {
  const double energy = sol.energy_ev();
  const auto w = obs_detail::weighted_sums(integrate_sources(stack, sol, x, opts),
                                           SourceField(stack, energy));
  const double n_plus = (w.nl_eta + w.if_eta) / w.rho;
  const double n_minus = (w.nl_eta - w.if_eta) / w.rho;
  return energy * (w.rho / 2.0) * ((n_plus + 0.5) + (n_minus + 0.5));
}

// Everything the sweep engine reports at one (x, E), from a single pass of
// source integration. Pure function of immutable inputs; grid evaluations are
// independent and order-insensitive.
struct FieldPointResult {
  double ldos_raw;       // 1/(eV um)
  double ldos_electric;  // raw units
  double ldos_magnetic;
  double ldos_error;
  double ldos_electric_error;
  double ldos_magnetic_error;
  double n_total, n_plus, n_minus;
  double n_total_error, n_plus_error, n_minus_error;
  double poynting;  // interference-integral route
  double poynting_error;
  double energy_density;
  double energy_density_error;
  double t_eff_total, t_eff_plus, t_eff_minus;
  double t_eff_total_error, t_eff_plus_error, t_eff_minus_error;
  double commutator_norm_plus, commutator_norm_minus;
  double commutator_norm_error;
};

inline FieldPointResult analyze_point(const LayerStack& stack, const OutgoingSolutions& sol,
                                      double x, const QuadratureOptions& opts = {}) {
  const double energy = sol.energy_ev();
  const SourceIntegrals s = integrate_sources(stack, sol, x, opts);
  const SourceField eta(stack, energy);
  const auto w = obs_detail::weighted_sums(s, eta);

  FieldPointResult r{};
  r.ldos_raw = w.rho;
  r.ldos_electric = s.total.electric;
  r.ldos_magnetic = s.total.magnetic;
  r.ldos_error = w.rho_err;
  r.ldos_electric_error = s.total_error.electric;
  r.ldos_magnetic_error = s.total_error.magnetic;

  r.n_total = w.nl_eta / w.rho;
  r.n_plus = (w.nl_eta + w.if_eta) / w.rho;
  r.n_minus = (w.nl_eta - w.if_eta) / w.rho;
  r.n_total_error = obs_detail::ratio_error(w.nl_eta, w.nl_eta_err, w.rho, w.rho_err);
  r.n_plus_error =
      obs_detail::ratio_error(w.nl_eta + w.if_eta, w.nl_eta_err + w.if_eta_err, w.rho, w.rho_err);
  r.n_minus_error = r.n_plus_error;

  const double v = constants::speed_of_light_um_per_s /
                   stack.layer(stack.layer_index_at(x)).refractive_index.real();
  r.poynting = energy * v * w.if_eta;
  r.poynting_error = energy * v * w.if_eta_err;
  r.energy_density = energy * w.rho * (r.n_total + 0.5);
  r.energy_density_error = energy * (w.nl_eta_err + 0.5 * w.rho_err);

  auto t_eff_with_error = [energy](double n, double n_err, double& t, double& t_err) {
    t = effective_temperature(energy, std::max(n, 0.0));
    if (n > 0.0) {
      const double log_term = std::log1p(1.0 / n);
      t_err = n_err * energy /
              (constants::k_boltzmann_ev_per_k * log_term * log_term * n * (n + 1.0));
    } else {
      t_err = 0.0;
    }
  };
  t_eff_with_error(r.n_total, r.n_total_error, r.t_eff_total, r.t_eff_total_error);
  t_eff_with_error(r.n_plus, r.n_plus_error, r.t_eff_plus, r.t_eff_plus_error);
  t_eff_with_error(r.n_minus, r.n_minus_error, r.t_eff_minus, r.t_eff_minus_error);

  r.commutator_norm_plus = (w.rho + w.if_total) / w.rho;
  r.commutator_norm_minus = (w.rho - w.if_total) / w.rho;
  r.commutator_norm_error = obs_detail::ratio_error(w.if_total, w.if_err, w.rho, w.rho_err);
  return r;
}

inline FieldPointResult analyze_point(const LayerStack& stack, double energy_ev, double x,
                                      const QuadratureOptions& opts = {}) {
  return analyze_point(stack, OutgoingSolutions(stack, energy_ev), x, opts);
}

}  // namespace qfed
