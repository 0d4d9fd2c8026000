// stack.hpp - material/geometry model of a 1D stratified structure and the
// thermal source field.
//
// A LayerStack is an ordered list of homogeneous layers. The first and last
// layers are semi-infinite; every inner layer has a finite thickness. The
// first interface sits at x = 0 and the remaining interface positions follow
// from the inner thicknesses. Refractive indices are frequency-independent
// per layer (dispersion tables can be added behind the same accessors later).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfed/constants.hpp"

namespace qfed {

using complexd = std::complex<double>;

struct Layer {
  complexd refractive_index{1.0, 0.0};   // n = n_r + i n_i, passive: n_r > 0, n_i >= 0
  std::optional<double> thickness_um{};  // nullopt marks a semi-infinite outer layer
  double temperature_k = 0.0;

  bool semi_infinite() const { return !thickness_um.has_value(); }

  static Layer half_space(complexd n, double temperature_k) {
    return Layer{n, std::nullopt, temperature_k};
  }
  static Layer slab(complexd n, double thickness_um, double temperature_k) {
    return Layer{n, thickness_um, temperature_k};
  }
};

class LayerStack {
 public:
  explicit LayerStack(std::vector<Layer> layers) : layers_(std::move(layers)) {
    if (layers_.size() < 2)
      throw std::invalid_argument("LayerStack: need at least two layers");
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      const Layer& l = layers_[i];
      const std::string where = "layers[" + std::to_string(i) + "]";
      if (!(l.refractive_index.real() > 0.0))
        throw std::invalid_argument(where + ".refractive_index: requires n_r > 0");
      if (l.refractive_index.imag() < 0.0)
        throw std::invalid_argument(where + ".refractive_index: requires n_i >= 0 (passive media only)");
      if (!(l.temperature_k >= 0.0))
        throw std::invalid_argument(where + ".temperature_K: requires T >= 0");
      const bool outer = (i == 0 || i + 1 == layers_.size());
      if (outer && !l.semi_infinite())
        throw std::invalid_argument(where + ".thickness: first and last layers must be semi-infinite");
      if (!outer) {
        if (l.semi_infinite())
          throw std::invalid_argument(where + ".thickness: only the first and last layers may be semi-infinite");
        if (!(*l.thickness_um > 0.0) || !std::isfinite(*l.thickness_um))
          throw std::invalid_argument(where + ".thickness_um: requires a finite thickness > 0");
      }
    }
    // First interface at x = 0, the rest accumulate inner thicknesses.
    interfaces_.resize(layers_.size() - 1);
    interfaces_[0] = 0.0;
    for (std::size_t j = 1; j < interfaces_.size(); ++j)
      interfaces_[j] = interfaces_[j - 1] + *layers_[j].thickness_um;
  }

  std::size_t size() const { return layers_.size(); }
  const Layer& layer(std::size_t i) const { return layers_[i]; }
  const std::vector<Layer>& layers() const { return layers_; }
  const std::vector<double>& interface_positions() const { return interfaces_; }

  // Total lookup: every finite x maps to exactly one layer. Points exactly on
  // an interface belong to the layer on the right (tie-break is arbitrary but
  // fixed; G and dG/dx are continuous there, so DOS quantities do not care).
  std::size_t layer_index_at(double x) const {
    return static_cast<std::size_t>(
        std::upper_bound(interfaces_.begin(), interfaces_.end(), x) - interfaces_.begin());
  }

  // Layer extent; +-inf for the outer half-spaces.
  double left_edge(std::size_t i) const {
    return i == 0 ? -std::numeric_limits<double>::infinity() : interfaces_[i - 1];
  }
  double right_edge(std::size_t i) const {
    return i + 1 == layers_.size() ? std::numeric_limits<double>::infinity() : interfaces_[i];
  }

  bool uniform() const {
    for (const Layer& l : layers_)
      if (l.refractive_index != layers_.front().refractive_index) return false;
    return true;
  }

 private:
  std::vector<Layer> layers_;
  std::vector<double> interfaces_;
};

// eps(x) = n(x)^2 of the layer containing x (right layer owns interface points).
inline complexd permittivity_at(const LayerStack& stack, double x, double /*energy_ev*/ = 0.0) {
  const complexd n = stack.layer(stack.layer_index_at(x)).refractive_index;
  return n * n;
}

// k(x) = (E / hbar c) n(x), in 1/um. Im k >= 0 for passive media.
inline complexd wavenumber_at(const LayerStack& stack, double x, double energy_ev) {
  return energy_ev / constants::hbar_c_ev_um * stack.layer(stack.layer_index_at(x)).refractive_index;
}

inline complexd wavenumber_of(const Layer& layer, double energy_ev) {
  return energy_ev / constants::hbar_c_ev_um * layer.refractive_index;
}

// Energy propagation velocity v = c / n_r(x), in m/s.
inline double propagation_velocity(const LayerStack& stack, double x, double /*energy_ev*/ = 0.0) {
  return constants::speed_of_light_m_per_s /
         stack.layer(stack.layer_index_at(x)).refractive_index.real();
}

// Bose-Einstein occupation 1/(e^{E/kT} - 1). T = 0 returns exactly 0 without
// touching the exponential.
inline double bose_einstein(double energy_ev, double temperature_k) {
  if (!(energy_ev > 0.0)) throw std::invalid_argument("bose_einstein: requires E > 0");
  if (temperature_k < 0.0) throw std::invalid_argument("bose_einstein: requires T >= 0");
  if (temperature_k == 0.0) return 0.0;
  const double ratio = energy_ev / (constants::k_boltzmann_ev_per_k * temperature_k);
  if (ratio > 700.0) return 0.0;  // below double underflow anyway
  return 1.0 / std::expm1(ratio);
}

namespace detail {

inline std::vector<double> uniform_samples(double min, double max, std::size_t count,
                                           const char* what) {
  if (count == 0) throw std::invalid_argument(std::string(what) + ": count must be >= 1");
  if (count == 1) {
    if (min != max) throw std::invalid_argument(std::string(what) + ": count 1 requires min == max");
    return {min};
  }
  if (!(max > min)) throw std::invalid_argument(std::string(what) + ": requires max > min");
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i)
    v[i] = min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
  v.back() = max;
  return v;
}

inline void require_strictly_increasing(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw std::invalid_argument(std::string(what) + ": empty grid");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1]))
      throw std::invalid_argument(std::string(what) + ": values must be strictly increasing");
}

}  // namespace detail

// Photon-energy sample grid, eV. Strictly increasing, all energies > 0.
class EnergyGrid {
 public:
  static EnergyGrid uniform(double min_ev, double max_ev, std::size_t count) {
    return EnergyGrid(detail::uniform_samples(min_ev, max_ev, count, "EnergyGrid"));
  }
  static EnergyGrid from_values(std::vector<double> values) {
    return EnergyGrid(std::move(values));
  }
  const std::vector<double>& values() const { return values_; }

 private:
  explicit EnergyGrid(std::vector<double> values) : values_(std::move(values)) {
    detail::require_strictly_increasing(values_, "EnergyGrid");
    if (values_.front() <= 0.0)
      throw std::invalid_argument("EnergyGrid: all energies must be > 0");
  }
  std::vector<double> values_;
};

// Position sample grid, um.
class PositionGrid {
 public:
  static PositionGrid uniform(double min_um, double max_um, std::size_t count) {
    return PositionGrid(detail::uniform_samples(min_um, max_um, count, "PositionGrid"));
  }
  static PositionGrid from_values(std::vector<double> values) {
    return PositionGrid(std::move(values));
  }
  const std::vector<double>& values() const { return values_; }

 private:
  explicit PositionGrid(std::vector<double> values) : values_(std::move(values)) {
    detail::require_strictly_increasing(values_, "PositionGrid");
  }
  std::vector<double> values_;
};

}  // namespace qfed
