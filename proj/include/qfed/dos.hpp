// dos.hpp - density-of-states kernels and their source-point integrals.
//
// Three kernels weight the contribution of a source point x' to the field at
// x (all per unit quantization area S, per eV, per um):
//
//   nonlocal DOS   rho_NL = pref_nl(x) eps_i(x') (|G|^2 + |dG/(k dx)|^2)
//   interference   rho_IF = pref_if(x) eps_i(x') Re(i w G dG*/dx)
//   local DOS      rho    = integral of rho_NL over all x'
//
// with pref_nl = E^3 |eps(x)| / (pi (hbar c)^4 S) and
// pref_if = 2 E^2 n_r(x) / (pi (hbar c)^3 S) in the eV/um unit system (the
// frequency factors of the rad/s formulation are folded into the prefactors
// together with the per-eV spectral conversion).
//
// The x' integral runs over the whole real line. Finite lossy layers are
// integrated by adaptive Gauss-Kronrod quadrature with subdivision at layer
// interfaces and at the integrand kink x' = x; lossless inner layers are
// skipped exactly (eps_i = 0). The two semi-infinite outer layers are
// integrated in closed form: past the outermost interface the outgoing
// solution on that side is a single exponential, so the tail integrand is one
// decaying exponential whose integral carries the exact ratio
// eps_i / (2 Im k) = n_r hbar c / E, finite even in the lossless limit; the
// finite piece between a field point inside an outer layer and the adjacent
// interface is a three-term exponential polynomial, also integrated exactly.
// No truncation length exists anywhere, which is what makes the zero-integral
// identity of rho_IF achievable at tight tolerance.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "qfed/constants.hpp"
#include "qfed/errors.hpp"
#include "qfed/greens.hpp"
#include "qfed/quadrature.hpp"
#include "qfed/stack.hpp"

namespace qfed {

struct DosSample {
  double rho_nl;  // >= 0 always
  double rho_if;  // either sign
};

struct LdosBreakdown {
  double total;     // 1/(eV um) per unit S
  double electric;  // |G|^2 term only
  double magnetic;  // |dG/(k dx)|^2 term only; electric + magnetic == total
};

// LDOS in the reporting units 2/(pi c S) (a uniform medium of index n gives
// n_r/2 in these units).
inline double ldos_reporting_units(double raw_per_ev_um) {
  return raw_per_ev_um * constants::pi * constants::hbar_c_ev_um / 2.0;
}

namespace dos_detail {

struct KernelPrefactors {
  double nl;      // E^3 |eps(x)| / (pi (hbar c)^4 S)
  double iff;     // 2 E^2 n_r(x) / (pi (hbar c)^3 S)
  double inv_k2;  // 1 / |k(x)|^2
};

inline KernelPrefactors prefactors_at(const LayerStack& stack, double x, double energy_ev) {
  const complexd n = stack.layer(stack.layer_index_at(x)).refractive_index;
  const double hc = constants::hbar_c_ev_um;
  const double S = constants::quantization_area;
  KernelPrefactors p;
  p.nl = energy_ev * energy_ev * energy_ev * std::norm(n) / (constants::pi * hc * hc * hc * hc * S);
  p.iff = 2.0 * energy_ev * energy_ev * n.real() / (constants::pi * hc * hc * hc * S);
  const complexd k = energy_ev / hc * n;
  p.inv_k2 = 1.0 / std::norm(k);
  return p;
}

inline double eps_imag(const Layer& layer) {
  const complexd n = layer.refractive_index;
  return 2.0 * n.real() * n.imag();  // Im(n^2), exact
}

// integral of e^{w u} du over [lo, hi]
inline complexd exp_integral(complexd w, double lo, double hi) {
  const double span = std::max(std::abs(lo), std::abs(hi));
  if (std::abs(w) * span < 1e-10)
    return complexd(hi - lo) * (1.0 + 0.5 * w * (hi + lo));
  if (w.imag() == 0.0)  // pure decay/growth: expm1 keeps the difference exact
    return complexd(std::expm1(w.real() * hi) - std::expm1(w.real() * lo)) / w;
  return (std::exp(w * hi) - std::exp(w * lo)) / w;
}

// integral over [lo, hi] of (A e^{i k u} + B e^{-i k u}) conj(C e^{i k u} + D e^{-i k u})
inline complexd cross_integral(complexd A, complexd B, complexd C, complexd D, complexd k,
                               double lo, double hi) {
  const double kappa2 = 2.0 * k.imag();
  const complexd osc(0.0, 2.0 * k.real());
  complexd out = 0.0;
  // zero coefficients are skipped so a vanished amplitude never multiplies a
  // large growing integral
  auto add = [&](complexd coef, complexd w) {
    if (coef != 0.0) out += coef * exp_integral(w, lo, hi);
  };
  add(A * std::conj(C), complexd(-kappa2, 0.0));
  add(B * std::conj(D), complexd(kappa2, 0.0));
  add(A * std::conj(D), osc);
  add(B * std::conj(C), -osc);
  return out;
}

}  // namespace dos_detail

// Nonlocal DOS kernel at (x, E, x'). Zero whenever the source layer is lossless.
inline double nldos(const LayerStack& stack, const OutgoingSolutions& sol, double x,
                    double x_src) {
  const double eps_i = dos_detail::eps_imag(stack.layer(stack.layer_index_at(x_src)));
  if (eps_i == 0.0) return 0.0;
  const auto pref = dos_detail::prefactors_at(stack, x, sol.energy_ev());
  const GreensEvaluation g = sol.greens(x, x_src);
  return pref.nl * eps_i * (std::norm(g.value) + std::norm(g.derivative) * pref.inv_k2);
}

inline double nldos(const LayerStack& stack, double energy_ev, double x, double x_src) {
  return nldos(stack, OutgoingSolutions(stack, energy_ev), x, x_src);
}

// Interference DOS kernel at (x, E, x').
inline double ifdos(const LayerStack& stack, const OutgoingSolutions& sol, double x,
                    double x_src) {
  const double eps_i = dos_detail::eps_imag(stack.layer(stack.layer_index_at(x_src)));
  if (eps_i == 0.0) return 0.0;
  const auto pref = dos_detail::prefactors_at(stack, x, sol.energy_ev());
  const GreensEvaluation g = sol.greens(x, x_src);
  // Re(i z) = -Im(z)
  return -pref.iff * eps_i * std::imag(g.value * std::conj(g.derivative));
}

inline double ifdos(const LayerStack& stack, double energy_ev, double x, double x_src) {
  return ifdos(stack, OutgoingSolutions(stack, energy_ev), x, x_src);
}

inline DosSample dos_sample(const LayerStack& stack, const OutgoingSolutions& sol, double x,
                            double x_src) {
  return DosSample{nldos(stack, sol, x, x_src), ifdos(stack, sol, x, x_src)};
}

struct SourceTerms {
  double electric = 0.0;
  double magnetic = 0.0;
  double interference = 0.0;
};

struct LayerSourceIntegral {
  SourceTerms value;
  SourceTerms error;
};

// Source integrals of the three kernels, resolved per layer so that
// observables can weight each layer by its thermal occupation.
struct SourceIntegrals {
  double x_um = 0.0;
  double energy_ev = 0.0;
  std::vector<LayerSourceIntegral> per_layer;
  SourceTerms total;
  SourceTerms total_error;

  double ldos_raw() const { return total.electric + total.magnetic; }
  double ldos_error() const { return total_error.electric + total_error.magnetic; }
  double interference_integral() const { return total.interference; }
};

namespace dos_detail {

struct WaveAt {
  complexd value;
  complexd derivative;
};

inline WaveAt evaluate(const OutgoingSolutions::Wave& w, complexd k, double x, double ref_fwd,
                       double ref_bwd) {
  const complexd I(0.0, 1.0);
  const complexd ef = std::exp(I * k * (x - ref_fwd));
  const complexd eb = std::exp(-I * k * (x - ref_bwd));
  return WaveAt{w.fwd * ef + w.bwd * eb, I * k * (w.fwd * ef - w.bwd * eb)};
}

// Closed-form source integrals of the three kernels for G of the form
// A e^{i k u} + B e^{-i k u} (derivative coefficients Ad, Bd) over u in [lo, hi].
inline SourceTerms analytic_terms(complexd A, complexd B, complexd Ad, complexd Bd, complexd k,
                                  double lo, double hi, const KernelPrefactors& pref,
                                  double eps_i) {
  SourceTerms out;
  if (eps_i == 0.0) return out;
  out.electric = pref.nl * eps_i * std::real(cross_integral(A, B, A, B, k, lo, hi));
  out.magnetic = pref.nl * eps_i * pref.inv_k2 * std::real(cross_integral(Ad, Bd, Ad, Bd, k, lo, hi));
  out.interference = -pref.iff * eps_i * std::imag(cross_integral(A, B, Ad, Bd, k, lo, hi));
  return out;
}

}  // namespace dos_detail

// Integrate the DOS kernels over all source points for one field point.
// Requires lossy outer layers unless the stack is a uniform single medium
// (handled exactly through the eps_i / (2 Im k) ratio in the tails).
inline SourceIntegrals integrate_sources(const LayerStack& stack, const OutgoingSolutions& sol,
                                         double x, const QuadratureOptions& opts = {}) {
  using dos_detail::analytic_terms;
  using dos_detail::eps_imag;
  const std::size_t n = stack.size();
  const std::size_t last = n - 1;
  const double energy = sol.energy_ev();

  if (!stack.uniform() &&
      (eps_imag(stack.layer(0)) == 0.0 || eps_imag(stack.layer(last)) == 0.0))
    throw LosslessOuterLayer(
        "source integrals need lossy outer layers (or a uniform stack); "
        "use the lossless cavity closed forms instead");

  SourceIntegrals out;
  out.x_um = x;
  out.energy_ev = energy;
  out.per_layer.resize(n);

  const auto pref = dos_detail::prefactors_at(stack, x, energy);
  const std::size_t xq = stack.layer_index_at(x);
  const complexd I(0.0, 1.0);
  const complexd w_inv = 1.0 / sol.wronskian();
  const double hc = constants::hbar_c_ev_um;

  // Field-side solution values; each is needed only on the side where it is
  // bounded (psi_L left of the last layer, psi_R right of the first).
  dos_detail::WaveAt field_left{}, field_right{};
  if (xq < last)
    field_left = dos_detail::evaluate(sol.left_solution(xq), sol.wavenumber(xq), x,
                                      sol.forward_ref(xq), sol.backward_ref(xq));
  if (xq > 0)
    field_right = dos_detail::evaluate(sol.right_solution(xq), sol.wavenumber(xq), x,
                                       sol.forward_ref(xq), sol.backward_ref(xq));

  // ---- left outer layer: pure tail plus, when x sits inside it, the exact
  // segment between x and the first interface ----
  {
    const complexd k0 = sol.wavenumber(0);
    const double b0 = stack.interface_positions().front();
    const complexd bl = sol.left_solution(0).bwd;
    const complexd ar = sol.right_solution(0).fwd;
    const complexd br = sol.right_solution(0).bwd;
    complexd g, h;
    if (xq > 0) {
      const complexd phase = std::exp(sol.pair_phase_exponent(0, xq));
      g = -bl * field_right.value * phase * w_inv;
      h = -bl * field_right.derivative * phase * w_inv;
    } else {
      const complexd shift = std::exp(-2.0 * I * k0 * (x - b0));
      g = -bl * (ar + br * shift) * w_inv;
      h = -bl * I * k0 * (ar - br * shift) * w_inv;
    }
    const double ratio = stack.layer(0).refractive_index.real() * hc / energy;
    SourceTerms tail;
    tail.electric = pref.nl * std::norm(g) * ratio;
    tail.magnetic = pref.nl * std::norm(h) * pref.inv_k2 * ratio;
    tail.interference = -pref.iff * std::imag(g * std::conj(h)) * ratio;
    if (xq == 0 && x < b0) {
      const complexd shift = std::exp(-2.0 * I * k0 * (x - b0));
      const complexd A = -bl * ar * w_inv;
      const complexd B = -bl * br * shift * w_inv;
      const SourceTerms seg = analytic_terms(A, B, -I * k0 * A, -I * k0 * B, k0, 0.0, b0 - x,
                                             pref, eps_imag(stack.layer(0)));
      tail.electric += seg.electric;
      tail.magnetic += seg.magnetic;
      tail.interference += seg.interference;
    }
    out.per_layer[0].value = tail;
  }

  // ---- right outer layer, mirrored ----
  {
    const complexd kp = sol.wavenumber(last);
    const double ap = stack.interface_positions().back();
    const complexd ar = sol.right_solution(last).fwd;
    const complexd al = sol.left_solution(last).fwd;
    const complexd bl = sol.left_solution(last).bwd;
    complexd g, h;
    if (xq < last) {
      const complexd phase = std::exp(sol.pair_phase_exponent(xq, last));
      g = -field_left.value * ar * phase * w_inv;
      h = -field_left.derivative * ar * phase * w_inv;
    } else {
      const complexd shift = std::exp(2.0 * I * kp * (x - ap));
      g = -(al * shift + bl) * ar * w_inv;
      h = -I * kp * (al * shift - bl) * ar * w_inv;
    }
    const double ratio = stack.layer(last).refractive_index.real() * hc / energy;
    SourceTerms tail;
    tail.electric = pref.nl * std::norm(g) * ratio;
    tail.magnetic = pref.nl * std::norm(h) * pref.inv_k2 * ratio;
    tail.interference = -pref.iff * std::imag(g * std::conj(h)) * ratio;
    if (xq == last && x > ap) {
      const complexd shift = std::exp(2.0 * I * kp * (x - ap));
      const complexd A = -al * shift * ar * w_inv;
      const complexd B = -bl * ar * w_inv;
      const SourceTerms seg = analytic_terms(A, B, I * kp * A, I * kp * B, kp, ap - x, 0.0,
                                             pref, eps_imag(stack.layer(last)));
      tail.electric += seg.electric;
      tail.magnetic += seg.magnetic;
      tail.interference += seg.interference;
    }
    out.per_layer[last].value = tail;
  }

  // Scale entering the quadrature floors: the (partial) LDOS accumulated so
  // far plus a one-panel estimate of each lossy inner layer.
  double scale = out.per_layer[0].value.electric + out.per_layer[0].value.magnetic +
                 out.per_layer[last].value.electric + out.per_layer[last].value.magnetic;

  struct InnerJob {
    std::size_t layer;
    std::vector<std::pair<double, double>> intervals;
  };
  std::vector<InnerJob> jobs;
  for (std::size_t j = 1; j < last; ++j) {
    if (eps_imag(stack.layer(j)) == 0.0) continue;  // exact zero, not integrated
    const double a = stack.interface_positions()[j - 1];
    const double b = stack.interface_positions()[j];
    InnerJob job{j, {}};
    if (x > a && x < b) {  // kink of |x - x'| inside the layer
      job.intervals.push_back({a, x});
      job.intervals.push_back({x, b});
    } else {
      job.intervals.push_back({a, b});
    }
    jobs.push_back(std::move(job));
  }

  // Kernel evaluation shared by all components: one Green's function per node.
  auto make_integrand = [&](std::size_t j) {
    const complexd kj = sol.wavenumber(j);
    const double rf = sol.forward_ref(j);
    const double rb = sol.backward_ref(j);
    const OutgoingSolutions::Wave wl = sol.left_solution(j);
    const OutgoingSolutions::Wave wr = sol.right_solution(j);
    const double eps_i = eps_imag(stack.layer(j));
    // coefficients mapping the source-side wave to G and dG/dx
    complexd cg_right{}, ch_right{}, cg_left{}, ch_left{};
    if (j >= xq) {  // sources at x' >= x use psi_R(x')
      const complexd phase = std::exp(sol.pair_phase_exponent(xq, j));
      cg_right = -field_left.value * phase * w_inv;
      ch_right = -field_left.derivative * phase * w_inv;
    }
    if (j <= xq) {  // sources at x' < x use psi_L(x')
      const complexd phase = std::exp(sol.pair_phase_exponent(j, xq));
      cg_left = -field_right.value * phase * w_inv;
      ch_left = -field_right.derivative * phase * w_inv;
    }
    return [=](double xs) -> std::array<double, 3> {
      const dos_detail::WaveAt src = (xs >= x) ? dos_detail::evaluate(wr, kj, xs, rf, rb)
                                               : dos_detail::evaluate(wl, kj, xs, rf, rb);
      const complexd g = (xs >= x) ? cg_right * src.value : cg_left * src.value;
      const complexd h = (xs >= x) ? ch_right * src.value : ch_left * src.value;
      return {pref.nl * eps_i * std::norm(g), pref.nl * eps_i * pref.inv_k2 * std::norm(h),
              -pref.iff * eps_i * std::imag(g * std::conj(h))};
    };
  };

  for (const InnerJob& job : jobs) {
    auto f = make_integrand(job.layer);
    for (const auto& [a, b] : job.intervals) {
      const auto probe = gauss_kronrod_panel<3>(f, a, b);
      scale += std::abs(probe.value[0]) + std::abs(probe.value[1]);
    }
  }

  for (const InnerJob& job : jobs) {
    const std::array<double, 3> floor = {scale, scale, scale};
    const auto r = integrate_adaptive<3>(make_integrand(job.layer), job.intervals, floor, opts,
                                         x, energy);
    out.per_layer[job.layer].value = SourceTerms{r.value[0], r.value[1], r.value[2]};
    out.per_layer[job.layer].error = SourceTerms{r.error[0], r.error[1], r.error[2]};
  }

  for (const LayerSourceIntegral& li : out.per_layer) {
    out.total.electric += li.value.electric;
    out.total.magnetic += li.value.magnetic;
    out.total.interference += li.value.interference;
    out.total_error.electric += li.error.electric;
    out.total_error.magnetic += li.error.magnetic;
    out.total_error.interference += li.error.interference;
  }
  return out;
}

// rho(x, omega) with its electric/magnetic breakdown, raw units 1/(eV um).
inline LdosBreakdown ldos(const LayerStack& stack, const OutgoingSolutions& sol, double x,
                          const QuadratureOptions& opts = {}) {
  const SourceIntegrals s = integrate_sources(stack, sol, x, opts);
  return LdosBreakdown{s.total.electric + s.total.magnetic, s.total.electric, s.total.magnetic};
}

inline LdosBreakdown ldos(const LayerStack& stack, double energy_ev, double x,
                          const QuadratureOptions& opts = {}) {
  return ldos(stack, OutgoingSolutions(stack, energy_ev), x, opts);
}

// integral of (rho_NL + sign rho_IF) dx' normalized by the LDOS; equals 1 for
// either sign (the numerical statement of the canonical commutation relations
// of the directional ladder operators).
inline double commutator_norm(const LayerStack& stack, const OutgoingSolutions& sol, double x,
                              int sign, const QuadratureOptions& opts = {}) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("commutator_norm: sign must be +1 or -1");
  const SourceIntegrals s = integrate_sources(stack, sol, x, opts);
  return (s.ldos_raw() + static_cast<double>(sign) * s.total.interference) / s.ldos_raw();
}

inline double commutator_norm(const LayerStack& stack, double energy_ev, double x, int sign,
                              const QuadratureOptions& opts = {}) {
  return commutator_norm(stack, OutgoingSolutions(stack, energy_ev), x, sign, opts);
}

}  // namespace qfed
