// quadrature.hpp - adaptive Gauss-Kronrod (7,15) integration of small vector
// integrands with per-component error estimates.
//
// The DOS source integrals evaluate one Green's function per source point and
// feed several kernels at once, so the integrator works on a fixed-size array
// of components and subdivides until every component meets
//   err_k <= rtol * max(|I_k|, floor_k).
// The floor lets sign-cancelling components (the interference kernel) converge
// relative to a physical scale instead of their own near-zero integral.
// Interval error is the conservative |K15 - G7| difference. All nodes are
// interior, so integrand kinks may sit exactly on interval endpoints.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "qfed/errors.hpp"

namespace qfed {

struct QuadratureOptions {
  double rtol = 1e-8;
  std::size_t max_intervals = 20000;
};

namespace quad_detail {

// 15-point Kronrod extension of 7-point Gauss on [-1, 1]; positive half.
inline constexpr double kron_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kron_weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
// Gauss weights attach to the odd Kronrod nodes (indices 1, 3, 5, 7).
inline constexpr double gauss_weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

}  // namespace quad_detail

template <std::size_t K>
struct QuadratureResult {
  std::array<double, K> value{};
  std::array<double, K> error{};
};

template <std::size_t K, class F>
QuadratureResult<K> gauss_kronrod_panel(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, K> kron{}, gauss{};
  for (int i = 0; i < 8; ++i) {
    const double offset = half * quad_detail::kron_nodes[i];
    std::array<double, K> fsum = f(mid - offset);
    if (i != 7) {  // center node appears once
      const std::array<double, K> fr = f(mid + offset);
      for (std::size_t k = 0; k < K; ++k) fsum[k] += fr[k];
    }
    for (std::size_t k = 0; k < K; ++k) {
      kron[k] += quad_detail::kron_weights[i] * fsum[k];
      if (i % 2 == 1) gauss[k] += quad_detail::gauss_weights[i / 2] * fsum[k];
    }
  }
  QuadratureResult<K> out;
  for (std::size_t k = 0; k < K; ++k) {
    out.value[k] = kron[k] * half;
    out.error[k] = std::abs((kron[k] - gauss[k]) * half);
  }
  return out;
}

// Integrate f over the union of `intervals`. `floor` provides the per-component
// absolute scale entering the convergence test (see header comment). Throws
// QuadratureNotConverged (tagged with `x_um`, `energy_ev` for reporting) when
// the interval budget is exhausted first.
template <std::size_t K, class F>
QuadratureResult<K> integrate_adaptive(F&& f, std::vector<std::pair<double, double>> intervals,
                                       const std::array<double, K>& floor,
                                       const QuadratureOptions& opts, double x_um = 0.0,
                                       double energy_ev = 0.0) {
  struct Piece {
    double a, b;
    QuadratureResult<K> r;
    double badness;
  };
  auto by_badness = [](const Piece& lhs, const Piece& rhs) { return lhs.badness < rhs.badness; };

  std::vector<Piece> heap;
  std::array<double, K> total{}, err_sum{};

  auto make_piece = [&](double a, double b) {
    Piece p{a, b, gauss_kronrod_panel<K>(f, a, b), 0.0};
    for (std::size_t k = 0; k < K; ++k)
      p.badness = std::max(p.badness,
                           p.r.error[k] / std::max(std::abs(p.r.value[k]), floor[k] + 1e-300));
    return p;
  };
  auto add_piece = [&](Piece&& p) {
    for (std::size_t k = 0; k < K; ++k) {
      total[k] += p.r.value[k];
      err_sum[k] += p.r.error[k];
    }
    heap.push_back(std::move(p));
    std::push_heap(heap.begin(), heap.end(), by_badness);
  };

  for (const auto& [a, b] : intervals)
    if (b > a) add_piece(make_piece(a, b));

  auto converged = [&] {
    for (std::size_t k = 0; k < K; ++k)
      if (err_sum[k] > opts.rtol * std::max(std::abs(total[k]), floor[k])) return false;
    return true;
  };

  while (!heap.empty() && !converged()) {
    if (heap.size() >= opts.max_intervals)
      throw QuadratureNotConverged("source quadrature exceeded interval budget", x_um,
                                   energy_ev);
    std::pop_heap(heap.begin(), heap.end(), by_badness);
    Piece worst = std::move(heap.back());
    heap.pop_back();
    for (std::size_t k = 0; k < K; ++k) {
      total[k] -= worst.r.value[k];
      err_sum[k] -= worst.r.error[k];
    }
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b)
      throw QuadratureNotConverged("interval too small to subdivide further", x_um, energy_ev);
    add_piece(make_piece(worst.a, mid));
    add_piece(make_piece(mid, worst.b));
  }

  // Accumulated subtraction drift is negligible against the K15-G7 bound, but
  // recompute the totals from the surviving pieces for a clean result.
  QuadratureResult<K> out;
  for (const Piece& p : heap)
    for (std::size_t k = 0; k < K; ++k) {
      out.value[k] += p.r.value[k];
      out.error[k] += p.r.error[k];
    }
  return out;
}

}  // namespace qfed
