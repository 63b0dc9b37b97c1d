#pragma once

// Frequency quadrature over a Spectrum.
//
// Tabulated spectra are integrated on their own grid with the configured rule.
// Analytic spectra use trapezoid sums on uniform grids of 2^l + 1 nodes with
// Richardson extrapolation, doubling until successive extrapolated estimates
// agree to abs_tol in every component.

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "qmem/error.hpp"
#include "qmem/memory_state.hpp"
#include "qmem/parallel.hpp"

namespace qmem {

struct QuadratureOptions {
  double abs_tol{1e-8};
  int min_level{4};
  int max_level{20};
  unsigned threads{1};
  /// Throw ToleranceError instead of returning the best estimate when the
  /// adaptive scheme exhausts max_level.
  bool strict{false};
};

struct QuadratureStats {
  std::size_t evaluations{0};
  int levels{0};
  double last_change{0.0};
  bool converged{true};
};

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
struct Integral {
  Vec<N> value{};
  QuadratureStats stats{};
};

namespace detail {

template <std::size_t N>
void axpy(Vec<N>& acc, double w, const Vec<N>& x) {
  for (std::size_t c = 0; c < N; ++c) acc[c] += w * x[c];
}

template <std::size_t N, class F>
std::vector<Vec<N>> evaluate_nodes(const std::vector<double>& nodes, const Spectrum& spectrum,
                                   F& integrand, unsigned threads) {
  std::vector<Vec<N>> values(nodes.size());
  parallel_for(nodes.size(), threads, [&](std::size_t i) {
    values[i] = integrand(nodes[i], spectrum.density(nodes[i]));
  });
  return values;
}

template <std::size_t N, class F>
Integral<N> integrate_tabulated(const Spectrum& spectrum, F& integrand,
                                const QuadratureOptions& options) {
  const auto& grid = spectrum.omega_grid();
  Integral<N> out;
  if (grid.size() == 1) {
    out.stats.evaluations = 0;
    return out;  // a single node carries no measure
  }
  if (spectrum.rule() == QuadratureRule::Trapezoid) {
    auto values = evaluate_nodes<N>(grid, spectrum, integrand, options.threads);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double left = i > 0 ? grid[i] - grid[i - 1] : 0.0;
      const double right = i + 1 < grid.size() ? grid[i + 1] - grid[i] : 0.0;
      axpy(out.value, 0.5 * (left + right), values[i]);
    }
    out.stats.evaluations = grid.size();
  } else {
    std::vector<double> mids(grid.size() - 1);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) mids[i] = 0.5 * (grid[i] + grid[i + 1]);
    auto values = evaluate_nodes<N>(mids, spectrum, integrand, options.threads);
    for (std::size_t i = 0; i < mids.size(); ++i) axpy(out.value, grid[i + 1] - grid[i], values[i]);
    out.stats.evaluations = mids.size();
  }
  out.stats.levels = 0;
  return out;
}

template <std::size_t N, class F>
Integral<N> integrate_romberg(const Spectrum& spectrum, F& integrand,
                              const QuadratureOptions& options) {
  const auto [a, b] = spectrum.support();
  Integral<N> out;
  std::vector<std::vector<Vec<N>>> table;

  auto ends = evaluate_nodes<N>({a, b}, spectrum, integrand, 1);
  Vec<N> trap{};
  detail::axpy(trap, 0.5 * (b - a), ends[0]);
  detail::axpy(trap, 0.5 * (b - a), ends[1]);
  table.push_back({trap});
  out.stats.evaluations = 2;

  for (int level = 1; level <= options.max_level; ++level) {
    const std::size_t fresh = std::size_t{1} << (level - 1);
    const double h = (b - a) / static_cast<double>(2 * fresh);
    std::vector<double> nodes(fresh);
    for (std::size_t i = 0; i < fresh; ++i) nodes[i] = a + h * static_cast<double>(2 * i + 1);
    auto values = evaluate_nodes<N>(nodes, spectrum, integrand, options.threads);
    out.stats.evaluations += fresh;

    Vec<N> mid_sum{};
    for (const auto& v : values) detail::axpy(mid_sum, 1.0, v);
    std::vector<Vec<N>> row(static_cast<std::size_t>(level) + 1);
    for (std::size_t c = 0; c < N; ++c) row[0][c] = 0.5 * table.back()[0][c] + h * mid_sum[c];
    double factor = 1.0;
    for (int j = 1; j <= level; ++j) {
      factor *= 4.0;
      for (std::size_t c = 0; c < N; ++c) {
        row[j][c] = row[j - 1][c] + (row[j - 1][c] - table.back()[j - 1][c]) / (factor - 1.0);
      }
    }
    double change = 0.0;
    for (std::size_t c = 0; c < N; ++c) {
      change = std::max(change, std::abs(row[level][c] - table.back()[level - 1][c]));
    }
    table.push_back(std::move(row));
    out.value = table.back()[level];
    out.stats.levels = level;
    out.stats.last_change = change;
    if (level >= options.min_level && change < options.abs_tol) {
      out.stats.converged = true;
      return out;
    }
  }
  out.stats.converged = false;
  if (options.strict) {
    throw ToleranceError("adaptive frequency quadrature did not reach abs_tol=" +
                         std::to_string(options.abs_tol));
  }
  return out;
}

}  // namespace detail

/// Integrates integrand(omega, |f(omega)|^2) -> Vec<N> over the spectrum's
/// support with respect to d omega (no 1/2pi factor).
template <std::size_t N, class F>
Integral<N> integrate_spectrum(const Spectrum& spectrum, F&& integrand,
                               const QuadratureOptions& options) {
  if (spectrum.kind() == Spectrum::Kind::Tabulated) {
    return detail::integrate_tabulated<N>(spectrum, integrand, options);
  }
  return detail::integrate_romberg<N>(spectrum, integrand, options);
}

}  // namespace qmem
