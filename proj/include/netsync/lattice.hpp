#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace netsync {

/// Uniform step distribution over the non-origin integer points within
/// distance r_max of the origin.
struct LatticeKernel {
  double r_max = 0.0;
  int reach = 0;  // floor(r_max)
  std::vector<std::pair<int, int>> offsets;
  double sigma_r2 = 0.0;  // per-axis step variance

  std::size_t degree() const noexcept { return offsets.size(); }
  /// Every offset has odd x + y: the walk returns only at even times.
  bool periodic() const noexcept;
};

LatticeKernel make_lattice_kernel(double r_max);

/// n-step distribution on [-H, H]^2, H = n * reach, stored x-major.
struct WalkDistribution {
  int half_width = 0;
  std::vector<double> p;

  double at(int x, int y) const;
  double total() const;
};

/// Direct n-fold convolution of the kernel. Throws ResourceLimit when the
/// grid would exceed `max_cells`.
WalkDistribution lattice_walk_distribution(const LatticeKernel& kernel, int n, std::size_t max_cells = 1u << 24);

/// P{x_n = 0 | x_0 = 0} for the walk with the r_max kernel, evaluated exactly
/// through the kernel's characteristic function on a period larger than the
/// walk's support.
double lattice_return_probability(int n, double r_max);

struct LatticeCdiResult {
  double value = 0.0;
  double exact_part = 0.0;  // sum of exact terms up to the truncation point
  double tail = 0.0;        // Gaussian tail beyond it
  std::size_t truncation_n = 0;
  std::size_t degree = 0;   // neighbour count (origin excluded)
  double sigma_r2 = 0.0;
  double q = 0.0;           // d / (d + N_p)
};

/// sum_n p^(n)(0) q^n: exact terms until the local Gaussian approximation
/// 1/(2 pi n sigma^2) is within rel_err_tol of the exact term, then the
/// analytic Gaussian tail. Throws Diverged past max_steps and InvalidArgument
/// for periodic kernels.
LatticeCdiResult infinite_lattice_cdi_numerical(double r_max, double n_p, double rel_err_tol = 1e-3,
                                                std::size_t max_steps = 5000);

enum class AsymptoticForm { Full, Simplified };

/// Full: (1/(2 pi sigma^2)) [ln(1 + d/N_p) - q] with the kernel's exact d and
/// sigma^2. Simplified: (2/dbar) ln(1 + dbar/N_p) with dbar the Gauss circle
/// count.
double infinite_lattice_cdi_asymptotic(double r_max, double n_p, AsymptoticForm form);
/// Simplified form for a given dbar.
double simplified_lattice_cdi(double d_bar, double n_p);

struct FiniteLatticeCdi {
  double interior_mean = 0.0;
  std::size_t interior_count = 0;
  double overall_mean = 0.0;
  std::size_t n_agents = 0;
};

/// Unit-spacing lattice on [0, B]^2 with uniform priors n_p (gamma = 1).
FiniteLatticeCdi finite_lattice_cdi(double side_b, double r_max, double n_p);

}  // namespace netsync
