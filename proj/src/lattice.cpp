#include "netsync/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "netsync/cdi.hpp"
#include "netsync/errors.hpp"
#include "netsync/topology.hpp"

namespace netsync {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kMaxSpectralPoints = std::size_t{1} << 24;

// Characteristic function phi(k) = (1/d) sum cos(k . y) sampled on the folded
// (k1 >= k2) octant of an L x L grid, with multiplicities.
class SpectralGrid {
 public:
  SpectralGrid(const LatticeKernel& kernel, std::size_t period) : period_(period) {
    const std::size_t half = period / 2;
    const std::size_t count = (half + 1) * (half + 2) / 2;
    if (count > kMaxSpectralPoints)
      throw ResourceLimit("lattice return probability: spectral grid of period " + std::to_string(period) +
                          " exceeds the memory guard");
    const int reach = kernel.reach;
    // Column extents: for offset x, |y| <= ymax[x].
    std::vector<int> ymax(static_cast<std::size_t>(reach) + 1, -1);
    for (const auto& [x, y] : kernel.offsets)
      if (x >= 0) ymax[static_cast<std::size_t>(x)] = std::max(ymax[static_cast<std::size_t>(x)], y);
    // cos table c[x][k] = cos(2 pi k x / L), exact reduction of k x mod L.
    std::vector<double> cs((static_cast<std::size_t>(reach) + 1) * (half + 1));
    auto cos_at = [&](int x, std::size_t k) -> double& { return cs[static_cast<std::size_t>(x) * (half + 1) + k]; };
    for (int x = 0; x <= reach; ++x)
      for (std::size_t k = 0; k <= half; ++k)
        cos_at(x, k) = std::cos(kTwoPi * static_cast<double>((k * static_cast<std::size_t>(x)) % period) /
                                static_cast<double>(period));
    // col[x][k] = sum_{y in column x} cos(2 pi k y / L)
    std::vector<double> col(cs.size(), 0.0);
    for (int x = 0; x <= reach; ++x) {
      const int ym = ymax[static_cast<std::size_t>(x)];
      if (ym < 0) continue;
      for (std::size_t k = 0; k <= half; ++k) {
        double s = x == 0 ? 0.0 : 1.0;
        for (int y = 1; y <= ym; ++y) s += 2.0 * cos_at(y, k);
        col[static_cast<std::size_t>(x) * (half + 1) + k] = s;
      }
    }
    const double inv_d = 1.0 / static_cast<double>(kernel.degree());
    auto fold_weight = [&](std::size_t k) { return (k == 0 || (period % 2 == 0 && k == half)) ? 1.0 : 2.0; };
    phi_.reserve(count);
    weight_.reserve(count);
    for (std::size_t k1 = 0; k1 <= half; ++k1)
      for (std::size_t k2 = 0; k2 <= k1; ++k2) {
        double s = col[k2];
        for (int x = 1; x <= reach; ++x)
          s += 2.0 * cos_at(x, k1) * col[static_cast<std::size_t>(x) * (half + 1) + k2];
        phi_.push_back(s * inv_d);
        weight_.push_back(fold_weight(k1) * fold_weight(k2) * (k1 == k2 ? 1.0 : 2.0));
      }
    norm_ = 1.0 / (static_cast<double>(period) * static_cast<double>(period));
  }

  std::size_t period() const noexcept { return period_; }

  void set_power(int n) {
    pw_.resize(phi_.size());
    for (std::size_t i = 0; i < phi_.size(); ++i) pw_[i] = std::pow(phi_[i], n);
  }
  void advance() {
    for (std::size_t i = 0; i < phi_.size(); ++i) pw_[i] *= phi_[i];
  }
  double origin_mass() const {
    double s = 0.0;
    for (std::size_t i = 0; i < pw_.size(); ++i) s += weight_[i] * pw_[i];
    return s * norm_;
  }

 private:
  std::size_t period_;
  std::vector<double> phi_, weight_, pw_;
  double norm_ = 0.0;
};

}  // namespace

bool LatticeKernel::periodic() const noexcept {
  return std::all_of(offsets.begin(), offsets.end(), [](const auto& o) { return ((o.first + o.second) & 1) != 0; });
}

LatticeKernel make_lattice_kernel(double r_max) {
  if (!(r_max >= 1.0) || !std::isfinite(r_max)) throw InvalidArgument("lattice kernel: r_max must be >= 1");
  LatticeKernel k;
  k.r_max = r_max;
  k.reach = static_cast<int>(std::floor(r_max + 1e-9));
  const double r2 = r_max * r_max * (1.0 + 1e-12);
  double sx = 0.0;
  for (int x = -k.reach; x <= k.reach; ++x)
    for (int y = -k.reach; y <= k.reach; ++y) {
      const double d2 = static_cast<double>(x * x + y * y);
      if (d2 > 0.0 && d2 <= r2) {
        k.offsets.emplace_back(x, y);
        sx += static_cast<double>(x * x);
      }
    }
  k.sigma_r2 = sx / static_cast<double>(k.offsets.size());
  return k;
}

double WalkDistribution::at(int x, int y) const {
  if (std::abs(x) > half_width || std::abs(y) > half_width) return 0.0;
  const auto w = static_cast<std::size_t>(2 * half_width + 1);
  return p[static_cast<std::size_t>(x + half_width) * w + static_cast<std::size_t>(y + half_width)];
}

double WalkDistribution::total() const {
  double s = 0.0;
  for (double v : p) s += v;
  return s;
}

WalkDistribution lattice_walk_distribution(const LatticeKernel& kernel, int n, std::size_t max_cells) {
  if (n < 0) throw InvalidArgument("lattice_walk_distribution: n must be >= 0");
  const long h = static_cast<long>(n) * kernel.reach;
  const auto w = static_cast<std::size_t>(2 * h + 1);
  if (w * w > max_cells) throw ResourceLimit("lattice_walk_distribution: grid of " + std::to_string(w) + "^2 cells exceeds the cap");
  WalkDistribution d;
  d.half_width = static_cast<int>(h);
  d.p.assign(w * w, 0.0);
  auto idx = [&](long x, long y) { return static_cast<std::size_t>(x + h) * w + static_cast<std::size_t>(y + h); };
  d.p[idx(0, 0)] = 1.0;
  const double inv_d = 1.0 / static_cast<double>(kernel.degree());
  std::vector<double> next(w * w);
  for (int step = 1; step <= n; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    const long reach_now = static_cast<long>(step - 1) * kernel.reach;
    for (long x = -reach_now; x <= reach_now; ++x)
      for (long y = -reach_now; y <= reach_now; ++y) {
        const double v = d.p[idx(x, y)];
        if (v == 0.0) continue;
        for (const auto& [ox, oy] : kernel.offsets) next[idx(x + ox, y + oy)] += v * inv_d;
      }
    d.p.swap(next);
  }
  return d;
}

double lattice_return_probability(int n, double r_max) {
  if (n < 1) throw InvalidArgument("lattice_return_probability: n must be >= 1");
  const LatticeKernel k = make_lattice_kernel(r_max);
  // no self-steps; a periodic kernel returns only at even times
  if (n == 1 || (k.periodic() && n % 2 == 1)) return 0.0;
  // Images of the origin at multiples of the period lie outside the support.
  SpectralGrid grid(k, static_cast<std::size_t>(n) * static_cast<std::size_t>(k.reach) + 1);
  grid.set_power(n);
  return std::max(0.0, grid.origin_mass());
}

LatticeCdiResult infinite_lattice_cdi_numerical(double r_max, double n_p, double rel_err_tol, std::size_t max_steps) {
  if (!(n_p > 0.0)) throw InvalidArgument("infinite_lattice_cdi_numerical: n_p must be positive");
  if (!(rel_err_tol > 0.0)) throw InvalidArgument("infinite_lattice_cdi_numerical: rel_err_tol must be positive");
  const LatticeKernel k = make_lattice_kernel(r_max);
  if (k.periodic())
    throw InvalidArgument("infinite_lattice_cdi_numerical: kernel for r_max = " + std::to_string(r_max) +
                          " is periodic; the local Gaussian approximation never holds");
  LatticeCdiResult r;
  r.degree = k.degree();
  r.sigma_r2 = k.sigma_r2;
  const double d = static_cast<double>(k.degree());
  r.q = d / (d + n_p);
  const double sigma = std::sqrt(k.sigma_r2);

  // Required period for step n: beyond the support (exact), or with wrapped
  // images >= 12 standard deviations away.
  auto required = [&](std::size_t n) {
    const double exact = static_cast<double>(n) * k.reach + 1.0;
    const double gauss = 2.0 * r_max + 12.0 * sigma * std::sqrt(static_cast<double>(n));
    return static_cast<std::size_t>(std::ceil(std::min(exact, gauss)));
  };
  std::size_t period = std::max<std::size_t>(64, required(64));
  auto grid = std::make_unique<SpectralGrid>(k, period);
  grid->set_power(1);

  double qn = 1.0, partial_log = 0.0;
  for (std::size_t n = 1; n <= max_steps; ++n) {
    if (n > 1) {
      if (required(n) > grid->period()) {
        grid = std::make_unique<SpectralGrid>(k, 2 * required(n));
        grid->set_power(static_cast<int>(n));
      } else {
        grid->advance();
      }
    }
    const double p = n == 1 ? 0.0 : std::max(0.0, grid->origin_mass());
    qn *= r.q;
    r.exact_part += p * qn;
    partial_log += qn / static_cast<double>(n);
    const double g = 1.0 / (kTwoPi * static_cast<double>(n) * k.sigma_r2);
    if (p > 0.0 && std::abs(p - g) / p < rel_err_tol) {
      r.truncation_n = n;
      r.tail = std::max(0.0, (-std::log1p(-r.q) - partial_log) / (kTwoPi * k.sigma_r2));
      r.value = r.exact_part + r.tail;
      return r;
    }
  }
  throw Diverged("infinite_lattice_cdi_numerical: Gaussian crossover (rel err < " + std::to_string(rel_err_tol) +
                 ") not reached within " + std::to_string(max_steps) + " steps for r_max = " + std::to_string(r_max));
}

double simplified_lattice_cdi(double d_bar, double n_p) {
  if (!(d_bar >= 1.0) || !(n_p > 0.0)) throw InvalidArgument("simplified_lattice_cdi: need d_bar >= 1 and n_p > 0");
  return 2.0 / d_bar * std::log1p(d_bar / n_p);
}

double infinite_lattice_cdi_asymptotic(double r_max, double n_p, AsymptoticForm form) {
  if (!(n_p > 0.0)) throw InvalidArgument("infinite_lattice_cdi_asymptotic: n_p must be positive");
  if (form == AsymptoticForm::Simplified) return simplified_lattice_cdi(static_cast<double>(gauss_circle_degree(r_max)), n_p);
  const LatticeKernel k = make_lattice_kernel(r_max);
  const double d = static_cast<double>(k.degree());
  const double q = d / (d + n_p);
  return (std::log1p(d / n_p) - q) / (kTwoPi * k.sigma_r2);
}

FiniteLatticeCdi finite_lattice_cdi(double side_b, double r_max, double n_p) {
  const Topology t = gen_lattice(side_b, 1.0, r_max);
  const LinkModel link = LinkModel::unit();
  const Eigen::VectorXd delta = cdi_by_factorization(t, assign_priors(t, UniformPriors{n_p}, link), link);
  FiniteLatticeCdi out;
  out.n_agents = t.num_agents();
  out.overall_mean = delta.mean();
  const auto interior = interior_agents(t);
  out.interior_count = interior.size();
  double s = 0.0;
  for (NodeId i : interior) s += delta[static_cast<Eigen::Index>(i)];
  out.interior_mean = interior.empty() ? 0.0 : s / static_cast<double>(interior.size());
  return out;
}

}  // namespace netsync
