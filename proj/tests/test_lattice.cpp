#include <doctest.h>

#include <netsync/cdi.hpp>
#include <netsync/errors.hpp>
#include <netsync/lattice.hpp>
#include <netsync/topology.hpp>

#include "oracle.hpp"

using namespace netsync;

TEST_CASE("kernel") {
  for (double r : {1.0, 2.0, 2.5, 5.0, 8.0, 12.0}) {
    auto k = make_lattice_kernel(r);
    CHECK(long(k.degree()) == oracle::gauss_count(r) - 1);
    double sx = 0, sy = 0, sxy = 0;
    for (auto [x, y] : k.offsets) sx += x * x, sy += y * y, sxy += x * y;
    const double n = double(k.degree());
    CHECK(sx / n == doctest::Approx(k.sigma_r2));
    CHECK(sy / n == doctest::Approx(k.sigma_r2));
    CHECK(sxy == 0.0);
    if (r >= 8) CHECK(k.sigma_r2 == doctest::Approx(double(oracle::gauss_count(r)) / (4 * M_PI)).epsilon(0.05));
  }
  CHECK(make_lattice_kernel(1).periodic());
  CHECK_FALSE(make_lattice_kernel(2).periodic());
  CHECK_THROWS_AS(make_lattice_kernel(0.5), InvalidArgument);
}

TEST_CASE("return probability fixtures") {
  CHECK(lattice_return_probability(1, 3) == 0.0);
  CHECK(lattice_return_probability(2, 1) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(lattice_return_probability(2, 2) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  for (double r : {1.0, 1.5, 2.0, 3.0})
    for (int n : {3, 4, 5, 6}) CHECK(lattice_return_probability(n, r) == doctest::Approx(oracle::return_probability(n, r)).epsilon(1e-11));
  CHECK_THROWS_AS(lattice_return_probability(0, 2), InvalidArgument);
}

TEST_CASE("direct convolution grid") {
  auto k = make_lattice_kernel(2.3);
  auto w = lattice_walk_distribution(k, 4);
  CHECK(w.total() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(w.at(0, 0) == doctest::Approx(oracle::return_probability(4, 2.3)).epsilon(1e-12));
  CHECK(w.at(0, 0) == doctest::Approx(lattice_return_probability(4, 2.3)).epsilon(1e-11));
  for (int x = -3; x <= 3; ++x)
    for (int y = -3; y <= 3; ++y) {
      CHECK(w.at(x, y) == doctest::Approx(w.at(y, x)));
      CHECK(w.at(x, y) == doctest::Approx(w.at(-x, y)));
    }
  CHECK_THROWS_AS(lattice_walk_distribution(k, 4, 10), ResourceLimit);
}

TEST_CASE("infinite lattice CDI") {
  auto a = infinite_lattice_cdi_numerical(3, 1);
  CHECK(a.value == doctest::Approx(a.exact_part + a.tail));
  CHECK(a.degree == 28);
  CHECK(a.q == doctest::Approx(28.0 / 29.0));
  // the exact part is a truncated sum of independent oracle terms
  double s = 0, q = 1;
  for (std::size_t n = 1; n <= std::min<std::size_t>(a.truncation_n, 6); ++n) {
    q *= a.q;
    s += oracle::return_probability(int(n), 3) * q;
  }
  CHECK(a.exact_part >= s - 1e-12);

  double prev = 1e9;
  for (double np : {1e-6, 1e-2, 1.0, 100.0}) {
    double v = infinite_lattice_cdi_numerical(4, np).value;
    CHECK(v < prev);
    prev = v;
  }
  CHECK(infinite_lattice_cdi_numerical(4, 1e8).value < 1e-6);
  CHECK_THROWS_AS(infinite_lattice_cdi_numerical(1, 1), InvalidArgument);
  CHECK_THROWS_AS(infinite_lattice_cdi_numerical(3, 0), InvalidArgument);
  CHECK_THROWS_AS(infinite_lattice_cdi_numerical(3, 1, 1e-12, 20), Diverged);
}

TEST_CASE("asymptotic forms") {
  CHECK(simplified_lattice_cdi(13, 1) == doctest::Approx(2.0 / 13.0 * std::log(14.0)));
  CHECK(infinite_lattice_cdi_asymptotic(2, 1, AsymptoticForm::Simplified) == doctest::Approx(0.40600).epsilon(1e-4));
  CHECK(infinite_lattice_cdi_asymptotic(5, 1e9, AsymptoticForm::Full) < 1e-7);
  CHECK(infinite_lattice_cdi_asymptotic(5, 1e9, AsymptoticForm::Simplified) < 1e-7);
  auto ratio = [](double r) {
    return infinite_lattice_cdi_asymptotic(r, 1, AsymptoticForm::Simplified) /
           infinite_lattice_cdi_asymptotic(r, 1, AsymptoticForm::Full);
  };
  CHECK(std::abs(ratio(20) - 1) < std::abs(ratio(4) - 1));
}

TEST_CASE("finite lattice interior exceeds the infinite lattice") {
  for (double r : {2.0, 3.0}) {
    auto t = gen_lattice(40, 1, r);
    auto pri = assign_priors(t, UniformPriors{1}, LinkModel::unit());
    auto d = cdi_by_factorization(t, pri, LinkModel::unit());
    const double inf = infinite_lattice_cdi_numerical(r, 1).value;
    for (auto i : interior_agents(t)) CHECK(d(Eigen::Index(i)) >= inf);
  }
  auto f = finite_lattice_cdi(20, 2, 5);
  CHECK(f.n_agents == 441);
  CHECK(f.interior_count == 17 * 17);
  CHECK(f.interior_mean >= infinite_lattice_cdi_numerical(2, 5).value);
}
