#include <doctest.h>

#include <netsync/bounds.hpp>
#include <netsync/cdi.hpp>
#include <netsync/errors.hpp>
#include <netsync/rng.hpp>
#include <netsync/topology.hpp>

#include "support.hpp"

using namespace netsync;

namespace {

Topology pair_topology() { return Topology({{0, 0}, {1, 0}}, 2, 1.0); }
Topology triangle() { return Topology({{0, 0}, {1, 0}, {0.5, 0.8}}, 3, 1.0); }

TransitionMatrix pair_chain() {
  return build_transition_matrix(build_absolute_fim(pair_topology(), PriorSpec{{1, 1}}, LinkModel::unit()));
}

Eigen::VectorXd degrees(const Topology& t) {
  Eigen::VectorXd d(Eigen::Index(t.num_agents()));
  for (std::size_t i = 0; i < t.num_agents(); ++i) d(Eigen::Index(i)) = double(t.agent_degree(i));
  return d;
}

}  // namespace

TEST_CASE("exact CDI fixtures") {
  auto d = cdi_exact(pair_chain());
  CHECK(d(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(d(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(cdi_exact(build_transition_matrix(build_relative_fim(triangle(), LinkModel::unit()))),
                  NotSynchronizable);
}

TEST_CASE("series CDI") {
  auto s = cdi_series(pair_chain(), 1e-12);
  CHECK(std::abs(s.delta(0) - 1.0 / 3.0) < 1e-12);
  CHECK(s.method == CdiMethod::Series);
  auto loose = cdi_series(pair_chain(), 1e-3);
  CHECK(*loose.truncation_n < *s.truncation_n);
  CHECK(*loose.tail_bound < 1e-3);
  CHECK(std::abs(loose.delta(0) - 1.0 / 3.0) <= *loose.tail_bound);
  CHECK_THROWS_AS(cdi_series(build_transition_matrix(build_relative_fim(triangle(), LinkModel::unit())), 1e-6),
                  InvalidArgument);
  CHECK_THROWS_AS(cdi_series(pair_chain(), 1e-300, 10), Diverged);

  std::mt19937_64 rng(14);
  for (int k = 0; k < 10; ++k) {
    auto f = random_fixture(rng, 30);
    auto p = build_transition_matrix(build_absolute_fim(f.topology, f.priors, LinkModel::unit()));
    auto ex = cdi_exact(p);
    auto se = cdi_series(p, 1e-8);
    CHECK((ex - se.delta).cwiseAbs().maxCoeff() <= *se.tail_bound + 1e-12);
  }
}

TEST_CASE("relative CDI fixtures") {
  auto pr = build_transition_matrix(build_relative_fim(pair_topology(), LinkModel::unit()));
  auto d2 = rel_cdi_exact(pr, degrees(pair_topology()));
  CHECK(d2(0) == doctest::Approx(-0.25).epsilon(1e-13));
  CHECK(d2(1) == doctest::Approx(-0.25).epsilon(1e-13));

  auto tr = build_transition_matrix(build_relative_fim(triangle(), LinkModel::unit()));
  auto d3 = rel_cdi_exact(tr, degrees(triangle()));
  for (int i = 0; i < 3; ++i) CHECK(d3(i) == doctest::Approx(-2.0 / 9.0).epsilon(1e-13));

  // 6-cycle is vertex transitive (and bipartite)
  std::vector<Position> ring;
  for (int i = 0; i < 6; ++i) ring.push_back({std::cos(i * M_PI / 3), std::sin(i * M_PI / 3)});
  Topology cyc(ring, 6, 1.0 + 1e-9);
  auto dc = rel_cdi_exact(build_transition_matrix(build_relative_fim(cyc, LinkModel::unit())), degrees(cyc));
  CHECK(dc.maxCoeff() - dc.minCoeff() < 1e-12);

  auto abel = rel_cdi_abel(tr);
  CHECK((abel.extrapolated - d3).cwiseAbs().maxCoeff() < 1e-6);
  auto abel_cyc = rel_cdi_abel(build_transition_matrix(build_relative_fim(cyc, LinkModel::unit())));
  CHECK((abel_cyc.extrapolated - dc).cwiseAbs().maxCoeff() < 1e-5);

  Topology split({{0, 0}, {1, 0}, {10, 0}, {11, 0}}, 4, 1.0);
  auto sp = build_transition_matrix(build_relative_fim(split, LinkModel::unit()));
  CHECK_THROWS_AS(rel_cdi_exact(sp, degrees(split)), Disconnected);
}

TEST_CASE("relative CDI reproduces the pseudo-inverse trace") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 15; ++k) {
    auto f = random_fixture(rng, 50, false);
    auto p = build_transition_matrix(build_relative_fim(f.topology, LinkModel::unit()));
    auto v = rseb_via_relative_cdi(rel_cdi_exact(p, degrees(f.topology)), degrees(f.topology), LinkModel::unit());
    const double trace = oracle::pinv(oracle::relative_fim(to_net(f.topology), 1.0)).trace();
    CHECK(std::abs(v.trace - trace) / trace < 1e-9);
  }
}

TEST_CASE("random walk estimator") {
  auto w = cdi_random_walk(pair_topology(), PriorSpec{{1, 1}}, LinkModel::unit(), 0, 100000, 0, 99);
  CHECK(w.method == CdiMethod::Walk);
  CHECK(*w.std_error > 0.0);
  CHECK(std::abs(w.delta(0) - 1.0 / 3.0) < 4 * *w.std_error);

  // reproducible regardless of thread count
  auto w1 = cdi_random_walk(pair_topology(), PriorSpec{{1, 1}}, LinkModel::unit(), 0, 5000, 0, 3, 1);
  auto w4 = cdi_random_walk(pair_topology(), PriorSpec{{1, 1}}, LinkModel::unit(), 0, 5000, 0, 3, 4);
  CHECK(w1.delta(0) == w4.delta(0));

  Topology refs({{0, 0}, {1, 0}, {0, 1}}, 1, 1.0);
  auto r = cdi_random_walk(refs, PriorSpec{{0}}, LinkModel::unit(), 0, 1000, 0, 1);
  CHECK(r.delta(0) == 0.0);

  auto lat = gen_lattice(4, 1, 1);
  auto pri = assign_priors(lat, UniformPriors{5}, LinkModel::unit());
  auto ex = cdi_exact(build_transition_matrix(build_absolute_fim(lat, pri, LinkModel::unit())));
  auto lw = cdi_random_walk(lat, pri, LinkModel::unit(), 12, 100000, 0, 7);
  CHECK(std::abs(lw.delta(0) - ex(12)) < 4 * *lw.std_error);
  CHECK(lw.truncated_walks == 0);
  CHECK(*lw.tail_bound < 1e-3);

  CHECK_THROWS_AS(cdi_random_walk(refs, PriorSpec{{0}}, LinkModel::unit(), 1, 10, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(cdi_random_walk(refs, PriorSpec{{0}}, LinkModel::unit(), 0, 0, 0, 1), InvalidArgument);
}

TEST_CASE("factorization CDI matches dense inverse") {
  auto lat = gen_lattice(20, 1, 2.5);
  auto pri = assign_priors(lat, UniformPriors{2}, LinkModel::unit());
  auto fac = cdi_by_factorization(lat, pri, LinkModel::unit());
  auto dense = oracle::cdi(oracle::absolute_fim(to_net(lat), pri.xi_p, 1.0));
  CHECK((fac - dense).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("stochastic ensemble") {
  auto a = expected_cdi_stochastic(8, 1, 2, 5, 1, 17);
  auto b = expected_cdi_stochastic(8, 1, 2, 5, 1, 17);
  CHECK(a.mean == b.mean);
  CHECK(a.n_samples == 1);
  auto many = expected_cdi_stochastic(8, 1, 2, 5, 12, 17, 3);
  CHECK(many.n_samples == 12);
  CHECK(many.std_error > 0.0);
  CHECK(many.mean > 0.0);
  // sparse snapshots must be redrawn to stay connected
  std::size_t redraws = 0;
  for (std::uint64_t s = 0; s < 5; ++s)
    for (std::uint64_t k = 0; !is_connected(gen_stochastic(4, 1, 1.5, derive_seed(2, s, k))); ++k) ++redraws;
  auto sparse = expected_cdi_stochastic(4, 1, 1.5, 5, 5, 2);
  CHECK(redraws > 0);
  CHECK(sparse.resamples == redraws);
  CHECK(matched_lattice_cdi(8, 1, 2, 5) > 0.0);
}
