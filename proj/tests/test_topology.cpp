#include <doctest.h>

#include <netsync/errors.hpp>
#include <netsync/topology.hpp>

#include "support.hpp"

using namespace netsync;

TEST_CASE("lattice generator") {
  SUBCASE("3x3 grid") {
    auto t = gen_lattice(2, 1, 1);
    CHECK(t.num_agents() == 9);
    CHECK(t.num_references() == 0);
    CHECK(t.degree(0) == 2);
    CHECK(t.degree(4) == 4);
    CHECK(is_connected(t));
  }
  SUBCASE("interior degree at r_max 2") {
    auto t = gen_lattice(50, 1, 2);
    std::size_t centre = 25 * 51 + 25;
    CHECK(t.degree(centre) == 12);
  }
  SUBCASE("range below spacing") {
    auto t = gen_lattice(1, 1, 0.5);
    CHECK(t.num_agents() == 4);
    CHECK(t.num_edges() == 0);
    CHECK_FALSE(is_connected(t));
  }
  CHECK_THROWS_AS(gen_lattice(0, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(gen_lattice(4, -1, 1), InvalidArgument);
}

TEST_CASE("stochastic generator") {
  auto a = gen_stochastic(50, 1, 3, 7);
  CHECK(a.num_agents() == 2500);
  for (const auto& p : a.positions()) {
    CHECK(p.x >= 0.0);
    CHECK(p.x <= 50.0);
    CHECK(p.y >= 0.0);
    CHECK(p.y <= 50.0);
  }
  auto b = gen_stochastic(50, 1, 3, 7);
  CHECK(a.positions().size() == b.positions().size());
  bool same = true;
  for (std::size_t i = 0; i < a.num_nodes(); ++i)
    same = same && a.position(i).x == b.position(i).x && a.position(i).y == b.position(i).y;
  CHECK(same);
  CHECK(a.num_edges() == b.num_edges());
  auto c = gen_stochastic(50, 1, 3, 8);
  CHECK(c.position(0).x != a.position(0).x);
  CHECK_THROWS_AS(gen_stochastic(10, 0, 1, 1), InvalidArgument);
}

TEST_CASE("scaling families") {
  CHECK(ScalingFamily::extended(0.01).side(400) == doctest::Approx(200.0));
  auto dense = ScalingFamily::dense(10000);
  CHECK(dense.side(500) == doctest::Approx(100.0));
  CHECK(dense.side(1000) == doctest::Approx(100.0));
  auto t = gen_scaling_family(dense, 500, 20, 3);
  CHECK(t.num_agents() == 500);
  CHECK(t.region()->x1 == doctest::Approx(100.0));
  CHECK_THROWS_AS(parse_scaling_mode("sparse"), InvalidArgument);
  CHECK(parse_scaling_mode("dense") == ScalingMode::Dense);
}

TEST_CASE("adjacency invariants match a distance oracle") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    auto f = random_fixture(rng, 40);
    const auto& t = f.topology;
    auto g = to_net(t);
    for (std::size_t i = 0; i < t.num_nodes(); ++i) {
      std::size_t da = 0, dr = 0;
      for (std::size_t j = 0; j < t.num_nodes(); ++j) {
        CHECK(t.has_edge(i, j) == g.edge(i, j));
        CHECK(t.has_edge(i, j) == t.has_edge(j, i));
        if (g.edge(i, j)) (j < t.num_agents() ? da : dr)++;
      }
      CHECK_FALSE(t.has_edge(i, i));
      CHECK(t.agent_degree(i) == da);
      CHECK(t.reference_degree(i) == dr);
      CHECK(t.agent_degree(i) + t.reference_degree(i) == t.degree(i));
    }
  }
}

TEST_CASE("connectivity boundary is inclusive") {
  Topology at({{0, 0}, {1.5, 0}}, 2, 1.5);
  CHECK(is_connected(at));
  Topology beyond({{0, 0}, {1.5 + 1e-9, 0}}, 2, 1.5);
  CHECK_FALSE(is_connected(beyond));
  CHECK(component_labels(beyond)[0] != component_labels(beyond)[1]);
}

TEST_CASE("gauss circle count") {
  CHECK(gauss_circle_degree(1) == 5);
  CHECK(gauss_circle_degree(2) == 13);
  CHECK(gauss_circle_degree(3) == 29);
  for (int r = 1; r <= 30; ++r) CHECK(gauss_circle_degree(r) == oracle::gauss_count(r));
  CHECK(gauss_circle_degree(2.5) == oracle::gauss_count(2.5));
}

TEST_CASE("prior schemes") {
  auto t = gen_lattice(9, 1, 1.5);
  LinkModel link{3, 2.0};  // gamma = 3
  auto u = assign_priors(t, UniformPriors{5}, link);
  for (double x : u.xi_p) CHECK(x == doctest::Approx(15.0));
  for (double n : u.n_p(link)) CHECK(n == doctest::Approx(5.0));

  auto b = assign_priors(gen_lattice(99, 1, 1.5), BernoulliPriors{0.3, 1, 42}, LinkModel::unit());
  double frac = 0;
  for (double x : b.xi_p) frac += x > 0 ? 1.0 : 0.0;
  frac /= double(b.xi_p.size());
  CHECK(frac == doctest::Approx(0.3).epsilon(0.05));

  auto all = assign_priors(t, BernoulliPriors{1.0, 5, 1}, link);
  CHECK(all.xi_p == u.xi_p);

  auto r = assign_priors(t, RegionPriors{Rect{0, 0, 2, 2}, 1}, LinkModel::unit());
  for (std::size_t i = 0; i < t.num_agents(); ++i)
    CHECK((r.xi_p[i] > 0) == (t.position(i).x <= 2 && t.position(i).y <= 2));
  CHECK_THROWS_AS(assign_priors(t, UniformPriors{-1}, link), InvalidArgument);
  CHECK_THROWS_AS(assign_priors(t, BernoulliPriors{1.5, 1, 1}, link), InvalidArgument);
}

TEST_CASE("promotion to reference") {
  Topology t({{0, 0}, {1, 0}, {2, 0}, {5, 5}}, 3, 1.0);
  auto p = t.promote_to_reference(1);
  CHECK(p.num_agents() == 2);
  CHECK(p.num_references() == 2);
  CHECK(p.position(0).x == 0.0);
  CHECK(p.position(1).x == 2.0);
  CHECK(p.position(3).x == 1.0);
  CHECK(p.reference_degree(0) == 1);
  CHECK(p.reference_degree(1) == 1);
}

TEST_CASE("interior agents") {
  auto t = gen_lattice(10, 1, 2);
  auto ids = interior_agents(t);
  CHECK(ids.size() == 49);  // coordinates 2..8
  for (auto i : ids) {
    CHECK(t.position(i).x >= 2.0);
    CHECK(t.position(i).x <= 8.0);
  }
}

TEST_CASE("link model") {
  CHECK(LinkModel{1, 2.0}.gamma() == 1.0);
  CHECK(LinkModel{4, 0.5}.gamma() == 16.0);
  CHECK_THROWS_AS((LinkModel{0, 1.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((LinkModel{1, 0.0}.validate()), InvalidArgument);
}
