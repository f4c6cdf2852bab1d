#include <doctest.h>

#include <netsync/errors.hpp>
#include <netsync/fim.hpp>

#include "support.hpp"

using namespace netsync;

namespace {

Topology pair_topology() { return Topology({{0, 0}, {1, 0}}, 2, 1.0); }
Topology triangle() { return Topology({{0, 0}, {1, 0}, {0.5, 0.8}}, 3, 1.0); }

}  // namespace

TEST_CASE("absolute FIM fixtures") {
  auto j = build_absolute_fim(pair_topology(), PriorSpec{{1, 1}}, LinkModel::unit()).dense();
  CHECK(j.isApprox((Eigen::Matrix2d() << 2, -1, -1, 2).finished()));

  Topology one_ref({{0, 0}, {1, 0}}, 1, 1.0);
  auto j1 = build_absolute_fim(one_ref, PriorSpec{{0}}, LinkModel::unit()).dense();
  CHECK(j1.rows() == 1);
  CHECK(j1(0, 0) == 1.0);

  Topology isolated({{0, 0}}, 1, 1.0);
  CHECK(build_absolute_fim(isolated, PriorSpec{{0}}, LinkModel::unit()).dense()(0, 0) == 0.0);
}

TEST_CASE("relative FIM fixtures") {
  auto j = build_relative_fim(pair_topology(), LinkModel::unit()).dense();
  CHECK(j.isApprox((Eigen::Matrix2d() << 1, -1, -1, 1).finished()));
  auto t = build_relative_fim(triangle(), LinkModel::unit()).dense();
  CHECK(t.isApprox((Eigen::Matrix3d() << 2, -1, -1, -1, 2, -1, -1, -1, 2).finished()));
}

TEST_CASE("FIMs match a distance oracle on random networks") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 25; ++k) {
    auto f = random_fixture(rng, 30);
    LinkModel link{1 + k % 3, 0.5 + 0.1 * k};
    const auto g = to_net(f.topology);
    auto abs = build_absolute_fim(f.topology, f.priors, link).dense();
    CHECK((abs - oracle::absolute_fim(g, f.priors.xi_p, link.gamma())).cwiseAbs().maxCoeff() < 1e-12);
    auto rel = build_relative_fim(f.topology, link).dense();
    CHECK((rel - oracle::relative_fim(g, link.gamma())).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((rel * Eigen::VectorXd::Ones(rel.rows())).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((abs - abs.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (Eigen::Index i = 0; i < abs.rows(); ++i)
      for (Eigen::Index j = 0; j < abs.cols(); ++j)
        if (i != j) CHECK(abs(i, j) <= 0.0);
  }
}

TEST_CASE("extended FIM layout") {
  Topology t({{0, 0}, {1, 0}}, 1, 1.0);
  auto e = build_extended_fim(t, PriorSpec{{0}}, LinkModel::unit(), 1e9);
  CHECK(e.dim() == 3);
  auto d = e.dense();
  CHECK(d(0, 0) == 1.0);
  CHECK(d(0, 1) == -1.0);
  CHECK(d(1, 1) == 1e9);
  CHECK(d(0, 2) == 0.0);  // no prior, no virtual-reference edge

  auto with_prior = build_extended_fim(t, PriorSpec{{2.5}}, LinkModel::unit(), 1e9).dense();
  CHECK(with_prior(0, 2) == -2.5);
  CHECK(with_prior(0, 0) == 3.5);

  auto dflt = build_extended_fim(t, PriorSpec{{2.5}}, LinkModel::unit());
  CHECK(dflt.dense()(1, 1) == doctest::Approx(1e12 * 3.5));
}

TEST_CASE("transition matrices") {
  auto p = build_transition_matrix(build_absolute_fim(pair_topology(), PriorSpec{{1, 1}}, LinkModel::unit()));
  Eigen::MatrixXd pd(p.data);
  CHECK(pd.isApprox((Eigen::Matrix2d() << 0, 0.5, 0.5, 0).finished()));
  CHECK(p.row_sums()(0) == doctest::Approx(0.5));

  auto rel = build_transition_matrix(build_relative_fim(triangle(), LinkModel::unit()));
  Eigen::MatrixXd rd(rel.data);
  for (int i = 0; i < 3; ++i) {
    CHECK(rel.row_sums()(i) == doctest::Approx(1.0));
    for (int j = 0; j < 3; ++j) CHECK(rd(i, j) == doctest::Approx(i == j ? 0.0 : 0.5));
  }

  Topology t({{0, 0}, {1, 0}, {2, 0}}, 2, 1.0);
  auto ext = build_transition_matrix(build_extended_fim(t, PriorSpec{{1, 0}}, LinkModel::unit(), 1e6));
  Eigen::MatrixXd ed(ext.data);
  CHECK(ext.absorbing[2]);
  CHECK(ed.row(2).sum() == 1.0);
  CHECK(ed(2, 2) == 1.0);

  Topology isolated({{0, 0}, {5, 5}}, 2, 1.0);
  CHECK_THROWS_AS(build_transition_matrix(build_absolute_fim(isolated, PriorSpec{{1, 0}}, LinkModel::unit())),
                  DegenerateNode);
  try {
    build_transition_matrix(build_absolute_fim(isolated, PriorSpec{{1, 0}}, LinkModel::unit()));
  } catch (const DegenerateNode& e) {
    CHECK(e.node() == 1);
  }
}

TEST_CASE("factorization identity and extended consistency") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 15; ++k) {
    auto f = random_fixture(rng, 25);
    auto fim = build_absolute_fim(f.topology, f.priors, LinkModel::unit());
    auto p = build_transition_matrix(fim);
    const Eigen::MatrixXd j = fim.dense();
    const Eigen::MatrixXd pd(p.data);
    const auto n = j.rows();
    Eigen::MatrixXd rebuilt = j.diagonal().asDiagonal() * (Eigen::MatrixXd::Identity(n, n) - pd);
    CHECK((rebuilt - j).cwiseAbs().maxCoeff() < 1e-12 * j.diagonal().maxCoeff());
    CHECK(pd.minCoeff() >= 0.0);
    CHECK(pd.maxCoeff() <= 1.0);

    auto ext = build_transition_matrix(build_extended_fim(f.topology, f.priors, LinkModel::unit()));
    Eigen::MatrixXd ed(ext.data);
    CHECK((ed.topLeftCorner(n, n) - pd).cwiseAbs().maxCoeff() < 1e-14);
    for (std::size_t i = f.topology.num_agents(); i < ext.dim(); ++i) CHECK(ext.absorbing[i]);
  }
}

TEST_CASE("skew congruence") {
  auto fim = build_absolute_fim(pair_topology(), PriorSpec{{1, 1}}, LinkModel::unit());
  auto s = apply_skew(fim, SkewSpec{{2, 1}}).dense();
  CHECK(s.isApprox((Eigen::Matrix2d() << 0.5, -0.5, -0.5, 2).finished()));
  CHECK(apply_skew(fim, SkewSpec{{1, 1}}).dense() == fim.dense());
  CHECK_THROWS_AS(apply_skew(fim, SkewSpec{{0, 1}}), InvalidArgument);
  CHECK_THROWS_AS(apply_skew(fim, SkewSpec{{1}}), InvalidArgument);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.8, 1.2);
  for (int k = 0; k < 10; ++k) {
    auto f = random_fixture(rng, 20);
    auto j = build_absolute_fim(f.topology, f.priors, LinkModel::unit());
    std::vector<double> alpha(j.dim());
    for (auto& a : alpha) a = u(rng);
    Eigen::MatrixXd lhs = apply_skew(j, SkewSpec{alpha}).dense().inverse();
    Eigen::VectorXd av = Eigen::Map<Eigen::VectorXd>(alpha.data(), Eigen::Index(alpha.size()));
    Eigen::MatrixXd rhs = av.asDiagonal() * j.dense().inverse() * av.asDiagonal();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12 * rhs.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("unreachable agents") {
  // agents 0-1 linked with a prior on 0; agents 2-3 linked with nothing
  Topology t({{0, 0}, {1, 0}, {10, 0}, {11, 0}}, 4, 1.0);
  auto fim = build_absolute_fim(t, PriorSpec{{1, 0, 0, 0}}, LinkModel::unit());
  CHECK(unreachable_agents(fim) == std::vector<std::size_t>{2, 3});
}
