#pragma once

#include <netsync/topology.hpp>

#include "oracle.hpp"

inline oracle::Net to_net(const netsync::Topology& t) {
  oracle::Net g;
  for (const auto& p : t.positions()) g.pos.emplace_back(p.x, p.y);
  g.n_agents = t.num_agents();
  g.r_max = t.r_max();
  return g;
}

/// Random network with agents, a few references and mixed priors.
struct Fixture {
  netsync::Topology topology;
  netsync::PriorSpec priors;
};

inline Fixture random_fixture(std::mt19937_64& rng, std::size_t max_agents, bool with_references = true) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const std::size_t na = 2 + static_cast<std::size_t>(u(rng) * double(max_agents - 1));
    const std::size_t nr = with_references ? static_cast<std::size_t>(u(rng) * 4.0) : 0;
    const double side = std::sqrt(double(na)) * (0.8 + 0.8 * u(rng));
    std::vector<netsync::Position> pos(na + nr);
    for (auto& p : pos) p = {side * u(rng), side * u(rng)};
    netsync::Topology t(std::move(pos), na, 1.6 + u(rng));
    bool agents_connected = true;
    {
      // BFS over agent-agent links only
      std::vector<char> seen(na, 0);
      std::vector<std::size_t> q{0};
      seen[0] = 1;
      for (std::size_t k = 0; k < q.size(); ++k)
        for (auto b : t.neighbors(q[k]))
          if (b < na && !seen[b]) seen[b] = 1, q.push_back(b);
      agents_connected = q.size() == na;
    }
    if (!agents_connected) continue;
    std::vector<double> xi(na, 0.0);
    const double p_a = u(rng);
    bool any = false;
    for (std::size_t a = 0; a < na; ++a) any = any || t.reference_degree(a) > 0;
    for (auto& x : xi)
      if (u(rng) < p_a) x = 0.1 + 5.0 * u(rng), any = true;
    if (!any) xi[0] = 1.0;
    return {std::move(t), netsync::PriorSpec{std::move(xi)}};
  }
}
