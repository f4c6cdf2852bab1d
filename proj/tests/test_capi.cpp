// Exercises the shared library through the C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <netsync/netsync.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

namespace {

const ns_link_model kUnit{1, 2.0};

}  // namespace

TEST_CASE("status strings and version") {
  CHECK(std::string(ns_version()) == "0.1.0");
  CHECK(std::string(ns_status_string(NS_OK)) == "ok");
  CHECK(std::string(ns_status_string(NS_ERR_NOT_SYNCHRONIZABLE)) == "not synchronizable");
}

TEST_CASE("two-agent fixture through the C API") {
  const double xy[] = {0, 0, 1, 0};
  ns_topology* t = nullptr;
  REQUIRE(ns_topology_create(xy, 2, 2, 1.0, &t) == NS_OK);
  CHECK(ns_topology_num_agents(t) == 2);
  CHECK(ns_topology_num_edges(t) == 1);
  CHECK(ns_topology_is_connected(t) == 1);

  const double xi[] = {1, 1};
  ns_priors* p = nullptr;
  REQUIRE(ns_priors_from_xi(xi, 2, &p) == NS_OK);

  double aseb[2];
  ns_bounds_summary sum{};
  REQUIRE(ns_bounds_compute(t, p, kUnit, aseb, 2, &sum) == NS_OK);
  CHECK(aseb[0] == doctest::Approx(2.0 / 3.0));
  CHECK(sum.has_rseb == 1);
  CHECK(sum.rseb_trace == doctest::Approx(0.5));
  CHECK(std::string(sum.methods).find("pseudo") != std::string::npos);

  double cdi[2];
  REQUIRE(ns_cdi_exact(t, p, kUnit, cdi, 2) == NS_OK);
  CHECK(cdi[1] == doctest::Approx(1.0 / 3.0));
  std::size_t terms = 0;
  double tail = 0;
  REQUIRE(ns_cdi_series(t, p, kUnit, 1e-12, cdi, 2, &terms, &tail) == NS_OK);
  CHECK(std::abs(cdi[0] - 1.0 / 3.0) < 1e-12);
  CHECK(terms > 0);

  ns_walk_result w{};
  REQUIRE(ns_cdi_walk(t, p, kUnit, 0, 20000, 0, 3, 1, &w) == NS_OK);
  CHECK(std::abs(w.value - 1.0 / 3.0) < 4 * w.std_error);

  for (auto m : {NS_RSEB_PSEUDO, NS_RSEB_Z, NS_RSEB_RELATIVE_CDI, NS_RSEB_GROUNDED}) {
    double trace = 0, rseb = 0;
    REQUIRE(ns_rseb(t, kUnit, m, &trace, &rseb) == NS_OK);
    CHECK(trace == doctest::Approx(0.5));
    CHECK(rseb == doctest::Approx(0.25));
  }
  double rel[2];
  REQUIRE(ns_rel_cdi(t, kUnit, rel, 2) == NS_OK);
  CHECK(rel[0] == doctest::Approx(-0.25));

  ns_fim* f = nullptr;
  REQUIRE(ns_fim_build(t, p, kUnit, NS_FIM_ABSOLUTE, 0, &f) == NS_OK);
  double dense[4];
  REQUIRE(ns_fim_dense(f, dense, 4) == NS_OK);
  CHECK(dense[0] == 2.0);
  CHECK(dense[1] == -1.0);
  double direct[2];
  REQUIRE(ns_aseb_direct(f, direct, 2) == NS_OK);
  CHECK(direct[1] == doctest::Approx(2.0 / 3.0));
  double pm[4];
  int absorbing[2];
  REQUIRE(ns_fim_transition(f, pm, 4, absorbing, 2) == NS_OK);
  CHECK(pm[1] == 0.5);
  CHECK(absorbing[0] == 0);
  const double alpha[] = {2, 1};
  ns_fim* s = nullptr;
  REQUIRE(ns_fim_apply_skew(f, alpha, 2, &s) == NS_OK);
  REQUIRE(ns_fim_dense(s, dense, 4) == NS_OK);
  CHECK(dense[0] == 0.5);
  ns_fim_free(s);

  double ratio[2], ratio_se[2];
  REQUIRE(ns_skew_expectation(f, 0.9, 1.1, 5000, 1, ratio, ratio_se, 2) == NS_OK);
  CHECK(std::abs(ratio[0] - (1 + 0.01 / 3)) < 4 * ratio_se[0]);

  double mse[2], se[2], bound[2];
  std::vector<double> errors(200 * 2);
  ns_tightness_summary ts{};
  REQUIRE(ns_simulate(t, p, kUnit, 200, 2, 1, mse, se, bound, 2, errors.data(), &ts) == NS_OK);
  CHECK(ts.trials == 200);
  CHECK(bound[0] == doctest::Approx(2.0 / 3.0));
  double acc = 0;
  for (int k = 0; k < 200; ++k) acc += errors[std::size_t(2 * k)] * errors[std::size_t(2 * k)];
  CHECK(acc / 200 == doctest::Approx(mse[0]));

  double too_small[1];
  CHECK(ns_aseb_direct(f, too_small, 1) == NS_ERR_INVALID_ARGUMENT);
  CHECK(std::string(ns_last_error_message()).find("too small") != std::string::npos);

  ns_fim_free(f);
  ns_priors_free(p);
  ns_topology_free(t);
}

TEST_CASE("error codes") {
  const double xy[] = {0, 0, 1, 0, 10, 0, 11, 0};
  ns_topology* t = nullptr;
  REQUIRE(ns_topology_create(xy, 4, 4, 1.0, &t) == NS_OK);
  const double xi[] = {1, 0, 0, 0};
  ns_priors* p = nullptr;
  REQUIRE(ns_priors_from_xi(xi, 4, &p) == NS_OK);
  double out[4];
  CHECK(ns_cdi_exact(t, p, kUnit, out, 4) == NS_ERR_NOT_SYNCHRONIZABLE);
  std::size_t nodes[8];
  CHECK(ns_last_error_nodes(nodes, 8) == 2);
  CHECK(nodes[0] == 2);
  CHECK(nodes[1] == 3);
  double trace = 0;
  CHECK(ns_rseb(t, kUnit, NS_RSEB_PSEUDO, &trace, nullptr) == NS_ERR_DISCONNECTED);
  CHECK(ns_topology_lattice(-1, 1, 1, nullptr) == NS_ERR_INVALID_ARGUMENT);
  ns_topology* bad = nullptr;
  CHECK(ns_topology_load("/nonexistent/topology.csv", &bad) == NS_ERR_IO);
  ns_config* c = nullptr;
  CHECK(ns_config_parse("[broken\n", &c) == NS_ERR_PARSE);
  CHECK(ns_lattice_cdi_numerical(3, 1, 1e-12, 10, nullptr) == NS_ERR_INVALID_ARGUMENT);
  ns_lattice_cdi lc{};
  CHECK(ns_lattice_cdi_numerical(3, 1, 1e-12, 10, &lc) == NS_ERR_DIVERGED);
  double q = 0;
  CHECK(ns_cdi_walk(t, p, ns_link_model{0, 1.0}, 0, 10, 0, 1, 1, nullptr) == NS_ERR_INVALID_ARGUMENT);
  CHECK(ns_lattice_return_probability(2, 2, &q) == NS_OK);
  CHECK(q == doctest::Approx(1.0 / 12.0));
  ns_priors_free(p);
  ns_topology_free(t);
}

TEST_CASE("generators, priors and files") {
  ns_topology* t = nullptr;
  REQUIRE(ns_topology_lattice(4, 1, 1, &t) == NS_OK);
  CHECK(ns_topology_num_agents(t) == 25);
  std::size_t da = 0, dr = 0;
  REQUIRE(ns_topology_degree(t, 12, &da, &dr) == NS_OK);
  CHECK(da == 4);
  CHECK(dr == 0);
  CHECK(ns_gauss_circle_degree(3) == 29);

  ns_priors* p = nullptr;
  REQUIRE(ns_priors_uniform(t, 5, ns_link_model{2, 2.0}, &p) == NS_OK);
  double xi[25];
  REQUIRE(ns_priors_xi(p, xi, 25) == NS_OK);
  CHECK(xi[7] == 10.0);
  ns_priors_free(p);
  REQUIRE(ns_priors_region(t, 0, 0, 1, 1, 2, kUnit, &p) == NS_OK);
  REQUIRE(ns_priors_xi(p, xi, 25) == NS_OK);
  CHECK(xi[0] == 2.0);
  CHECK(xi[24] == 0.0);
  ns_priors_free(p);

  auto dir = std::filesystem::temp_directory_path() / "netsync_capi";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "t.csv").string();
  REQUIRE(ns_topology_save(t, path.c_str()) == NS_OK);
  ns_topology* back = nullptr;
  REQUIRE(ns_topology_load(path.c_str(), &back) == NS_OK);
  CHECK(ns_topology_num_edges(back) == ns_topology_num_edges(t));
  std::size_t count = 0;
  REQUIRE(ns_topology_interior_agents(back, nullptr, 0, &count) == NS_OK);
  CHECK(count == 9);
  ns_topology_free(back);

  ns_fim* f = nullptr;
  REQUIRE(ns_fim_build(t, nullptr, kUnit, NS_FIM_RELATIVE, 0, &f) == NS_OK);
  CHECK(ns_fim_dim(f) == 25);
  REQUIRE(ns_fim_save(f, (dir / "fim.csv").string().c_str(), "triplet") == NS_OK);
  CHECK(ns_fim_save(f, (dir / "fim.csv").string().c_str(), "coo") == NS_ERR_INVALID_ARGUMENT);
  ns_fim_free(f);
  CHECK(ns_fim_build(t, nullptr, kUnit, NS_FIM_ABSOLUTE, 0, &f) == NS_ERR_INVALID_ARGUMENT);
  ns_topology_free(t);

  ns_topology* s = nullptr;
  REQUIRE(ns_topology_scaling("dense", 50, 100, 3, 9, &s) == NS_OK);
  CHECK(ns_topology_num_agents(s) == 50);
  ns_topology_free(s);
  CHECK(ns_topology_scaling("huge", 50, 100, 3, 9, &s) == NS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("lattice CDI and configuration") {
  ns_lattice_cdi r{};
  REQUIRE(ns_lattice_cdi_numerical(3, 1, 1e-3, 5000, &r) == NS_OK);
  CHECK(r.degree == 28);
  CHECK(r.value == doctest::Approx(r.exact_part + r.tail));
  double simple = 0;
  REQUIRE(ns_lattice_cdi_asymptotic(2, 1, 1, &simple) == NS_OK);
  CHECK(simple == doctest::Approx(2.0 / 13.0 * std::log(14.0)));

  ns_config* c = nullptr;
  REQUIRE(ns_config_parse("[a]\nx = 2.5\nname = \"lattice\"\nlist = [1, 2, 3]\n", &c) == NS_OK);
  double x = 0;
  REQUIRE(ns_config_get_double(c, "a", "x", 0, &x) == NS_OK);
  CHECK(x == 2.5);
  char buf[4];
  std::size_t needed = 0;
  REQUIRE(ns_config_get_string(c, "a", "name", "", buf, sizeof buf, &needed) == NS_OK);
  CHECK(needed == 8);
  CHECK(std::strcmp(buf, "lat") == 0);
  double list[8];
  std::size_t n = 0;
  REQUIRE(ns_config_get_doubles(c, "a", "list", list, 8, &n) == NS_OK);
  CHECK(n == 3);
  CHECK(list[2] == 3.0);
  CHECK(ns_config_has(c, "a", "x") == 1);
  REQUIRE(ns_config_set(c, "extended_rseb", "n_agents", "[10, 14]") == NS_OK);
  REQUIRE(ns_config_set(c, "extended_rseb", "intensity", "0.1") == NS_OK);
  REQUIRE(ns_config_set(c, "extended_rseb", "r_max", "5") == NS_OK);
  REQUIRE(ns_config_set(c, "extended_rseb", "realizations", "3") == NS_OK);

  CHECK(ns_experiment_count() == 5);
  CHECK(ns_experiment_id(99) == nullptr);
  auto dir = std::filesystem::temp_directory_path() / "netsync_capi_exp";
  std::filesystem::remove_all(dir);
  ns_run_report rep{};
  REQUIRE(ns_experiment_run("extended_rseb", c, 1, dir.string().c_str(), 1, &rep) == NS_OK);
  CHECK(rep.cells_total == 2);
  CHECK(std::filesystem::exists(dir / "extended_rseb.csv"));
  CHECK(ns_experiment_run("nope", c, 1, dir.string().c_str(), 1, &rep) == NS_ERR_INVALID_ARGUMENT);
  ns_config_free(c);
}
