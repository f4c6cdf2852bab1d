#include "netsync/netsync.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "netsync/bounds.hpp"
#include "netsync/cdi.hpp"
#include "netsync/config.hpp"
#include "netsync/csv.hpp"
#include "netsync/errors.hpp"
#include "netsync/fim.hpp"
#include "netsync/harness.hpp"
#include "netsync/lattice.hpp"
#include "netsync/linalg.hpp"
#include "netsync/sim.hpp"
#include "netsync/topology.hpp"

struct ns_topology {
  netsync::Topology value;
};
struct ns_priors {
  netsync::PriorSpec value;
};
struct ns_fim {
  netsync::FimMatrix value;
};
struct ns_config {
  netsync::Config value;
};

namespace {

thread_local std::string g_message;
thread_local std::vector<std::size_t> g_nodes;

ns_status fail(ns_status status, const char* what, std::vector<std::size_t> nodes = {}) {
  g_message = what;
  g_nodes = std::move(nodes);
  return status;
}

template <class F>
ns_status guarded(F&& body) {
  g_message.clear();
  g_nodes.clear();
  try {
    body();
    return NS_OK;
  } catch (const netsync::NotSynchronizable& e) {
    return fail(NS_ERR_NOT_SYNCHRONIZABLE, e.what(), e.unreachable());
  } catch (const netsync::DegenerateNode& e) {
    return fail(NS_ERR_SINGULAR, e.what(), {e.node()});
  } catch (const netsync::linalg::FactorizationFailure& e) {
    return fail(NS_ERR_SINGULAR, e.what(), {static_cast<std::size_t>(e.pivot())});
  } catch (const netsync::Disconnected& e) {
    return fail(NS_ERR_DISCONNECTED, e.what());
  } catch (const netsync::Diverged& e) {
    return fail(NS_ERR_DIVERGED, e.what());
  } catch (const netsync::IoError& e) {
    return fail(NS_ERR_IO, e.what());
  } catch (const netsync::ParseError& e) {
    return fail(NS_ERR_PARSE, e.what());
  } catch (const netsync::ResourceLimit& e) {
    return fail(NS_ERR_RESOURCE, e.what());
  } catch (const netsync::InvalidArgument& e) {
    return fail(NS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(NS_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(NS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(NS_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw netsync::InvalidArgument(what);
}

netsync::LinkModel to_link(ns_link_model m) {
  netsync::LinkModel link{m.n_rounds, m.sigma2};
  link.validate();
  return link;
}

const netsync::Topology& topo(const ns_topology* t) {
  require(t != nullptr, "null topology handle");
  return t->value;
}

const netsync::PriorSpec& priors_of(const ns_priors* p, const netsync::Topology& t) {
  require(p != nullptr, "null priors handle");
  require(p->value.xi_p.size() == t.num_agents(), "priors do not match the topology's agent count");
  return p->value;
}

void copy_out(const Eigen::VectorXd& v, double* out, std::size_t n) {
  require(out != nullptr, "null output buffer");
  require(n >= static_cast<std::size_t>(v.size()), "output buffer too small");
  std::copy(v.data(), v.data() + v.size(), out);
}

template <class T>
void put(T* out, const T& v) {
  if (out) *out = v;
}

ns_status make_topology(ns_topology** out, netsync::Topology t) {
  *out = new ns_topology{std::move(t)};
  return NS_OK;
}

netsync::TransitionMatrix absolute_transition(const netsync::Topology& t, const netsync::PriorSpec& p,
                                              const netsync::LinkModel& link) {
  return netsync::build_transition_matrix(netsync::build_absolute_fim(t, p, link));
}

Eigen::VectorXd agent_degrees(const netsync::Topology& t) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(t.num_agents()));
  for (std::size_t i = 0; i < t.num_agents(); ++i) d(static_cast<Eigen::Index>(i)) = double(t.agent_degree(i));
  return d;
}

}  // namespace

extern "C" {

const char* ns_version(void) { return netsync::library_version(); }

const char* ns_status_string(ns_status status) {
  switch (status) {
    case NS_OK: return "ok";
    case NS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case NS_ERR_NOT_SYNCHRONIZABLE: return "not synchronizable";
    case NS_ERR_SINGULAR: return "singular matrix";
    case NS_ERR_DISCONNECTED: return "disconnected";
    case NS_ERR_DIVERGED: return "diverged";
    case NS_ERR_IO: return "i/o error";
    case NS_ERR_PARSE: return "parse error";
    case NS_ERR_RESOURCE: return "resource limit";
    case NS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ns_last_error_message(void) { return g_message.c_str(); }

size_t ns_last_error_nodes(size_t* out, size_t capacity) {
  if (out) std::copy_n(g_nodes.begin(), std::min(capacity, g_nodes.size()), out);
  return g_nodes.size();
}

// ---- topology

ns_status ns_topology_create(const double* xy, size_t n_nodes, size_t n_agents, double r_max, ns_topology** out) {
  return guarded([&] {
    require(out && (xy || n_nodes == 0), "null argument");
    std::vector<netsync::Position> pos(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) pos[i] = {xy[2 * i], xy[2 * i + 1]};
    make_topology(out, netsync::Topology(std::move(pos), n_agents, r_max));
  });
}

ns_status ns_topology_lattice(double side_b, double spacing, double r_max, ns_topology** out) {
  return guarded([&] {
    require(out, "null argument");
    make_topology(out, netsync::gen_lattice(side_b, spacing, r_max));
  });
}

ns_status ns_topology_matched_lattice(double side_b, double intensity, double r_max, ns_topology** out) {
  return guarded([&] {
    require(out, "null argument");
    make_topology(out, netsync::gen_matched_lattice(side_b, intensity, r_max));
  });
}

ns_status ns_topology_stochastic(double side_b, double intensity, double r_max, uint64_t seed, ns_topology** out) {
  return guarded([&] {
    require(out, "null argument");
    make_topology(out, netsync::gen_stochastic(side_b, intensity, r_max, seed));
  });
}

ns_status ns_topology_scaling(const char* mode, size_t n_agents, double base, double r_max, uint64_t seed,
                              ns_topology** out) {
  return guarded([&] {
    require(out && mode, "null argument");
    auto m = netsync::parse_scaling_mode(mode);
    auto family = m == netsync::ScalingMode::Extended ? netsync::ScalingFamily::extended(base)
                                                      : netsync::ScalingFamily::dense(base);
    make_topology(out, netsync::gen_scaling_family(family, n_agents, r_max, seed));
  });
}

ns_status ns_topology_load(const char* path, ns_topology** out) {
  return guarded([&] {
    require(out && path, "null argument");
    make_topology(out, netsync::load_topology(path));
  });
}

ns_status ns_topology_save(const ns_topology* t, const char* path) {
  return guarded([&] {
    require(path, "null path");
    netsync::save_topology(topo(t), path);
  });
}

void ns_topology_free(ns_topology* t) { delete t; }

size_t ns_topology_num_nodes(const ns_topology* t) { return t ? t->value.num_nodes() : 0; }
size_t ns_topology_num_agents(const ns_topology* t) { return t ? t->value.num_agents() : 0; }
size_t ns_topology_num_edges(const ns_topology* t) { return t ? t->value.num_edges() : 0; }

ns_status ns_topology_degree(const ns_topology* t, size_t node, size_t* agent_degree, size_t* reference_degree) {
  return guarded([&] {
    const auto& g = topo(t);
    require(node < g.num_nodes(), "node id out of range");
    put(agent_degree, g.agent_degree(node));
    put(reference_degree, g.reference_degree(node));
  });
}

ns_status ns_topology_position(const ns_topology* t, size_t node, double* x, double* y) {
  return guarded([&] {
    const auto& g = topo(t);
    require(node < g.num_nodes(), "node id out of range");
    put(x, g.position(node).x);
    put(y, g.position(node).y);
  });
}

int ns_topology_is_connected(const ns_topology* t) { return t && netsync::is_connected(t->value) ? 1 : 0; }

ns_status ns_topology_interior_agents(const ns_topology* t, size_t* out, size_t capacity, size_t* count) {
  return guarded([&] {
    auto ids = netsync::interior_agents(topo(t));
    if (out) std::copy_n(ids.begin(), std::min(capacity, ids.size()), out);
    put(count, ids.size());
  });
}

long ns_gauss_circle_degree(double r_max) {
  long v = -1;
  guarded([&] { v = netsync::gauss_circle_degree(r_max); });
  return v;
}

// ---- priors

ns_status ns_priors_from_xi(const double* xi_p, size_t n_agents, ns_priors** out) {
  return guarded([&] {
    require(out && (xi_p || n_agents == 0), "null argument");
    std::vector<double> xi(xi_p, xi_p + n_agents);
    for (double v : xi) require(std::isfinite(v) && v >= 0.0, "prior information must be finite and >= 0");
    *out = new ns_priors{netsync::PriorSpec{std::move(xi)}};
  });
}

ns_status ns_priors_uniform(const ns_topology* t, double n_p, ns_link_model link, ns_priors** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new ns_priors{netsync::assign_priors(topo(t), netsync::UniformPriors{n_p}, to_link(link))};
  });
}

ns_status ns_priors_bernoulli(const ns_topology* t, double p_a, double n_p, uint64_t seed, ns_link_model link,
                              ns_priors** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new ns_priors{netsync::assign_priors(topo(t), netsync::BernoulliPriors{p_a, n_p, seed}, to_link(link))};
  });
}

ns_status ns_priors_region(const ns_topology* t, double x0, double y0, double x1, double y1, double n_p,
                           ns_link_model link, ns_priors** out) {
  return guarded([&] {
    require(out, "null argument");
    netsync::RegionPriors scheme{netsync::Rect{x0, y0, x1, y1}, n_p};
    *out = new ns_priors{netsync::assign_priors(topo(t), scheme, to_link(link))};
  });
}

size_t ns_priors_size(const ns_priors* p) { return p ? p->value.xi_p.size() : 0; }

ns_status ns_priors_xi(const ns_priors* p, double* out, size_t n) {
  return guarded([&] {
    require(p && out, "null argument");
    require(n >= p->value.xi_p.size(), "output buffer too small");
    std::copy(p->value.xi_p.begin(), p->value.xi_p.end(), out);
  });
}

void ns_priors_free(ns_priors* p) { delete p; }

// ---- information matrices

ns_status ns_fim_build(const ns_topology* t, const ns_priors* priors, ns_link_model link, ns_fim_variant variant,
                       double xi_inf, ns_fim** out) {
  return guarded([&] {
    require(out, "null argument");
    const auto& g = topo(t);
    auto lm = to_link(link);
    switch (variant) {
      case NS_FIM_ABSOLUTE:
        *out = new ns_fim{netsync::build_absolute_fim(g, priors_of(priors, g), lm)};
        return;
      case NS_FIM_RELATIVE:
        *out = new ns_fim{netsync::build_relative_fim(g, lm)};
        return;
      case NS_FIM_EXTENDED:
        *out = new ns_fim{netsync::build_extended_fim(g, priors_of(priors, g), lm, xi_inf)};
        return;
    }
    throw netsync::InvalidArgument("unknown FIM variant");
  });
}

ns_status ns_fim_apply_skew(const ns_fim* f, const double* alphas, size_t n, ns_fim** out) {
  return guarded([&] {
    require(f && alphas && out, "null argument");
    netsync::SkewSpec skews{std::vector<double>(alphas, alphas + n)};
    *out = new ns_fim{netsync::apply_skew(f->value, skews)};
  });
}

size_t ns_fim_dim(const ns_fim* f) { return f ? f->value.dim() : 0; }

ns_status ns_fim_dense(const ns_fim* f, double* out, size_t capacity) {
  return guarded([&] {
    require(f && out, "null argument");
    const std::size_t n = f->value.dim();
    require(capacity >= n * n, "output buffer too small");
    Eigen::MatrixXd d = f->value.dense();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] = d(Eigen::Index(i), Eigen::Index(j));
  });
}

ns_status ns_fim_save(const ns_fim* f, const char* path, const char* format) {
  return guarded([&] {
    require(f && path, "null argument");
    auto fmt = netsync::parse_matrix_format(format ? format : "dense");
    std::ostringstream os;
    netsync::write_matrix_csv(f->value, os, fmt);
    netsync::write_file_atomic(path, os.str());
  });
}

ns_status ns_fim_transition(const ns_fim* f, double* out, size_t capacity, int* absorbing, size_t n) {
  return guarded([&] {
    require(f, "null argument");
    auto p = netsync::build_transition_matrix(f->value);
    const std::size_t dim = p.dim();
    if (out) {
      require(capacity >= dim * dim, "output buffer too small");
      Eigen::MatrixXd d(p.data);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) out[i * dim + j] = d(Eigen::Index(i), Eigen::Index(j));
    }
    if (absorbing) {
      require(n >= dim, "output buffer too small");
      for (std::size_t i = 0; i < dim; ++i) absorbing[i] = p.absorbing[i] ? 1 : 0;
    }
  });
}

void ns_fim_free(ns_fim* f) { delete f; }

// ---- bounds

ns_status ns_aseb_direct(const ns_fim* absolute, double* out, size_t n) {
  return guarded([&] {
    require(absolute, "null FIM handle");
    copy_out(netsync::aseb_direct(absolute->value), out, n);
  });
}

ns_status ns_aseb_via_cdi(const ns_topology* t, const ns_priors* priors, ns_link_model link, double* out, size_t n) {
  return guarded([&] {
    const auto& g = topo(t);
    const auto& p = priors_of(priors, g);
    auto lm = to_link(link);
    auto cdi = netsync::cdi_exact(absolute_transition(g, p, lm));
    copy_out(netsync::aseb_via_cdi(g, p, lm, cdi), out, n);
  });
}

ns_status ns_rseb(const ns_topology* t, ns_link_model link, ns_rseb_method method, double* trace, double* rseb) {
  return guarded([&] {
    const auto& g = topo(t);
    auto lm = to_link(link);
    auto rel = netsync::build_relative_fim(g, lm);
    netsync::RsebValue v;
    switch (method) {
      case NS_RSEB_PSEUDO:
        v = netsync::rseb_pseudo(rel);
        break;
      case NS_RSEB_GROUNDED:
        v = netsync::rseb_grounded(rel);
        break;
      case NS_RSEB_Z:
        v = netsync::rseb_via_z(netsync::build_transition_matrix(rel), agent_degrees(g), lm);
        break;
      case NS_RSEB_RELATIVE_CDI:
      case NS_RSEB_RELATIVE_CDI_PRINTED: {
        auto p = netsync::build_transition_matrix(rel);
        auto d = agent_degrees(g);
        auto numerator = method == NS_RSEB_RELATIVE_CDI ? netsync::RelCdiNumerator::Corrected
                                                        : netsync::RelCdiNumerator::Printed;
        v = netsync::rseb_via_relative_cdi(netsync::rel_cdi_exact(p, d), d, lm, numerator);
        break;
      }
      default:
        throw netsync::InvalidArgument("unknown RSEB method");
    }
    put(trace, v.trace);
    put(rseb, v.rseb);
  });
}

ns_status ns_bounds_compute(const ns_topology* t, const ns_priors* priors, ns_link_model link, double* aseb,
                            size_t n, ns_bounds_summary* summary) {
  return guarded([&] {
    const auto& g = topo(t);
    auto report = netsync::compute_bounds(g, priors_of(priors, g), to_link(link));
    copy_out(report.aseb, aseb, n);
    if (!summary) return;
    *summary = ns_bounds_summary{};
    summary->has_rseb = report.has_rseb ? 1 : 0;
    summary->rseb = report.rseb.rseb;
    summary->rseb_trace = report.rseb.trace;
    summary->aseb_max_deviation = report.aseb_max_deviation;
    summary->rseb_max_deviation = report.rseb_max_deviation;
    summary->condition_number = report.condition_number;
    std::string methods = "aseb:";
    for (std::size_t i = 0; i < report.aseb_methods.size(); ++i)
      methods += (i ? "+" : "") + report.aseb_methods[i];
    if (report.has_rseb) {
      methods += ";rseb:";
      for (std::size_t i = 0; i < report.rseb_methods.size(); ++i)
        methods += (i ? "+" : "") + report.rseb_methods[i];
    }
    std::strncpy(summary->methods, methods.c_str(), sizeof(summary->methods) - 1);
  });
}

ns_status ns_node_equivalence(const ns_topology* t, const ns_priors* priors, ns_link_model link, size_t agent,
                              double xi_inf, double* max_rel_deviation) {
  return guarded([&] {
    const auto& g = topo(t);
    auto r = netsync::check_node_equivalence(g, priors_of(priors, g), to_link(link), agent, xi_inf);
    put(max_rel_deviation, r.max_rel_deviation);
  });
}

ns_status ns_skew_expectation(const ns_fim* absolute, double lo, double hi, size_t trials, uint64_t seed,
                              double* ratio, double* ratio_stderr, size_t n) {
  return guarded([&] {
    require(absolute, "null FIM handle");
    auto e = netsync::skewed_bound_expectation(absolute->value, netsync::UniformSkew{lo, hi}, trials, seed);
    copy_out(e.ratio, ratio, n);
    if (ratio_stderr) copy_out(e.ratio_stderr, ratio_stderr, n);
  });
}

// ---- cooperative dilution intensity

ns_status ns_cdi_exact(const ns_topology* t, const ns_priors* priors, ns_link_model link, double* out, size_t n) {
  return guarded([&] {
    const auto& g = topo(t);
    copy_out(netsync::cdi_exact(absolute_transition(g, priors_of(priors, g), to_link(link))), out, n);
  });
}

ns_status ns_cdi_series(const ns_topology* t, const ns_priors* priors, ns_link_model link, double tol, double* out,
                        size_t n, size_t* terms, double* tail_bound) {
  return guarded([&] {
    const auto& g = topo(t);
    auto r = netsync::cdi_series(absolute_transition(g, priors_of(priors, g), to_link(link)), tol);
    copy_out(r.delta, out, n);
    put(terms, r.truncation_n.value_or(0));
    put(tail_bound, r.tail_bound.value_or(0.0));
  });
}

ns_status ns_rel_cdi(const ns_topology* t, ns_link_model link, double* out, size_t n) {
  return guarded([&] {
    const auto& g = topo(t);
    auto p = netsync::build_transition_matrix(netsync::build_relative_fim(g, to_link(link)));
    copy_out(netsync::rel_cdi_exact(p, agent_degrees(g)), out, n);
  });
}

ns_status ns_cdi_walk(const ns_topology* t, const ns_priors* priors, ns_link_model link, size_t agent,
                      size_t n_walks, size_t max_steps, uint64_t seed, unsigned jobs, ns_walk_result* out) {
  return guarded([&] {
    require(out, "null argument");
    const auto& g = topo(t);
    auto r = netsync::cdi_random_walk(g, priors_of(priors, g), to_link(link), agent, n_walks, max_steps, seed, jobs);
    out->value = r.delta(0);
    out->std_error = r.std_error.value_or(0.0);
    out->tail_bound = r.tail_bound.value_or(0.0);
    out->max_steps = r.truncation_n.value_or(0);
    out->truncated_walks = r.truncated_walks;
  });
}

ns_status ns_lattice_return_probability(int n, double r_max, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = netsync::lattice_return_probability(n, r_max);
  });
}

ns_status ns_lattice_cdi_numerical(double r_max, double n_p, double rel_err_tol, size_t max_steps,
                                   ns_lattice_cdi* out) {
  return guarded([&] {
    require(out, "null argument");
    auto r = netsync::infinite_lattice_cdi_numerical(r_max, n_p, rel_err_tol, max_steps);
    *out = ns_lattice_cdi{r.value, r.exact_part, r.tail, r.sigma_r2, r.q, r.truncation_n, r.degree};
  });
}

ns_status ns_lattice_cdi_asymptotic(double r_max, double n_p, int simplified, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = netsync::infinite_lattice_cdi_asymptotic(
        r_max, n_p, simplified ? netsync::AsymptoticForm::Simplified : netsync::AsymptoticForm::Full);
  });
}

ns_status ns_finite_lattice_cdi(double side_b, double r_max, double n_p, double* interior_mean,
                                double* overall_mean) {
  return guarded([&] {
    auto r = netsync::finite_lattice_cdi(side_b, r_max, n_p);
    put(interior_mean, r.interior_mean);
    put(overall_mean, r.overall_mean);
  });
}

ns_status ns_expected_cdi_stochastic(double side_b, double intensity, double r_max, double n_p, size_t snapshots,
                                     uint64_t seed, unsigned jobs, double* mean, double* std_error,
                                     size_t* resamples) {
  return guarded([&] {
    auto s = netsync::expected_cdi_stochastic(side_b, intensity, r_max, n_p, snapshots, seed, jobs);
    put(mean, s.mean);
    put(std_error, s.std_error);
    put(resamples, s.resamples);
  });
}

ns_status ns_matched_lattice_cdi(double side_b, double intensity, double r_max, double n_p, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = netsync::matched_lattice_cdi(side_b, intensity, r_max, n_p);
  });
}

// ---- simulation

ns_status ns_simulate(const ns_topology* t, const ns_priors* priors, ns_link_model link, size_t trials,
                      uint64_t seed, unsigned jobs, double* mse, double* mse_stderr, double* aseb, size_t n,
                      double* errors, ns_tightness_summary* summary) {
  return guarded([&] {
    const auto& g = topo(t);
    auto r = netsync::run_bound_tightness(g, priors_of(priors, g), to_link(link), trials, seed, jobs,
                                          errors != nullptr);
    if (mse) copy_out(r.mse, mse, n);
    if (mse_stderr) copy_out(r.mse_stderr, mse_stderr, n);
    if (aseb) copy_out(r.aseb, aseb, n);
    if (errors) {
      const std::size_t na = g.num_agents();
      for (std::size_t k = 0; k < trials; ++k)
        for (std::size_t i = 0; i < na; ++i) errors[k * na + i] = r.errors(Eigen::Index(k), Eigen::Index(i));
    }
    if (summary) {
      *summary = ns_tightness_summary{r.trials, r.has_relative ? 1 : 0, r.trace_pinv, r.relative_mse,
                                      r.relative_mse_stderr};
    }
  });
}

// ---- configuration and experiments

ns_status ns_config_load(const char* path, ns_config** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new ns_config{netsync::Config::load(path)};
  });
}

ns_status ns_config_parse(const char* text, ns_config** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new ns_config{netsync::Config::parse(text)};
  });
}

void ns_config_free(ns_config* c) { delete c; }

int ns_config_has(const ns_config* c, const char* section, const char* key) {
  return c && section && key && c->value.has(section, key) ? 1 : 0;
}

ns_status ns_config_set(ns_config* c, const char* section, const char* key, const char* value) {
  return guarded([&] {
    require(c && section && key && value, "null argument");
    c->value.set(section, key, value);
  });
}

ns_status ns_config_get_double(const ns_config* c, const char* section, const char* key, double fallback,
                               double* out) {
  return guarded([&] {
    require(c && section && key && out, "null argument");
    *out = c->value.get_double(section, key, fallback);
  });
}

ns_status ns_config_get_int(const ns_config* c, const char* section, const char* key, int64_t fallback,
                            int64_t* out) {
  return guarded([&] {
    require(c && section && key && out, "null argument");
    *out = c->value.get_int(section, key, fallback);
  });
}

ns_status ns_config_get_string(const ns_config* c, const char* section, const char* key, const char* fallback,
                               char* out, size_t capacity, size_t* needed) {
  return guarded([&] {
    require(c && section && key, "null argument");
    auto s = c->value.get_string(section, key, fallback ? fallback : "");
    put(needed, s.size() + 1);
    if (out && capacity > 0) {
      std::size_t k = std::min(capacity - 1, s.size());
      std::memcpy(out, s.data(), k);
      out[k] = '\0';
    }
  });
}

ns_status ns_config_get_doubles(const ns_config* c, const char* section, const char* key, double* out,
                                size_t capacity, size_t* count) {
  return guarded([&] {
    require(c && section && key, "null argument");
    auto v = c->value.get_doubles(section, key, {});
    if (out) std::copy_n(v.begin(), std::min(capacity, v.size()), out);
    put(count, v.size());
  });
}

size_t ns_experiment_count(void) { return netsync::experiment_ids().size(); }

const char* ns_experiment_id(size_t index) {
  static const std::vector<std::string> ids = netsync::experiment_ids();
  return index < ids.size() ? ids[index].c_str() : nullptr;
}

ns_status ns_experiment_run(const char* id, const ns_config* config, uint64_t seed, const char* out_dir,
                            unsigned jobs, ns_run_report* report) {
  return guarded([&] {
    require(id && out_dir, "null argument");
    netsync::Config empty;
    const netsync::Config& cfg = config ? config->value : empty;
    auto exp = netsync::make_experiment(id, cfg, seed);
    auto r = netsync::run_experiment_to_dir(*exp, cfg, seed, out_dir, jobs);
    if (report) *report = ns_run_report{r.cells_total, r.cells_resumed, r.cells_computed, r.wall_seconds};
  });
}

}  // extern "C"
