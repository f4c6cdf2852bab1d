#include "netsync/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

namespace netsync::linalg {

namespace {

// Largest band (in doubles, factor + inverse) we are willing to allocate.
constexpr double kMaxBandDoubles = 1.6e8;

std::vector<Index> inverse_of(const Permutation& perm) {
  std::vector<Index> inv(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) inv[static_cast<std::size_t>(perm[k])] = static_cast<Index>(k);
  return inv;
}

std::vector<std::vector<Index>> adjacency_lists(const SparseMatrix& a) {
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(a.rows()));
  for (Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      if (it.row() != it.col()) adj[static_cast<std::size_t>(it.row())].push_back(it.col());
  for (auto& l : adj) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }
  return adj;
}

}  // namespace

Permutation identity_permutation(Index n) {
  Permutation p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), Index{0});
  return p;
}

Index bandwidth(const SparseMatrix& a, const Permutation& perm) {
  const auto inv = inverse_of(perm);
  Index w = 0;
  for (Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      w = std::max(w, std::abs(inv[static_cast<std::size_t>(it.row())] - inv[static_cast<std::size_t>(it.col())]));
  return w;
}

Permutation sort_permutation(const std::vector<double>& keys) {
  Permutation p = identity_permutation(static_cast<Index>(keys.size()));
  std::stable_sort(p.begin(), p.end(),
                   [&](Index a, Index b) { return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)]; });
  return p;
}

Permutation reverse_cuthill_mckee(const SparseMatrix& a) {
  const auto n = static_cast<std::size_t>(a.rows());
  const auto adj = adjacency_lists(a);
  std::vector<char> visited(n, 0);
  Permutation order;
  order.reserve(n);

  auto bfs_levels = [&](Index root, std::vector<Index>& dist) {
    std::fill(dist.begin(), dist.end(), Index{-1});
    std::queue<Index> q;
    q.push(root);
    dist[static_cast<std::size_t>(root)] = 0;
    Index last = root;
    while (!q.empty()) {
      Index u = q.front();
      q.pop();
      last = u;
      for (Index v : adj[static_cast<std::size_t>(u)])
        if (dist[static_cast<std::size_t>(v)] < 0) {
          dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
          q.push(v);
        }
    }
    return last;
  };

  std::vector<Index> dist(n, -1);
  for (std::size_t s = 0; s < n; ++s) {
    if (visited[s]) continue;
    // Pseudo-peripheral start: a few sweeps to a far, low-degree node.
    Index root = static_cast<Index>(s);
    Index ecc = -1;
    for (int sweep = 0; sweep < 4; ++sweep) {
      bfs_levels(root, dist);
      Index far_level = 0;
      for (std::size_t v = 0; v < n; ++v) far_level = std::max(far_level, dist[v]);
      if (far_level <= ecc) break;
      ecc = far_level;
      Index best = root;
      std::size_t best_deg = std::numeric_limits<std::size_t>::max();
      for (std::size_t v = 0; v < n; ++v)
        if (dist[v] == far_level && adj[v].size() < best_deg) {
          best = static_cast<Index>(v);
          best_deg = adj[v].size();
        }
      root = best;
    }
    std::queue<Index> q;
    q.push(root);
    visited[static_cast<std::size_t>(root)] = 1;
    std::vector<Index> nb;
    while (!q.empty()) {
      Index u = q.front();
      q.pop();
      order.push_back(u);
      nb.clear();
      for (Index v : adj[static_cast<std::size_t>(u)])
        if (!visited[static_cast<std::size_t>(v)]) nb.push_back(v);
      std::sort(nb.begin(), nb.end(), [&](Index x, Index y) {
        return adj[static_cast<std::size_t>(x)].size() < adj[static_cast<std::size_t>(y)].size();
      });
      for (Index v : nb) {
        visited[static_cast<std::size_t>(v)] = 1;
        q.push(v);
      }
    }
  }
  std::reverse(order.begin(), order.end());
  return order;
}

// ---------------------------------------------------------------------------

BandCholesky::BandCholesky(const SparseMatrix& a, Permutation perm, double pivot_tol)
    : n_(a.rows()), perm_(std::move(perm)) {
  if (a.rows() != a.cols()) throw InvalidArgument("BandCholesky: matrix must be square");
  if (static_cast<Index>(perm_.size()) != n_) throw InvalidArgument("BandCholesky: permutation size mismatch");
  w_ = bandwidth(a, perm_);
  if (static_cast<double>(n_) * static_cast<double>(w_ + 1) * 2.0 > kMaxBandDoubles)
    throw ResourceLimit("BandCholesky: band of " + std::to_string(n_) + " x " + std::to_string(w_ + 1) +
                        " exceeds the memory guard");
  l_.assign(static_cast<std::size_t>(n_ * (w_ + 1)), 0.0);
  const auto inv = inverse_of(perm_);
  for (Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      const Index r = inv[static_cast<std::size_t>(it.row())];
      const Index c = inv[static_cast<std::size_t>(it.col())];
      if (c <= r) at(r, c) = it.value();
    }
  const Index row_len = w_ + 1;
  for (Index i = 0; i < n_; ++i) {
    double* row_i = l_.data() + i * row_len;
    const Index j0 = std::max<Index>(0, i - w_);
    for (Index j = j0; j <= i; ++j) {
      const double* row_j = l_.data() + j * row_len;
      // Columns k in [j0, j): row i offset k - i + w, row j offset k - j + w.
      const double* pi = row_i + (j0 - i + w_);
      const double* pj = row_j + (j0 - j + w_);
      double dot = 0.0;
      for (Index t = 0, len = j - j0; t < len; ++t) dot += pi[t] * pj[t];
      double& lij = row_i[j - i + w_];
      if (j < i) {
        lij = (lij - dot) / row_j[w_];
      } else {
        const double s = lij - dot;
        if (!(s > pivot_tol * std::abs(lij))) {
          throw FactorizationFailure("matrix is not positive definite (pivot " + std::to_string(perm_[static_cast<std::size_t>(i)]) +
                                         ")",
                                     perm_[static_cast<std::size_t>(i)]);
        }
        lij = std::sqrt(s);
      }
    }
  }
}

Eigen::VectorXd BandCholesky::solve(const Eigen::VectorXd& b) const {
  if (b.size() != n_) throw InvalidArgument("BandCholesky::solve: size mismatch");
  Eigen::VectorXd x(n_);
  for (Index i = 0; i < n_; ++i) x[i] = b[perm_[static_cast<std::size_t>(i)]];
  for (Index i = 0; i < n_; ++i) {
    double s = x[i];
    for (Index k = std::max<Index>(0, i - w_); k < i; ++k) s -= at(i, k) * x[k];
    x[i] = s / at(i, i);
  }
  for (Index i = n_ - 1; i >= 0; --i) {
    x[i] /= at(i, i);
    const double xi = x[i];
    for (Index k = std::max<Index>(0, i - w_); k < i; ++k) x[k] -= at(i, k) * xi;
  }
  Eigen::VectorXd out(n_);
  for (Index i = 0; i < n_; ++i) out[perm_[static_cast<std::size_t>(i)]] = x[i];
  return out;
}

Eigen::VectorXd BandCholesky::inverse_diagonal() const {
  const Index row_len = w_ + 1;
  std::vector<double> z(l_.size(), 0.0);
  auto zrow = [&](Index i) { return z.data() + i * row_len; };
  std::vector<double> col(static_cast<std::size_t>(w_)), y(static_cast<std::size_t>(w_));
  for (Index j = n_ - 1; j >= 0; --j) {
    const double ljj = at(j, j);
    const Index m = std::min(n_ - 1, j + w_) - j;
    for (Index t = 0; t < m; ++t) col[static_cast<std::size_t>(t)] = at(j + 1 + t, j);
    std::fill(y.begin(), y.begin() + m, 0.0);
    // y = Z[j+1.., j+1..] * col using the stored lower triangle.
    for (Index a = 0; a < m; ++a) {
      const Index i = j + 1 + a;
      const double* zi = zrow(i) + (j + 1 - i + w_);
      const double la = col[static_cast<std::size_t>(a)];
      double acc = 0.0;
      for (Index b = 0; b < a; ++b) {
        acc += zi[b] * col[static_cast<std::size_t>(b)];
        y[static_cast<std::size_t>(b)] += zi[b] * la;
      }
      y[static_cast<std::size_t>(a)] += acc + zi[a] * la;
    }
    double ly = 0.0;
    for (Index a = 0; a < m; ++a) {
      const Index i = j + 1 + a;
      zrow(i)[j - i + w_] = -y[static_cast<std::size_t>(a)] / ljj;
      ly += col[static_cast<std::size_t>(a)] * y[static_cast<std::size_t>(a)];
    }
    zrow(j)[w_] = (1.0 + ly) / (ljj * ljj);
  }
  Eigen::VectorXd out(n_);
  for (Index i = 0; i < n_; ++i) out[perm_[static_cast<std::size_t>(i)]] = zrow(i)[w_];
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Eigen::MatrixXd checked_cholesky(const Eigen::MatrixXd& a, double pivot_tol) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  Eigen::MatrixXd l = llt.matrixL();
  auto tol = [&](Index i) { return pivot_tol * std::abs(a(i, i)); };
  for (Index i = 0; i < a.rows(); ++i) {
    const double piv = l(i, i) * l(i, i);
    if (llt.info() != Eigen::Success || !(piv > tol(i)) || !std::isfinite(piv)) {
      // Locate the first failing pivot for the diagnostic.
      Index bad = i;
      if (llt.info() != Eigen::Success)
        for (Index k = 0; k < a.rows(); ++k)
          if (!(l(k, k) * l(k, k) > tol(k))) {
            bad = k;
            break;
          }
      throw FactorizationFailure("matrix is not positive definite (pivot " + std::to_string(bad) + ")", bad);
    }
  }
  return l;
}

}  // namespace

Eigen::VectorXd dense_inverse_diagonal(const Eigen::MatrixXd& a, double pivot_tol) {
  if (a.rows() == 0) return {};
  const Eigen::MatrixXd l = checked_cholesky(a, pivot_tol);
  const Eigen::MatrixXd linv =
      l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
  return linv.colwise().squaredNorm().transpose();
}

Eigen::MatrixXd dense_spd_inverse(const Eigen::MatrixXd& a, double pivot_tol) {
  if (a.rows() == 0) return {};
  const Eigen::MatrixXd l = checked_cholesky(a, pivot_tol);
  const Eigen::MatrixXd linv =
      l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
  return linv.transpose() * linv;
}

SpdSolver::SpdSolver(const SparseMatrix& a, const std::vector<Permutation>& orderings, double pivot_tol) {
  const Index n = a.rows();
  if (n != a.cols()) throw InvalidArgument("SpdSolver: matrix must be square");
  Permutation best = identity_permutation(n);
  Index best_w = bandwidth(a, best);
  auto consider = [&](Permutation p) {
    if (static_cast<Index>(p.size()) != n) return;
    const Index w = bandwidth(a, p);
    if (w < best_w) {
      best_w = w;
      best = std::move(p);
    }
  };
  consider(reverse_cuthill_mckee(a));
  for (const auto& p : orderings) consider(p);
  // The dense path runs blocked/vectorized kernels; the band loops are
  // roughly an order of magnitude slower per flop.
  const bool band = n > 64 && static_cast<double>(best_w) < 0.3 * static_cast<double>(n);
  if (band) {
    band_.emplace(a, std::move(best), pivot_tol);
  } else {
    dense_l_ = checked_cholesky(Eigen::MatrixXd(a), pivot_tol);
  }
}

Eigen::VectorXd SpdSolver::solve(const Eigen::VectorXd& b) const {
  if (band_) return band_->solve(b);
  Eigen::VectorXd y = dense_l_.triangularView<Eigen::Lower>().solve(b);
  return dense_l_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Eigen::VectorXd SpdSolver::inverse_diagonal() const {
  if (band_) return band_->inverse_diagonal();
  if (dense_l_.rows() == 0) return {};
  const Eigen::MatrixXd linv =
      dense_l_.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(dense_l_.rows(), dense_l_.cols()));
  return linv.colwise().squaredNorm().transpose();
}

}  // namespace netsync::linalg
