#include "aci/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "aci/gk.hpp"
#include "aci/infomath.hpp"

namespace aci {

namespace {

// Softmax per row; theta rows are shifted by their max before exponentiation.
void rows_from_theta(const std::vector<double>& theta, int n_cells, int q,
                     std::vector<double>* rows) {
  rows->resize(theta.size());
  for (int i = 0; i < n_cells; ++i) {
    const double* t = theta.data() + static_cast<size_t>(i) * q;
    double* r = rows->data() + static_cast<size_t>(i) * q;
    double m = t[0];
    for (int k = 1; k < q; ++k) m = std::max(m, t[k]);
    double s = 0.0;
    for (int k = 0; k < q; ++k) s += (r[k] = std::exp(t[k] - m));
    for (int k = 0; k < q; ++k) r[k] /= s;
  }
}

// Chain rule through the softmax: dF/dtheta_k = w_k (g_k - sum_j w_j g_j).
void theta_grad(const std::vector<double>& rows, const std::vector<double>& grad_rows,
                int n_cells, int q, std::vector<double>* grad_theta) {
  grad_theta->resize(rows.size());
  for (int i = 0; i < n_cells; ++i) {
    const double* r = rows.data() + static_cast<size_t>(i) * q;
    const double* g = grad_rows.data() + static_cast<size_t>(i) * q;
    double* out = grad_theta->data() + static_cast<size_t>(i) * q;
    double avg = 0.0;
    for (int k = 0; k < q; ++k) avg += r[k] * g[k];
    for (int k = 0; k < q; ++k) out[k] = r[k] * (g[k] - avg);
  }
}

struct StartPoint {
  std::vector<double> theta;
};

// Deterministic starts: constant Q, cell-identity Q, and the three
// combinatorial partition channels. These are frequent global optima, and
// seeding with them keeps the restart budget small on larger alphabets.
std::vector<StartPoint> structured_starts(const JointPMF& pmf, int n_cells, int q) {
  std::vector<StartPoint> starts;
  auto one_hot_theta = [&](const std::vector<int>& class_of_cell) {
    StartPoint s;
    s.theta.assign(static_cast<size_t>(n_cells) * q, 0.0);
    for (int i = 0; i < n_cells; ++i) {
      for (int k = 0; k < q; ++k) {
        s.theta[static_cast<size_t>(i) * q + k] = (k == class_of_cell[i]) ? 12.0 : 0.0;
      }
    }
    return s;
  };

  std::vector<int> constant(n_cells, 0);
  starts.push_back(one_hot_theta(constant));

  std::vector<int> identity(n_cells);
  for (int i = 0; i < n_cells; ++i) identity[i] = i % q;
  starts.push_back(one_hot_theta(identity));

  const auto cells = pmf.support();
  for (Side side : {Side::X, Side::Y}) {
    const Partition part = dependent_part(pmf, side);
    std::vector<int> cls(n_cells);
    for (int i = 0; i < n_cells; ++i) {
      cls[i] = (side == Side::Y ? part.class_of[cells[i].second] : part.class_of[cells[i].first]) % q;
    }
    starts.push_back(one_hot_theta(cls));
  }
  const GKDecomposition gk = gk_decompose(pmf);
  std::vector<int> comp(n_cells);
  for (int i = 0; i < n_cells; ++i) comp[i] = gk.x_component[cells[i].first] % q;
  starts.push_back(one_hot_theta(comp));
  return starts;
}

struct DescentOutcome {
  double value = 0.0;
  std::vector<double> rows;
  std::vector<double> theta;
  int iterations = 0;
  bool converged = false;
};

DescentOutcome descend(const CellProblem& prob, const ScalarWeights& w, int q,
                       std::vector<double> theta, int max_iters, double tol) {
  const int n = prob.n_cells;
  ObjectiveWorkspace ws;
  std::vector<double> rows, grad_rows, grad_theta, trial_theta, trial_rows;
  rows_from_theta(theta, n, q, &rows);
  double value = eval_objective(prob, w, rows, q, &grad_rows, &ws);
  theta_grad(rows, grad_rows, n, q, &grad_theta);

  DescentOutcome out;
  double step = 1.0;
  int iter = 0;
  int stall = 0;
  for (; iter < max_iters; ++iter) {
    double gmax = 0.0, gnorm2 = 0.0;
    for (double g : grad_theta) {
      gmax = std::max(gmax, std::abs(g));
      gnorm2 += g * g;
    }
    if (gmax <= tol) {
      out.converged = true;
      break;
    }

    // Backtracking Armijo line search on the softmax parameters.
    bool accepted = false;
    double trial_value = value;
    for (int bt = 0; bt < 40; ++bt) {
      trial_theta = theta;
      for (size_t j = 0; j < theta.size(); ++j) trial_theta[j] -= step * grad_theta[j];
      rows_from_theta(trial_theta, n, q, &trial_rows);
      trial_value = eval_objective(prob, w, trial_rows, q, nullptr, &ws);
      if (trial_value <= value - 1e-4 * step * gnorm2) {
        accepted = true;
        break;
      }
      step *= 0.5;
      if (step < 1e-14) break;
    }
    if (!accepted) break;

    const double improvement = value - trial_value;
    theta.swap(trial_theta);
    rows.swap(trial_rows);
    value = eval_objective(prob, w, rows, q, &grad_rows, &ws);
    theta_grad(rows, grad_rows, n, q, &grad_theta);
    step = std::min(step * 2.0, 1e6);

    if (improvement < 1e-12 * (1.0 + std::abs(value))) {
      if (++stall >= 25) break;
    } else {
      stall = 0;
    }
  }
  out.value = value;
  out.rows = std::move(rows);
  out.theta = std::move(theta);
  out.iterations = iter;
  return out;
}

double q_marginal_entropy(const CellProblem& prob, const std::vector<double>& rows, int q) {
  std::vector<double> rq(q, 0.0);
  for (int i = 0; i < prob.n_cells; ++i)
    for (int k = 0; k < q; ++k) rq[k] += prob.cp[i] * rows[static_cast<size_t>(i) * q + k];
  return entropy_bits(rq);
}

}  // namespace

std::vector<ScalarWeights> weight_grid(int resolution) {
  if (resolution < 1) fail(ErrorCode::ParamOutOfRange, "grid resolution must be >= 1");
  std::vector<ScalarWeights> grid;
  for (int i = 0; i <= resolution; ++i) {
    for (int j = 0; j + i <= resolution; ++j) {
      const int k = resolution - i - j;
      grid.push_back(ScalarWeights::make(i, j, k));
    }
  }
  return grid;
}

std::vector<ScalarWeights> axis_exposing_directions() {
  std::vector<ScalarWeights> dirs;
  for (const double lam : {16.0, 24.0}) {
    dirs.push_back(ScalarWeights::make(1.0, lam, lam));
    dirs.push_back(ScalarWeights::make(lam, 1.0, lam));
    dirs.push_back(ScalarWeights::make(lam, lam, 1.0));
  }
  // Steep residual weights expose the minimum-sum corner of the zero-residual
  // face, whose boundary slope grows as the pair's correlation weakens.
  for (const double lam : {8.0, 32.0, 128.0}) {
    dirs.push_back(ScalarWeights::make(1.0, 1.0, lam));
  }
  return dirs;
}

std::vector<OptResult> sweep_with_extras(const JointPMF& pmf, int weight_grid_resolution,
                                         const std::vector<ScalarWeights>& extras,
                                         const OptOptions& opts) {
  std::vector<OptResult> results = sweep(pmf, weight_grid_resolution, opts);
  for (size_t i = 0; i < extras.size(); ++i) {
    OptOptions local = opts;
    local.seed = opts.seed * 0x9e3779b97f4a7c15ull + 0xe120fc15u + i;
    results.push_back(minimize_scalarized(pmf, extras[i], local));
  }
  return results;
}

OptResult minimize_scalarized(const JointPMF& pmf, const ScalarWeights& w,
                              const OptOptions& opts) {
  const CellProblem prob = CellProblem::from(pmf);
  const int cap = pmf.nx() * pmf.ny() + 2;
  const int q = opts.q_size > 0 ? opts.q_size : cap;
  const int n = prob.n_cells;

  std::vector<StartPoint> starts = structured_starts(pmf, n, q);
  std::mt19937_64 rng(opts.seed);
  std::exponential_distribution<double> expo(1.0);
  for (int r = 0; r < opts.restarts; ++r) {
    StartPoint s;
    s.theta.resize(static_cast<size_t>(n) * q);
    // Dirichlet(1) rows: normalized exponentials; store log weights as theta.
    for (int i = 0; i < n; ++i) {
      double sum = 0.0;
      std::vector<double> draw(q);
      for (int k = 0; k < q; ++k) sum += (draw[k] = expo(rng) + 1e-12);
      for (int k = 0; k < q; ++k)
        s.theta[static_cast<size_t>(i) * q + k] = std::log(draw[k] / sum);
    }
    starts.push_back(std::move(s));
  }

  // Screen every start on a small budget, then polish only the leaders.
  const int screen_iters = std::min(opts.max_iters, 600);
  std::vector<DescentOutcome> screened;
  screened.reserve(starts.size());
  for (auto& start : starts) {
    screened.push_back(descend(prob, w, q, std::move(start.theta), screen_iters, opts.tol));
  }
  std::vector<size_t> order(screened.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return screened[a].value < screened[b].value; });

  OptResult best;
  best.weights = w;
  best.restarts_used = static_cast<int>(starts.size());
  double best_hq = 0.0;
  bool have_best = false;
  const size_t polish = std::min<size_t>(4, order.size());
  for (size_t rank = 0; rank < screened.size(); ++rank) {
    DescentOutcome& got = screened[order[rank]];
    if (rank < polish && opts.max_iters > screen_iters && !got.converged) {
      got = descend(prob, w, q, std::move(got.theta), opts.max_iters, opts.tol);
    }
    const double hq = q_marginal_entropy(prob, got.rows, q);
    // Ties broken toward the witness with the smallest q-marginal entropy.
    const bool better =
        !have_best || got.value < best.value - 1e-9 ||
        (got.value < best.value + 1e-9 && hq < best_hq - 1e-12);
    if (better) {
      best.value = got.value;
      best.iterations = got.iterations;
      best_hq = hq;
      const KTripleInfo info = eval_triple(prob, got.rows, q);
      best.triple = info.triple;
      best.i_xyq = info.i_xyq;
      best.witness = AuxChannel::make(pmf.support(), q, std::move(got.rows), cap,
                                      /*allow_large=*/q > cap);
      have_best = true;
    }
    best.converged = best.converged || got.converged;
  }
  // Report the weighted value of the exact triple so that value and witness
  // are always consistent.
  best.value = w.dot(best.triple);
  return best;
}

std::vector<OptResult> sweep(const JointPMF& pmf, int weight_grid_resolution,
                             const OptOptions& opts) {
  if (weight_grid_resolution < 4) {
    fail(ErrorCode::ParamOutOfRange, "sweep needs grid resolution >= 4");
  }
  const std::vector<ScalarWeights> grid = weight_grid(weight_grid_resolution);
  std::vector<OptResult> results(grid.size());

  int n_threads = opts.threads > 0 ? opts.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(grid.size())));

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t idx = next.fetch_add(1);
      if (idx >= grid.size()) return;
      OptOptions local = opts;
      // Independent seed per direction, fixed by (seed, index) only.
      local.seed = opts.seed * 0x9e3779b97f4a7c15ull + idx;
      results[idx] = minimize_scalarized(pmf, grid[idx], local);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace aci
