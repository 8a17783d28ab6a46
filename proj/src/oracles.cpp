#include "aci/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "aci/infomath.hpp"
#include "aci/lp.hpp"

namespace aci {

std::vector<DeterministicTriple> enumerate_deterministic(const JointPMF& pmf, int max_classes) {
  const CellProblem prob = CellProblem::from(pmf);
  const int n = prob.n_cells;
  if (n > 12) {
    fail(ErrorCode::TooManyCells, "set-partition enumeration limited to 12 support cells");
  }
  if (max_classes < 1) fail(ErrorCode::ParamOutOfRange, "max_classes must be >= 1");

  std::vector<DeterministicTriple> out;
  std::vector<int> assign(n, 0);

  auto emit = [&]() {
    const int classes = 1 + *std::max_element(assign.begin(), assign.end());
    AuxChannel ch = AuxChannel::from_cell_classes(pmf.support(), assign, classes);
    const KTripleInfo info = eval_triple(prob, ch.rows(), classes);
    out.push_back({info.triple, std::move(ch)});
  };

  // Restricted growth strings: assign[i] <= 1 + max(assign[0..i-1]), capped
  // at max_classes blocks. The first cell is pinned to class 0.
  auto rec = [&](auto&& self, int i, int max_used) -> void {
    if (i == n) {
      emit();
      return;
    }
    const int hi = std::min(max_used + 1, max_classes - 1);
    for (int c = 0; c <= hi; ++c) {
      assign[i] = c;
      self(self, i + 1, std::max(max_used, c));
    }
  };
  rec(rec, 1, 0);
  return out;
}

namespace {

// Non-negative integer vectors of the given length summing to total, in
// lexicographic order.
void compositions(int total, int parts, std::vector<std::vector<int>>* out) {
  std::vector<int> cur(parts, 0);
  auto rec = [&](auto&& self, int i, int remaining) -> void {
    if (i == parts - 1) {
      cur[i] = remaining;
      out->push_back(cur);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[i] = v;
      self(self, i + 1, remaining - v);
    }
  };
  rec(rec, 0, total);
}

}  // namespace

GridOracleResult grid_oracle(const JointPMF& pmf, const ScalarWeights& w, int q_size, int g,
                             int threads) {
  const CellProblem prob = CellProblem::from(pmf);
  const int n = prob.n_cells;
  if (n > 4) fail(ErrorCode::TooLarge, "grid oracle limited to 4 support cells");
  if (q_size < 1 || g < 2) fail(ErrorCode::ParamOutOfRange, "need q_size >= 1 and g >= 2");

  std::vector<std::vector<int>> comps;
  compositions(g, q_size, &comps);
  const size_t C = comps.size();
  double leaves = 1.0;
  for (int i = 0; i < n; ++i) leaves *= static_cast<double>(C);
  if (leaves > 6e8) {
    fail(ErrorCode::TooLarge, "grid enumeration would need " + std::to_string(leaves) + " leaves");
  }

  // Candidate rows and per-cell contributions to H(XYQ).
  std::vector<double> wrows(C * q_size);
  for (size_t c = 0; c < C; ++c)
    for (int k = 0; k < q_size; ++k) wrows[c * q_size + k] = static_cast<double>(comps[c][k]) / g;
  std::vector<std::vector<double>> cellA(n, std::vector<double>(C));
  for (int i = 0; i < n; ++i) {
    for (size_t c = 0; c < C; ++c) {
      double s = 0.0;
      for (int k = 0; k < q_size; ++k) s += phi(prob.cp[i] * wrows[c * q_size + k]);
      cellA[i][c] = s;
    }
  }

  const double a = w.l1 + w.l3, b = w.l2 + w.l3;
  const double constF = (w.l1 + w.l2) * prob.h_xy - w.l1 * prob.h_x - w.l2 * prob.h_y;

  struct Best {
    double value = 1e300;
    std::vector<size_t> combo;
  };

  auto run_range = [&](size_t c0_begin, size_t c0_end, Best* best) {
    const int q = q_size;
    std::vector<double> rx(static_cast<size_t>(prob.nx) * q, 0.0);
    std::vector<double> ry(static_cast<size_t>(prob.ny) * q, 0.0);
    std::vector<double> rq(q, 0.0);
    std::vector<size_t> combo(n, 0);
    double sumA = 0.0;

    auto add_cell = [&](int i, size_t c, double sign) {
      const double mass = prob.cp[i] * sign;
      const double* row = &wrows[c * q];
      double* rxp = &rx[static_cast<size_t>(prob.cx[i]) * q];
      double* ryp = &ry[static_cast<size_t>(prob.cy[i]) * q];
      for (int k = 0; k < q; ++k) {
        const double v = mass * row[k];
        rxp[k] += v;
        ryp[k] += v;
        rq[k] += v;
      }
      sumA += sign * cellA[i][c];
    };

    const int last = n - 1;
    auto leaf_scan = [&]() {
      // Entropy over marginal coordinates the last cell does not touch.
      double hxq_rest = 0.0, hyq_rest = 0.0;
      for (int x = 0; x < prob.nx; ++x) {
        if (x == prob.cx[last]) continue;
        for (int k = 0; k < q; ++k) hxq_rest += phi(rx[static_cast<size_t>(x) * q + k]);
      }
      for (int y = 0; y < prob.ny; ++y) {
        if (y == prob.cy[last]) continue;
        for (int k = 0; k < q; ++k) hyq_rest += phi(ry[static_cast<size_t>(y) * q + k]);
      }
      const double* rxl = &rx[static_cast<size_t>(prob.cx[last]) * q];
      const double* ryl = &ry[static_cast<size_t>(prob.cy[last]) * q];
      const double mass = prob.cp[last];
      for (size_t c = 0; c < C; ++c) {
        const double* row = &wrows[c * q];
        double hx = 0.0, hy = 0.0, hq = 0.0;
        for (int k = 0; k < q; ++k) {
          const double v = mass * row[k];
          hx += phi(rxl[k] + v);
          hy += phi(ryl[k] + v);
          hq += phi(rq[k] + v);
        }
        const double value = a * (hxq_rest + hx) + b * (hyq_rest + hy) - w.l3 * hq -
                             (sumA + cellA[last][c]) + constF;
        if (value < best->value ||
            (value == best->value && [&] {
              combo[last] = c;
              return combo < best->combo;
            }())) {
          combo[last] = c;
          best->value = value;
          best->combo = combo;
        }
      }
    };

    // Depth-first over cells 0..n-2 with the optimized scan at the last cell.
    std::vector<size_t> idx(n, 0);
    if (n == 1) {
      leaf_scan();
      return;
    }
    int depth = 0;
    idx[0] = c0_begin;
    if (c0_begin >= c0_end) return;
    add_cell(0, idx[0], +1.0);
    combo[0] = idx[0];
    for (;;) {
      if (depth == n - 2) {
        leaf_scan();
        // unwind / advance
        for (;;) {
          if (depth < 0) return;
          add_cell(depth, idx[depth], -1.0);
          const size_t limit = depth == 0 ? c0_end : C;
          if (++idx[depth] < limit) {
            add_cell(depth, idx[depth], +1.0);
            combo[depth] = idx[depth];
            break;
          }
          --depth;
        }
        if (depth < 0) return;
        continue;
      }
      ++depth;
      idx[depth] = 0;
      add_cell(depth, 0, +1.0);
      combo[depth] = 0;
    }
  };

  int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min(n_threads, 8));
  Best best;
  if (n == 1 || n_threads == 1 || C < 16) {
    run_range(0, C, &best);
  } else {
    std::vector<Best> bests(n_threads);
    std::vector<std::thread> pool;
    const size_t chunk = (C + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const size_t lo = t * chunk, hi = std::min(C, lo + chunk);
      pool.emplace_back([&, lo, hi, t]() { run_range(lo, hi, &bests[t]); });
    }
    for (auto& t : pool) t.join();
    for (const auto& cand : bests) {
      if (cand.combo.empty()) continue;
      if (cand.value < best.value ||
          (cand.value == best.value && (best.combo.empty() || cand.combo < best.combo))) {
        best = cand;
      }
    }
  }

  // Continuity slack: rounding any channel onto the grid moves each row entry
  // by at most 1/g, hence marginal coordinates by at most (mass in)/g, and
  // |phi(u) - phi(v)| <= phi(|u - v|) for |u - v| <= 1/2.
  auto phi_cap = [](double d) { return d <= 0.5 ? phi(d) : 0.5307; };
  std::vector<double> mx(prob.nx, 0.0), my(prob.ny, 0.0);
  for (int i = 0; i < n; ++i) {
    mx[prob.cx[i]] += prob.cp[i];
    my[prob.cy[i]] += prob.cp[i];
  }
  double b_xyq = 0.0, b_xq = 0.0, b_yq = 0.0;
  for (int i = 0; i < n; ++i) b_xyq += q_size * phi_cap(prob.cp[i] / g);
  for (int x = 0; x < prob.nx; ++x) b_xq += q_size * phi_cap(mx[x] / g);
  for (int y = 0; y < prob.ny; ++y) b_yq += q_size * phi_cap(my[y] / g);
  const double b_q = q_size * phi_cap(1.0 / g);

  GridOracleResult res;
  res.grid_min = best.value;
  res.slack = a * b_xq + b * b_yq + w.l3 * b_q + b_xyq;
  res.lower = res.grid_min - res.slack;
  res.q_size = q_size;
  res.g = g;
  std::vector<double> rows(static_cast<size_t>(n) * q_size);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < q_size; ++k) rows[static_cast<size_t>(i) * q_size + k] =
        wrows[best.combo[i] * q_size + k];
  res.witness = AuxChannel::make(pmf.support(), q_size, std::move(rows),
                                 pmf.nx() * pmf.ny() + 2, /*allow_large=*/true);
  return res;
}

double posterior_objective(const JointPMF& pmf, const ScalarWeights& w,
                           const std::vector<double>& posterior) {
  const CellProblem prob = CellProblem::from(pmf);
  if (posterior.size() != static_cast<size_t>(prob.n_cells)) {
    fail(ErrorCode::ShapeMismatch, "posterior size does not match support");
  }
  std::vector<double> mx(prob.nx, 0.0), my(prob.ny, 0.0);
  double h = 0.0;
  for (int i = 0; i < prob.n_cells; ++i) {
    h += phi(posterior[i]);
    mx[prob.cx[i]] += posterior[i];
    my[prob.cy[i]] += posterior[i];
  }
  const double const0 = w.l1 * (prob.h_xy - prob.h_x) + w.l2 * (prob.h_xy - prob.h_y);
  return const0 - h + (w.l1 + w.l3) * entropy_bits(mx) + (w.l2 + w.l3) * entropy_bits(my);
}

SupportCertificate certify_support(const JointPMF& pmf, const ScalarWeights& w, int resolution,
                                   int threads) {
  const CellProblem prob = CellProblem::from(pmf);
  const int n = prob.n_cells;
  if (n > 4) fail(ErrorCode::TooLarge, "support certificates limited to 4 support cells");
  if (resolution < 16) fail(ErrorCode::ParamOutOfRange, "resolution too small");
  const int N = resolution;
  const double delta = 1.0 / N;

  // phi(k/N) table; every g value on the grid is a signed sum of entries.
  std::vector<double> tab(N + 1);
  for (int k = 0; k <= N; ++k) tab[k] = phi(static_cast<double>(k) / N);

  const double aX = w.l1 + w.l3, aY = w.l2 + w.l3;
  const double const0 = w.l1 * (prob.h_xy - prob.h_x) + w.l2 * (prob.h_xy - prob.h_y);

  // Cell -> marginal bucket maps (buckets are compacted x rows / y columns).
  std::vector<int> xb(n), yb(n);
  {
    std::vector<int> xmap(prob.nx, -1), ymap(prob.ny, -1);
    int cx = 0, cy = 0;
    for (int i = 0; i < n; ++i) {
      if (xmap[prob.cx[i]] < 0) xmap[prob.cx[i]] = cx++;
      if (ymap[prob.cy[i]] < 0) ymap[prob.cy[i]] = cy++;
      xb[i] = xmap[prob.cx[i]];
      yb[i] = ymap[prob.cy[i]];
    }
  }
  const int nxb = 1 + *std::max_element(xb.begin(), xb.end());
  const int nyb = 1 + *std::max_element(yb.begin(), yb.end());

  auto g_of = [&](const int* k) {
    int kx[4] = {0, 0, 0, 0}, ky[4] = {0, 0, 0, 0};
    double h = 0.0;
    for (int i = 0; i < n; ++i) {
      h += tab[k[i]];
      kx[xb[i]] += k[i];
      ky[yb[i]] += k[i];
    }
    double hx = 0.0, hy = 0.0;
    for (int i = 0; i < nxb; ++i) hx += tab[kx[i]];
    for (int i = 0; i < nyb; ++i) hy += tab[ky[i]];
    return const0 - h + aX * hx + aY * hy;
  };

  struct GridPoint {
    int k[4];
  };

  // Scan all compositions of N into n parts; track the single worst violator
  // per fixed outer-coordinate band so the result is schedule independent.
  constexpr int kBands = 8;
  auto scan = [&](const std::vector<double>& av, double bv,
                  std::vector<std::pair<double, GridPoint>>* violators) {
    violators->assign(kBands, {0.0, GridPoint{{0, 0, 0, 0}}});
    const int band_width = (N + kBands) / kBands;
    int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min(n_threads, kBands));
    std::vector<std::vector<std::pair<double, GridPoint>>> per(
        n_threads, std::vector<std::pair<double, GridPoint>>(kBands, {0.0, GridPoint{{0, 0, 0, 0}}}));

    auto scan_outer = [&](int tix, int k0_lo, int k0_hi) {
      int k[4] = {0, 0, 0, 0};
      auto& mine = per[tix];
      for (int k0 = k0_lo; k0 < k0_hi; ++k0) {
        k[0] = k0;
        const int band = std::min(kBands - 1, k0 / band_width);
        auto check = [&]() {
          double lv = bv;
          for (int i = 0; i < n; ++i) lv += av[i] * (static_cast<double>(k[i]) / N);
          const double viol = lv - g_of(k);
          if (viol > mine[band].first) {
            mine[band] = {viol, GridPoint{{k[0], k[1], k[2], k[3]}}};
          }
        };
        if (n == 1) {
          check();
          continue;
        }
        const int rem1 = N - k0;
        if (n == 2) {
          k[1] = rem1;
          check();
          continue;
        }
        for (int k1 = 0; k1 <= rem1; ++k1) {
          k[1] = k1;
          const int rem2 = rem1 - k1;
          if (n == 3) {
            k[2] = rem2;
            check();
            continue;
          }
          for (int k2 = 0; k2 <= rem2; ++k2) {
            k[2] = k2;
            k[3] = rem2 - k2;
            check();
          }
        }
      }
    };

    std::vector<std::thread> pool;
    const int chunk = (N + n_threads) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const int lo = t * chunk, hi = std::min(N + 1, lo + chunk);
      if (lo >= hi) continue;
      pool.emplace_back(scan_outer, t, lo, hi);
    }
    for (auto& t : pool) t.join();
    for (int band = 0; band < kBands; ++band) {
      for (int t = 0; t < n_threads; ++t) {
        if (per[t][band].first > (*violators)[band].first) (*violators)[band] = per[t][band];
      }
    }
  };

  // Active-set LP on (a, b): maximize a.pbar + b subject to a.pi + b <= g(pi)
  // over the active grid points, with |a_i| <= 64 to keep the polytope
  // bounded. Variables split into positive parts for the standard-form solver.
  std::vector<GridPoint> active;
  auto add_point = [&](GridPoint p) {
    for (const auto& q : active) {
      if (std::equal(std::begin(p.k), std::end(p.k), std::begin(q.k))) return;
    }
    active.push_back(p);
  };
  for (int i = 0; i < n; ++i) {
    GridPoint v{{0, 0, 0, 0}};
    v.k[i] = N;
    add_point(v);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      GridPoint e{{0, 0, 0, 0}};
      e.k[i] = N / 2;
      e.k[j] = N - N / 2;
      add_point(e);
    }
  }
  {
    // Nearest grid point to the pmf itself.
    GridPoint c{{0, 0, 0, 0}};
    int used = 0;
    for (int i = 0; i < n - 1; ++i) {
      c.k[i] = static_cast<int>(std::round(prob.cp[i] * N));
      used += c.k[i];
    }
    c.k[n - 1] = std::max(0, N - used);
    add_point(c);
  }

  const double kBox = 64.0;
  std::vector<double> avec(n, 0.0);
  double bval = 0.0;
  auto solve_active = [&]() {
    // Columns: a+[n], a-[n], b+, b-, slack per active constraint, 2n box slacks.
    const size_t rows = active.size() + 2 * n;
    const size_t cols = 2 * n + 2 + active.size() + 2 * n;
    std::vector<std::vector<double>> A(rows, std::vector<double>(cols, 0.0));
    std::vector<double> rhs(rows, 0.0);
    std::vector<double> obj(cols, 0.0);
    for (size_t r = 0; r < active.size(); ++r) {
      for (int i = 0; i < n; ++i) {
        const double pi = static_cast<double>(active[r].k[i]) / N;
        A[r][i] = pi;
        A[r][n + i] = -pi;
      }
      A[r][2 * n] = 1.0;
      A[r][2 * n + 1] = -1.0;
      A[r][2 * n + 2 + r] = 1.0;
      rhs[r] = g_of(active[r].k);
    }
    for (int i = 0; i < n; ++i) {
      const size_t r0 = active.size() + 2 * i, r1 = r0 + 1;
      A[r0][i] = 1.0;
      A[r0][2 * n + 2 + active.size() + 2 * i] = 1.0;
      rhs[r0] = kBox;
      A[r1][n + i] = 1.0;
      A[r1][2 * n + 2 + active.size() + 2 * i + 1] = 1.0;
      rhs[r1] = kBox;
    }
    for (int i = 0; i < n; ++i) {
      obj[i] = -prob.cp[i];
      obj[n + i] = prob.cp[i];
    }
    obj[2 * n] = -1.0;
    obj[2 * n + 1] = 1.0;
    const LPResult lp = solve_lp(A, rhs, obj);
    if (lp.status != LPStatus::Optimal) {
      fail(ErrorCode::NoSolution, "certificate LP failed");
    }
    for (int i = 0; i < n; ++i) avec[i] = lp.x[i] - lp.x[n + i];
    bval = lp.x[2 * n] - lp.x[2 * n + 1];
  };

  std::vector<std::pair<double, GridPoint>> violators;
  for (int round = 0; round < 60; ++round) {
    solve_active();
    scan(avec, bval, &violators);
    double worst = 0.0;
    for (const auto& [v, p] : violators) worst = std::max(worst, v);
    if (worst <= 1e-12) break;
    for (const auto& [v, p] : violators) {
      if (v > 1e-13) add_point(p);
    }
    if (active.size() > 220) break;  // margin below absorbs any residual
  }
  scan(avec, bval, &violators);
  double residual = 0.0;
  for (const auto& [v, p] : violators) residual = std::max(residual, v);

  // Off-grid margin: rounding a posterior to the grid moves each cell
  // coordinate by at most delta (largest remainder), marginal buckets by at
  // most (cells in bucket) * delta, and the affine minorant by
  // ||a||_inf * n * delta.
  auto phi_cap = [](double d) { return d <= 0.5 ? phi(d) : 0.5307; };
  std::vector<int> cells_x(nxb, 0), cells_y(nyb, 0);
  for (int i = 0; i < n; ++i) {
    cells_x[xb[i]]++;
    cells_y[yb[i]]++;
  }
  double mod = 0.0;
  for (int i = 0; i < n; ++i) mod += phi_cap(delta);
  for (int i = 0; i < nxb; ++i) mod += aX * phi_cap(cells_x[i] * delta);
  for (int i = 0; i < nyb; ++i) mod += aY * phi_cap(cells_y[i] * delta);
  double anorm = 0.0;
  for (double v : avec) anorm = std::max(anorm, std::abs(v));

  SupportCertificate cert;
  cert.resolution = N;
  double lp_at_pbar = bval;
  for (int i = 0; i < n; ++i) lp_at_pbar += avec[i] * prob.cp[i];
  cert.estimate = lp_at_pbar;
  cert.margin = mod + anorm * n * delta + std::max(residual, 0.0);
  cert.certified_lower = lp_at_pbar - cert.margin;
  return cert;
}

}  // namespace aci
