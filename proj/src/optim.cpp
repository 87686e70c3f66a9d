// Copyright 2026 The shotgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "shotgame/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "shotgame/error.hpp"

namespace shotgame::optim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGolden = 1.618033988749895;
constexpr double kCGold = 0.3819660112501051;
constexpr double kTiny = 1e-20;

std::string format_point(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

// Wraps an ObjectiveSpec with bound rejection, NaN detection and counting.
class Evaluator {
 public:
  explicit Evaluator(const ObjectiveSpec& spec) : spec_(spec) {
    if (!spec_.eval) throw InvalidArgument("objective has no eval function");
    if (spec_.bounds && spec_.bounds->size() != spec_.dimension) {
      throw InvalidArgument("bounds size does not match dimension");
    }
  }

  double operator()(std::span<const double> x) {
    ++count_;
    if (spec_.bounds) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        const Bound& b = (*spec_.bounds)[i];
        if (!(x[i] >= b.lo && x[i] <= b.hi)) return kInf;
      }
    }
    const double f = spec_.eval(x);
    if (std::isnan(f)) {
      throw NumericalError("objective returned NaN at " + format_point(x));
    }
    return f;
  }

  int count() const { return count_; }

 private:
  const ObjectiveSpec& spec_;
  int count_ = 0;
};

void check_start(const ObjectiveSpec& obj, const Vector& x0) {
  if (x0.size() != obj.dimension) {
    throw InvalidArgument("x0 has dimension " + std::to_string(x0.size()) +
                          ", objective expects " +
                          std::to_string(obj.dimension));
  }
  for (double v : x0) {
    if (!std::isfinite(v)) throw InvalidArgument("x0 is not finite");
  }
}

Vector axpy(const Vector& x, double alpha, const Vector& d) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + alpha * d[i];
  return out;
}

struct LineResult {
  double alpha;
  double f;
};

// Minimizes g(alpha) = f(x + alpha d) starting from g(0) = f0. Returns alpha
// = 0 unless a strictly lower value was found.
LineResult line_minimize(Evaluator& f, const Vector& x, const Vector& d,
                         double f0, double rel_tol) {
  auto g = [&](double alpha) { return f(axpy(x, alpha, d)); };

  // Bracket by golden expansion.
  double a = 0.0, fa = f0;
  double b = 1.0, fb = g(b);
  if (fb > fa) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  double c = b + kGolden * (b - a);
  double fc = g(c);
  for (int k = 0; k < 80 && fb > fc; ++k) {
    a = b;
    fa = fb;
    b = c;
    fb = fc;
    c = b + kGolden * (b - a);
    fc = g(c);
  }
  if (fc < fb) {  // expansion cap hit on an unbounded descent
    return fc < f0 ? LineResult{c, fc} : LineResult{0.0, f0};
  }

  // Brent's method on [lo, hi] with interior point b.
  double lo = std::min(a, c), hi = std::max(a, c);
  double xm = b, fxm = fb;
  double w = b, fw = fb, v = b, fv = fb;
  double e = 0.0, step = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double tol1 = rel_tol * std::abs(xm) + 1e-12;
    const double tol2 = 2.0 * tol1;
    if (std::abs(xm - mid) <= tol2 - 0.5 * (hi - lo)) break;
    bool golden = true;
    if (std::abs(e) > tol1) {
      double r = (xm - w) * (fxm - fv);
      double q = (xm - v) * (fxm - fw);
      double p = (xm - v) * q - (xm - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      if (std::isfinite(p) && std::isfinite(q) &&
          std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (lo - xm) &&
          p < q * (hi - xm)) {
        e = step;
        step = p / q;
        const double u = xm + step;
        if (u - lo < tol2 || hi - u < tol2) {
          step = mid - xm >= 0.0 ? tol1 : -tol1;
        }
        golden = false;
      }
    }
    if (golden) {
      e = xm >= mid ? lo - xm : hi - xm;
      step = kCGold * e;
    }
    const double u =
        std::abs(step) >= tol1 ? xm + step : xm + (step >= 0.0 ? tol1 : -tol1);
    const double fu = g(u);
    if (fu <= fxm) {
      (u >= xm ? lo : hi) = xm;
      v = w;
      fv = fw;
      w = xm;
      fw = fxm;
      xm = u;
      fxm = fu;
    } else {
      (u < xm ? lo : hi) = u;
      if (fu <= fw || w == xm) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == xm || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  if (fxm < f0) return {xm, fxm};
  return {0.0, f0};
}

bool relative_stall(double f_old, double f_new, double tol) {
  if (!std::isfinite(f_old)) return false;
  return 2.0 * (f_old - f_new) <= tol * (std::abs(f_old) + std::abs(f_new)) + kTiny;
}

}  // namespace

Vector central_difference_gradient(const Objective& f, std::span<const double> x,
                                   double rel_step) {
  Vector grad(x.size());
  Vector probe(x.begin(), x.end());
  double f_center = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = rel_step * std::max(1.0, std::abs(x[i]));
    probe[i] = x[i] + h;
    const double fp = f(probe);
    probe[i] = x[i] - h;
    const double fm = f(probe);
    probe[i] = x[i];
    double gi;
    if (std::isfinite(fp) && std::isfinite(fm)) {
      gi = (fp - fm) / (2.0 * h);
    } else {
      // One-sided fallback next to an infeasible region.
      if (std::isnan(f_center)) f_center = f(probe);
      gi = std::isfinite(fp) ? (fp - f_center) / h : (f_center - fm) / h;
    }
    if (!std::isfinite(gi)) {
      throw NumericalError("non-finite gradient component " +
                           std::to_string(i) + " at " + format_point(x));
    }
    grad[i] = gi;
  }
  return grad;
}

OptimResult minimize_powell(const ObjectiveSpec& obj, const Vector& x0,
                            const Options& opts) {
  check_start(obj, x0);
  Evaluator f(obj);
  const std::size_t n = obj.dimension;
  constexpr double kLineTol = 3e-8;

  std::vector<Vector> dirs(n, Vector(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) dirs[i][i] = 1.0;

  OptimResult res;
  Vector x = x0;
  double fval = f(x);
  res.trace.push_back({0, fval});

  while (true) {
    const Vector x_start = x;
    const double f_start = fval;
    std::size_t biggest = 0;
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double before = fval;
      const LineResult lr = line_minimize(f, x, dirs[i], fval, kLineTol);
      if (lr.alpha != 0.0) {
        x = axpy(x, lr.alpha, dirs[i]);
        fval = lr.f;
      }
      if (before - fval > delta) {
        delta = before - fval;
        biggest = i;
      }
    }
    ++res.iterations;
    res.trace.push_back({res.iterations, fval});
    if (relative_stall(f_start, fval, opts.tol)) {
      res.converged = true;
      break;
    }
    if (res.iterations >= opts.max_iter) break;

    // Powell's direction-replacement heuristic.
    Vector new_dir(n);
    Vector extrapolated(n);
    for (std::size_t i = 0; i < n; ++i) {
      new_dir[i] = x[i] - x_start[i];
      extrapolated[i] = 2.0 * x[i] - x_start[i];
    }
    const double f_ext = f(extrapolated);
    if (f_start > f_ext) {
      double t = 2.0 * (f_start + f_ext - 2.0 * fval);
      const double a = f_start - fval - delta;
      const double b = f_start - f_ext;
      t = t * a * a - delta * b * b;
      if (t < 0.0) {
        const LineResult lr = line_minimize(f, x, new_dir, fval, kLineTol);
        if (lr.alpha != 0.0) {
          x = axpy(x, lr.alpha, new_dir);
          fval = lr.f;
          res.trace.back().best_f = fval;
        }
        const bool nonzero = std::any_of(new_dir.begin(), new_dir.end(),
                                         [](double v) { return v != 0.0; });
        if (nonzero) {
          dirs[biggest] = dirs.back();
          dirs.back() = new_dir;
        }
      }
    }
  }
  res.x_star = std::move(x);
  res.f_star = fval;
  res.n_evals = f.count();
  return res;
}

OptimResult minimize_nelder_mead(const ObjectiveSpec& obj, const Vector& x0,
                                 const Options& opts) {
  check_start(obj, x0);
  Evaluator f(obj);
  const std::size_t n = obj.dimension;
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5,
                   kShrink = 0.5;

  std::vector<Vector> sim(n + 1, x0);
  for (std::size_t k = 0; k < n; ++k) {
    sim[k + 1][k] = x0[k] + std::max(0.05 * std::abs(x0[k]), 0.00025);
  }
  std::vector<double> fs(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fs[i] = f(sim[i]);

  auto sort_simplex = [&] {
    std::vector<std::size_t> idx(n + 1);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    std::vector<Vector> s2(n + 1);
    std::vector<double> f2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      s2[i] = sim[idx[i]];
      f2[i] = fs[idx[i]];
    }
    sim.swap(s2);
    fs.swap(f2);
  };

  OptimResult res;
  sort_simplex();
  res.trace.push_back({0, fs[0]});

  while (true) {
    double x_spread = 0.0, f_spread = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      f_spread = std::max(f_spread, std::abs(fs[i] - fs[0]));
      for (std::size_t k = 0; k < n; ++k) {
        x_spread = std::max(x_spread, std::abs(sim[i][k] - sim[0][k]));
      }
    }
    if (std::isfinite(f_spread) && f_spread <= opts.tol &&
        x_spread <= opts.tol) {
      res.converged = true;
      break;
    }
    if (res.iterations >= opts.max_iter) break;

    Vector centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) centroid[k] += sim[i][k] / n;
    }
    const Vector& worst = sim[n];
    auto along = [&](double coef) {
      Vector p(n);
      for (std::size_t k = 0; k < n; ++k) {
        p[k] = centroid[k] + coef * (centroid[k] - worst[k]);
      }
      return p;
    };

    const Vector xr = along(kReflect);
    const double fr = f(xr);
    bool shrink = false;
    if (fr < fs[0]) {
      Vector xe = along(kReflect * kExpand);
      const double fe = f(xe);
      if (fe < fr) {
        sim[n] = std::move(xe);
        fs[n] = fe;
      } else {
        sim[n] = xr;
        fs[n] = fr;
      }
    } else if (fr < fs[n - 1]) {
      sim[n] = xr;
      fs[n] = fr;
    } else if (fr < fs[n]) {
      Vector xc = along(kContract * kReflect);
      const double fc = f(xc);
      if (fc <= fr) {
        sim[n] = std::move(xc);
        fs[n] = fc;
      } else {
        shrink = true;
      }
    } else {
      Vector xcc = along(-kContract);
      const double fcc = f(xcc);
      if (fcc < fs[n]) {
        sim[n] = std::move(xcc);
        fs[n] = fcc;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
          sim[i][k] = sim[0][k] + kShrink * (sim[i][k] - sim[0][k]);
        }
        fs[i] = f(sim[i]);
      }
    }
    sort_simplex();
    ++res.iterations;
    res.trace.push_back({res.iterations, fs[0]});
  }
  res.x_star = sim[0];
  res.f_star = fs[0];
  res.n_evals = f.count();
  return res;
}

OptimResult minimize_fd_cg(const ObjectiveSpec& obj, const Vector& x0,
                           const CgOptions& opts) {
  check_start(obj, x0);
  Evaluator f(obj);
  const std::size_t n = obj.dimension;
  constexpr double kArmijo = 1e-4;
  const Objective counted = [&f](std::span<const double> p) { return f(p); };

  auto dot = [](const Vector& a, const Vector& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
  };
  auto inf_norm = [](const Vector& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
  };

  OptimResult res;
  Vector x = x0;
  double fx = f(x);
  if (!std::isfinite(fx)) {
    throw InvalidArgument("fd_cg: starting point is infeasible");
  }
  res.trace.push_back({0, fx});
  Vector g = central_difference_gradient(counted, x, opts.fd_step);
  Vector d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
  double alpha_prev = 0.0, slope_prev = 0.0;

  while (true) {
    if (inf_norm(g) <= opts.tol) {
      res.converged = true;
      break;
    }
    if (res.iterations >= opts.max_iter) break;

    double slope = dot(g, d);
    if (slope >= 0.0) {  // not a descent direction: restart
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      slope = dot(g, d);
    }
    double alpha = alpha_prev > 0.0 ? std::min(1.0, alpha_prev * slope_prev / slope)
                                    : std::min(1.0, 1.0 / inf_norm(g));
    if (!(alpha > 0.0)) alpha = 1e-3;

    // Backtracking with quadratic interpolation.
    double best_alpha = 0.0, best_f = fx;
    for (int k = 0; k < 60; ++k) {
      const double fa = f(axpy(x, alpha, d));
      const double denom = 2.0 * (fa - fx - slope * alpha);
      const bool has_q = std::isfinite(fa) && denom > 0.0;
      const double alpha_q = has_q ? -slope * alpha * alpha / denom : 0.0;
      if (fa <= fx + kArmijo * alpha * slope) {
        best_alpha = alpha;
        best_f = fa;
        if (has_q && alpha_q > 0.0) {
          const double fq = f(axpy(x, alpha_q, d));
          if (fq < best_f) {
            best_alpha = alpha_q;
            best_f = fq;
          }
        }
        break;
      }
      alpha = has_q ? std::clamp(alpha_q, 0.1 * alpha, 0.5 * alpha) : 0.5 * alpha;
    }
    ++res.iterations;
    if (best_alpha == 0.0) {
      res.trace.push_back({res.iterations, fx});
      // No progress along d; if d was already steepest descent we are stuck.
      bool steepest = true;
      for (std::size_t i = 0; i < n; ++i) steepest &= d[i] == -g[i];
      if (steepest) {
        res.converged = inf_norm(g) <= std::sqrt(opts.tol);
        break;
      }
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      alpha_prev = 0.0;
      continue;
    }

    const double f_old = fx;
    x = axpy(x, best_alpha, d);
    fx = best_f;
    res.trace.push_back({res.iterations, fx});
    Vector g_new = central_difference_gradient(counted, x, opts.fd_step);
    if (relative_stall(f_old, fx, opts.tol * opts.tol) && inf_norm(g_new) <= std::sqrt(opts.tol)) {
      g = std::move(g_new);
      res.converged = true;
      break;
    }

    // PR+ with periodic restart.
    Vector dg(n);
    for (std::size_t i = 0; i < n; ++i) dg[i] = g_new[i] - g[i];
    double beta = std::max(0.0, dot(g_new, dg) / dot(g, g));
    if (res.iterations % static_cast<int>(n + 1) == 0) beta = 0.0;
    for (std::size_t i = 0; i < n; ++i) d[i] = -g_new[i] + beta * d[i];
    alpha_prev = best_alpha;
    slope_prev = slope;
    g = std::move(g_new);
  }
  res.x_star = std::move(x);
  res.f_star = fx;
  res.n_evals = f.count();
  return res;
}

Method method_from_name(std::string_view name) {
  if (name == "powell") return Method::kPowell;
  if (name == "nelder-mead" || name == "nelder_mead") return Method::kNelderMead;
  if (name == "fd-cg" || name == "fd_cg") return Method::kFdCg;
  throw InvalidArgument("unknown optimizer '" + std::string(name) +
                        "' (expected powell, nelder-mead or fd-cg)");
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kPowell:
      return "powell";
    case Method::kNelderMead:
      return "nelder-mead";
    case Method::kFdCg:
      return "fd-cg";
  }
  return "?";
}

OptimResult minimize(Method method, const ObjectiveSpec& obj, const Vector& x0,
                     const Options& opts) {
  switch (method) {
    case Method::kPowell:
      return minimize_powell(obj, x0, opts);
    case Method::kNelderMead:
      return minimize_nelder_mead(obj, x0, opts);
    case Method::kFdCg: {
      CgOptions cg;
      cg.tol = opts.tol;
      cg.max_iter = opts.max_iter;
      return minimize_fd_cg(obj, x0, cg);
    }
  }
  throw InvalidArgument("unknown optimizer");
}

}  // namespace shotgame::optim
