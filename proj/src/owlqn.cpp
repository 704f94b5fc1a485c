#include "spellvar/owlqn.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace spellvar::optim {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l1_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

struct Correction {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

// Two-loop recursion: returns -H * v.
std::vector<double> two_loop(const std::deque<Correction>& mem, std::span<const double> v) {
  std::vector<double> q(v.begin(), v.end());
  std::vector<double> alpha(mem.size());
  for (std::size_t k = mem.size(); k-- > 0;) {
    alpha[k] = mem[k].rho * dot(mem[k].s, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * mem[k].y[i];
  }
  if (!mem.empty()) {
    const auto& last = mem.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& qi : q) qi *= gamma;
  }
  for (std::size_t k = 0; k < mem.size(); ++k) {
    const double beta = mem[k].rho * dot(mem[k].y, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += mem[k].s[i] * (alpha[k] - beta);
  }
  for (double& qi : q) qi = -qi;
  return q;
}

}  // namespace

void pseudo_gradient(std::span<const double> x, std::span<const double> g, double l1,
                     std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (l1 == 0.0) {
      out[i] = g[i];
    } else if (x[i] > 0.0) {
      out[i] = g[i] + l1;
    } else if (x[i] < 0.0) {
      out[i] = g[i] - l1;
    } else if (g[i] + l1 < 0.0) {
      out[i] = g[i] + l1;
    } else if (g[i] - l1 > 0.0) {
      out[i] = g[i] - l1;
    } else {
      out[i] = 0.0;
    }
  }
}

OwlqnResult minimize(const SmoothObjective& objective, std::vector<double> x0,
                     const OwlqnOptions& opt) {
  const std::size_t n = x0.size();
  OwlqnResult res;
  std::vector<double> x = std::move(x0);
  std::vector<double> g(n), pg(n);

  double f = objective(x, g);
  double F = f + opt.l1 * l1_norm(x);
  if (!std::isfinite(F)) throw std::runtime_error("objective is not finite at the initial point");
  res.history.push_back(F);
  pseudo_gradient(x, g, opt.l1, pg);

  std::deque<Correction> mem;
  std::vector<double> xn(n), gn(n);

  auto finish = [&](bool converged, std::string reason) {
    res.x = std::move(x);
    res.value = F;
    res.converged = converged;
    res.stop_reason = std::move(reason);
    return res;
  };

  if (std::sqrt(dot(pg, pg)) <= opt.gradient_tolerance) return finish(true, "gradient tolerance");

  for (int k = 1; k <= opt.max_iterations; ++k) {
    std::vector<double> d = two_loop(mem, pg);
    if (opt.l1 > 0.0) {
      for (std::size_t i = 0; i < n; ++i) {
        if (d[i] * pg[i] >= 0.0) d[i] = 0.0;
      }
    }
    double slope = dot(pg, d);
    if (!(slope < 0.0)) {
      mem.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = -pg[i];
      slope = dot(pg, d);
      if (!(slope < 0.0)) return finish(true, "no descent direction");
    }

    // Orthant of the current iterate; zero coordinates follow -pg.
    std::vector<double> orthant(n);
    for (std::size_t i = 0; i < n; ++i) {
      orthant[i] = x[i] != 0.0 ? (x[i] > 0.0 ? 1.0 : -1.0) : (pg[i] < 0.0 ? 1.0 : (pg[i] > 0.0 ? -1.0 : 0.0));
    }

    double step = mem.empty() ? 1.0 / std::sqrt(dot(d, d)) : 1.0;
    bool accepted = false;
    double fn = 0.0;
    double Fn = 0.0;
    for (int ls = 0; ls < opt.max_line_search; ++ls, step *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) {
        xn[i] = x[i] + step * d[i];
        if (opt.l1 > 0.0 && xn[i] * orthant[i] <= 0.0) xn[i] = 0.0;
      }
      fn = objective(xn, gn);
      Fn = fn + opt.l1 * l1_norm(xn);
      if (!std::isfinite(Fn)) continue;
      double decrease = 0.0;
      for (std::size_t i = 0; i < n; ++i) decrease += pg[i] * (xn[i] - x[i]);
      if (Fn <= F + opt.armijo * decrease) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.iterations = k - 1;
      return finish(false, "line search failed");
    }

    Correction c{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      c.s[i] = xn[i] - x[i];
      c.y[i] = gn[i] - g[i];
    }
    const double sy = dot(c.s, c.y);
    if (sy > 1e-10) {
      c.rho = 1.0 / sy;
      mem.push_back(std::move(c));
      if (mem.size() > static_cast<std::size_t>(opt.memory)) mem.pop_front();
    }

    x.swap(xn);
    g.swap(gn);
    f = fn;
    F = Fn;
    res.history.push_back(F);
    res.iterations = k;
    pseudo_gradient(x, g, opt.l1, pg);

    if (std::sqrt(dot(pg, pg)) <= opt.gradient_tolerance) return finish(true, "gradient tolerance");
    if (k >= opt.delta_window) {
      const double past = res.history[res.history.size() - 1 - static_cast<std::size_t>(opt.delta_window)];
      if ((past - F) / std::max(std::abs(F), 1.0) < opt.delta) return finish(true, "objective delta");
    }
  }
  return finish(false, "iteration limit");
}

}  // namespace spellvar::optim
