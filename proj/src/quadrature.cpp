#include "wedgefield/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <queue>
#include <thread>

#include "wedgefield/error.hpp"

namespace wedgefield {

namespace {

GaussLegendreRule computeRule(int n) {
  GaussLegendreRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
    }
    const double w = 2 / ((1 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0;
  return r;
}

struct Panel {
  double a, b;
  std::complex<double> value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evalPanel(const std::function<std::complex<double>(double)>& f, double a, double b) {
  const auto& lo = gaussLegendre(20);
  const auto& hi = gaussLegendre(40);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::complex<double> s1 = 0, s2 = 0;
  for (int i = 0; i < 20; ++i) s1 += lo.weights[i] * f(c + h * lo.nodes[i]);
  for (int i = 0; i < 40; ++i) s2 += hi.weights[i] * f(c + h * hi.nodes[i]);
  return {a, b, s2 * h, std::abs(s2 - s1) * h};
}

}  // namespace

const GaussLegendreRule& gaussLegendre(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  if (n < 1) throw QuadratureFailure("Gauss-Legendre rule needs n >= 1");
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(computeRule(n));
  return *slot;
}

GaussLegendreRule gaussLegendre(int n, double a, double b) {
  GaussLegendreRule r = gaussLegendre(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = c + h * r.nodes[i];
    r.weights[i] *= h;
  }
  return r;
}

AdaptiveResult adaptiveIntegrate(const std::function<std::complex<double>(double)>& f, double a,
                                 double b, double relTol, double absTol, int maxPanels) {
  std::priority_queue<Panel> queue;
  queue.push(evalPanel(f, a, b));
  std::complex<double> total = queue.top().value;
  double err = queue.top().error;
  int panels = 1;
  while (err > std::max(absTol, relTol * std::abs(total))) {
    if (panels >= maxPanels) throw QuadratureFailure("adaptive rule exceeded its panel budget");
    const Panel p = queue.top();
    queue.pop();
    const double m = 0.5 * (p.a + p.b);
    const Panel l = evalPanel(f, p.a, m), r = evalPanel(f, m, p.b);
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    queue.push(l);
    queue.push(r);
    ++panels;
    if (err < 0) err = 0;
  }
  // Re-sum in a fixed order to avoid accumulated drift.
  std::vector<Panel> all;
  while (!queue.empty()) {
    all.push_back(queue.top());
    queue.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  AdaptiveResult out;
  for (const auto& p : all) {
    out.value += p.value;
    out.error += p.error;
  }
  return out;
}

int threadCount() {
  if (const char* env = std::getenv("WEDGEFIELD_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallelChunks(std::size_t chunks, const std::function<void(std::size_t)>& body) {
  const std::size_t threads = std::min<std::size_t>(threadCount(), chunks);
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failMu;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) {
        try {
          body(c);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failMu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace wedgefield
