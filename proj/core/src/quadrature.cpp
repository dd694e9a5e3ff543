#include "uhho/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace uhho {

double QuadRule::total() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void QuadRule::append(const QuadRule& other) {
  points.insert(points.end(), other.points.begin(), other.points.end());
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mtx;
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) {
      nodes = it->second.first;
      weights = it->second.second;
      return;
    }
  }
  nodes.assign(static_cast<size_t>(n), 0.0);
  weights.assign(static_cast<size_t>(n), 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence for P_n(x) and P'_n(x)
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[static_cast<size_t>(i)] = -x;
    nodes[static_cast<size_t>(n - 1 - i)] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[static_cast<size_t>(i)] = w;
    weights[static_cast<size_t>(n - 1 - i)] = w;
  }
  std::lock_guard<std::mutex> lock(mtx);
  cache.emplace(n, std::make_pair(nodes, weights));
}

QuadRule segment_rule(const Vec2& a, const Vec2& b, int npoints) {
  std::vector<double> t, w;
  gauss_legendre(npoints, t, w);
  QuadRule q;
  const double half_len = 0.5 * (b - a).norm();
  const Vec2 mid = 0.5 * (a + b);
  const Vec2 dir = 0.5 * (b - a);
  q.points.reserve(static_cast<size_t>(npoints));
  q.weights.reserve(static_cast<size_t>(npoints));
  for (int i = 0; i < npoints; ++i) {
    q.points.push_back(mid + t[static_cast<size_t>(i)] * dir);
    q.weights.push_back(w[static_cast<size_t>(i)] * half_len);
  }
  return q;
}

QuadRule triangle_rule(const Vec2& p0, const Vec2& p1, const Vec2& p2, int degree) {
  // Collapsed map x(u,v) = p0 + u (p1-p0) + v (1-u) (p2-p0), Jacobian 2A (1-u).
  // A total-degree-d integrand becomes degree <= d+1 in u and <= d in v.
  const int nu = (degree + 3) / 2;
  const int nv = (degree + 2) / 2;
  std::vector<double> xu, wu, xv, wv;
  gauss_legendre(std::max(1, nu), xu, wu);
  gauss_legendre(std::max(1, nv), xv, wv);
  const double area2 = cross2(p1 - p0, p2 - p0);  // 2A, must be positive
  QuadRule q;
  q.points.reserve(xu.size() * xv.size());
  q.weights.reserve(xu.size() * xv.size());
  for (size_t i = 0; i < xu.size(); ++i) {
    const double u = 0.5 * (xu[i] + 1.0);
    for (size_t j = 0; j < xv.size(); ++j) {
      const double v = 0.5 * (xv[j] + 1.0);
      q.points.push_back(p0 + u * (p1 - p0) + v * (1.0 - u) * (p2 - p0));
      q.weights.push_back(0.25 * wu[i] * wv[j] * (1.0 - u) * area2);
    }
  }
  return q;
}

QuadRule polygon_rule(const Polygon& p, int degree) {
  QuadRule q;
  for (const auto& t : triangulate(p)) q.append(triangle_rule(t[0], t[1], t[2], degree));
  return q;
}

QuadRule parts_rule(std::span<const Polygon> parts, int degree) {
  QuadRule q;
  for (const auto& p : parts) q.append(polygon_rule(p, degree));
  return q;
}

}  // namespace uhho
