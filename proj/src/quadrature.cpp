#include "rgn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace rgn {

namespace {

// 15-point Kronrod nodes/weights on [-1,1]; odd indices form the embedded
// 7-point Gauss rule.
constexpr double xgk[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr double wgk[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double wg[7] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                          0.417959183673469, 0.381830050505119, 0.279705391489277,
                          0.129484966168870};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double k15 = 0.0, g7 = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double y = f(c + h * xgk[i]);
    k15 += wgk[i] * y;
    if (i % 2 == 1) g7 += wg[i / 2] * y;
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = k15 * h;
  p.error = std::abs((k15 - g7) * h);
  return p;
}

}  // namespace

double adaptive_gk(const std::function<double(double)>& f, double a, double b,
                   const QuadOptions& opts, const std::vector<double>& splits) {
  if (!(b > a)) return 0.0;
  std::vector<double> bounds{a};
  for (double s : splits)
    if (s > a && s < b) bounds.push_back(s);
  bounds.push_back(b);
  std::sort(bounds.begin(), bounds.end());

  std::priority_queue<Panel> heap;
  double total = 0.0, err = 0.0;
  for (size_t i = 0; i + 1 < bounds.size(); ++i) {
    if (bounds[i + 1] - bounds[i] < 1e-300) continue;
    Panel p = evaluate(f, bounds[i], bounds[i + 1]);
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  int n = static_cast<int>(heap.size());
  while (n < opts.max_intervals) {
    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    if (err <= tol) break;
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;  // cannot subdivide further
    Panel l = evaluate(f, worst.a, mid);
    Panel r = evaluate(f, mid, worst.b);
    total += l.value + r.value - worst.value;
    err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++n;
  }
  return total;
}

}  // namespace rgn
