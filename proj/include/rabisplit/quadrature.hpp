#ifndef RABISPLIT_QUADRATURE_HPP
#define RABISPLIT_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <utility>
#include <vector>

namespace rabisplit {

template <typename Scalar>
struct QuadratureResult {
  Scalar value{};
  Scalar error{};
  int intervals{};
};

namespace detail {

// Gauss-Kronrod 7/15 on [-1, 1]; abscissae in decreasing order, last is 0.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for nodes 1, 3, 5 and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename Scalar>
struct Panel {
  Scalar a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename Scalar, typename F>
Panel<Scalar> kronrod_panel(F& f, Scalar a, Scalar b) {
  const Scalar centre = (a + b) / Scalar(2);
  const Scalar half = (b - a) / Scalar(2);
  const Scalar fc = f(centre);
  Scalar kronrod = fc * Scalar(kKronrodWeights[7]);
  Scalar gauss = fc * Scalar(kGaussWeights[3]);
  for (int j = 0; j < 7; ++j) {
    const Scalar dx = half * Scalar(kKronrodNodes[j]);
    const Scalar sum = f(centre - dx) + f(centre + dx);
    kronrod += Scalar(kKronrodWeights[j]) * sum;
    if (j % 2 == 1) gauss += Scalar(kGaussWeights[j / 2]) * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod integration of f over the panels defined
// by `breaks` (sorted). Bisects the panel with the largest error estimate
// until the total error is below max(abs_tol, rel_tol*|I|).
template <typename Scalar, typename F>
QuadratureResult<Scalar> integrate_adaptive(F&& f, const std::vector<Scalar>& breaks,
                                            Scalar rel_tol, Scalar abs_tol = Scalar(0),
                                            int max_panels = 20000) {
  std::priority_queue<detail::Panel<Scalar>> queue;
  Scalar value = 0;
  Scalar error = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    auto panel = detail::kronrod_panel(f, breaks[i], breaks[i + 1]);
    value += panel.value;
    error += panel.error;
    queue.push(panel);
  }
  while (!queue.empty() && static_cast<int>(queue.size()) < max_panels &&
         error > std::max(abs_tol, rel_tol * std::abs(value))) {
    const auto worst = queue.top();
    queue.pop();
    const Scalar mid = (worst.a + worst.b) / Scalar(2);
    const auto left = detail::kronrod_panel(f, worst.a, mid);
    const auto right = detail::kronrod_panel(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  // re-sum to shed accumulated update round-off
  value = 0;
  error = 0;
  const int count = static_cast<int>(queue.size());
  while (!queue.empty()) {
    value += queue.top().value;
    error += queue.top().error;
    queue.pop();
  }
  return {value, error, count};
}

template <typename Scalar, typename F>
QuadratureResult<Scalar> integrate_adaptive(F&& f, Scalar a, Scalar b, Scalar rel_tol,
                                            Scalar abs_tol = Scalar(0)) {
  return integrate_adaptive(std::forward<F>(f), std::vector<Scalar>{a, b}, rel_tol, abs_tol);
}

}  // namespace rabisplit

#endif  // RABISPLIT_QUADRATURE_HPP
