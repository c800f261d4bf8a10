#include "cavkin/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cavkin {

LogFit fit_log_slope(std::span<const double> t, std::span<const double> y, double lo, double hi) {
  if (t.size() != y.size()) throw std::invalid_argument("fit_log_slope: size mismatch");
  std::size_t first = 0;
  while (first < y.size() && !(std::abs(y[first]) >= lo && std::abs(y[first]) <= hi)) ++first;
  std::size_t last = first;
  while (last < y.size() && std::abs(y[last]) >= lo && std::abs(y[last]) <= hi) ++last;
  const std::size_t n = last - first;
  if (n < 3) throw std::invalid_argument("fit_log_slope: fewer than 3 samples in the window");

  double st = 0.0, sy = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    st += t[i];
    sy += std::log(std::abs(y[i]));
  }
  const double mt = st / n, my = sy / n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    const double dt = t[i] - mt, dy = std::log(std::abs(y[i])) - my;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  LogFit f;
  f.slope = sty / stt;
  f.intercept = my - f.slope * mt;
  f.points = n;
  f.r2 = syy > 0.0 ? sty * sty / (stt * syy) : 1.0;
  return f;
}

std::vector<double> moving_average(std::span<const double> y, std::size_t half) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(y.size() - 1, i + half);
    double s = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) s += y[k];
    out[i] = s / static_cast<double>(hi - lo + 1);
  }
  return out;
}

double crossing_time(std::span<const double> t, std::span<const double> y, double level, std::size_t half) {
  if (t.size() != y.size()) throw std::invalid_argument("crossing_time: size mismatch");
  const auto s = moving_average(y, half);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= level) {
      if (i == 0) return t[0];
      const double w = (level - s[i - 1]) / (s[i] - s[i - 1]);
      return t[i - 1] + w * (t[i] - t[i - 1]);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double interpolate(std::span<const double> t, std::span<const double> y, double s) {
  if (t.empty() || t.size() != y.size()) throw std::invalid_argument("interpolate: bad samples");
  if (s <= t.front()) return y.front();
  if (s >= t.back()) return y.back();
  const auto it = std::upper_bound(t.begin(), t.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - t.begin());
  const double w = (s - t[i - 1]) / (t[i] - t[i - 1]);
  return y[i - 1] + w * (y[i] - y[i - 1]);
}

double relaxation_time(std::span<const double> t, std::span<const double> y, double t_ref, double asymptote,
                       double fraction, std::size_t half) {
  const auto s = moving_average(y, half);
  const double y0 = interpolate(t, s, t_ref);
  const double level = y0 + fraction * (asymptote - y0);
  const bool rising = asymptote >= y0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (t[i] <= t_ref) continue;
    const bool hit = rising ? s[i] >= level : s[i] <= level;
    if (hit) {
      const double w = (level - s[i - 1]) / (s[i] - s[i - 1]);
      return std::max(t_ref, t[i - 1] + w * (t[i] - t[i - 1])) - t_ref;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double collapse_deviation(const std::vector<std::pair<std::vector<double>, std::vector<double>>>& curves,
                          double s_lo, double s_hi, std::size_t points) {
  if (curves.size() < 2 || points < 2 || !(s_hi > s_lo)) throw std::invalid_argument("collapse_deviation: bad input");
  double worst = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double s = s_lo + (s_hi - s_lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& [ts, ys] : curves) {
      const double v = interpolate(ts, ys, s);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    worst = std::max(worst, hi - lo);
  }
  return worst;
}

}  // namespace cavkin
