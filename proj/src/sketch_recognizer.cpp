#include "taletorium/sketch_recognizer.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "taletorium/error.hpp"

namespace taletorium::sketch {
namespace {

using render::Point;

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double path_length(const Path& p) {
  double d = 0;
  for (std::size_t i = 1; i < p.size(); ++i) d += dist(p[i - 1], p[i]);
  return d;
}

Point centroid(const Path& p) {
  Point c;
  for (const auto& q : p) {
    c.x += q.x;
    c.y += q.y;
  }
  c.x /= static_cast<double>(p.size());
  c.y /= static_cast<double>(p.size());
  return c;
}

Path resample(const Path& input, std::size_t n) {
  const double interval = path_length(input) / static_cast<double>(n - 1);
  Path pts = input;
  Path out{pts.front()};
  double acc = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double d = dist(pts[i - 1], pts[i]);
    if (d > 0 && acc + d >= interval) {
      const double k = (interval - acc) / d;
      Point q{pts[i - 1].x + k * (pts[i].x - pts[i - 1].x), pts[i - 1].y + k * (pts[i].y - pts[i - 1].y)};
      out.push_back(q);
      pts.insert(pts.begin() + static_cast<std::ptrdiff_t>(i), q);
      acc = 0;
    } else {
      acc += d;
    }
    if (out.size() == n) break;
  }
  while (out.size() < n) out.push_back(pts.back());
  return out;
}

Path rotate_by(const Path& p, double radians) {
  const Point c = centroid(p);
  const double cs = std::cos(radians), sn = std::sin(radians);
  Path out;
  out.reserve(p.size());
  for (const auto& q : p)
    out.push_back({(q.x - c.x) * cs - (q.y - c.y) * sn + c.x, (q.x - c.x) * sn + (q.y - c.y) * cs + c.y});
  return out;
}

double distance_at_angle(const Path& candidate, const Path& reference, double radians) {
  return path_distance(rotate_by(candidate, radians), reference);
}

}  // namespace

StrokeSet from_template(const render::StrokeTemplate& tmpl) {
  StrokeSet out;
  double t = 0;
  for (const auto& s : tmpl.strokes) {
    TimedStroke ts;
    for (const auto& p : s) ts.push_back({p.x, p.y, t += 10});
    out.strokes.push_back(std::move(ts));
  }
  return out;
}

Path normalize_path(const Path& points) {
  if (points.size() < 2 || path_length(points) <= 0) throw Error(Errc::DegenerateSketch, "sketch has no extent");
  // a path that already has the target count is taken as resampled, which
  // keeps normalization idempotent
  Path p = points.size() == kResamplePoints ? points : resample(points, kResamplePoints);

  const Point c = centroid(p);
  p = rotate_by(p, -std::atan2(p.front().y - c.y, p.front().x - c.x));

  double x0 = p[0].x, x1 = p[0].x, y0 = p[0].y, y1 = p[0].y;
  for (const auto& q : p) {
    x0 = std::min(x0, q.x);
    x1 = std::max(x1, q.x);
    y0 = std::min(y0, q.y);
    y1 = std::max(y1, q.y);
  }
  const double size = std::max(x1 - x0, y1 - y0);
  if (size <= 0) throw Error(Errc::DegenerateSketch, "sketch has no extent");
  for (auto& q : p) {
    q.x /= size;
    q.y /= size;
  }
  const Point m = centroid(p);
  for (auto& q : p) {
    q.x -= m.x;
    q.y -= m.y;
  }
  return p;
}

Path normalize_strokes(const StrokeSet& strokes) {
  Path all;
  for (const auto& s : strokes.strokes)
    for (const auto& p : s) all.push_back({p.x, p.y});
  return normalize_path(all);
}

double path_distance(const Path& a, const Path& b) {
  const std::size_t n = std::min(a.size(), b.size());
  if (n == 0) return 0;
  double d = 0;
  for (std::size_t i = 0; i < n; ++i) d += dist(a[i], b[i]);
  return d / static_cast<double>(n);
}

double best_angle_distance(const Path& candidate, const Path& reference) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  const double deg = std::numbers::pi / 180.0;
  double a = -45 * deg, b = 45 * deg;
  const double precision = 2 * deg;
  double x1 = phi * a + (1 - phi) * b;
  double f1 = distance_at_angle(candidate, reference, x1);
  double x2 = (1 - phi) * a + phi * b;
  double f2 = distance_at_angle(candidate, reference, x2);
  while (std::abs(b - a) > precision) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = phi * a + (1 - phi) * b;
      f1 = distance_at_angle(candidate, reference, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = (1 - phi) * a + phi * b;
      f2 = distance_at_angle(candidate, reference, x2);
    }
  }
  return std::min(f1, f2);
}

double score_from_distance(double d) { return 1.0 - d / (0.5 * std::sqrt(2.0)); }

Recognizer::Recognizer(const render::TemplateBank& bank) {
  for (const auto& t : bank.templates()) {
    Path all;
    for (const auto& s : t.strokes) all.insert(all.end(), s.begin(), s.end());
    categories_.push_back(t.category);
    templates_.push_back(normalize_path(all));
  }
}

std::vector<double> Recognizer::score_all_serial(const Path& normalized) const {
  std::vector<double> out(templates_.size());
  for (std::size_t i = 0; i < templates_.size(); ++i)
    out[i] = score_from_distance(best_angle_distance(normalized, templates_[i]));
  return out;
}

std::vector<double> Recognizer::score_all(const Path& normalized) const {
  std::vector<double> out(templates_.size());
  const auto n = static_cast<std::ptrdiff_t>(templates_.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = score_from_distance(best_angle_distance(normalized, templates_[k]));
  }
  return out;
}

Recognition Recognizer::pick(const std::vector<double>& scores) const {
  Recognition best{"", -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] > best.score || (scores[i] == best.score && categories_[i] < best.category))
      best = {categories_[i], scores[i]};
  return best;
}

Recognition Recognizer::best(const StrokeSet& strokes) const {
  if (templates_.empty()) throw Error(Errc::TemplateBankError, "recognizer has no templates");
  return pick(score_all(normalize_strokes(strokes)));
}

std::optional<Recognition> Recognizer::recognize(const StrokeSet& strokes, double threshold) const {
  auto r = best(strokes);
  if (r.score < threshold) return std::nullopt;
  return r;
}

}  // namespace taletorium::sketch
