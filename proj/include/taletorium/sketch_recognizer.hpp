#pragma once

// Template-matching doodle recognizer ($1 unistroke style, strokes
// concatenated in draw order).

#include <optional>
#include <string>
#include <vector>

#include "taletorium/doodle_renderer.hpp"

namespace taletorium::sketch {

struct TimedPoint {
  double x = 0, y = 0;
  double t = 0;  // milliseconds
};

using TimedStroke = std::vector<TimedPoint>;

struct StrokeSet {
  std::vector<TimedStroke> strokes;
};

using Path = std::vector<render::Point>;

inline constexpr std::size_t kResamplePoints = 64;
inline constexpr double kDefaultThreshold = 0.6;

StrokeSet from_template(const render::StrokeTemplate& tmpl);

/// Resample to 64 points, rotate the indicative angle to zero, scale
/// uniformly into the unit square, move the centroid to the origin.
/// Throws DegenerateSketch.
Path normalize_strokes(const StrokeSet& strokes);
Path normalize_path(const Path& points);

double path_distance(const Path& a, const Path& b);
/// Minimum path distance over rotations of `candidate` in [-45, 45] degrees
/// (golden-section search, 2 degree precision).
double best_angle_distance(const Path& candidate, const Path& reference);
double score_from_distance(double d);

struct Recognition {
  std::string category;
  double score = 0.0;
};

class Recognizer {
 public:
  explicit Recognizer(const render::TemplateBank& bank);

  /// Score of every bank template, in bank order. OpenMP kernel and its
  /// serial reference.
  std::vector<double> score_all(const Path& normalized) const;
  std::vector<double> score_all_serial(const Path& normalized) const;

  /// Best category regardless of threshold.
  Recognition best(const StrokeSet& strokes) const;
  std::optional<Recognition> recognize(const StrokeSet& strokes, double threshold = kDefaultThreshold) const;

  std::size_t size() const { return templates_.size(); }

 private:
  Recognition pick(const std::vector<double>& scores) const;

  std::vector<std::string> categories_;  // per template
  std::vector<Path> templates_;
};

}  // namespace taletorium::sketch
