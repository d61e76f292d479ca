#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jhtrack/config.hpp"

namespace jhtrack {

struct SearchParam {
  std::string name;
  double initial = 0.0;
  double step = 1.0;
  double lower = -1e300;
  double upper = 1e300;
  bool fixed = false;
};

struct SearchSpace {
  std::vector<SearchParam> params;
};

struct TraceEntry {
  int iter = 0;
  std::vector<double> point;
  double value = 0.0;
  double best = 0.0;  // running best after this evaluation
};

struct PatternSearchResult {
  std::vector<double> best_point;
  double best_value = 0.0;
  std::vector<TraceEntry> trace;
  int iterations = 0;
};

// Hooke-Jeeves style maximization. Each iteration polls +/- step on every
// free coordinate in the listed order and accepts the better of the two
// polls as soon as it improves the incumbent; when a full pass yields no
// improvement all steps are halved. Stops after max_iters iterations or
// when every free step falls below 1e-4 of its initial size. Candidates are
// clamped to the bounds. Throws ObjectiveFailure when the objective returns
// NaN.
PatternSearchResult pattern_search(
    const std::function<double(const std::vector<double>&)>& objective,
    const SearchSpace& space, int max_iters = 200);

// Tunable-parameter helpers used by the tune subcommand: the default space
// over the continuous tracker parameters, a bounds-file reader
// ("name initial step lower upper [fixed]" rows, '#' comments), and the
// mapping of a search point back onto a config.
SearchSpace default_search_space(const TrackerConfig& base);
SearchSpace read_search_space(const std::string& path,
                              const TrackerConfig& base);
TrackerConfig apply_point(const TrackerConfig& base, const SearchSpace& space,
                          const std::vector<double>& point);

// Evaluation trace as CSV: iter, one column per parameter, value.
void write_trace(const std::string& path, const SearchSpace& space,
                 const std::vector<TraceEntry>& trace);

}  // namespace jhtrack
