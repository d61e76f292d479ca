#include "jhtrack/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "jhtrack/errors.hpp"

namespace jhtrack {

namespace {

double clamp(double v, const SearchParam& p) {
  return std::min(std::max(v, p.lower), p.upper);
}

}  // namespace

PatternSearchResult pattern_search(
    const std::function<double(const std::vector<double>&)>& objective,
    const SearchSpace& space, int max_iters) {
  const std::size_t dim = space.params.size();
  std::vector<double> point(dim), steps(dim), initial_steps(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    point[i] = clamp(space.params[i].initial, space.params[i]);
    steps[i] = space.params[i].step;
    initial_steps[i] = space.params[i].step;
  }

  PatternSearchResult result;
  const auto evaluate = [&](const std::vector<double>& x, int iter) {
    const double v = objective(x);
    if (std::isnan(v)) {
      throw ObjectiveFailure("objective returned NaN");
    }
    if (result.trace.empty()) {
      result.best_value = v;
      result.best_point = x;
    } else if (v > result.best_value) {
      result.best_value = v;
      result.best_point = x;
    }
    result.trace.push_back(TraceEntry{iter, x, v, result.best_value});
    return v;
  };

  double current = evaluate(point, 0);

  const auto steps_exhausted = [&]() {
    for (std::size_t i = 0; i < dim; ++i) {
      if (space.params[i].fixed) continue;
      if (steps[i] >= 1e-4 * initial_steps[i]) {
        return false;
      }
    }
    return true;
  };

  int iter = 0;
  while (iter < max_iters && !steps_exhausted()) {
    ++iter;
    bool improved = false;
    for (std::size_t i = 0; i < dim; ++i) {
      if (space.params[i].fixed) continue;
      double best_cand_value = current;
      double best_cand_coord = point[i];
      for (const double delta : {steps[i], -steps[i]}) {
        const double coord = clamp(point[i] + delta, space.params[i]);
        if (coord == point[i]) continue;
        std::vector<double> cand = point;
        cand[i] = coord;
        const double v = evaluate(cand, iter);
        if (v > best_cand_value) {
          best_cand_value = v;
          best_cand_coord = coord;
        }
      }
      if (best_cand_value > current) {
        current = best_cand_value;
        point[i] = best_cand_coord;
        improved = true;
      }
    }
    if (!improved) {
      for (std::size_t i = 0; i < dim; ++i) {
        steps[i] *= 0.5;
      }
    }
  }
  result.iterations = iter;
  return result;
}

namespace {

struct TunableField {
  const char* name;
  double TrackerConfig::*field;
  double step;
  double lower;
  double upper;
};

// omega is handled separately because it is integral.
constexpr const char* kOmegaKey = "omega";

const std::vector<TunableField>& tunable_fields() {
  static const std::vector<TunableField> fields = {
      {"sigma_x", &TrackerConfig::sigma_x, 1.0, 1e-3, 100.0},
      {"sigma_y", &TrackerConfig::sigma_y, 1.0, 1e-3, 100.0},
      {"alpha1", &TrackerConfig::alpha1, 0.1, 0.0, 1.0},
      {"alpha2", &TrackerConfig::alpha2, 0.1, 0.0, 1.0},
      {"alpha3", &TrackerConfig::alpha3, 0.1, 0.0, 1.0},
      {"b", &TrackerConfig::b, 0.1, 0.0, 2.0},
      {"d_high", &TrackerConfig::d_high, 0.05, 0.0, 1.0},
      {"d_low", &TrackerConfig::d_low, 0.05, 0.0, 1.0},
      {"p_ss", &TrackerConfig::p_ss, 0.05, 0.01, 0.99},
      {"p_dd", &TrackerConfig::p_dd, 0.05, 0.01, 0.99},
      {"p_ww", &TrackerConfig::p_ww, 0.05, 0.01, 0.99},
      {"p_ii", &TrackerConfig::p_ii, 0.05, 0.01, 0.99},
      {"v", &TrackerConfig::v, 0.1, 1e-7, 10.0},
  };
  return fields;
}

SearchParam make_param(const std::string& name, const TrackerConfig& base) {
  if (name == kOmegaKey) {
    return SearchParam{name, static_cast<double>(base.omega), 5.0, 1.0, 300.0,
                       false};
  }
  for (const TunableField& f : tunable_fields()) {
    if (name == f.name) {
      return SearchParam{name, base.*(f.field), f.step, f.lower, f.upper,
                         false};
    }
  }
  throw ParseError("unknown tunable parameter '" + name + "'");
}

}  // namespace

SearchSpace default_search_space(const TrackerConfig& base) {
  SearchSpace space;
  for (const TunableField& f : tunable_fields()) {
    space.params.push_back(make_param(f.name, base));
  }
  space.params.push_back(make_param(kOmegaKey, base));
  return space;
}

SearchSpace read_search_space(const std::string& path,
                              const TrackerConfig& base) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  SearchSpace space;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    std::stringstream ss(line);
    std::string name;
    if (!(ss >> name)) continue;
    SearchParam p = make_param(name, base);
    if (!(ss >> p.initial >> p.step >> p.lower >> p.upper)) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected 'name initial step lower upper [fixed]'");
    }
    std::string flag;
    if (ss >> flag) {
      if (flag == "fixed") {
        p.fixed = true;
      } else {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": unexpected trailing field '" + flag + "'");
      }
    }
    space.params.push_back(p);
  }
  if (space.params.empty()) {
    throw ParseError(path + ": no tunable parameters");
  }
  return space;
}

TrackerConfig apply_point(const TrackerConfig& base, const SearchSpace& space,
                          const std::vector<double>& point) {
  TrackerConfig cfg = base;
  for (std::size_t i = 0; i < space.params.size(); ++i) {
    const std::string& name = space.params[i].name;
    const double value = point[i];
    if (name == kOmegaKey) {
      cfg.omega = std::max(1, static_cast<int>(std::lround(value)));
      continue;
    }
    for (const TunableField& f : tunable_fields()) {
      if (name == f.name) {
        cfg.*(f.field) = value;
        break;
      }
    }
  }
  // Keep the confidence split ordered when both thresholds move freely.
  cfg.d_low = std::min(cfg.d_low, cfg.d_high);
  return cfg;
}

void write_trace(const std::string& path, const SearchSpace& space,
                 const std::vector<TraceEntry>& trace) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write " + path);
  }
  out << "iter";
  for (const SearchParam& p : space.params) {
    out << "," << p.name;
  }
  out << ",value\n";
  char buf[64];
  for (const TraceEntry& e : trace) {
    out << e.iter;
    for (const double v : e.point) {
      std::snprintf(buf, sizeof(buf), ",%.17g", v);
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.17g", e.value);
    out << buf << "\n";
  }
}

}  // namespace jhtrack
