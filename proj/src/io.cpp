#include "jhtrack/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <type_traits>

namespace jhtrack {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write " + path);
  }
  return out;
}

[[noreturn]] void parse_fail(const std::string& path, int line,
                             const std::string& what) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) {
    out.push_back(field);
  }
  return out;
}

double to_double(const std::string& s, const std::string& path, int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) {
      ++pos;
    }
    if (pos != s.size()) {
      parse_fail(path, line, "trailing characters in number '" + s + "'");
    }
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    parse_fail(path, line, "not a number: '" + s + "'");
  }
}

long to_long(const std::string& s, const std::string& path, int line) {
  const double v = to_double(s, path, line);
  return static_cast<long>(v);
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) {
    return std::isspace(c);
  });
}

struct ParsedRow {
  long frame;
  int id;
  BBox box;
  double conf;
};

ParsedRow parse_row(const std::string& path, int lineno,
                    const std::string& line) {
  const std::vector<std::string> f = split_fields(line, ',');
  if (f.size() < 6) {
    parse_fail(path, lineno, "expected at least 6 comma-separated fields");
  }
  ParsedRow row;
  row.frame = to_long(f[0], path, lineno);
  row.id = static_cast<int>(to_long(f[1], path, lineno));
  const double l = to_double(f[2], path, lineno);
  const double t = to_double(f[3], path, lineno);
  double w = to_double(f[4], path, lineno);
  double h = to_double(f[5], path, lineno);
  if (w < 0.0 || h < 0.0) {
    std::cerr << path << ":" << lineno
              << ": warning: negative box size clamped to zero\n";
    w = std::max(w, 0.0);
    h = std::max(h, 0.0);
  }
  row.box = BBox::from_ltwh(l, t, w, h);
  row.conf = f.size() >= 7 ? to_double(f[6], path, lineno) : 1.0;
  return row;
}

}  // namespace

std::map<long, std::vector<Detection>> read_detections(const std::string& path) {
  std::ifstream in = open_input(path);
  std::map<long, std::vector<Detection>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const ParsedRow row = parse_row(path, lineno, line);
    out[row.frame].push_back(Detection{row.box, row.conf});
  }
  return out;
}

std::vector<TrackRow> read_track_rows(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<TrackRow> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const ParsedRow row = parse_row(path, lineno, line);
    out.push_back(TrackRow{row.frame, row.id, row.box, row.conf});
  }
  return out;
}

Homography read_homography(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<double> vals;
  double v = 0.0;
  while (in >> v) {
    vals.push_back(v);
  }
  if (!in.eof()) {
    parse_fail(path, 1, "non-numeric homography entry");
  }
  if (vals.size() != 9) {
    parse_fail(path, 1, "expected 9 homography entries, got " +
                            std::to_string(vals.size()));
  }
  Eigen::Matrix3d m;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      m(r, c) = vals[3 * r + c];
    }
  }
  return Homography(m);
}

void write_homography(const std::string& path, const Homography& h) {
  std::ofstream out = open_output(path);
  char buf[256];
  for (int r = 0; r < 3; ++r) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", h.m(r, 0), h.m(r, 1),
                  h.m(r, 2));
    out << buf;
  }
}

std::map<long, AffineMotion> read_affines(const std::string& path) {
  std::ifstream in = open_input(path);
  std::map<long, AffineMotion> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    std::stringstream ss(line);
    long frame = 0;
    double a[6];
    if (!(ss >> frame >> a[0] >> a[1] >> a[2] >> a[3] >> a[4] >> a[5])) {
      parse_fail(path, lineno, "expected 'frame a11 a12 a13 a21 a22 a23'");
    }
    std::string rest;
    if (ss >> rest) {
      parse_fail(path, lineno, "trailing fields after affine row");
    }
    AffineMotion motion;
    motion.a << a[0], a[1], a[2], a[3], a[4], a[5];
    if (out.count(frame)) {
      std::cerr << path << ":" << lineno
                << ": warning: duplicate affine for frame " << frame
                << ", keeping the last row\n";
    }
    out[frame] = motion;
  }
  return out;
}

void write_affines(const std::string& path,
                   const std::map<long, AffineMotion>& affines) {
  std::ofstream out = open_output(path);
  char buf[512];
  for (const auto& [frame, m] : affines) {
    std::snprintf(buf, sizeof(buf), "%ld %.17g %.17g %.17g %.17g %.17g %.17g\n",
                  frame, m.a(0, 0), m.a(0, 1), m.a(0, 2), m.a(1, 0), m.a(1, 1),
                  m.a(1, 2));
    out << buf;
  }
}

namespace {

// Field table shared by the reader and writer.
template <typename F>
void for_each_config_field(TrackerConfig& cfg, F&& fn) {
  fn("sigma_x", &cfg.sigma_x);
  fn("sigma_y", &cfg.sigma_y);
  fn("alpha1", &cfg.alpha1);
  fn("alpha2", &cfg.alpha2);
  fn("alpha3", &cfg.alpha3);
  fn("omega", &cfg.omega);
  fn("b", &cfg.b);
  fn("d_high", &cfg.d_high);
  fn("d_low", &cfg.d_low);
  fn("p_ss", &cfg.p_ss);
  fn("p_dd", &cfg.p_dd);
  fn("p_ww", &cfg.p_ww);
  fn("p_ii", &cfg.p_ii);
  fn("v", &cfg.v);
  fn("sigma_m", &cfg.sigma_m);
  fn("n", &cfg.n);
  fn("m", &cfg.m);
  fn("chi2_dof", &cfg.chi2_dof);
  fn("dt", &cfg.dt);
  fn("stage2_ground_only", &cfg.stage2_ground_only);
  fn("coast_coupling", &cfg.coast_coupling);
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

TrackerConfig read_config(const std::string& path) {
  std::ifstream in = open_input(path);
  TrackerConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    if (blank(line)) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      parse_fail(path, lineno, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      parse_fail(path, lineno, "expected 'key = value'");
    }
    bool known = false;
    for_each_config_field(cfg, [&](const char* name, auto* field) {
      if (key != name) return;
      known = true;
      using T = std::remove_pointer_t<decltype(field)>;
      if constexpr (std::is_same_v<T, bool>) {
        if (value == "true" || value == "1") {
          *field = true;
        } else if (value == "false" || value == "0") {
          *field = false;
        } else {
          parse_fail(path, lineno, "expected boolean for " + key);
        }
      } else if constexpr (std::is_same_v<T, int>) {
        *field = static_cast<int>(to_long(value, path, lineno));
      } else {
        *field = to_double(value, path, lineno);
      }
    });
    if (!known) {
      parse_fail(path, lineno, "unknown config key '" + key + "'");
    }
  }
  try {
    cfg.validate();
  } catch (const InvalidThresholds& e) {
    throw ParseError(path + ": " + e.what());
  }
  return cfg;
}

void write_config(const std::string& path, const TrackerConfig& cfg) {
  std::ofstream out = open_output(path);
  char buf[128];
  TrackerConfig copy = cfg;
  for_each_config_field(copy, [&](const char* name, auto* field) {
    using T = std::remove_pointer_t<decltype(field)>;
    if constexpr (std::is_same_v<T, bool>) {
      out << name << " = " << (*field ? "true" : "false") << "\n";
    } else if constexpr (std::is_same_v<T, int>) {
      out << name << " = " << *field << "\n";
    } else {
      std::snprintf(buf, sizeof(buf), "%.17g", *field);
      out << name << " = " << buf << "\n";
    }
  });
}

void write_results(const std::string& path,
                   const std::vector<FrameResult>& results) {
  std::ofstream out = open_output(path);
  char buf[256];
  for (const FrameResult& fr : results) {
    for (const OutputRow& row : fr.rows) {
      std::snprintf(buf, sizeof(buf), "%ld,%d,%.2f,%.2f,%.2f,%.2f,%.4f,-1,-1,-1\n",
                    fr.frame, row.id, row.box.l, row.box.t, row.box.width(),
                    row.box.height(), row.conf);
      out << buf;
    }
  }
}

void write_track_rows(const std::string& path, const std::vector<TrackRow>& rows,
                      bool gt_flag_column) {
  std::ofstream out = open_output(path);
  char buf[256];
  for (const TrackRow& row : rows) {
    if (gt_flag_column) {
      std::snprintf(buf, sizeof(buf), "%ld,%d,%.2f,%.2f,%.2f,%.2f,1,-1,-1,-1\n",
                    row.frame, row.id, row.box.l, row.box.t, row.box.width(),
                    row.box.height());
    } else {
      std::snprintf(buf, sizeof(buf), "%ld,%d,%.2f,%.2f,%.2f,%.2f,%.4f,-1,-1,-1\n",
                    row.frame, row.id, row.box.l, row.box.t, row.box.width(),
                    row.box.height(), row.conf);
    }
    out << buf;
  }
}

}  // namespace jhtrack
