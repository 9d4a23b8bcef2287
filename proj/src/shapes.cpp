#include "dadist/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "dadist/errors.hpp"

namespace dadist {

namespace {

constexpr int kLandmarks = 60;

void require_outline(const LandmarkSet& set) {
  if (static_cast<int>(set.points.size()) != kLandmarks)
    throw config_error("landmark set must hold exactly 60 points");
  for (const auto& p : set.points)
    if (!std::isfinite(p[0]) || !std::isfinite(p[1]))
      throw config_error("landmark coordinates must be finite");
}

std::vector<std::pair<int, int>> shifted_pairing(int first0, int second0) {
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < 14; ++u) pairs.emplace_back(first0 + u, second0 + u);
  return pairs;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) fields.push_back(cur);
  return fields;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const char* what) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw config_error(std::string("malformed ") + what + " value: " + s);
  }
  if (pos != s.size()) throw config_error(std::string("malformed ") + what + " value: " + s);
  return v;
}

bool is_integer_field(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

std::vector<std::pair<int, int>> default_pairing() { return shifted_pairing(2, 16); }

std::vector<std::pair<int, int>> mirror_pairing() { return shifted_pairing(46, 31); }

QuaternionSample build_quaternion_sample(
    const LandmarkSet& set, const std::vector<std::pair<int, int>>& pairing) {
  require_outline(set);
  std::set<int> firsts, seconds;
  QuaternionSample out;
  out.specimen = set.specimen;
  for (auto [f, s] : pairing) {
    if (f < 1 || f > kLandmarks || s < 1 || s > kLandmarks)
      throw config_error("pairing index out of range 1..60");
    if (!firsts.insert(f).second || !seconds.insert(s).second)
      throw config_error("pairing indices must be distinct");
    const auto& p = set.points[f - 1];
    const auto& q = set.points[s - 1];
    out.q.push_back({p[0], p[1], q[0], q[1]});
  }
  return out;
}

LandmarkSet symmetrize(const LandmarkSet& set, std::pair<int, int> cut_indices) {
  require_outline(set);
  auto [c1, c2] = cut_indices;
  if (c1 < 1 || c1 > kLandmarks || c2 < 1 || c2 > kLandmarks || c1 == c2)
    throw config_error("cut indices out of range 1..60");
  const double axis = 0.5 * (set.points[c1 - 1][0] + set.points[c2 - 1][0]);

  auto side = [&](int lo, int hi) {  // mean signed offset of a sector from the axis
    double s = 0.0;
    for (int i = lo; i <= hi; ++i) s += set.points[i - 1][0] - axis;
    return s / (hi - lo + 1);
  };
  LandmarkSet out = set;
  // Reflect only when D sits on A's side; a symmetric outline is left alone.
  if (side(46, 60) * side(1, 15) > 0.0)
    for (int i = 46; i <= 60; ++i) out.points[i - 1][0] = 2.0 * axis - out.points[i - 1][0];
  return out;
}

double squared_norm(const QuaternionSample& sample) {
  double total = 0.0;
  for (const auto& q : sample.q)
    total += q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3];
  return total;
}

FamilyPoint to_specimen_collection(const std::vector<QuaternionSample>& samples) {
  if (samples.empty()) throw config_error("no quaternion samples");
  const Algebra h4(4);
  FamilyPoint point;
  for (const auto& s : samples) {
    DAMatrix f(h4, 1, 1);
    f.at(0, 0, 0) = squared_norm(s);
    point.pds.emplace_back(f);
  }
  return point;
}

std::vector<FamilyPoint> to_quaternion_replicates(
    const std::vector<QuaternionSample>& samples) {
  if (samples.empty()) throw config_error("no quaternion samples");
  const Algebra h4(4);
  std::vector<FamilyPoint> points;
  for (const auto& s : samples) {
    FamilyPoint point;
    for (const auto& q : s.q) {
      DAMatrix f(h4, 1, 1);
      f.at(0, 0, 0) = q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3];
      point.pds.emplace_back(f);
    }
    points.push_back(std::move(point));
  }
  return points;
}

DAMatrix to_quaternion_vector(const QuaternionSample& sample) {
  const Algebra h4(4);
  DAMatrix t(h4, static_cast<int>(sample.q.size()), 1);
  for (std::size_t u = 0; u < sample.q.size(); ++u)
    for (int r = 0; r < 4; ++r) t.at(static_cast<int>(u), 0, r) = sample.q[u][r];
  return t;
}

DAMatrix to_quaternion_matrix(const QuaternionSample& col1,
                              const QuaternionSample& col2) {
  if (col1.q.size() != col2.q.size())
    throw config_error("quaternion matrix columns must have equal length");
  const Algebra h4(4);
  DAMatrix t(h4, static_cast<int>(col1.q.size()), 2);
  for (std::size_t u = 0; u < col1.q.size(); ++u)
    for (int r = 0; r < 4; ++r) {
      t.at(static_cast<int>(u), 0, r) = col1.q[u][r];
      t.at(static_cast<int>(u), 1, r) = col2.q[u][r];
    }
  return t;
}

std::vector<LandmarkSet> read_landmarks_csv(std::istream& in) {
  std::map<std::string, std::map<int, std::array<double, 2>>> rows;
  std::vector<std::string> order;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_csv(line);
    if (first && fields.size() >= 2 && !is_integer_field(fields[1])) {
      first = false;  // header line
      continue;
    }
    first = false;
    if (fields.size() != 4) throw config_error("landmark CSV rows need 4 fields");
    const int idx = static_cast<int>(parse_double(fields[1], "landmark index"));
    if (idx < 1 || idx > kLandmarks) throw config_error("landmark index out of range 1..60");
    if (rows.find(fields[0]) == rows.end()) order.push_back(fields[0]);
    auto& spec = rows[fields[0]];
    if (!spec.emplace(idx, std::array<double, 2>{parse_double(fields[2], "x"),
                                                 parse_double(fields[3], "y")})
             .second)
      throw config_error("duplicate landmark " + fields[1] + " for " + fields[0]);
  }
  std::vector<LandmarkSet> sets;
  for (const auto& name : order) {
    const auto& spec = rows[name];
    if (static_cast<int>(spec.size()) != kLandmarks)
      throw config_error("specimen " + name + " must provide all 60 landmarks");
    LandmarkSet set;
    set.specimen = name;
    for (const auto& [idx, xy] : spec) set.points.push_back(xy);
    require_outline(set);
    sets.push_back(std::move(set));
  }
  return sets;
}

void write_landmarks_csv(std::ostream& out, const std::vector<LandmarkSet>& sets) {
  out << "specimen,landmark_index,x,y\n";
  for (const auto& set : sets) {
    require_outline(set);
    for (int i = 0; i < kLandmarks; ++i)
      out << set.specimen << ',' << (i + 1) << ',' << fmt17(set.points[i][0]) << ','
          << fmt17(set.points[i][1]) << '\n';
  }
}

std::vector<QuaternionSample> read_quaternions_csv(std::istream& in) {
  std::vector<QuaternionSample> samples;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_csv(line);
    if (first && fields.size() >= 2 && !is_integer_field(fields[1])) {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() != 6) throw config_error("quaternion CSV rows need 6 fields");
    if (samples.empty() || samples.back().specimen != fields[0]) {
      samples.push_back({fields[0], {}});
    }
    samples.back().q.push_back({parse_double(fields[2], "a"), parse_double(fields[3], "b"),
                                parse_double(fields[4], "c"), parse_double(fields[5], "d")});
  }
  return samples;
}

void write_quaternions_csv(std::ostream& out,
                           const std::vector<QuaternionSample>& samples) {
  out << "specimen,u,a,b,c,d\n";
  for (const auto& s : samples)
    for (std::size_t u = 0; u < s.q.size(); ++u)
      out << s.specimen << ',' << (u + 2) << ',' << fmt17(s.q[u][0]) << ','
          << fmt17(s.q[u][1]) << ',' << fmt17(s.q[u][2]) << ',' << fmt17(s.q[u][3])
          << '\n';
}

}  // namespace dadist
