#include "dadist/io.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "dadist/errors.hpp"

namespace dadist {

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& s, const char* what) {
  std::size_t pos = 0;
  int v;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw config_error(std::string("malformed ") + what + ": " + s);
  }
  if (pos != s.size()) throw config_error(std::string("malformed ") + what + ": " + s);
  return v;
}

double parse_num(const std::string& s, const char* what) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw config_error(std::string("malformed ") + what + ": " + s);
  }
  if (pos != s.size()) throw config_error(std::string("malformed ") + what + ": " + s);
  return v;
}

}  // namespace

void write_matrix_csv(std::ostream& out, const DAMatrix& x) {
  const int beta = x.algebra().beta();
  out << "# dadist-matrix beta=" << beta << " n=" << x.rows() << " m=" << x.cols()
      << '\n';
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) {
      out << i << ',' << j;
      for (int r = 0; r < beta; ++r) out << ',' << fmt17(x.at(i, j, r));
      out << '\n';
    }
}

DAMatrix read_matrix_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw config_error("matrix CSV: empty input");
  int beta = 0, n = 0, m = 0;
  if (std::sscanf(line.c_str(), "# dadist-matrix beta=%d n=%d m=%d", &beta, &n, &m) != 3)
    throw config_error("matrix CSV: bad header: " + line);
  const Algebra alg(beta);  // validates beta
  if (n < 1 || m < 1) throw config_error("matrix CSV: bad dimensions in header");

  DAMatrix x(alg, n, m);
  std::vector<char> seen(static_cast<std::size_t>(n) * m, 0);
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) fields.push_back(cur);
    if (static_cast<int>(fields.size()) != 2 + beta)
      throw config_error("matrix CSV: row needs 2 indices + beta components: " + line);
    const int i = parse_int(fields[0], "row index");
    const int j = parse_int(fields[1], "column index");
    if (i < 0 || i >= n || j < 0 || j >= m)
      throw config_error("matrix CSV: entry index out of range: " + line);
    if (seen[static_cast<std::size_t>(i) * m + j]++)
      throw config_error("matrix CSV: duplicate entry: " + line);
    for (int r = 0; r < beta; ++r) x.at(i, j, r) = parse_num(fields[2 + r], "component");
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw config_error("matrix CSV: missing entries");
  if (!x.finite()) throw config_error("matrix CSV: non-finite components");
  return x;
}

std::map<std::string, std::string> parse_config(std::istream& in) {
  std::map<std::string, std::string> cfg;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw config_error("config: missing '=': " + line);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw config_error("config: empty key: " + line);
    if (!cfg.emplace(key, trim(line.substr(eq + 1))).second)
      throw config_error("config: duplicate key: " + key);
  }
  return cfg;
}

FamilyInstance instance_from_config(const std::map<std::string, std::string>& cfg,
                                    const std::map<std::string, std::string>& overrides) {
  std::map<std::string, std::string> merged = cfg;
  for (const auto& [k, v] : overrides) merged[k] = v;

  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = merged.find(key);
    return it == merged.end() ? nullptr : &it->second;
  };
  auto require = [&](const std::string& key) -> const std::string& {
    const std::string* v = get(key);
    if (!v) throw config_error("config: missing key '" + key + "'");
    return *v;
  };

  const FamilyId family = parse_family(require("family"));
  const Algebra algebra(parse_int(require("beta"), "beta"));
  const int m = parse_int(require("m"), "m");

  std::vector<double> a = {parse_num(require("a0"), "a0")};
  if (get("a1")) {
    if (get("a")) throw config_error("config: give either a1,a2,.. or a shared a");
    for (int i = 1; const std::string* v = get("a" + std::to_string(i)); ++i)
      a.push_back(parse_num(*v, "a_i"));
  } else if (const std::string* shared = get("a")) {
    const int k = parse_int(require("k"), "k");
    if (k < 0) throw config_error("config: k must be >= 0");
    a.insert(a.end(), k, parse_num(*shared, "a"));
  }

  std::optional<KernelSpec> kernel;
  if (const std::string* kspec = get("kernel")) kernel = KernelSpec::parse(*kspec);
  int inverted = 0;
  if (const std::string* inv = get("inverted")) inverted = parse_int(*inv, "inverted");

  return FamilyInstance(family, algebra, m, std::move(a), kernel, {}, inverted);
}

}  // namespace dadist
