#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dadist/errors.hpp"
#include "dadist/estimation.hpp"
#include "dadist/families.hpp"
#include "dadist/io.hpp"
#include "dadist/sampling.hpp"
#include "dadist/shapes.hpp"
#include "dadist/validate.hpp"

namespace {

using namespace dadist;

// Family flags shared by logpdf / sample / plot-data; collected into the flat
// key=value map consumed by instance_from_config so flags and --config share
// one code path (flags win).
struct FamilyFlags {
  std::string config_path;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value config file");
    for (const char* key : {"family", "beta", "m", "a0", "a", "k", "kernel", "inverted",
                            "a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8"}) {
      const std::string name = std::string("--") + key;
      cmd->add_option_function<std::string>(
          name, [this, key](const std::string& v) { overrides[key] = v; });
    }
  }

  FamilyInstance build() const {
    std::map<std::string, std::string> cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw config_error("cannot open config file " + config_path);
      cfg = parse_config(in);
    }
    return instance_from_config(cfg, overrides);
  }
};

std::uint64_t default_seed() {
  const char* env = std::getenv("DADIST_SEED");
  return env ? std::strtoull(env, nullptr, 10) : 0;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot open output file " + path);
  return out;
}

// `--point` grammar: comma-separated slot=value entries assigned in the
// family's slot order (scalars, then rectangles, then PD arguments). A value
// is either a real scalar or @file naming a matrix CSV.
FamilyPoint parse_point(const FamilyInstance& inst, const std::string& text) {
  std::vector<std::string> values;
  std::stringstream ss(text);
  std::string entry;
  while (std::getline(ss, entry, ',')) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw config_error("--point entries are slot=value: " + entry);
    values.push_back(entry.substr(eq + 1));
  }
  auto matrix_at = [&](std::size_t idx, int n) {
    if (values[idx].starts_with("@")) {
      std::ifstream in(values[idx].substr(1));
      if (!in) throw config_error("cannot open matrix file " + values[idx].substr(1));
      return read_matrix_csv(in);
    }
    if (n != 1 || inst.m() != 1 || inst.algebra().beta() > 1)
      throw config_error("slot needs a matrix: pass @file with a matrix CSV");
    DAMatrix x(inst.algebra(), 1, 1);
    x.at(0, 0, 0) = std::stod(values[idx]);
    return x;
  };
  auto pd_at = [&](std::size_t idx) {
    if (values[idx].starts_with("@")) {
      std::ifstream in(values[idx].substr(1));
      if (!in) throw config_error("cannot open matrix file " + values[idx].substr(1));
      return HermitianPD(read_matrix_csv(in));
    }
    if (inst.m() != 1) throw config_error("slot needs a matrix: pass @file with a matrix CSV");
    DAMatrix x(inst.algebra(), 1, 1);
    x.at(0, 0, 0) = std::stod(values[idx]);
    return HermitianPD(x);
  };

  // Discover the layout by probing validate-by-construction: try increasing
  // slot splits is fragile, so lean on the known layouts instead.
  FamilyPoint point;
  std::size_t next = 0;
  // Scalars first: families that keep the radial scalar v.
  switch (inst.family()) {
    case FamilyId::gamma_elliptical:
    case FamilyId::gamma_pearson7:
    case FamilyId::gamma_pearson2:
    case FamilyId::gamma_beta2:
    case FamilyId::gamma_beta1:
    case FamilyId::gamma_gen_wishart:
    case FamilyId::tri_gamma_p7_p2:
    case FamilyId::tri_gamma_b2_b1:
      point.scalars.push_back(std::stod(values.at(next)));
      ++next;
      break;
    case FamilyId::multi_gamma:
      for (int i = 0; i <= inst.k(); ++i, ++next)
        point.scalars.push_back(std::stod(values.at(next)));
      break;
    default:
      break;
  }
  // Rectangular slots.
  auto rect_count = [&]() -> int {
    switch (inst.family()) {
      case FamilyId::gamma_elliptical:
      case FamilyId::wishart_elliptical:
      case FamilyId::gamma_pearson7:
      case FamilyId::wishart_t:
      case FamilyId::gamma_pearson2:
      case FamilyId::wishart_pearson2:
      case FamilyId::pearson7_marginal:
      case FamilyId::pearson7_matric_marginal:
      case FamilyId::pearson2_marginal:
      case FamilyId::pearson2_matric_marginal:
        return inst.k();
      case FamilyId::tri_gamma_p7_p2:
      case FamilyId::tri_wishart_p7_p2:
        return 2;
      default:
        return 0;
    }
  }();
  for (int i = 0; i < rect_count; ++i, ++next)
    point.rects.push_back(matrix_at(next, inst.a()[i + 1] == 0.5 ? 1 : 2));
  // Everything remaining is a PD slot.
  while (next < values.size()) {
    point.pds.push_back(pd_at(next));
    ++next;
  }
  return point;
}

void write_sample_csv(std::ostream& out, const FamilyInstance& inst,
                      const std::vector<FamilyPoint>& draws, std::uint64_t seed) {
  out << "# dadist-sample family=" << family_name(inst.family())
      << " beta=" << inst.algebra().beta() << " m=" << inst.m() << " seed=" << seed
      << '\n';
  if (draws.empty()) return;
  const int beta = inst.algebra().beta();
  std::vector<std::string> header;
  const auto& first = draws.front();
  for (std::size_t i = 0; i < first.scalars.size(); ++i)
    header.push_back("v" + std::to_string(i));
  auto matrix_cols = [&](const std::string& tag, const DAMatrix& x) {
    for (int i = 0; i < x.rows(); ++i)
      for (int j = 0; j < x.cols(); ++j)
        for (int r = 0; r < beta; ++r)
          header.push_back(tag + "_" + std::to_string(i) + "_" + std::to_string(j) +
                           "_c" + std::to_string(r));
  };
  for (std::size_t i = 0; i < first.rects.size(); ++i)
    matrix_cols("X" + std::to_string(i + 1), first.rects[i]);
  for (std::size_t i = 0; i < first.pds.size(); ++i)
    matrix_cols("S" + std::to_string(i + 1), first.pds[i].matrix());
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << '\n';

  char buf[32];
  auto put = [&](double v, bool lead) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << (lead ? "" : ",") << buf;
  };
  for (const auto& d : draws) {
    bool lead = true;
    for (double v : d.scalars) put(v, std::exchange(lead, false));
    for (const auto& x : d.rects)
      for (double v : x.components()) put(v, std::exchange(lead, false));
    for (const auto& s : d.pds)
      for (double v : s.matrix().components()) put(v, std::exchange(lead, false));
    out << '\n';
  }
}

// Fit data CSV: one replicate per row. Plain numeric columns are read as the
// m = 1 collection F_1..F_k / B_1..B_k; a sample-style header with
// S<g>_<i>_<j>_c<r> column names groups components into hermitian slots.
std::vector<FamilyPoint> read_fit_data(std::istream& in, Algebra algebra) {
  struct Slot { int group, i, j, r; };
  std::vector<Slot> slots;       // per column, when the header names matrix slots
  int group_count = 0, dim = 0;
  std::vector<FamilyPoint> replicates;
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string field;
    bool numeric = true;
    std::vector<double> row;
    while (std::getline(ss, field, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
        if (used != field.size()) throw config_error("non-numeric");
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric && replicates.empty() && !saw_header) {  // header line
      saw_header = true;
      std::stringstream hs(line);
      std::string name;
      bool all_slots = true;
      std::vector<Slot> parsed;
      while (std::getline(hs, name, ',')) {
        Slot s{};
        if (std::sscanf(name.c_str(), "S%d_%d_%d_c%d", &s.group, &s.i, &s.j, &s.r) == 4 &&
            s.group >= 1 && s.r >= 0 && s.r < algebra.beta()) {
          parsed.push_back(s);
          group_count = std::max(group_count, s.group);
          dim = std::max(dim, std::max(s.i, s.j) + 1);
        } else {
          all_slots = false;
          break;
        }
      }
      if (all_slots && !parsed.empty()) slots = std::move(parsed);
      continue;
    }
    if (!numeric) throw config_error("fit data: malformed row: " + line);
    FamilyPoint point;
    if (!slots.empty()) {
      if (row.size() != slots.size())
        throw config_error("fit data: row width does not match header: " + line);
      std::vector<DAMatrix> mats(group_count, DAMatrix(algebra, dim, dim));
      for (std::size_t c = 0; c < row.size(); ++c) {
        const Slot& s = slots[c];
        mats[s.group - 1].at(s.i, s.j, s.r) = row[c];
      }
      for (auto& m : mats) point.pds.emplace_back(m);
    } else {
      for (double v : row) {
        DAMatrix x(algebra, 1, 1);
        x.at(0, 0, 0) = v;
        point.pds.emplace_back(x);
      }
    }
    replicates.push_back(std::move(point));
  }
  return replicates;
}

int run(int argc, char** argv) {
  CLI::App app{"multimatrix variate distributions: densities, sampling, fitting"};
  app.require_subcommand(1);

  // logpdf
  auto* logpdf = app.add_subcommand("logpdf", "evaluate a joint log density");
  FamilyFlags logpdf_flags;
  logpdf_flags.attach(logpdf);
  std::string point_text;
  logpdf->add_option("--point", point_text, "slot=value list (scalars or @file)")
      ->required();

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "draw from a family");
  FamilyFlags sample_flags;
  sample_flags.attach(sample_cmd);
  int count = 1;
  std::uint64_t seed = default_seed();
  std::string out_path, source_kernel;
  sample_cmd->add_option("--count", count, "number of draws");
  sample_cmd->add_option("--seed", seed, "RNG seed (default: DADIST_SEED or 0)");
  sample_cmd->add_option("--out", out_path, "output CSV (default: stdout)");
  sample_cmd->add_option("--source-kernel", source_kernel,
                         "source generator for kernel-free families");

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "maximum-likelihood fit");
  std::string fit_family = "beta2-marginal", fit_data, fit_tie = "shared", fit_out;
  int fit_beta = 4, fit_m = 1, restarts = 16;
  std::uint64_t fit_seed = default_seed();
  fit_cmd->add_option("--family", fit_family, "kernel-free family");
  fit_cmd->add_option("--data", fit_data, "replicate CSV, one collection per row")
      ->required();
  fit_cmd->add_option("--beta", fit_beta, "algebra dimension");
  fit_cmd->add_option("--m", fit_m, "matrix order");
  fit_cmd->add_option("--tie", fit_tie, "'shared' (a1=..=ak) or 'free'");
  fit_cmd->add_option("--restarts", restarts, "optimizer restarts");
  fit_cmd->add_option("--seed", fit_seed, "start-point seed");
  fit_cmd->add_option("--out", fit_out, "result JSON (default: stdout)");

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "run a verification suite");
  std::string suite = "all", validate_out;
  std::uint64_t validate_seed = default_seed();
  validate_cmd->add_option("--suite", suite, "suite name or 'all'");
  validate_cmd->add_option("--seed", validate_seed, "suite seed");
  validate_cmd->add_option("--out", validate_out, "JSON report (default: stdout)");

  // ingest-landmarks
  auto* ingest = app.add_subcommand("ingest-landmarks",
                                    "landmark CSV to quaternion samples");
  std::string ingest_in, ingest_pairs = "default", ingest_mode = "vector", ingest_out;
  ingest->add_option("--input", ingest_in, "landmark CSV")->required();
  ingest->add_option("--pairs", ingest_pairs, "'default' or list like 2:16,3:17,..");
  ingest->add_option("--mode", ingest_mode, "vector | matrix");
  ingest->add_option("--out", ingest_out, "quaternion CSV (default: stdout)");

  // plot-data
  auto* plot = app.add_subcommand("plot-data", "density or profile series CSV");
  FamilyFlags plot_flags;
  plot_flags.attach(plot);
  std::string grid_text, plot_out, profile_data, profile_values;
  int profile_group = -1;
  plot->add_option("--grid", grid_text, "lo:hi:count")->required();
  plot->add_option("--out", plot_out, "output CSV (default: stdout)");
  plot->add_option("--profile-data", profile_data,
                   "replicate CSV: emit (value, loglik) over the grid instead");
  plot->add_option("--profile-group", profile_group, "tied group index to sweep");
  plot->add_option("--profile-values", profile_values,
                   "comma-separated group values held fixed");

  CLI11_PARSE(app, argc, argv);

  std::ostream* os = &std::cout;
  std::ofstream file_out;
  auto select_out = [&](const std::string& path) {
    if (!path.empty()) {
      file_out = open_out(path);
      os = &file_out;
    }
  };

  if (logpdf->parsed()) {
    const FamilyInstance inst = logpdf_flags.build();
    std::printf("%.6f\n", inst.log_density(parse_point(inst, point_text)));
    return 0;
  }

  if (sample_cmd->parsed()) {
    const FamilyInstance inst = sample_flags.build();
    const KernelSpec source =
        source_kernel.empty() ? KernelSpec{} : KernelSpec::parse(source_kernel);
    const auto draws = sample(inst, count, seed, source);
    select_out(out_path);
    write_sample_csv(*os, inst, draws, seed);
    return 0;
  }

  if (fit_cmd->parsed()) {
    std::ifstream in(fit_data);
    if (!in) throw config_error("cannot open data file " + fit_data);
    const Algebra algebra(fit_beta);
    FitProblem problem{parse_family(fit_family), algebra, fit_m, {}, read_fit_data(in, algebra)};
    if (problem.replicates.empty()) throw config_error("fit data: no replicates");
    const int k = static_cast<int>(problem.replicates.front().pds.size());
    if (fit_tie == "shared") problem.tie = tie_shared_dependents(k);
    else if (fit_tie == "free") problem.tie = tie_all_free(k);
    else throw config_error("--tie must be 'shared' or 'free'");
    FitOptions opt;
    opt.restarts = restarts;
    opt.seed = fit_seed;
    const FitResult res = fit(problem, opt);
    std::ostringstream json;
    json.precision(15);
    json << "{\n  \"estimates\": [";
    for (std::size_t i = 0; i < res.estimates.size(); ++i)
      json << (i ? ", " : "") << res.estimates[i];
    json << "],\n  \"loglik\": " << res.log_likelihood
         << ",\n  \"converged\": " << (res.converged ? "true" : "false")
         << ",\n  \"trace\": {\"iterations\": " << res.iterations
         << ", \"restarts\": " << res.restarts << ", \"seed\": " << fit_seed << "}";
    if (!res.standard_errors.empty()) {
      json << ",\n  \"standard_errors\": [";
      for (std::size_t i = 0; i < res.standard_errors.size(); ++i)
        json << (i ? ", " : "") << res.standard_errors[i];
      json << "]";
    }
    json << "\n}\n";
    select_out(fit_out);
    *os << json.str();
    return res.converged ? 0 : 1;
  }

  if (validate_cmd->parsed()) {
    std::vector<SuiteReport> reports;
    if (suite == "all")
      for (const auto& name : suite_names()) reports.push_back(run_suite(name, validate_seed));
    else
      reports.push_back(run_suite(suite, validate_seed));
    select_out(validate_out);
    *os << report_json(reports) << '\n';
    for (const auto& r : reports)
      if (!r.passed()) return 1;
    return 0;
  }

  if (ingest->parsed()) {
    std::ifstream in(ingest_in);
    if (!in) throw config_error("cannot open input file " + ingest_in);
    std::vector<std::pair<int, int>> pairing = default_pairing();
    if (ingest_pairs != "default") {
      pairing.clear();
      std::stringstream ss(ingest_pairs);
      std::string pair;
      while (std::getline(ss, pair, ',')) {
        const auto colon = pair.find(':');
        if (colon == std::string::npos)
          throw config_error("--pairs entries look like first:second");
        pairing.emplace_back(std::stoi(pair.substr(0, colon)),
                             std::stoi(pair.substr(colon + 1)));
      }
    }
    if (ingest_mode != "vector" && ingest_mode != "matrix")
      throw config_error("--mode must be vector or matrix");
    std::vector<QuaternionSample> samples;
    for (const auto& set : read_landmarks_csv(in)) {
      const LandmarkSet fixed = symmetrize(set);
      samples.push_back(build_quaternion_sample(fixed, pairing));
      if (ingest_mode == "matrix") {
        QuaternionSample mirror = build_quaternion_sample(fixed, mirror_pairing());
        mirror.specimen += "/mirror";
        samples.push_back(std::move(mirror));
      }
    }
    select_out(ingest_out);
    write_quaternions_csv(*os, samples);
    return 0;
  }

  if (plot->parsed()) {
    double lo, hi;
    int n;
    if (std::sscanf(grid_text.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || n < 0)
      throw config_error("--grid must be lo:hi:count");
    std::vector<double> grid;
    for (int i = 0; i < n; ++i)
      grid.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    select_out(plot_out);
    if (!profile_data.empty()) {
      const FamilyInstance inst = plot_flags.build();
      std::ifstream in(profile_data);
      if (!in) throw config_error("cannot open data file " + profile_data);
      FitProblem problem{inst.family(), inst.algebra(), inst.m(),
                         tie_shared_dependents(inst.k()), read_fit_data(in, inst.algebra())};
      std::vector<double> held;
      std::stringstream ss(profile_values);
      std::string field;
      while (std::getline(ss, field, ',')) held.push_back(std::stod(field));
      *os << "value,loglik\n";
      for (const auto& [v, ll] : profile(problem, held, profile_group, grid))
        *os << v << ',' << ll << '\n';
      return 0;
    }
    const FamilyInstance inst = plot_flags.build();
    *os << "x,density\n";
    for (double x : grid) {
      char val[32], buf[80];
      std::snprintf(val, sizeof(val), "x=%.17g", x);
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", x,
                    std::exp(inst.log_density(parse_point(inst, val))));
      *os << buf;
    }
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const dadist::domain_error& e) {
    std::cerr << "error: domain: " << e.what() << '\n';
  } catch (const dadist::config_error& e) {
    std::cerr << "error: config: " << e.what() << '\n';
  } catch (const dadist::unsupported_error& e) {
    std::cerr << "error: unsupported: " << e.what() << '\n';
  } catch (const dadist::singular_error& e) {
    std::cerr << "error: singular: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 1;
}
