#include "dadist/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <vector>

#include "dadist/specfun.hpp"

namespace dadist {

namespace {

constexpr double kLogPi = 1.1447298858494001741;

double parse_double(const std::string& s, const std::string& where) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw config_error("kernel parse: bad number in " + where);
  }
  if (pos != s.size()) throw config_error("kernel parse: trailing junk in " + where);
  return v;
}

}  // namespace

KernelSpec KernelSpec::parse(const std::string& text) {
  if (text == "gaussian") return KernelSpec{};
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string::npos) {
    std::stringstream args(text.substr(colon + 1));
    std::string item;
    while (std::getline(args, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0)
        throw config_error("kernel parse: expected key=value, got '" + item + "'");
      if (!kv.emplace(item.substr(0, eq), parse_double(item.substr(eq + 1), text)).second)
        throw config_error("kernel parse: duplicate key in '" + text + "'");
    }
  }
  if (name == "pearson7") {
    if (kv.size() != 2 || !kv.count("q") || !kv.count("s"))
      throw config_error("pearson7 kernel needs exactly q=<f>,s=<f>");
    KernelSpec spec;
    spec.kind = Kind::pearson7;
    spec.q = kv["q"];
    spec.s = kv["s"];
    if (!(spec.s > 0.0)) throw config_error("pearson7 kernel: s must be positive");
    if (!(spec.q > 0.0)) throw config_error("pearson7 kernel: q must be positive");
    return spec;
  }
  if (name == "kotz") {
    if (kv.size() != 1 || !kv.count("t")) throw config_error("kotz kernel needs exactly t=<f>");
    KernelSpec spec;
    spec.kind = Kind::kotz;
    spec.t = kv["t"];
    return spec;
  }
  throw config_error("unknown kernel '" + text + "'");
}

std::string KernelSpec::to_string() const {
  char buf[64];
  switch (kind) {
    case Kind::gaussian:
      return "gaussian";
    case Kind::pearson7:
      std::snprintf(buf, sizeof buf, "pearson7:q=%g,s=%g", q, s);
      return buf;
    case Kind::kotz:
      std::snprintf(buf, sizeof buf, "kotz:t=%g", t);
      return buf;
  }
  return "?";
}

void check_kernel_dimension(const KernelSpec& spec, double N) {
  if (!(N > 0.0)) throw config_error("kernel: realified dimension must be positive");
  if (spec.kind == KernelSpec::Kind::pearson7 && !(spec.q > N / 2.0))
    throw config_error("pearson7 kernel: q must exceed N/2 for realified dimension N");
  if (spec.kind == KernelSpec::Kind::kotz && !(N / 2.0 + spec.t - 1.0 > 0.0))
    throw config_error("kotz kernel: needs t > 1 - N/2");
}

double log_h(const KernelSpec& spec, double u, double N, int beta) {
  if (u < 0.0) throw domain_error("log_h: u must be nonnegative");
  const double lb = std::log(static_cast<double>(beta));
  switch (spec.kind) {
    case KernelSpec::Kind::gaussian:
      return -N / 2.0 * (std::log(2.0 * std::numbers::pi) - lb) - u / 2.0;
    case KernelSpec::Kind::pearson7:
      return N / 2.0 * (lb - std::log(spec.s) - kLogPi) + std::lgamma(spec.q) -
             std::lgamma(spec.q - N / 2.0) - spec.q * std::log1p(u / spec.s);
    case KernelSpec::Kind::kotz: {
      const double logc = std::lgamma(N / 2.0) - N / 2.0 * kLogPi - (spec.t - 1.0) * lb -
                          std::lgamma(N / 2.0 + spec.t - 1.0) +
                          (N / 2.0 + spec.t - 1.0) * std::log(beta / 2.0);
      if (spec.t == 1.0) return logc - u / 2.0;
      // u^{t-1} at u = 0: density vanishes for t > 1 and diverges for t < 1.
      if (u == 0.0)
        return spec.t > 1.0 ? -std::numeric_limits<double>::infinity()
                            : std::numeric_limits<double>::infinity();
      return logc + (spec.t - 1.0) * std::log(u) - u / 2.0;
    }
  }
  throw config_error("log_h: unreachable kernel kind");
}

double log_radial_normalizer(const KernelSpec& spec, double a, double N) {
  if (!(a > 0.0)) throw domain_error("log_radial_normalizer: a must be positive");
  check_kernel_dimension(spec, N);
  return -N / 2.0 * std::log(a) + std::lgamma(N / 2.0) - N / 2.0 * kLogPi;
}

namespace {

// Tabulated CDF for the kotz radial law in w = beta r^2, whose density is
// proportional to w^{N/2-1} h(w). Nodes carry exact-enough cumulative values
// from cumulative Simpson refinement; inversion bisects within a cell.
class KotzRadialTable {
 public:
  KotzRadialTable(double N, double t) : shape_(N / 2.0 + t - 1.0) {
    // Gamma(shape, 2) quantiles bound the support; pad the tail to 1e-12.
    double hi = 2.0 * (shape_ + 10.0 * std::sqrt(shape_) + 40.0);
    while (1.0 - reg_inc_gamma(shape_, hi / 2.0) > 1e-12) hi *= 1.5;
    const int M = 4096;
    w_.resize(M + 1);
    cdf_.resize(M + 1);
    // Power spacing clusters nodes near zero where the density peaks.
    for (int i = 0; i <= M; ++i) {
      const double f = static_cast<double>(i) / M;
      w_[i] = hi * f * f;
    }
    cdf_[0] = 0.0;
    for (int i = 1; i <= M; ++i) cdf_[i] = cdf_[i - 1] + simpson(w_[i - 1], w_[i]);
    const double total = cdf_[M];
    for (double& c : cdf_) c /= total;
    log_norm_ = std::log(total);
  }

  double invert(double p) const {
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), p);
    int idx = static_cast<int>(it - cdf_.begin());
    idx = std::clamp(idx, 1, static_cast<int>(cdf_.size()) - 1);
    double lo = w_[idx - 1], hi = w_[idx];
    double clo = cdf_[idx - 1];
    // Bisection on the in-cell cumulative integral; cells are narrow, so one
    // Simpson panel per evaluation keeps the CDF error far below 1e-8.
    for (int iter = 0; iter < 60; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const double c = clo + simpson(w_[idx - 1], mid) * std::exp(-log_norm_);
      if (std::abs(c - p) < 1e-9) return mid;
      (c < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

 private:
  double density(double w) const {
    // Unnormalized: w^{shape-1} e^{-w/2}; the table normalizes itself.
    if (w <= 0.0) return shape_ > 1.0 ? 0.0 : (shape_ == 1.0 ? 1.0 : 1e300);
    return std::exp((shape_ - 1.0) * std::log(w) - w / 2.0);
  }

  double simpson(double a, double b) const {
    return simpson_rec(a, b, density(a), density(0.5 * (a + b)), density(b), 1e-12, 20);
  }

  double simpson_rec(double a, double b, double fa, double fm, double fb, double tol,
                     int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = density(lm), frm = density(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return simpson_rec(a, m, fa, flm, fm, tol / 2.0, depth - 1) +
           simpson_rec(m, b, fm, frm, fb, tol / 2.0, depth - 1);
  }

  double shape_;
  double log_norm_ = 0.0;
  std::vector<double> w_;
  std::vector<double> cdf_;
};

const KotzRadialTable& kotz_table(double N, double t) {
  static std::mutex mu;
  static std::map<std::pair<double, double>, KotzRadialTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({N, t});
  if (it == cache.end()) it = cache.emplace(std::make_pair(N, t), KotzRadialTable(N, t)).first;
  return it->second;
}

}  // namespace

double sample_radius(const KernelSpec& spec, double N, int beta, Rng& rng) {
  check_kernel_dimension(spec, N);
  switch (spec.kind) {
    case KernelSpec::Kind::gaussian:
      return std::sqrt(rng.gamma(N / 2.0, 2.0 / beta));
    case KernelSpec::Kind::pearson7: {
      // r^2 = (s/beta) chi2_N / chi2_{2q-N}: the scale mixture of the gaussian
      // radius that produces the (1 + beta r^2/s)^{-q} profile.
      const double num = rng.chi2(N);
      const double den = rng.chi2(2.0 * spec.q - N);
      return std::sqrt(spec.s / beta * num / den);
    }
    case KernelSpec::Kind::kotz: {
      const double w = kotz_table(N, spec.t).invert(rng.uniform());
      return std::sqrt(w / beta);
    }
  }
  throw config_error("sample_radius: unreachable kernel kind");
}

}  // namespace dadist
