#include "dadist/families.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

#include "dadist/specfun.hpp"

namespace dadist {
namespace {

constexpr double kLogPi = 1.1447298858494001741;

struct NameEntry {
  FamilyId id;
  const char* name;
};

constexpr NameEntry kNames[] = {
    {FamilyId::gamma_elliptical, "gamma-elliptical"},
    {FamilyId::wishart_elliptical, "wishart-elliptical"},
    {FamilyId::multi_gamma, "multi-gamma"},
    {FamilyId::multi_wishart, "multi-wishart"},
    {FamilyId::gamma_pearson7, "gamma-pearson7"},
    {FamilyId::wishart_t, "wishart-t"},
    {FamilyId::pearson7_marginal, "pearson7-marginal"},
    {FamilyId::pearson7_matric_marginal, "pearson7-matric-marginal"},
    {FamilyId::gamma_pearson2, "gamma-pearson2"},
    {FamilyId::wishart_pearson2, "wishart-pearson2"},
    {FamilyId::pearson2_marginal, "pearson2-marginal"},
    {FamilyId::pearson2_matric_marginal, "pearson2-matric-marginal"},
    {FamilyId::gamma_beta2, "gamma-beta2"},
    {FamilyId::wishart_beta2, "wishart-beta2"},
    {FamilyId::beta2_marginal, "beta2-marginal"},
    {FamilyId::beta2_matric_marginal, "beta2-matric-marginal"},
    {FamilyId::gamma_beta1, "gamma-beta1"},
    {FamilyId::wishart_beta1, "wishart-beta1"},
    {FamilyId::beta1_marginal, "beta1-marginal"},
    {FamilyId::beta1_matric_marginal, "beta1-matric-marginal"},
    {FamilyId::gamma_gen_wishart, "gamma-gen-wishart"},
    {FamilyId::tri_gamma_p7_p2, "tri-gamma-p7-p2"},
    {FamilyId::tri_wishart_p7_p2, "tri-wishart-p7-p2"},
    {FamilyId::tri_gamma_b2_b1, "tri-gamma-b2-b1"},
    {FamilyId::tri_wishart_b2_b1, "tri-wishart-b2-b1"},
    {FamilyId::inverse_beta1_mixed, "inverse-beta1-mixed"},
    {FamilyId::inverse_beta1_matric, "inverse-beta1-matric"},
    {FamilyId::scaled_wishart, "scaled-wishart"},
};

// Expected slot counts in a FamilyPoint, as a function of k.
struct Layout {
  int scalars;
  int rects;
  int pds;
};

Layout layout_for(FamilyId id, int k) {
  switch (id) {
    case FamilyId::gamma_elliptical:
    case FamilyId::gamma_pearson7:
    case FamilyId::gamma_pearson2:
      return {1, k, 0};
    case FamilyId::wishart_elliptical:
    case FamilyId::wishart_t:
    case FamilyId::wishart_pearson2:
      return {0, k, 1};
    case FamilyId::multi_gamma:
      return {k + 1, 0, 0};
    case FamilyId::multi_wishart:
    case FamilyId::scaled_wishart:
      return {0, 0, k + 1};
    case FamilyId::pearson7_marginal:
    case FamilyId::pearson7_matric_marginal:
    case FamilyId::pearson2_marginal:
    case FamilyId::pearson2_matric_marginal:
      return {0, k, 0};
    case FamilyId::gamma_beta2:
    case FamilyId::gamma_beta1:
    case FamilyId::gamma_gen_wishart:
      return {1, 0, k};
    case FamilyId::wishart_beta2:
    case FamilyId::wishart_beta1:
      return {0, 0, k + 1};
    case FamilyId::beta2_marginal:
    case FamilyId::beta2_matric_marginal:
    case FamilyId::beta1_marginal:
    case FamilyId::beta1_matric_marginal:
    case FamilyId::inverse_beta1_mixed:
    case FamilyId::inverse_beta1_matric:
      return {0, 0, k};
    case FamilyId::tri_gamma_p7_p2:
      return {1, 2, 0};
    case FamilyId::tri_wishart_p7_p2:
      return {0, 2, 1};
    case FamilyId::tri_gamma_b2_b1:
      return {1, 0, 2};
    case FamilyId::tri_wishart_b2_b1:
      return {0, 0, 3};
  }
  throw config_error("unknown family id");
}

// Hermitian value in the complex embedding, with a scalar fast path for
// m == 1 (which also covers the octonion case, where embedding is undefined).
class Herm {
 public:
  static Herm scalar(double s) {
    Herm h;
    h.scalar_ = true;
    h.s_ = s;
    return h;
  }
  static Herm matrix(Eigen::MatrixXcd m) {
    Herm h;
    h.scalar_ = false;
    h.m_ = std::move(m);
    return h;
  }

  bool is_scalar() const { return scalar_; }
  double value() const { return s_; }
  const Eigen::MatrixXcd& mat() const { return m_; }

  Herm operator+(const Herm& o) const {
    return scalar_ ? scalar(s_ + o.s_) : matrix(m_ + o.m_);
  }
  Herm operator-(const Herm& o) const {
    return scalar_ ? scalar(s_ - o.s_) : matrix(m_ - o.m_);
  }
  Herm operator*(const Herm& o) const {
    if (scalar_) return scalar(s_ * o.s_);
    Eigen::MatrixXcd p = m_ * o.m_;
    return matrix(std::move(p));
  }

  Herm inverse() const {
    if (scalar_) {
      if (s_ == 0.0) throw singular_error("singular scalar inverse");
      return scalar(1.0 / s_);
    }
    Eigen::LLT<Eigen::MatrixXcd> llt(m_);
    if (llt.info() != Eigen::Success)
      throw domain_error("matrix inverse requires positive definiteness");
    Eigen::MatrixXcd inv = llt.solve(
        Eigen::MatrixXcd::Identity(m_.rows(), m_.cols()));
    return matrix(std::move(inv));
  }

  double trace(int beta) const {
    if (scalar_) return s_;
    return trace_real_embedded(m_, beta);
  }
  double log_det(int beta) const {
    if (scalar_) {
      if (s_ <= 0.0) throw domain_error("log determinant of non-PD value");
      return std::log(s_);
    }
    return logdet_pd_embedded(m_, beta);
  }
  bool pd() const {
    if (scalar_) return s_ > 0.0;
    return is_pd_embedded(m_);
  }

 private:
  bool scalar_ = true;
  double s_ = 0.0;
  Eigen::MatrixXcd m_;
};

}  // namespace

FamilyId parse_family(const std::string& kebab_name) {
  for (const auto& e : kNames)
    if (kebab_name == e.name) return e.id;
  throw config_error("unknown family name: " + kebab_name);
}

std::string family_name(FamilyId id) {
  for (const auto& e : kNames)
    if (id == e.id) return e.name;
  throw config_error("unknown family id");
}

bool family_is_kernel_dependent(FamilyId id) {
  switch (id) {
    case FamilyId::pearson7_marginal:
    case FamilyId::pearson7_matric_marginal:
    case FamilyId::pearson2_marginal:
    case FamilyId::pearson2_matric_marginal:
    case FamilyId::beta2_marginal:
    case FamilyId::beta2_matric_marginal:
    case FamilyId::beta1_marginal:
    case FamilyId::beta1_matric_marginal:
    case FamilyId::inverse_beta1_mixed:
    case FamilyId::inverse_beta1_matric:
      return false;
    default:
      return true;
  }
}

namespace {

bool family_is_tri(FamilyId id) {
  return id == FamilyId::tri_gamma_p7_p2 || id == FamilyId::tri_wishart_p7_p2 ||
         id == FamilyId::tri_gamma_b2_b1 || id == FamilyId::tri_wishart_b2_b1;
}

bool family_is_inverse(FamilyId id) {
  return id == FamilyId::inverse_beta1_mixed ||
         id == FamilyId::inverse_beta1_matric;
}

bool family_allows_empty_k(FamilyId id) {
  return id == FamilyId::multi_gamma || id == FamilyId::multi_wishart ||
         id == FamilyId::gamma_gen_wishart || id == FamilyId::scaled_wishart ||
         id == FamilyId::gamma_elliptical || id == FamilyId::wishart_elliptical;
}

}  // namespace

double FamilyInstance::a_total() const {
  return std::accumulate(a_.begin(), a_.end(), 0.0);
}

FamilyInstance::FamilyInstance(FamilyId family, Algebra algebra, int m,
                               std::vector<double> a,
                               std::optional<KernelSpec> kernel,
                               std::vector<HermitianPD> sigmas, int inverted)
    : family_(family),
      algebra_(algebra),
      m_(m),
      a_(std::move(a)),
      kernel_(std::move(kernel)),
      sigmas_(std::move(sigmas)),
      inverted_(inverted),
      log_norm_(0.0) {
  const int beta = algebra_.beta();
  if (m_ < 1) throw config_error("matrix order m must be at least 1");
  if (beta == 8 && m_ != 1)
    throw config_error("octonion families require m = 1");
  if (a_.empty()) throw config_error("parameter vector a must not be empty");
  for (double ai : a_)
    if (!(ai > 0.0)) throw config_error("extended parameters must be positive");
  if (family_is_tri(family_) && a_.size() != 3)
    throw config_error("tri families take exactly a = (a0, a1, a2)");
  if (!family_allows_empty_k(family_) && !family_is_tri(family_) &&
      a_.size() < 2)
    throw config_error("family requires at least one dependent argument");

  if (family_is_kernel_dependent(family_)) {
    if (!kernel_) throw config_error("family requires a kernel");
    check_kernel_dimension(*kernel_, 2.0 * a_total() * m_ * beta);
  } else if (kernel_) {
    throw config_error("kernel given for a kernel-free family");
  }

  if (family_ == FamilyId::scaled_wishart) {
    if (sigmas_.size() != a_.size())
      throw config_error("scaled-wishart needs one scale matrix per argument");
    for (const auto& s : sigmas_)
      if (s.order() != m_ || !(s.algebra() == algebra_))
        throw config_error("scale matrix order/algebra mismatch");
  } else if (!sigmas_.empty()) {
    throw config_error("scale matrices only apply to scaled-wishart");
  }

  if (family_is_inverse(family_)) {
    if (inverted_ < 0 || inverted_ > k())
      throw config_error("inverted count must lie in [0, k]");
  } else if (inverted_ != 0) {
    throw config_error("inverted count only applies to inverse families");
  }

  // Point-independent part of the log density. Gamma poles surface here as
  // configuration errors.
  const double mb = static_cast<double>(m_) * beta;
  const double A = a_total();
  const double a0 = a_[0];
  const int kk = k();
  auto L1 = [](double x) { return log_mv_gamma(1, 1, x); };
  auto Lm = [&](double x) { return log_mv_gamma(beta, m_, x); };
  try {
    double c = 0.0;
    switch (family_) {
      case FamilyId::gamma_elliptical:
      case FamilyId::gamma_pearson7:
      case FamilyId::gamma_pearson2:
      case FamilyId::tri_gamma_p7_p2:
        c = a0 * mb * kLogPi - L1(a0 * mb);
        break;
      case FamilyId::wishart_elliptical:
      case FamilyId::wishart_t:
      case FamilyId::wishart_pearson2:
      case FamilyId::tri_wishart_p7_p2:
        c = beta * a0 * m_ * kLogPi - Lm(beta * a0);
        break;
      case FamilyId::multi_gamma:
        for (double ai : a_) c += ai * mb * kLogPi - L1(ai * mb);
        break;
      case FamilyId::multi_wishart:
      case FamilyId::wishart_beta2:
      case FamilyId::wishart_beta1:
      case FamilyId::tri_wishart_b2_b1: {
        c = beta * A * m_ * kLogPi;
        for (double ai : a_) c -= Lm(beta * ai);
        break;
      }
      case FamilyId::pearson7_marginal:
      case FamilyId::pearson2_marginal:
        c = L1(A * mb) - (A - a0) * mb * kLogPi - L1(a0 * mb);
        break;
      case FamilyId::pearson7_matric_marginal:
      case FamilyId::pearson2_matric_marginal:
        c = Lm(beta * A) - beta * (A - a0) * m_ * kLogPi - Lm(beta * a0);
        break;
      case FamilyId::gamma_beta2:
      case FamilyId::gamma_beta1:
      case FamilyId::gamma_gen_wishart:
      case FamilyId::tri_gamma_b2_b1: {
        c = A * mb * kLogPi - L1(a0 * mb);
        for (int i = 1; i <= kk; ++i) c -= Lm(beta * a_[i]);
        break;
      }
      case FamilyId::beta2_marginal:
      case FamilyId::beta1_marginal:
      case FamilyId::inverse_beta1_mixed: {
        c = L1(A * mb) - L1(a0 * mb);
        for (int i = 1; i <= kk; ++i) c -= Lm(beta * a_[i]);
        break;
      }
      case FamilyId::beta2_matric_marginal:
      case FamilyId::beta1_matric_marginal:
      case FamilyId::inverse_beta1_matric: {
        c = Lm(beta * A);
        for (double ai : a_) c -= Lm(beta * ai);
        break;
      }
      case FamilyId::scaled_wishart: {
        c = beta * A * m_ * kLogPi;
        for (std::size_t i = 0; i < a_.size(); ++i)
          c -= Lm(beta * a_[i]) + beta * a_[i] * logdet(sigmas_[i]);
        break;
      }
    }
    log_norm_ = c;
  } catch (const domain_error& e) {
    throw config_error(std::string("parameters hit a gamma pole: ") + e.what());
  }
}

void FamilyInstance::validate_point_shape(const FamilyPoint& x) const {
  const Layout want = layout_for(family_, k());
  if (static_cast<int>(x.scalars.size()) != want.scalars ||
      static_cast<int>(x.rects.size()) != want.rects ||
      static_cast<int>(x.pds.size()) != want.pds) {
    std::ostringstream os;
    os << family_name(family_) << " with k=" << k() << " expects "
       << want.scalars << " scalars, " << want.rects << " rectangles, "
       << want.pds << " PD matrices; got " << x.scalars.size() << "/"
       << x.rects.size() << "/" << x.pds.size();
    throw config_error(os.str());
  }
  // Rectangular slots correspond to integer row counts n_i = 2 a_i; the a
  // index of rect j depends on the layout (slot 0 is never a rectangle).
  for (int j = 0; j < want.rects; ++j) {
    const DAMatrix& r = x.rects[j];
    if (!(r.algebra() == algebra_))
      throw config_error("rectangle algebra mismatch");
    if (r.cols() != m_) throw config_error("rectangle column count must be m");
    const double ni = 2.0 * a_[j + 1];
    const double rni = std::round(ni);
    if (std::abs(ni - rni) > 1e-9 || rni < 1.0)
      throw config_error("rectangular arguments need integer n_i = 2 a_i >= 1");
    if (r.rows() != static_cast<int>(rni))
      throw config_error("rectangle row count must equal n_i = 2 a_i");
  }
  for (const HermitianPD& p : x.pds) {
    if (!(p.algebra() == algebra_)) throw config_error("PD algebra mismatch");
    if (p.order() != m_) throw config_error("PD argument order must be m");
  }
}

std::vector<std::string> FamilyInstance::check_domain(const FamilyPoint& x) const {
  validate_point_shape(x);
  std::vector<std::string> bad;
  const int beta = algebra_.beta();
  auto pd_minus = [&](const HermitianPD& p, bool i_minus_p) -> bool {
    // m == 1: scalar test; otherwise PD in the embedding.
    if (m_ == 1) {
      const double s = p.matrix().at(0, 0, 0);
      return i_minus_p ? (1.0 - s > 0.0) : (s - 1.0 > 0.0);
    }
    Eigen::MatrixXcd e = embed_complex(p);
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(e.rows(), e.cols());
    return is_pd_embedded(i_minus_p ? (id - e).eval() : (e - id).eval());
  };
  auto gram_in_ball = [&](const DAMatrix& r) -> bool {
    if (m_ == 1) return trace_gram(r) < 1.0;
    Eigen::MatrixXcd e = embed_complex(r);
    Eigen::MatrixXcd g = e.adjoint() * e;
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(g.rows(), g.cols());
    return is_pd_embedded((id - g).eval());
  };

  for (double v : x.scalars)
    if (!(v > 0.0)) bad.push_back("positive_scalar");

  switch (family_) {
    case FamilyId::gamma_pearson2:
    case FamilyId::pearson2_marginal:
      for (const auto& r : x.rects)
        if (!(trace_gram(r) < 1.0)) bad.push_back("trace_ball");
      break;
    case FamilyId::wishart_pearson2:
    case FamilyId::pearson2_matric_marginal:
      for (const auto& r : x.rects)
        if (!gram_in_ball(r)) bad.push_back("I_minus_RHR_pd");
      break;
    case FamilyId::gamma_beta1:
    case FamilyId::beta1_marginal:
      for (const auto& b : x.pds)
        if (!(trace_real(b) < 1.0)) bad.push_back("trace_lt_one");
      break;
    case FamilyId::wishart_beta1:
    case FamilyId::beta1_matric_marginal:
      for (std::size_t i = (family_ == FamilyId::wishart_beta1 ? 1 : 0);
           i < x.pds.size(); ++i)
        if (!pd_minus(x.pds[i], true)) bad.push_back("I_minus_B_pd");
      break;
    case FamilyId::tri_gamma_p7_p2:
      if (!(trace_gram(x.rects[1]) < 1.0)) bad.push_back("trace_ball");
      break;
    case FamilyId::tri_wishart_p7_p2:
      if (!gram_in_ball(x.rects[1])) bad.push_back("I_minus_RHR_pd");
      break;
    case FamilyId::tri_gamma_b2_b1:
      if (!(trace_real(x.pds[1]) < 1.0)) bad.push_back("trace_lt_one");
      break;
    case FamilyId::tri_wishart_b2_b1:
      if (!pd_minus(x.pds[2], true)) bad.push_back("I_minus_B_pd");
      break;
    case FamilyId::inverse_beta1_mixed:
      for (int i = 0; i < k(); ++i) {
        if (i < inverted_) {
          const double t = trace_real(inv_pd(x.pds[i]));
          if (!(t < 1.0)) bad.push_back("inv_trace_lt_one");
        } else if (!(trace_real(x.pds[i]) < 1.0)) {
          bad.push_back("trace_lt_one");
        }
      }
      break;
    case FamilyId::inverse_beta1_matric:
      for (int i = 0; i < k(); ++i) {
        if (i < inverted_) {
          if (!pd_minus(x.pds[i], false)) bad.push_back("A_minus_I_pd");
        } else if (!pd_minus(x.pds[i], true)) {
          bad.push_back("I_minus_B_pd");
        }
      }
      break;
    default:
      break;
  }
  (void)beta;
  return bad;
}

double FamilyInstance::log_density(const FamilyPoint& x) const {
  const std::vector<std::string> bad = check_domain(x);
  if (!bad.empty()) {
    std::string msg = "point outside support:";
    for (const auto& b : bad) msg += " " + b;
    throw domain_error(msg);
  }

  const int beta = algebra_.beta();
  const double mb = static_cast<double>(m_) * beta;
  const double A = a_total();
  const double a0 = a_[0];
  const int kk = k();
  const double N = 2.0 * A * mb;  // realified dimension for the kernel

  // Determinant exponents of the underlying Gram laws: the defining power
  // beta*(n_i - m + 1)/2 - 1 with n_i = 2 a_i, and the matching power picked
  // up by the stereographic change of variable.
  auto dexp = [&](double ai) { return beta * (2.0 * ai - m_ + 1) / 2.0 - 1.0; };
  auto dexp_inv = [&](double ai) {
    return beta * (2.0 * ai + m_ - 1) / 2.0 + 1.0;
  };
  auto H = [&](const HermitianPD& p) -> Herm {
    if (m_ == 1) return Herm::scalar(p.matrix().at(0, 0, 0));
    return Herm::matrix(embed_complex(p));
  };
  auto G = [&](const DAMatrix& r) -> Herm {  // R^H R in the embedding
    if (m_ == 1) return Herm::scalar(trace_gram(r));
    Eigen::MatrixXcd e = embed_complex(r);
    Eigen::MatrixXcd g = e.adjoint() * e;
    return Herm::matrix(std::move(g));
  };
  auto I = [&]() -> Herm {
    if (m_ == 1) return Herm::scalar(1.0);
    const int d = beta == 4 ? 2 * m_ : m_;
    return Herm::matrix(Eigen::MatrixXcd::Identity(d, d));
  };
  auto hval = [&](double u) { return log_h(*kernel_, u, N, beta); };

  double lp = log_norm_;
  switch (family_) {
    case FamilyId::gamma_elliptical: {
      double s = x.scalars[0];
      for (const auto& r : x.rects) s += trace_gram(r);
      return lp + (a0 * mb - 1.0) * std::log(x.scalars[0]) + hval(beta * s);
    }
    case FamilyId::wishart_elliptical: {
      const HermitianPD& v = x.pds[0];
      double s = trace_real(v);
      for (const auto& r : x.rects) s += trace_gram(r);
      return lp + dexp(a0) * logdet(v) + hval(beta * s);
    }
    case FamilyId::multi_gamma: {
      double s = 0.0;
      for (int i = 0; i <= kk; ++i) {
        lp += (a_[i] * mb - 1.0) * std::log(x.scalars[i]);
        s += x.scalars[i];
      }
      return lp + hval(beta * s);
    }
    case FamilyId::multi_wishart: {
      double s = 0.0;
      for (int i = 0; i <= kk; ++i) {
        lp += dexp(a_[i]) * logdet(x.pds[i]);
        s += trace_real(x.pds[i]);
      }
      return lp + hval(beta * s);
    }
    case FamilyId::gamma_pearson7: {
      double s = 1.0;
      for (const auto& r : x.rects) s += trace_gram(r);
      return lp + (A * mb - 1.0) * std::log(x.scalars[0]) +
             hval(beta * x.scalars[0] * s);
    }
    case FamilyId::wishart_t: {
      Herm sum = I();
      for (const auto& r : x.rects) sum = sum + G(r);
      const double tr = (H(x.pds[0]) * sum).trace(beta);
      return lp + dexp(A) * logdet(x.pds[0]) + hval(beta * tr);
    }
    case FamilyId::pearson7_marginal: {
      double s = 0.0;
      for (const auto& r : x.rects) s += trace_gram(r);
      return lp - A * mb * std::log1p(s);
    }
    case FamilyId::pearson7_matric_marginal: {
      Herm sum = I();
      for (const auto& r : x.rects) sum = sum + G(r);
      return lp - beta * A * sum.log_det(beta);
    }
    case FamilyId::gamma_pearson2: {
      double s = 1.0;
      for (int i = 0; i < kk; ++i) {
        const double u = trace_gram(x.rects[i]);
        s += u / (1.0 - u);
        lp -= (a_[i + 1] * mb + 1.0) * std::log1p(-u);
      }
      return lp + (A * mb - 1.0) * std::log(x.scalars[0]) +
             hval(beta * x.scalars[0] * s);
    }
    case FamilyId::wishart_pearson2: {
      Herm sum = I();
      for (int i = 0; i < kk; ++i) {
        Herm g = G(x.rects[i]);
        Herm img = I() - g;
        sum = sum + img.inverse() * g;
        lp -= dexp_inv(a_[i + 1]) * img.log_det(beta);
      }
      const double tr = (H(x.pds[0]) * sum).trace(beta);
      return lp + dexp(A) * logdet(x.pds[0]) + hval(beta * tr);
    }
    case FamilyId::pearson2_marginal: {
      double s = 1.0;
      for (int i = 0; i < kk; ++i) {
        const double u = trace_gram(x.rects[i]);
        s += u / (1.0 - u);
        lp -= (a_[i + 1] * mb + 1.0) * std::log1p(-u);
      }
      return lp - A * mb * std::log(s);
    }
    case FamilyId::pearson2_matric_marginal: {
      Herm sum = I();
      for (int i = 0; i < kk; ++i) {
        Herm g = G(x.rects[i]);
        Herm img = I() - g;
        sum = sum + img.inverse() * g;
        lp -= dexp_inv(a_[i + 1]) * img.log_det(beta);
      }
      return lp - beta * A * sum.log_det(beta);
    }
    case FamilyId::gamma_beta2: {
      double s = 1.0;
      for (int i = 0; i < kk; ++i) {
        lp += dexp(a_[i + 1]) * logdet(x.pds[i]);
        s += trace_real(x.pds[i]);
      }
      return lp + (A * mb - 1.0) * std::log(x.scalars[0]) +
             hval(beta * x.scalars[0] * s);
    }
    case FamilyId::wishart_beta2: {
      Herm sum = I();
      for (int i = 1; i <= kk; ++i) {
        lp += dexp(a_[i]) * logdet(x.pds[i]);
        sum = sum + H(x.pds[i]);
      }
      const double tr = (H(x.pds[0]) * sum).trace(beta);
      return lp + dexp(A) * logdet(x.pds[0]) + hval(beta * tr);
    }
    case FamilyId::beta2_marginal: {
      double s = 0.0;
      for (int i = 0; i < kk; ++i) {
        lp += dexp(a_[i + 1]) * logdet(x.pds[i]);
        s += trace_real(x.pds[i]);
      }
      return lp - A * mb * std::log1p(s);
    }
    case FamilyId::beta2_matric_marginal: {
      Herm sum = I();
      for (int i = 0; i < kk; ++i) {
        lp += dexp(a_[i + 1]) * logdet(x.pds[i]);
        sum = sum + H(x.pds[i]);
      }
      return lp - beta * A * sum.log_det(beta);
    }
    case FamilyId::gamma_beta1: {
      double s = 1.0;
      for (int i = 0; i < kk; ++i) {
        const double tb = trace_real(x.pds[i]);
        s += tb / (1.0 - tb);
        lp += dexp(a_[i + 1]) * logdet(x.pds[i]) -
              (a_[i + 1] * mb + 1.0) * std::log1p(-tb);
      }
      return lp + (A * mb - 1.0) * std::log(x.scalars[0]) +
             hval(beta * x.scalars[0] * s);
    }
    case FamilyId::wishart_beta1: {
      Herm sum = I();
      for (int i = 1; i <= kk; ++i) {
        Herm b = H(x.pds[i]);
        Herm imb = I() - b;
        sum = sum + imb.inverse() * b;
        lp += dexp(a_[i]) * logdet(x.pds[i]) -
              dexp_inv(a_[i]) * imb.log_det(beta);
      }
      const double tr = (H(x.pds[0]) * sum).trace(beta);
      return lp + dexp(A) * logdet(x.pds[0]) + hval(beta * tr);
    }
    case FamilyId::beta1_marginal: {
      double s = 1.0;
      for (int i = 0; i < kk; ++i) {
        const double tb = trace_real(x.pds[i]);
        s += tb / (1.0 - tb);
        lp += dexp(a_[i + 1]) * logdet(x.pds[i]) -
              (a_[i + 1] * mb + 1.0) * std::log1p(-tb);
      }
      return lp - A * mb * std::log(s);
    }
    case FamilyId::beta1_matric_marginal: {
      Herm sum = I();
      for (int i = 0; i < kk; ++i) {
        Herm b = H(x.pds[i]);
        Herm imb = I() - b;
        sum = sum + imb.inverse() * b;
        lp += dexp(a_[i + 1]) * logdet(x.pds[i]) -
              dexp_inv(a_[i + 1]) * imb.log_det(beta);
      }
      return lp - beta * A * sum.log_det(beta);
    }
    case FamilyId::gamma_gen_wishart: {
      double s = x.scalars[0];
      for (int i = 0; i < kk; ++i) {
        lp += dexp(a_[i + 1]) * logdet(x.pds[i]);
        s += trace_real(x.pds[i]);
      }
      return lp + (a0 * mb - 1.0) * std::log(x.scalars[0]) + hval(beta * s);
    }
    case FamilyId::tri_gamma_p7_p2: {
      const double ut = trace_gram(x.rects[0]);
      const double ur = trace_gram(x.rects[1]);
      return lp + (A * mb - 1.0) * std::log(x.scalars[0]) +
             ((a_[0] + a_[1]) * mb - 1.0) * std::log1p(-ur) +
             hval(beta * x.scalars[0] * (1.0 + (1.0 - ur) * ut));
    }
    case FamilyId::tri_wishart_p7_p2: {
      Herm v = H(x.pds[0]);
      Herm gt = G(x.rects[0]);
      Herm gr = G(x.rects[1]);
      Herm imr = I() - gr;
      Herm vh = m_ == 1 ? Herm::scalar(std::sqrt(x.pds[0].matrix().at(0, 0, 0)))
                        : Herm::matrix(embed_complex(sqrt_pd(x.pds[0])));
      const double tr =
          v.trace(beta) + (imr * vh * gt * vh).trace(beta);
      return lp + dexp(A) * logdet(x.pds[0]) +
             dexp(a_[0] + a_[1]) * imr.log_det(beta) + hval(beta * tr);
    }
    case FamilyId::tri_gamma_b2_b1: {
      const double tf = trace_real(x.pds[0]);
      const double tb = trace_real(x.pds[1]);
      return lp + (A * mb - 1.0) * std::log(x.scalars[0]) +
             dexp(a_[1]) * logdet(x.pds[0]) + dexp(a_[2]) * logdet(x.pds[1]) +
             ((a_[0] + a_[1]) * mb - 1.0) * std::log1p(-tb) +
             hval(beta * x.scalars[0] * (1.0 + (1.0 - tb) * tf));
    }
    case FamilyId::tri_wishart_b2_b1: {
      Herm v = H(x.pds[0]);
      Herm f = H(x.pds[1]);
      Herm b = H(x.pds[2]);
      Herm imb = I() - b;
      Herm vh = m_ == 1 ? Herm::scalar(std::sqrt(x.pds[0].matrix().at(0, 0, 0)))
                        : Herm::matrix(embed_complex(sqrt_pd(x.pds[0])));
      const double tr = v.trace(beta) + (imb * vh * f * vh).trace(beta);
      return lp + dexp(A) * logdet(x.pds[0]) +
             dexp(a_[0] + a_[1]) * imb.log_det(beta) +
             dexp(a_[1]) * logdet(x.pds[1]) + dexp(a_[2]) * logdet(x.pds[2]) +
             hval(beta * tr);
    }
    case FamilyId::inverse_beta1_mixed: {
      double s = 1.0;
      for (int i = 0; i < kk; ++i) {
        const double ai = a_[i + 1];
        if (i < inverted_) {
          const double t = trace_real(inv_pd(x.pds[i]));
          s += t / (1.0 - t);
          lp += -dexp_inv(ai) * logdet(x.pds[i]) -
                (ai * mb + 1.0) * std::log1p(-t);
        } else {
          const double tb = trace_real(x.pds[i]);
          s += tb / (1.0 - tb);
          lp += dexp(ai) * logdet(x.pds[i]) -
                (ai * mb + 1.0) * std::log1p(-tb);
        }
      }
      return lp - A * mb * std::log(s);
    }
    case FamilyId::inverse_beta1_matric: {
      Herm sum = I();
      for (int i = 0; i < kk; ++i) {
        const double ai = a_[i + 1];
        if (i < inverted_) {
          Herm ami = H(x.pds[i]) - I();
          sum = sum + ami.inverse();
          lp -= dexp_inv(ai) * ami.log_det(beta);
        } else {
          Herm b = H(x.pds[i]);
          Herm imb = I() - b;
          sum = sum + imb.inverse() * b;
          lp += dexp(ai) * logdet(x.pds[i]) -
                dexp_inv(ai) * imb.log_det(beta);
        }
      }
      return lp - beta * A * sum.log_det(beta);
    }
    case FamilyId::scaled_wishart: {
      double tr = 0.0;
      for (int i = 0; i <= kk; ++i) {
        lp += dexp(a_[i]) * logdet(x.pds[i]);
        tr += (H(inv_pd(sigmas_[i])) * H(x.pds[i])).trace(beta);
      }
      return lp + hval(beta * tr);
    }
  }
  throw config_error("unknown family id");
}

std::optional<ClassicalReduction> FamilyInstance::reduce_known() const {
  const int beta = algebra_.beta();
  const bool gaussian =
      kernel_ && kernel_->kind == KernelSpec::Kind::gaussian;
  switch (family_) {
    case FamilyId::multi_gamma:
      if (k() == 0 && gaussian)
        return ClassicalReduction{ClassicalReduction::Kind::gamma,
                                  a_[0] * m_ * beta, 2.0 / beta};
      break;
    case FamilyId::multi_wishart:
      if (k() == 0 && gaussian)
        return ClassicalReduction{ClassicalReduction::Kind::wishart,
                                  2.0 * a_[0], static_cast<double>(m_)};
      break;
    case FamilyId::pearson7_marginal:
      if (k() == 1 && m_ == 1 && beta == 1 && std::abs(a_[1] - 0.5) < 1e-12)
        return ClassicalReduction{ClassicalReduction::Kind::student_t_scaled,
                                  2.0 * a_[0], 1.0 / std::sqrt(2.0 * a_[0])};
      break;
    case FamilyId::beta2_marginal:
    case FamilyId::beta2_matric_marginal:
      if (k() == 1 && m_ == 1)
        return ClassicalReduction{ClassicalReduction::Kind::beta_prime,
                                  beta * a_[1], beta * a_[0]};
      break;
    case FamilyId::beta1_marginal:
    case FamilyId::beta1_matric_marginal:
      if (k() == 1 && m_ == 1)
        return ClassicalReduction{ClassicalReduction::Kind::beta, beta * a_[1],
                                  beta * a_[0]};
      break;
    default:
      break;
  }
  return std::nullopt;
}

}  // namespace dadist
