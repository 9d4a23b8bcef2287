#include "dadist/sampling.hpp"

#include <cmath>

namespace dadist {
namespace {

DAMatrix scaled(const DAMatrix& x, double c) {
  DAMatrix out = x;
  for (double& v : out.components()) v *= c;
  return out;
}

// X S for Hermitian S of order m, with the scalar shortcut that keeps the
// octonion (m = 1) path away from matmul.
DAMatrix right_mul(const DAMatrix& x, const HermitianPD& s) {
  if (x.cols() == 1) return scaled(x, s.matrix().at(0, 0, 0));
  return matmul(x, s.matrix());
}

HermitianPD inv_sqrt(const HermitianPD& s) { return sqrt_pd(inv_pd(s)); }

DAMatrix vstack(const DAMatrix& a, const DAMatrix& b) {
  DAMatrix out(a.algebra(), a.rows() + b.rows(), a.cols());
  const int beta = a.algebra().beta();
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int r = 0; r < beta; ++r) out.at(i, j, r) = a.at(i, j, r);
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j)
      for (int r = 0; r < beta; ++r) out.at(a.rows() + i, j, r) = b.at(i, j, r);
  return out;
}

}  // namespace

std::vector<int> integer_rows(const FamilyInstance& inst) {
  std::vector<int> n;
  n.reserve(inst.a().size());
  for (double ai : inst.a()) {
    const double ni = 2.0 * ai;
    const double r = std::round(ni);
    if (std::abs(ni - r) > 1e-9 || r < 1.0)
      throw unsupported_error(
          "sampling needs integer n_i = 2 a_i; density evaluation supports "
          "real a_i, the constructive sampler does not");
    n.push_back(static_cast<int>(r));
  }
  return n;
}

SourceDraw sample_source(Algebra algebra, int m, const std::vector<int>& n,
                         const KernelSpec& kernel, Rng& rng) {
  if (n.empty()) throw config_error("sample_source: no blocks requested");
  int total_rows = 0;
  for (int ni : n) {
    if (ni < 1) throw config_error("sample_source: block rows must be positive");
    total_rows += ni;
  }
  const int beta = algebra.beta();
  const double N = static_cast<double>(total_rows) * m * beta;

  // Uniform direction: normalized iid normals (resampled in the measure-zero
  // underflow case), scaled by the kernel's radius.
  std::vector<double> dir(static_cast<std::size_t>(N));
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& d : dir) {
      d = rng.normal();
      norm2 += d * d;
    }
  } while (!(norm2 > 0.0));
  const double scale = sample_radius(kernel, N, beta, rng) / std::sqrt(norm2);

  SourceDraw draw{algebra, m, {}};
  draw.blocks.reserve(n.size());
  std::size_t pos = 0;
  for (int ni : n) {
    DAMatrix x(algebra, ni, m);
    for (double& c : x.components()) c = dir[pos++] * scale;
    draw.blocks.push_back(std::move(x));
  }
  return draw;
}

FamilyPoint derive(const FamilyInstance& inst, const SourceDraw& draw) {
  if (static_cast<int>(draw.blocks.size()) != inst.k() + 1 ||
      draw.m != inst.m() || !(draw.algebra == inst.algebra()))
    throw config_error("derive: draw does not match the instance layout");
  const auto& X = draw.blocks;
  const int kk = inst.k();
  FamilyPoint p;

  auto radial = [&](const DAMatrix& x) {
    const double v = trace_gram(x);
    if (!(v > 0.0)) throw singular_error("derive: zero-radius block");
    return v;
  };

  switch (inst.family()) {
    case FamilyId::gamma_elliptical: {
      p.scalars = {radial(X[0])};
      p.rects.assign(X.begin() + 1, X.end());
      return p;
    }
    case FamilyId::wishart_elliptical: {
      p.pds = {gram(X[0])};
      p.rects.assign(X.begin() + 1, X.end());
      return p;
    }
    case FamilyId::multi_gamma: {
      for (const auto& x : X) p.scalars.push_back(radial(x));
      return p;
    }
    case FamilyId::multi_wishart: {
      for (const auto& x : X) p.pds.push_back(gram(x));
      return p;
    }
    case FamilyId::gamma_pearson7:
    case FamilyId::pearson7_marginal: {
      const double v = radial(X[0]);
      if (inst.family() == FamilyId::gamma_pearson7) p.scalars = {v};
      for (int i = 1; i <= kk; ++i)
        p.rects.push_back(scaled(X[i], 1.0 / std::sqrt(v)));
      return p;
    }
    case FamilyId::wishart_t:
    case FamilyId::pearson7_matric_marginal: {
      HermitianPD v = gram(X[0]);
      const HermitianPD is = inv_sqrt(v);
      for (int i = 1; i <= kk; ++i) p.rects.push_back(right_mul(X[i], is));
      if (inst.family() == FamilyId::wishart_t) p.pds = {std::move(v)};
      return p;
    }
    case FamilyId::gamma_pearson2:
    case FamilyId::pearson2_marginal: {
      const double v = radial(X[0]);
      if (inst.family() == FamilyId::gamma_pearson2) p.scalars = {v};
      for (int i = 1; i <= kk; ++i)
        p.rects.push_back(scaled(X[i], 1.0 / std::sqrt(v + trace_gram(X[i]))));
      return p;
    }
    case FamilyId::wishart_pearson2:
    case FamilyId::pearson2_matric_marginal: {
      for (int i = 1; i <= kk; ++i)
        p.rects.push_back(right_mul(X[i], inv_sqrt(gram(vstack(X[0], X[i])))));
      if (inst.family() == FamilyId::wishart_pearson2) p.pds = {gram(X[0])};
      return p;
    }
    case FamilyId::gamma_beta2:
    case FamilyId::beta2_marginal: {
      const double v = radial(X[0]);
      if (inst.family() == FamilyId::gamma_beta2) p.scalars = {v};
      for (int i = 1; i <= kk; ++i)
        p.pds.push_back(gram(scaled(X[i], 1.0 / std::sqrt(v))));
      return p;
    }
    case FamilyId::wishart_beta2:
    case FamilyId::beta2_matric_marginal: {
      HermitianPD v = gram(X[0]);
      const HermitianPD is = inv_sqrt(v);
      if (inst.family() == FamilyId::wishart_beta2) p.pds.push_back(v);
      for (int i = 1; i <= kk; ++i) p.pds.push_back(gram(right_mul(X[i], is)));
      return p;
    }
    case FamilyId::gamma_beta1:
    case FamilyId::beta1_marginal: {
      const double v = radial(X[0]);
      if (inst.family() == FamilyId::gamma_beta1) p.scalars = {v};
      for (int i = 1; i <= kk; ++i)
        p.pds.push_back(
            gram(scaled(X[i], 1.0 / std::sqrt(v + trace_gram(X[i])))));
      return p;
    }
    case FamilyId::wishart_beta1:
    case FamilyId::beta1_matric_marginal: {
      if (inst.family() == FamilyId::wishart_beta1) p.pds.push_back(gram(X[0]));
      for (int i = 1; i <= kk; ++i)
        p.pds.push_back(
            gram(right_mul(X[i], inv_sqrt(gram(vstack(X[0], X[i]))))));
      return p;
    }
    case FamilyId::gamma_gen_wishart: {
      p.scalars = {radial(X[0])};
      for (int i = 1; i <= kk; ++i) p.pds.push_back(gram(X[i]));
      return p;
    }
    case FamilyId::tri_gamma_p7_p2: {
      const double v0 = radial(X[0]);
      const double v = v0 + trace_gram(X[2]);
      p.scalars = {v};
      p.rects.push_back(scaled(X[1], 1.0 / std::sqrt(v0)));
      p.rects.push_back(scaled(X[2], 1.0 / std::sqrt(v)));
      return p;
    }
    case FamilyId::tri_wishart_p7_p2: {
      HermitianPD v0 = gram(X[0]);
      HermitianPD v = gram(vstack(X[0], X[2]));
      p.rects.push_back(right_mul(X[1], inv_sqrt(v0)));
      p.rects.push_back(right_mul(X[2], inv_sqrt(v)));
      p.pds = {std::move(v)};
      return p;
    }
    case FamilyId::tri_gamma_b2_b1: {
      const double v0 = radial(X[0]);
      const double v = v0 + trace_gram(X[2]);
      p.scalars = {v};
      p.pds.push_back(gram(scaled(X[1], 1.0 / std::sqrt(v0))));
      p.pds.push_back(gram(scaled(X[2], 1.0 / std::sqrt(v))));
      return p;
    }
    case FamilyId::tri_wishart_b2_b1: {
      HermitianPD v0 = gram(X[0]);
      HermitianPD v = gram(vstack(X[0], X[2]));
      p.pds.push_back(v);
      p.pds.push_back(gram(right_mul(X[1], inv_sqrt(v0))));
      p.pds.push_back(gram(right_mul(X[2], inv_sqrt(v))));
      return p;
    }
    case FamilyId::inverse_beta1_mixed: {
      const double v = radial(X[0]);
      for (int i = 1; i <= kk; ++i) {
        HermitianPD b =
            gram(scaled(X[i], 1.0 / std::sqrt(v + trace_gram(X[i]))));
        p.pds.push_back(i <= inst.inverted() ? inv_pd(b) : std::move(b));
      }
      return p;
    }
    case FamilyId::inverse_beta1_matric: {
      for (int i = 1; i <= kk; ++i) {
        HermitianPD b =
            gram(right_mul(X[i], inv_sqrt(gram(vstack(X[0], X[i])))));
        p.pds.push_back(i <= inst.inverted() ? inv_pd(b) : std::move(b));
      }
      return p;
    }
    case FamilyId::scaled_wishart: {
      for (int i = 0; i <= kk; ++i)
        p.pds.push_back(gram(right_mul(X[i], sqrt_pd(inst.sigmas()[i]))));
      return p;
    }
  }
  throw config_error("unknown family id");
}

std::vector<FamilyPoint> sample(const FamilyInstance& inst, int count,
                                std::uint64_t seed,
                                const KernelSpec& source_kernel) {
  if (count < 0) throw config_error("sample: negative count");
  const std::vector<int> n = integer_rows(inst);
  const KernelSpec kernel = inst.kernel() ? *inst.kernel() : source_kernel;
  check_kernel_dimension(kernel,
                         2.0 * inst.a_total() * inst.m() * inst.algebra().beta());
  std::vector<FamilyPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    for (int attempt = 0;; ++attempt) {
      try {
        out.push_back(
            derive(inst, sample_source(inst.algebra(), inst.m(), n, kernel, rng)));
        break;
      } catch (const singular_error&) {
        if (attempt >= 100)
          throw singular_error("sample: persistent rank deficiency");
      }
    }
  }
  return out;
}

}  // namespace dadist
