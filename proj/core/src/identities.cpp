#include "blockcs/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "blockcs/combinatorics.hpp"
#include "blockcs/error.hpp"
#include "compensated_sum.hpp"

namespace blockcs {

using detail::CompensatedSum;
using detail::CompensatedVectorSum;

namespace {

Eigen::Index common_dimension(std::span<const Vector> vectors) {
  const auto dim = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != dim) throw ParameterError("identity verifier: vectors differ in dimension");
  }
  return dim;
}

// Images Phi[i] x[i] of every block; Phi x_Pi is the sum over i in Pi.
std::vector<Vector> block_images(const SensingMatrix& phi, const BlockSignal& x) {
  if (x.structure() != phi.structure()) throw ParameterError("identity verifier: structures differ");
  std::vector<Vector> images;
  images.reserve(static_cast<std::size_t>(x.num_blocks()));
  for (int i = 0; i < x.num_blocks(); ++i) images.emplace_back(phi.column_block(i) * x.block(i));
  return images;
}

Vector sum_images(const std::vector<Vector>& images, const std::vector<int>& blocks, Eigen::Index rows) {
  Vector v = Vector::Zero(rows);
  for (int i : blocks) v += images[static_cast<std::size_t>(i)];
  return v;
}

}  // namespace

double verify_eq11(std::span<const Vector> vectors, int m) {
  const int s = static_cast<int>(vectors.size());
  if (s < 1 || m < 1 || m > s) throw ParameterError("verify_eq11: need 1 <= m <= s");
  const auto dim = common_dimension(vectors);

  CompensatedVectorSum lhs(dim);
  for_each_combination(s, m, [&](const std::vector<int>& subset) {
    for (int j : subset) lhs.add(vectors[static_cast<std::size_t>(j)]);
  });
  CompensatedVectorSum total(dim);
  for (const auto& v : vectors) total.add(v);
  const Vector rhs = static_cast<double>(binomial(s - 1, m - 1)) * total.value();
  return (lhs.value() - rhs).cwiseAbs().maxCoeff();
}

double verify_eq12(std::span<const Vector> vectors, int m) {
  const int s = static_cast<int>(vectors.size());
  if (s < 2 || m < 2 || m > s) throw ParameterError("verify_eq12: need 2 <= m <= s");
  common_dimension(vectors);

  Matrix inner(s, s);
  for (int j = 0; j < s; ++j) {
    for (int k = 0; k < s; ++k) inner(j, k) = vectors[static_cast<std::size_t>(j)].dot(vectors[static_cast<std::size_t>(k)]);
  }
  CompensatedSum lhs;
  for_each_combination(s, m, [&](const std::vector<int>& subset) {
    for (int j : subset) {
      for (int k : subset) {
        if (j != k) lhs.add(inner(j, k));
      }
    }
  });
  CompensatedSum total;
  for (int j = 0; j < s; ++j) {
    for (int k = 0; k < s; ++k) {
      if (j != k) total.add(inner(j, k));
    }
  }
  const double rhs = static_cast<double>(binomial(s - 2, m - 2)) * total.value();
  return std::abs(lhs.value() - rhs);
}

double verify_eq13(const SensingMatrix& phi, const BlockSignal& x, int m, int n) {
  const int l = x.num_blocks();
  if (l < 2) throw ParameterError("verify_eq13: need at least two blocks");
  if (m < 1 || n < 1 || m > l || n > l) throw ParameterError("verify_eq13: need 1 <= m, n <= l");
  const auto images = block_images(phi, x);
  const auto rows = static_cast<Eigen::Index>(phi.rows());

  const double count_m = static_cast<double>(binomial(l, m));
  const double count_n = static_cast<double>(binomial(l, n));
  CompensatedSum lhs;
  for_each_combination(l, m, [&](const std::vector<int>& pi) {
    lhs.add((l - n) * sum_images(images, pi, rows).squaredNorm() / (m * count_m));
  });
  for_each_combination(l, n, [&](const std::vector<int>& lambda) {
    lhs.add(-(l - m) * sum_images(images, lambda, rows).squaredNorm() / (n * count_n));
  });
  const double rhs = (m - n) * apply(phi, x).squaredNorm() / l;
  return std::abs(lhs.value() - rhs);
}

double verify_eq14(const SensingMatrix& phi, const BlockSignal& x, int m, int n) {
  const int l = x.num_blocks();
  if (m < 1 || n < 1) throw ParameterError("verify_eq14: need m, n >= 1");
  if (l < m + n) throw ParameterError("verify_eq14: need l >= m + n");
  const auto images = block_images(phi, x);
  const auto rows = static_cast<Eigen::Index>(phi.rows());

  // The summand is written over a common denominator so that l = m + n is allowed:
  //   (mnl ||a + b||^2 - (l - m - n) ||n a - m b||^2) / (mnl |J| C(l - m, n)).
  const double mnl = static_cast<double>(m) * n * l;
  const double denom = mnl * static_cast<double>(binomial(l, m)) * static_cast<double>(binomial(l - m, n));
  CompensatedSum lhs;
  std::vector<char> in_pi(static_cast<std::size_t>(l));
  for_each_combination(l, m, [&](const std::vector<int>& pi) {
    std::fill(in_pi.begin(), in_pi.end(), 0);
    for (int i : pi) in_pi[static_cast<std::size_t>(i)] = 1;
    const Vector a = sum_images(images, pi, rows);
    for_each_combination(l, n, [&](const std::vector<int>& lambda) {
      if (std::any_of(lambda.begin(), lambda.end(), [&](int j) { return in_pi[static_cast<std::size_t>(j)] != 0; })) return;
      const Vector b = sum_images(images, lambda, rows);
      lhs.add((mnl * (a + b).squaredNorm() - (l - m - n) * (n * a - m * b).squaredNorm()) / denom);
    });
  });
  const double rhs = static_cast<double>((m + n) * (m + n)) * apply(phi, x).squaredNorm() /
                     (static_cast<double>(l) * l);
  return std::abs(lhs.value() - rhs);
}

namespace {

// Works on the block-norm profile: every term keeps the block directions of x
// and only rescales block norms, so the decomposition is scalar.
struct ScalarTerm {
  double weight;
  Vector norms;
};

std::vector<ScalarTerm> decompose_profile(const Vector& a, double alpha, int s) {
  const int l = static_cast<int>(a.size());
  const double total = a.sum();
  Vector cur = a;
  double remaining = 1.0;
  std::vector<ScalarTerm> terms;

  while (true) {
    std::vector<int> active;
    for (int i = 0; i < l; ++i) {
      if (cur[i] > 0.0) active.push_back(i);
    }
    if (static_cast<int>(active.size()) <= s) {
      terms.push_back({remaining, cur});
      return terms;
    }
    std::stable_sort(active.begin(), active.end(), [&](int p, int q) { return cur[p] > cur[q]; });
    const std::vector<int> head(active.begin(), active.begin() + s);
    const std::vector<int> tail(active.begin() + s, active.end());

    // Extreme point on the head: lift head entries toward alpha until the
    // head carries the full mass `total`, spreading the lift by capacity.
    double head_mass = 0.0, capacity = 0.0;
    for (int i : head) {
      head_mass += cur[i];
      capacity += std::max(alpha - cur[i], 0.0);
    }
    const double lift = std::max(total - head_mass, 0.0);
    const double share = capacity > 0.0 ? std::min(lift / capacity, 1.0) : 0.0;
    Vector u = Vector::Zero(l), c = Vector::Zero(l);
    for (int i : head) {
      c[i] = share * std::max(alpha - cur[i], 0.0);
      u[i] = cur[i] + c[i];
    }

    // cur = lambda u + (1 - lambda) next with mu = lambda / (1 - lambda):
    //   next = cur - mu c on the head, (1 + mu) cur on the tail.
    double mu = std::numeric_limits<double>::infinity();
    int binding = -1;
    for (int i : head) {
      if (c[i] > 0.0 && cur[i] / c[i] < mu) {
        mu = cur[i] / c[i];
        binding = i;
      }
    }
    for (int i : tail) {
      const double grow = alpha / cur[i] - 1.0;
      if (grow < mu) {
        mu = grow;
        binding = i;
      }
    }
    if (!(mu > 0.0) || !std::isfinite(mu)) {
      throw PreconditionError("polytope_decompose: input lies numerically on the polytope boundary");
    }

    const double lambda = mu / (1.0 + mu);
    terms.push_back({remaining * lambda, u});
    remaining *= 1.0 - lambda;

    // Entries that tie with the binding one (up to round-off) are snapped
    // too, otherwise a 1e-16 residue stays active and breaks the next step.
    const double snap = 1e-12 * alpha;
    for (int i : head) {
      cur[i] = std::max(cur[i] - mu * c[i], 0.0);
      if (cur[i] <= snap) cur[i] = 0.0;
    }
    for (int i : tail) {
      cur[i] = std::min(cur[i] * (1.0 + mu), alpha);
      if (cur[i] >= alpha - snap) cur[i] = alpha;
    }
    if (std::find(head.begin(), head.end(), binding) != head.end()) {
      cur[binding] = 0.0;
    } else {
      cur[binding] = alpha;
    }
  }
}

}  // namespace

PolytopeDecomposition polytope_decompose(const BlockSignal& x, double alpha, int s) {
  if (!(alpha > 0.0)) throw ParameterError("polytope_decompose: alpha must be positive");
  if (s < 1) throw ParameterError("polytope_decompose: s must be >= 1");
  constexpr double kSlack = 1e-12;
  const double inf_norm = mixed_norm_2_inf(x);
  const double mixed = mixed_norm_2_1(x);
  if (inf_norm > alpha * (1.0 + kSlack)) {
    throw PreconditionError("polytope_decompose: ||x||_{2,inf} = " + std::to_string(inf_norm) +
                            " exceeds alpha = " + std::to_string(alpha));
  }
  if (mixed > s * alpha * (1.0 + kSlack)) {
    throw PreconditionError("polytope_decompose: ||x||_{2,I} = " + std::to_string(mixed) +
                            " exceeds s * alpha = " + std::to_string(s * alpha));
  }

  PolytopeDecomposition out{{}, alpha, s, x};
  const Vector norms = x.block_norms();
  // Clamp round-off above alpha so the profile is exactly inside the box.
  const Vector profile = norms.cwiseMin(alpha);
  for (auto& term : decompose_profile(profile, alpha, s)) {
    BlockSignal u(x.structure());
    for (int i = 0; i < x.num_blocks(); ++i) {
      if (term.norms[i] > 0.0) u.block(i) = (term.norms[i] / norms[i]) * x.block(i);
    }
    out.terms.push_back({term.weight, std::move(u)});
  }
  return out;
}

PolytopeCheck check_decomposition(const PolytopeDecomposition& dec) {
  const BlockSignal& x = dec.source;
  PolytopeCheck check;
  check.alpha = dec.alpha;
  check.s = dec.s;
  const double target = mixed_norm_2_1(x);
  const BlockSet support = block_support(x);

  CompensatedSum weights;
  CompensatedSum energy;
  CompensatedVectorSum combo(x.coeffs().size());
  for (const auto& term : dec.terms) {
    weights.add(term.lambda);
    combo.add(term.lambda * term.u.coeffs());
    energy.add(term.lambda * term.u.coeffs().squaredNorm());
    if (term.lambda < 0.0 || term.lambda > 1.0) check.weights_in_unit_interval = false;
    check.mixed_norm_error = std::max(check.mixed_norm_error, std::abs(mixed_norm_2_1(term.u) - target));
    check.max_inf_norm = std::max(check.max_inf_norm, mixed_norm_2_inf(term.u));
    check.max_sparsity = std::max(check.max_sparsity, mixed_norm_2_0(term.u));
    for (int i : block_support(term.u)) {
      if (!std::binary_search(support.begin(), support.end(), i)) check.supports_nested = false;
    }
  }
  check.weight_sum_error = std::abs(weights.value() - 1.0);
  check.reconstruction_error =
      dec.terms.empty() ? x.coeffs().cwiseAbs().maxCoeff() : (combo.value() - x.coeffs()).cwiseAbs().maxCoeff();
  check.energy = energy.value();
  return check;
}

bool PolytopeCheck::ok(double tol) const {
  return weights_in_unit_interval && supports_nested && weight_sum_error <= 1e-12 &&
         reconstruction_error <= tol && mixed_norm_error <= tol && max_inf_norm <= alpha + 1e-12 &&
         energy <= s * alpha * alpha + tol && max_sparsity <= s;
}

}  // namespace blockcs
