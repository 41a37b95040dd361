#include "nascd/lti.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <Eigen/Eigenvalues>

#include "nascd/errors.hpp"

namespace nascd {

namespace {

constexpr double kCancelTol = 1e-8;  // relative pole/zero cancellation distance

std::vector<double> trim_trailing_zeros(std::vector<double> c) {
  while (c.size() > 1 && c.back() == 0.0) {
    c.pop_back();
  }
  if (c.empty()) {
    c.push_back(0.0);
  }
  return c;
}

/// Rebuild a real polynomial as scale * prod (s - r_i). The root set must be
/// (numerically) closed under conjugation; stray imaginary residue is dropped.
Polynomial from_roots(const std::vector<std::complex<double>>& rs, double scale) {
  std::vector<std::complex<double>> c{{1.0, 0.0}};
  for (const auto& r : rs) {
    std::vector<std::complex<double>> next(c.size() + 1, {0.0, 0.0});
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    out[i] = c[i].real() * scale;
  }
  return Polynomial(std::move(out));
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(trim_trailing_zeros(std::move(coeffs))) {}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (double c : coeffs_) {
    m = std::max(m, std::abs(c));
  }
  return m;
}

double Polynomial::operator()(double s) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * s + *it;
  }
  return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> s) const {
  std::complex<double> acc{0.0, 0.0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * s + *it;
  }
  return acc;
}

Polynomial Polynomial::scaled(double factor) const {
  std::vector<double> c = coeffs_;
  for (double& v : c) {
    v *= factor;
  }
  return Polynomial(std::move(c));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = a.coeff(i) + b.coeff(i);
  }
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = a.coeff(i) - b.coeff(i);
  }
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) {
    return Polynomial();
  }
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return Polynomial(std::move(c));
}

std::vector<std::complex<double>> roots(const Polynomial& p) {
  if (p.is_zero() || p.degree() == 0) {
    return {};
  }
  const int n = p.degree();
  const double lead = p.leading();
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    companion(i, i - 1) = 1.0;
  }
  for (int i = 0; i < n; ++i) {
    companion(i, n - 1) = -p.coeff(static_cast<std::size_t>(i)) / lead;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> rs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    rs[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  }
  // One Newton polish per root to tighten the companion-matrix estimate.
  for (auto& r : rs) {
    std::complex<double> val{0.0, 0.0};
    std::complex<double> der{0.0, 0.0};
    for (int i = n; i >= 0; --i) {
      der = der * r + val;
      val = val * r + p.coeff(static_cast<std::size_t>(i));
    }
    if (std::abs(der) > std::numeric_limits<double>::min()) {
      const auto step = val / der;
      if (std::abs(step) < 1.0 + std::abs(r)) {
        r -= step;
      }
    }
  }
  std::sort(rs.begin(), rs.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return rs;
}

TransferFunction::TransferFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) {
    throw Error("transfer function denominator is the zero polynomial");
  }
  if (!num_.is_zero() && num_.degree() >= 1 && den_.degree() >= 1) {
    auto zeros = roots(num_);
    auto ps = roots(den_);
    std::vector<bool> zero_used(zeros.size(), false);
    std::vector<bool> pole_used(ps.size(), false);
    bool cancelled = false;
    for (std::size_t i = 0; i < zeros.size(); ++i) {
      for (std::size_t j = 0; j < ps.size(); ++j) {
        if (pole_used[j]) {
          continue;
        }
        const double dist = std::abs(zeros[i] - ps[j]);
        const double scale = std::max({1.0, std::abs(zeros[i]), std::abs(ps[j])});
        if (dist <= kCancelTol * scale) {
          zero_used[i] = true;
          pole_used[j] = true;
          cancelled = true;
          break;
        }
      }
    }
    if (cancelled) {
      std::vector<std::complex<double>> kept_zeros;
      std::vector<std::complex<double>> kept_poles;
      for (std::size_t i = 0; i < zeros.size(); ++i) {
        if (!zero_used[i]) kept_zeros.push_back(zeros[i]);
      }
      for (std::size_t j = 0; j < ps.size(); ++j) {
        if (!pole_used[j]) kept_poles.push_back(ps[j]);
      }
      num_ = from_roots(kept_zeros, num_.leading());
      den_ = from_roots(kept_poles, den_.leading());
    }
  }
  const double lead = den_.leading();
  if (lead != 1.0) {
    num_ = num_.scaled(1.0 / lead);
    den_ = den_.scaled(1.0 / lead);
  }
}

std::complex<double> evaluate(const TransferFunction& tf, double omega) {
  if (omega < 0.0) {
    throw InvalidRange("evaluate: omega must be non-negative");
  }
  const std::complex<double> s{0.0, omega};
  const std::complex<double> d = tf.den()(s);
  // Magnitude bound of the denominator evaluation, used to scale the
  // pole-proximity threshold.
  double bound = 0.0;
  double pw = 1.0;
  for (double c : tf.den().coeffs()) {
    bound += std::abs(c) * pw;
    pw *= omega;
  }
  const double threshold =
      64.0 * std::numeric_limits<double>::epsilon() * std::max(bound, std::numeric_limits<double>::min());
  if (std::abs(d) <= threshold) {
    throw PoleOnImaginaryAxis("evaluate: denominator vanishes at j*omega");
  }
  return tf.num()(s) / d;
}

TransferFunction closed_loop(const TransferFunction& plant, const TransferFunction& controller) {
  const Polynomial open_num = plant.num() * controller.num();
  const Polynomial open_den = plant.den() * controller.den();
  const Polynomial loop_den = open_den + open_num;
  const double scale = std::max(open_den.max_abs_coeff(), open_num.max_abs_coeff());
  if (loop_den.max_abs_coeff() <= 1e-12 * std::max(scale, std::numeric_limits<double>::min())) {
    throw DegenerateLoop("closed_loop: 1 + P*C is identically zero");
  }
  return {open_num, loop_den};
}

std::vector<std::complex<double>> poles(const TransferFunction& tf) {
  return roots(tf.den());
}

bool is_hurwitz_stable(const TransferFunction& tf) {
  for (const auto& p : poles(tf)) {
    const double eps = 1e-9 * std::max(1.0, std::abs(p));
    if (p.real() >= -eps) {
      return false;
    }
  }
  return true;
}

StateSpace to_state_space(const TransferFunction& tf) {
  if (!tf.is_proper()) {
    throw ImproperTransferFunction("to_state_space: numerator degree exceeds denominator degree");
  }
  const int n = tf.den().degree();
  StateSpace ss;
  ss.A = Eigen::MatrixXd::Zero(n, n);
  ss.B = Eigen::MatrixXd::Zero(n, 1);
  ss.C = Eigen::MatrixXd::Zero(1, n);
  ss.D = Eigen::MatrixXd::Zero(1, 1);
  // Denominator is monic by construction; direct feedthrough is the
  // numerator coefficient at the shared top degree.
  const double d = tf.num().coeff(static_cast<std::size_t>(n));
  ss.D(0, 0) = d;
  if (n == 0) {
    return ss;
  }
  for (int i = 0; i + 1 < n; ++i) {
    ss.A(i, i + 1) = 1.0;
  }
  for (int i = 0; i < n; ++i) {
    ss.A(n - 1, i) = -tf.den().coeff(static_cast<std::size_t>(i));
    ss.C(0, i) = tf.num().coeff(static_cast<std::size_t>(i)) -
                 d * tf.den().coeff(static_cast<std::size_t>(i));
  }
  ss.B(n - 1, 0) = 1.0;
  return ss;
}

}  // namespace nascd
