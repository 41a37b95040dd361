#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace nascd {

/// Real polynomial in s, stored with ascending-degree coefficients:
/// coeffs()[i] multiplies s^i. The leading coefficient is nonzero except for
/// the single-element zero polynomial.
class Polynomial {
 public:
  /// Zero polynomial.
  Polynomial() : coeffs_{0.0} {}

  /// Construct from ascending coefficients; trailing zeros are trimmed.
  explicit Polynomial(std::vector<double> coeffs);

  [[nodiscard]] static Polynomial one() { return Polynomial({1.0}); }
  [[nodiscard]] static Polynomial variable() { return Polynomial({0.0, 1.0}); }

  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] const std::vector<double>& coeffs() const { return coeffs_; }
  /// Coefficient of s^i, zero beyond the stored degree.
  [[nodiscard]] double coeff(std::size_t i) const {
    return i < coeffs_.size() ? coeffs_[i] : 0.0;
  }
  [[nodiscard]] double leading() const { return coeffs_.back(); }
  [[nodiscard]] bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
  [[nodiscard]] double max_abs_coeff() const;

  [[nodiscard]] double operator()(double s) const;
  [[nodiscard]] std::complex<double> operator()(std::complex<double> s) const;

  [[nodiscard]] Polynomial scaled(double factor) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

 private:
  std::vector<double> coeffs_;
};

/// Roots with multiplicity via the companion-matrix eigenvalues, each
/// polished with one Newton step.
[[nodiscard]] std::vector<std::complex<double>> roots(const Polynomial& p);

/// Rational SISO transfer function. Construction cancels near-coincident
/// pole/zero pairs (relative root distance <= 1e-8) and normalizes the
/// denominator to monic form, folding the common scale into the numerator.
class TransferFunction {
 public:
  TransferFunction(Polynomial num, Polynomial den);

  [[nodiscard]] static TransferFunction gain(double k) {
    return {Polynomial({k}), Polynomial::one()};
  }

  [[nodiscard]] const Polynomial& num() const { return num_; }
  [[nodiscard]] const Polynomial& den() const { return den_; }
  [[nodiscard]] int relative_degree() const { return den_.degree() - num_.degree(); }
  [[nodiscard]] bool is_proper() const { return num_.is_zero() || relative_degree() >= 0; }

  /// Product of two transfer functions (re-reduced on construction).
  friend TransferFunction operator*(const TransferFunction& a, const TransferFunction& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
  }

 private:
  Polynomial num_;
  Polynomial den_;
};

/// State-space realization (SISO here, but stored as general matrices).
struct StateSpace {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;
  Eigen::MatrixXd D;
};

/// Frequency response num(jw)/den(jw). Throws InvalidRange for omega < 0 and
/// PoleOnImaginaryAxis when |den(jw)| is below a machine-scaled threshold.
[[nodiscard]] std::complex<double> evaluate(const TransferFunction& tf, double omega);

/// Unity-negative-feedback closed loop P*C / (1 + P*C), reduced and
/// normalized. Throws DegenerateLoop if 1 + P*C is identically zero.
[[nodiscard]] TransferFunction closed_loop(const TransferFunction& plant,
                                           const TransferFunction& controller);

/// Denominator roots with multiplicity (empty for a constant denominator).
[[nodiscard]] std::vector<std::complex<double>> poles(const TransferFunction& tf);

/// True iff every pole lies strictly left of -1e-9 * max(1, |pole|).
/// Marginal poles count as unstable.
[[nodiscard]] bool is_hurwitz_stable(const TransferFunction& tf);

/// Controllable canonical realization. Throws ImproperTransferFunction when
/// the numerator degree exceeds the denominator degree.
[[nodiscard]] StateSpace to_state_space(const TransferFunction& tf);

}  // namespace nascd
