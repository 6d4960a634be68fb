#pragma once

/**
 * Sparse multivariate polynomials with rational coefficients, the infix
 * parser, and the rescaled numeric evaluator used by the samplers.
 */

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lipsing/common.hpp"

namespace lipsing {

using Rational = boost::multiprecision::cpp_rational;
using Exponent = std::vector<int>;

class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(std::size_t num_vars) : num_vars_(num_vars) {}

    static Polynomial constant(std::size_t num_vars, const Rational& c);
    static Polynomial variable(std::size_t num_vars, std::size_t index);

    std::size_t num_vars() const { return num_vars_; }
    const std::map<Exponent, Rational>& terms() const { return terms_; }
    std::size_t num_terms() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;

    /// Highest and lowest total degree over nonzero terms.  Throws
    /// ZeroPolynomial on the zero polynomial.
    int degree() const;
    int order() const;
    Rational constant_term() const;

    Polynomial homogeneous_part(int degree) const;
    bool is_homogeneous() const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial scaled(const Rational& c) const;
    Polynomial pow(int exponent) const;
    Polynomial derivative(std::size_t var) const;

    void add_term(const Exponent& e, const Rational& c);

    std::string to_string(const std::vector<std::string>& names) const;

  private:
    std::size_t num_vars_ = 0;
    std::map<Exponent, Rational> terms_;
};

/// Parses one polynomial over the given variables.  `^` binds tightest and
/// takes a non-negative integer literal; unary minus binds looser than `^`;
/// division is allowed by constants only; implicit multiplication is a
/// ParseError.
Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& variables);

struct PolynomialSystem {
    std::string name;
    Field field = Field::Complex;
    Mode mode = Mode::Germ;
    std::vector<std::string> variables;
    std::vector<Polynomial> polynomials;

    std::size_t num_vars() const { return variables.size(); }
    /// Dimension of the real ambient space after realification.
    int real_dim() const;
    /// Number of real equations after realification.
    int real_equations() const;

    /// Throws InvalidSystem if an invariant fails.
    void validate() const;
};

/// Reads a variety file (JSON with `name`, `field`, `variables`,
/// `polynomials`, optional `mode`).  Throws ParseError or InvalidSystem.
PolynomialSystem parse_system(const std::string& text);

/// Builds a system from already split fields.
PolynomialSystem make_system(std::string name, Field field, Mode mode,
                             std::vector<std::string> variables,
                             const std::vector<std::string>& polynomials);

/**
 * Numeric evaluator of the rescaled system p -> f(t p) on realified
 * coordinates.  Each polynomial is divided by the largest |c_a| t^{|a|} so
 * that the normalized coefficients have maximum modulus one; terms are
 * combined in log-magnitude form so that large exponents and scales neither
 * overflow nor produce NaN.
 */
class ScaledSystem {
  public:
    ScaledSystem(const PolynomialSystem& system, double t);

    int real_dim() const { return real_dim_; }
    int num_equations() const { return num_equations_; }
    Field field() const { return field_; }
    double scale() const { return t_; }

    /// Realified normalized values (Re, Im interleaved for complex systems).
    Eigen::VectorXd values(const Point& p) const;
    /// Values and the real Jacobian.
    void evaluate(const Point& p, Eigen::VectorXd& values, Eigen::MatrixXd& jacobian) const;
    /// Largest modulus of the normalized polynomials at p.
    double residual(const Point& p) const;
    /// Sign of the single real equation, evaluated stably (0 when exactly zero).
    int sign(const Point& p) const;

  private:
    struct Term {
        std::vector<int> exponents;
        double log_coeff;   // log of |normalized coefficient|
        double sign;
    };

    std::complex<double> eval_poly(std::size_t k, const std::vector<std::complex<double>>& z,
                                   std::vector<std::complex<double>>* grad) const;
    std::vector<std::complex<double>> to_complex(const Point& p) const;

    Field field_;
    double t_;
    int n_ = 0;
    int real_dim_ = 0;
    int num_equations_ = 0;
    std::vector<std::vector<Term>> polys_;
};

}   // namespace lipsing
