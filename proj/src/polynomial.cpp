#include "lipsing/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "lipsing/errors.hpp"

namespace lipsing {

namespace {

constexpr std::size_t kMaxTerms = 200'000;

int total_degree(const Exponent& e)
{
    int d = 0;
    for (int x : e)
        d += x;
    return d;
}

double log_abs(const Rational& r)
{
    using boost::multiprecision::cpp_int;
    const cpp_int num = boost::multiprecision::abs(boost::multiprecision::numerator(r));
    const cpp_int den = boost::multiprecision::denominator(r);
    auto log_int = [](const cpp_int& v) {
        const std::size_t bits = boost::multiprecision::msb(v) + 1;
        if (bits <= 1000)
            return std::log(v.convert_to<double>());
        const std::size_t shift = bits - 64;
        return std::log(static_cast<cpp_int>(v >> shift).convert_to<double>()) +
               static_cast<double>(shift) * std::log(2.0);
    };
    return log_int(num) - log_int(den);
}

// ---------------------------------------------------------------- parser

class Parser {
  public:
    Parser(const std::string& text, const std::vector<std::string>& vars)
        : text_(text), vars_(vars)
    {
    }

    Polynomial parse()
    {
        skip();
        if (pos_ >= text_.size())
            throw ParseError("empty expression", pos_);
        Polynomial p = expression();
        skip();
        if (pos_ < text_.size())
            throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        return p;
    }

  private:
    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    char peek()
    {
        skip();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool starts_operand(char c)
    {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '(';
    }

    Polynomial expression()
    {
        Polynomial acc = product();
        for (;;) {
            const char c = peek();
            if (c == '+') {
                ++pos_;
                acc = acc + product();
            } else if (c == '-') {
                ++pos_;
                acc = acc - product();
            } else {
                return acc;
            }
            guard(acc);
        }
    }

    Polynomial product()
    {
        Polynomial acc = unary();
        for (;;) {
            const char c = peek();
            if (c == '*') {
                ++pos_;
                acc = acc * unary();
            } else if (c == '/') {
                const std::size_t at = ++pos_;
                Polynomial d = unary();
                if (!d.is_constant() || d.is_zero())
                    throw ParseError("division only by a nonzero constant", at);
                acc = acc.scaled(1 / d.constant_term());
            } else if (starts_operand(c)) {
                throw ParseError("implicit multiplication is not allowed", pos_);
            } else {
                return acc;
            }
            guard(acc);
        }
    }

    Polynomial unary()
    {
        const char c = peek();
        if (c == '-') {
            ++pos_;
            return -unary();
        }
        if (c == '+') {
            ++pos_;
            return unary();
        }
        return power();
    }

    Polynomial power()
    {
        Polynomial base = primary();
        if (peek() != '^')
            return base;
        ++pos_;
        skip();
        const std::size_t at = pos_;
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            throw ParseError("exponent must be a non-negative integer literal", at);
        long long e = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            e = e * 10 + (text_[pos_] - '0');
            if (e > 100000)
                throw ParseError("exponent too large", at);
            ++pos_;
        }
        if (peek() == '^')
            throw ParseError("chained exponents need parentheses", pos_);
        Polynomial out = base.pow(static_cast<int>(e));
        guard(out);
        return out;
    }

    Polynomial primary()
    {
        const char c = peek();
        const std::size_t at = pos_;
        if (c == '(') {
            ++pos_;
            Polynomial inner = expression();
            if (peek() != ')')
                throw ParseError("expected ')'", pos_);
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                digits += text_[pos_++];
            if (pos_ < text_.size() && text_[pos_] == '.')
                throw ParseError("decimal literals are not supported; use a fraction", pos_);
            return Polynomial::constant(vars_.size(), Rational(boost::multiprecision::cpp_int(digits)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                           text_[pos_] == '_'))
                name += text_[pos_++];
            auto it = std::find(vars_.begin(), vars_.end(), name);
            if (it == vars_.end())
                throw ParseError("unknown variable '" + name + "'", at);
            return Polynomial::variable(vars_.size(), static_cast<std::size_t>(it - vars_.begin()));
        }
        if (c == '\0')
            throw ParseError("unexpected end of input", at);
        throw ParseError(std::string("unexpected '") + c + "'", at);
    }

    void guard(const Polynomial& p)
    {
        if (p.num_terms() > kMaxTerms)
            throw InvalidSystem("expansion exceeds " + std::to_string(kMaxTerms) + " terms");
    }

    const std::string& text_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

}   // namespace

// ---------------------------------------------------------------- Polynomial

Polynomial Polynomial::constant(std::size_t num_vars, const Rational& c)
{
    Polynomial p(num_vars);
    p.add_term(Exponent(num_vars, 0), c);
    return p;
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t index)
{
    Polynomial p(num_vars);
    Exponent e(num_vars, 0);
    e[index] = 1;
    p.add_term(e, 1);
    return p;
}

void Polynomial::add_term(const Exponent& e, const Rational& c)
{
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

bool Polynomial::is_constant() const
{
    return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
}

int Polynomial::degree() const
{
    if (terms_.empty())
        throw ZeroPolynomial("degree of the zero polynomial");
    int d = 0;
    for (const auto& [e, c] : terms_)
        d = std::max(d, total_degree(e));
    return d;
}

int Polynomial::order() const
{
    if (terms_.empty())
        throw ZeroPolynomial("order of the zero polynomial");
    int d = std::numeric_limits<int>::max();
    for (const auto& [e, c] : terms_)
        d = std::min(d, total_degree(e));
    return d;
}

Rational Polynomial::constant_term() const
{
    auto it = terms_.find(Exponent(num_vars_, 0));
    return it == terms_.end() ? Rational(0) : it->second;
}

Polynomial Polynomial::homogeneous_part(int degree) const
{
    Polynomial p(num_vars_);
    for (const auto& [e, c] : terms_)
        if (total_degree(e) == degree)
            p.terms_.emplace(e, c);
    return p;
}

Polynomial Polynomial::derivative(std::size_t var) const
{
    if (var >= num_vars_)
        throw InvalidArgument("derivative variable out of range");
    Polynomial p(num_vars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0)
            continue;
        Exponent d = e;
        --d[var];
        p.add_term(d, c * e[var]);
    }
    return p;
}

bool Polynomial::is_homogeneous() const
{
    return terms_.empty() || degree() == order();
}

Polynomial Polynomial::operator+(const Polynomial& o) const
{
    Polynomial p = *this;
    for (const auto& [e, c] : o.terms_)
        p.add_term(e, c);
    return p;
}

Polynomial Polynomial::operator-() const
{
    Polynomial p(num_vars_);
    for (const auto& [e, c] : terms_)
        p.terms_.emplace(e, -c);
    return p;
}

Polynomial Polynomial::operator-(const Polynomial& o) const
{
    return *this + (-o);
}

Polynomial Polynomial::operator*(const Polynomial& o) const
{
    Polynomial p(num_vars_);
    Exponent e(num_vars_);
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            for (std::size_t i = 0; i < num_vars_; ++i)
                e[i] = e1[i] + e2[i];
            p.add_term(e, c1 * c2);
        }
    return p;
}

Polynomial Polynomial::scaled(const Rational& c) const
{
    Polynomial p(num_vars_);
    if (c == 0)
        return p;
    for (const auto& [e, v] : terms_)
        p.terms_.emplace(e, v * c);
    return p;
}

Polynomial Polynomial::pow(int exponent) const
{
    if (exponent < 0)
        throw InvalidArgument("negative exponent");
    // Monomials raise directly; this keeps x^2021 cheap.
    if (terms_.size() == 1) {
        const auto& [e, c] = *terms_.begin();
        Exponent out(e.size());
        for (std::size_t i = 0; i < e.size(); ++i)
            out[i] = e[i] * exponent;
        Rational cc = 1;
        for (int k = 0; k < exponent; ++k)
            cc *= c;
        Polynomial p(num_vars_);
        p.add_term(out, cc);
        return p;
    }
    Polynomial result = constant(num_vars_, 1);
    Polynomial base = *this;
    int k = exponent;
    while (k > 0) {
        if (k & 1)
            result = result * base;
        k >>= 1;
        if (k)
            base = base * base;
        if (result.num_terms() > kMaxTerms || base.num_terms() > kMaxTerms)
            throw InvalidSystem("expansion exceeds " + std::to_string(kMaxTerms) + " terms");
    }
    return result;
}

std::string Polynomial::to_string(const std::vector<std::string>& names) const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    // Graded lexicographic, highest first.
    std::vector<std::pair<Exponent, Rational>> sorted(terms_.begin(), terms_.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        const int da = total_degree(a.first), db = total_degree(b.first);
        return da != db ? da > db : a.first > b.first;
    });
    for (const auto& [e, c] : sorted) {
        Rational mag = c < 0 ? Rational(-c) : c;
        os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
        first = false;
        const bool unit = total_degree(e) > 0 && mag == 1;
        bool wrote = false;
        if (!unit) {
            os << mag.str();
            wrote = true;
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0)
                continue;
            os << (wrote ? "*" : "") << names[i];
            if (e[i] > 1)
                os << "^" << e[i];
            wrote = true;
        }
    }
    return os.str();
}

Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& variables)
{
    return Parser(text, variables).parse();
}

// ---------------------------------------------------------------- systems

int PolynomialSystem::real_dim() const
{
    return static_cast<int>(variables.size()) * (field == Field::Complex ? 2 : 1);
}

int PolynomialSystem::real_equations() const
{
    return static_cast<int>(polynomials.size()) * (field == Field::Complex ? 2 : 1);
}

void PolynomialSystem::validate() const
{
    if (variables.empty())
        throw InvalidSystem("no variables declared");
    for (std::size_t i = 0; i < variables.size(); ++i)
        for (std::size_t j = i + 1; j < variables.size(); ++j)
            if (variables[i] == variables[j])
                throw InvalidSystem("variable '" + variables[i] + "' declared twice");
    bool any = false;
    for (const Polynomial& p : polynomials) {
        if (p.num_vars() != variables.size())
            throw InvalidSystem("polynomial arity differs from the declared variables");
        if (!p.is_zero())
            any = true;
        if (mode == Mode::Germ && p.constant_term() != 0)
            throw InvalidSystem("germ systems need zero constant terms (0 must lie on the set)");
    }
    if (!any)
        throw InvalidSystem("at least one nonzero polynomial is required");
}

PolynomialSystem make_system(std::string name, Field field, Mode mode,
                             std::vector<std::string> variables,
                             const std::vector<std::string>& polynomials)
{
    PolynomialSystem s;
    s.name = std::move(name);
    s.field = field;
    s.mode = mode;
    s.variables = std::move(variables);
    for (const std::string& text : polynomials)
        s.polynomials.push_back(parse_polynomial(text, s.variables));
    s.validate();
    return s;
}

PolynomialSystem parse_system(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed variety file: ") + e.what(), e.byte);
    }
    try {
        const std::string field = j.at("field").get<std::string>();
        if (field != "real" && field != "complex")
            throw InvalidSystem("field must be 'real' or 'complex'");
        const std::string mode = j.value("mode", std::string("germ"));
        if (mode != "germ" && mode != "infinity")
            throw InvalidSystem("mode must be 'germ' or 'infinity'");
        return make_system(j.value("name", std::string("unnamed")),
                           field == "real" ? Field::Real : Field::Complex,
                           mode == "germ" ? Mode::Germ : Mode::Infinity,
                           j.at("variables").get<std::vector<std::string>>(),
                           j.at("polynomials").get<std::vector<std::string>>());
    } catch (const nlohmann::json::exception& e) {
        throw InvalidSystem(std::string("variety file: ") + e.what());
    }
}

// ---------------------------------------------------------------- evaluator

ScaledSystem::ScaledSystem(const PolynomialSystem& system, double t)
    : field_(system.field), t_(t), n_(static_cast<int>(system.num_vars()))
{
    if (!(t > 0.0))
        throw InvalidArgument("scale must be positive");
    real_dim_ = system.real_dim();
    num_equations_ = system.real_equations();
    const double log_t = std::log(t);
    for (const Polynomial& p : system.polynomials) {
        std::vector<Term> terms;
        double top = -kInfinity;
        for (const auto& [e, c] : p.terms()) {
            Term term{e, log_abs(c) + total_degree(e) * log_t, c < 0 ? -1.0 : 1.0};
            top = std::max(top, term.log_coeff);
            terms.push_back(std::move(term));
        }
        for (Term& term : terms)
            term.log_coeff -= top;
        polys_.push_back(std::move(terms));
    }
}

std::vector<std::complex<double>> ScaledSystem::to_complex(const Point& p) const
{
    std::vector<std::complex<double>> z(n_);
    for (int i = 0; i < n_; ++i)
        z[i] = field_ == Field::Complex ? std::complex<double>(p[2 * i], p[2 * i + 1])
                                        : std::complex<double>(p[i], 0.0);
    return z;
}

std::complex<double> ScaledSystem::eval_poly(std::size_t k,
                                             const std::vector<std::complex<double>>& z,
                                             std::vector<std::complex<double>>* grad) const
{
    std::vector<double> la(n_), arg(n_);
    for (int i = 0; i < n_; ++i) {
        la[i] = std::log(std::abs(z[i]));   // -inf at zero
        arg[i] = std::arg(z[i]);
    }
    std::complex<double> value = 0.0;
    if (grad)
        grad->assign(n_, 0.0);
    for (const Term& term : polys_[k]) {
        double L = term.log_coeff;
        double theta = 0.0;
        for (int i = 0; i < n_; ++i)
            if (term.exponents[i] > 0) {
                L += term.exponents[i] * la[i];
                theta += term.exponents[i] * arg[i];
            }
        value += term.sign * std::polar(std::exp(L), theta);
        if (!grad)
            continue;
        for (int j = 0; j < n_; ++j) {
            const int aj = term.exponents[j];
            if (aj == 0)
                continue;
            double Lj = term.log_coeff + std::log(static_cast<double>(aj));
            for (int i = 0; i < n_; ++i) {
                const int ai = term.exponents[i] - (i == j ? 1 : 0);
                if (ai > 0)
                    Lj += ai * la[i];
            }
            (*grad)[j] += term.sign * std::polar(std::exp(Lj), theta - arg[j]);
        }
    }
    return value;
}

Eigen::VectorXd ScaledSystem::values(const Point& p) const
{
    auto z = to_complex(p);
    Eigen::VectorXd out(num_equations_);
    for (std::size_t k = 0; k < polys_.size(); ++k) {
        const auto v = eval_poly(k, z, nullptr);
        if (field_ == Field::Complex) {
            out[2 * k] = v.real();
            out[2 * k + 1] = v.imag();
        } else {
            out[k] = v.real();
        }
    }
    return out;
}

void ScaledSystem::evaluate(const Point& p, Eigen::VectorXd& values,
                            Eigen::MatrixXd& jacobian) const
{
    auto z = to_complex(p);
    values.resize(num_equations_);
    jacobian.setZero(num_equations_, real_dim_);
    std::vector<std::complex<double>> g;
    for (std::size_t k = 0; k < polys_.size(); ++k) {
        const auto v = eval_poly(k, z, &g);
        if (field_ == Field::Complex) {
            values[2 * k] = v.real();
            values[2 * k + 1] = v.imag();
            for (int j = 0; j < n_; ++j) {
                // Cauchy-Riemann: d/dx = f', d/dy = i f'.
                jacobian(2 * k, 2 * j) = g[j].real();
                jacobian(2 * k, 2 * j + 1) = -g[j].imag();
                jacobian(2 * k + 1, 2 * j) = g[j].imag();
                jacobian(2 * k + 1, 2 * j + 1) = g[j].real();
            }
        } else {
            values[k] = v.real();
            for (int j = 0; j < n_; ++j)
                jacobian(k, j) = g[j].real();
        }
    }
}

double ScaledSystem::residual(const Point& p) const
{
    auto z = to_complex(p);
    double r = 0.0;
    for (std::size_t k = 0; k < polys_.size(); ++k)
        r = std::max(r, std::abs(eval_poly(k, z, nullptr)));
    return r;
}

int ScaledSystem::sign(const Point& p) const
{
    // Sum relative to the dominant term so tiny magnitudes keep their sign.
    auto z = to_complex(p);
    std::vector<double> L;
    std::vector<double> s;
    double top = -kInfinity;
    for (const Term& term : polys_[0]) {
        double l = term.log_coeff;
        double sg = term.sign;
        bool zero = false;
        for (int i = 0; i < n_; ++i) {
            const int a = term.exponents[i];
            if (a == 0)
                continue;
            if (z[i].real() == 0.0) {
                zero = true;
                break;
            }
            l += a * std::log(std::abs(z[i].real()));
            if (z[i].real() < 0 && (a % 2 == 1))
                sg = -sg;
        }
        if (zero)
            continue;
        L.push_back(l);
        s.push_back(sg);
        top = std::max(top, l);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < L.size(); ++i)
        sum += s[i] * std::exp(L[i] - top);
    return sum > 0 ? 1 : (sum < 0 ? -1 : 0);
}

}   // namespace lipsing
