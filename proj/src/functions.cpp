#include "focklab/functions.hpp"

#include <cmath>
#include <sstream>

#include "focklab/errors.hpp"

namespace focklab {

namespace {

std::vector<Complex> trimmed(std::vector<Complex> c) {
    while (!c.empty() && c.back() == Complex(0.0)) c.pop_back();
    return c;
}

double parse_real(const std::string& tok, const std::string& spec) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        raise("ParseError", "bad numeric token '" + tok + "' in function spec '" + spec + "'");
    }
}

long parse_int(const std::string& tok, const std::string& spec) {
    try {
        std::size_t pos = 0;
        long v = std::stol(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        raise("ParseError", "bad integer token '" + tok + "' in function spec '" + spec + "'");
    }
}

} // namespace

EntireFunction::EntireFunction(std::vector<Complex> coeffs, std::string label)
    : coeffs_(trimmed(std::move(coeffs))), label_(std::move(label)) {}

EntireFunction EntireFunction::monomial(int n, Complex c) {
    std::vector<Complex> v(static_cast<std::size_t>(n) + 1, Complex(0.0));
    v.back() = c;
    return EntireFunction(std::move(v), "monomial:" + std::to_string(n));
}

EntireFunction EntireFunction::parse(std::string_view spec_view) {
    const std::string spec(spec_view);
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? std::string() : spec.substr(colon + 1);

    if (head == "poly") {
        std::vector<Complex> c;
        std::stringstream ss(rest);
        std::string tok;
        while (std::getline(ss, tok, ',')) c.emplace_back(parse_real(tok, spec));
        if (c.empty()) raise("ParseError", "empty coefficient list in '" + spec + "'");
        return EntireFunction(std::move(c), spec);
    }
    if (head == "monomial") {
        long n = parse_int(rest, spec);
        if (n < 0) raise("ParseError", "negative degree '" + rest + "' in '" + spec + "'");
        return monomial(static_cast<int>(n));
    }
    if (head == "exp_trunc") {
        long n = parse_int(rest, spec);
        if (n < 0) raise("ParseError", "negative order '" + rest + "' in '" + spec + "'");
        std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
        double log_fact = 0.0;
        for (long k = 0; k <= n; ++k) {
            if (k > 0) log_fact += std::log(static_cast<double>(k));
            c[static_cast<std::size_t>(k)] = std::exp(-log_fact);
        }
        return EntireFunction(std::move(c), spec);
    }
    if (head == "binom") {
        long n = parse_int(rest, spec);
        if (n < 0) raise("ParseError", "negative degree '" + rest + "' in '" + spec + "'");
        std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
        double v = 1.0;
        for (long k = 0; k <= n; ++k) {
            c[static_cast<std::size_t>(k)] = v;
            v = v * static_cast<double>(n - k) / static_cast<double>(k + 1);
        }
        return EntireFunction(std::move(c), spec);
    }
    raise("ParseError", "unknown function family '" + head + "' in '" + spec + "'");
}

Complex EntireFunction::evaluate(Complex z) const {
    Complex acc(0.0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double EntireFunction::abs_at(double r, double theta) const {
    return std::abs(evaluate(std::polar(r, theta)));
}

Complex EntireFunction::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(coeffs_.size())) return Complex(0.0);
    return coeffs_[static_cast<std::size_t>(k)];
}

EntireFunction EntireFunction::derivative() const {
    if (coeffs_.size() <= 1) return EntireFunction({}, label_ + "'");
    std::vector<Complex> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k)
        d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return EntireFunction(std::move(d), label_ + "'");
}

EntireFunction EntireFunction::truncate(int m) const {
    if (m < 0) raise("InvalidArgument", "truncation order must be nonnegative");
    if (m >= degree()) return *this;
    std::vector<Complex> c(coeffs_.begin(), coeffs_.begin() + m + 1);
    return EntireFunction(std::move(c), label_);
}

EntireFunction EntireFunction::tail_from(int m) const {
    if (m >= degree()) return EntireFunction({}, label_);
    std::vector<Complex> c(coeffs_);
    for (int k = 0; k <= m && k < static_cast<int>(c.size()); ++k)
        c[static_cast<std::size_t>(k)] = Complex(0.0);
    return EntireFunction(std::move(c), label_);
}

double EntireFunction::parseval_m2_squared(double r) const {
    // Horner in r^2 over |c_k|^2, highest term first.
    const double r2 = r * r;
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * r2 + std::norm(*it);
    return acc;
}

EntireFunction EntireFunction::scaled(Complex c) const {
    std::vector<Complex> v(coeffs_);
    for (auto& x : v) x *= c;
    return EntireFunction(std::move(v), label_);
}

EntireFunction operator+(const EntireFunction& a, const EntireFunction& b) {
    std::vector<Complex> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Complex(0.0));
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
    return EntireFunction(std::move(c), a.label_ + "+" + b.label_);
}

} // namespace focklab
