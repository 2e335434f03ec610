#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace focklab {

using Complex = std::complex<double>;

/// Entire function represented by a finite Taylor expansion c_0..c_N.
/// Immutable after construction; trailing zero coefficients are trimmed.
class EntireFunction {
public:
    EntireFunction() = default;
    explicit EntireFunction(std::vector<Complex> coeffs, std::string label = {});

    /// Parse a function spec: `poly:c0,c1,...`, `monomial:n`,
    /// `exp_trunc:N` (sum z^k/k!, k<=N) or `binom:n` ((1+z)^n).
    /// Throws Error("ParseError") naming the offending token.
    static EntireFunction parse(std::string_view spec);
    static EntireFunction monomial(int n, Complex c = 1.0);

    const std::vector<Complex>& coeffs() const { return coeffs_; }
    const std::string& label() const { return label_; }
    bool is_zero() const { return coeffs_.empty(); }
    /// Degree of the polynomial; -1 for the zero function.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    Complex evaluate(Complex z) const;
    double abs_at(double r, double theta) const;
    Complex coeff(int k) const;

    EntireFunction derivative() const;
    /// Partial sum P_M f (coefficients 0..m retained). Pre: 0 <= m.
    EntireFunction truncate(int m) const;
    /// f - P_m f, the Taylor tail starting at index m+1.
    EntireFunction tail_from(int m) const;

    /// M_2(r, f)^2 = sum_k |c_k|^2 r^{2k}  (Parseval).
    double parseval_m2_squared(double r) const;

    EntireFunction scaled(Complex c) const;
    friend EntireFunction operator+(const EntireFunction& a, const EntireFunction& b);

private:
    std::vector<Complex> coeffs_;
    std::string label_;
};

} // namespace focklab
