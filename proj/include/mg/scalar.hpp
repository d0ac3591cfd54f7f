#pragma once

#include <Eigen/Core>
#include <gmpxx.h>

#include <cctype>
#include <cstdlib>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>

#include "mg/errors.hpp"

namespace Eigen {

// Dense-scalar adaptor so Eigen matrices can carry exact GMP rationals.
template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
    using Real = mpq_class;
    using NonInteger = mpq_class;
    using Nested = mpq_class;
    using Literal = long;

    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }

    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 6,
        AddCost = 80,
        MulCost = 40,
    };
};

}  // namespace Eigen

namespace mg {

/// Exact scalar used in rational mode. Float mode uses plain double.
using Rational = mpq_class;

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rational>;

template <class S>
using DenseMatrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <class S>
using DenseVector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <class S>
constexpr const char* scalar_mode_name() {
    return is_exact_v<S> ? "rational" : "float";
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline mpz_class parse_integer(std::string_view text, std::string_view original) {
    std::string_view t = text;
    if (!t.empty() && (t.front() == '+' || t.front() == '-')) t.remove_prefix(1);
    if (t.empty()) throw ParseError("invalid number: '" + std::string(original) + "'");
    for (char ch : t)
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw ParseError("invalid number: '" + std::string(original) + "'");
    return mpz_class(std::string(text), 10);
}

}  // namespace detail

/// Parses "num/den", integer, or decimal text (optionally with an exponent)
/// into an exact rational. "2.5" becomes 5/2 and "0.1" becomes 1/10.
inline Rational parse_rational(std::string_view text) {
    std::string_view s = detail::trim(text);
    if (s.empty()) throw ParseError("empty number");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        mpz_class num = detail::parse_integer(s.substr(0, slash), text);
        mpz_class den = detail::parse_integer(s.substr(slash + 1), text);
        if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        Rational q(num, den);
        q.canonicalize();
        return q;
    }

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    std::string digits;
    long frac_digits = 0;
    long exponent = 0;
    std::size_t i = 0;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) digits += s[i];
    if (i < s.size() && s[i] == '.') {
        ++i;
        for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
            digits += s[i];
            ++frac_digits;
        }
    }
    if (digits.empty()) throw ParseError("invalid number: '" + std::string(text) + "'");
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::string_view tail = s.substr(i + 1);
        exponent = static_cast<long>(detail::parse_integer(tail, text).get_si());
        i = s.size();
    }
    if (i != s.size()) throw ParseError("invalid number: '" + std::string(text) + "'");

    Rational q(mpz_class(digits, 10));
    long shift = exponent - frac_digits;
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    if (shift >= 0)
        q *= pow10;
    else
        q /= pow10;
    if (negative) q = -q;
    q.canonicalize();
    return q;
}

template <class S>
S parse_scalar(const std::string& text);

template <>
inline Rational parse_scalar<Rational>(const std::string& text) {
    return parse_rational(text);
}

template <>
inline double parse_scalar<double>(const std::string& text) {
    std::string_view s = detail::trim(text);
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        double num = parse_scalar<double>(std::string(s.substr(0, slash)));
        double den = parse_scalar<double>(std::string(s.substr(slash + 1)));
        if (den == 0) throw ParseError("zero denominator in '" + text + "'");
        return num / den;
    }
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(std::string(s), &pos);
    } catch (const std::exception&) {
        throw ParseError("invalid number: '" + text + "'");
    }
    if (pos != s.size()) throw ParseError("invalid number: '" + text + "'");
    return v;
}

/// Rational values print canonically ("5/16", "-3", "2"); doubles print with
/// 15 significant digits.
inline std::string format_scalar(const Rational& v) {
    return v.get_str();
}

inline std::string format_scalar(double v) {
    std::ostringstream os;
    os.precision(15);
    os << v;
    return os.str();
}

inline double to_double(const Rational& v) { return v.get_d(); }
inline double to_double(double v) { return v; }

}  // namespace mg
