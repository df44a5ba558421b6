#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hypoel {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& q) { return static_cast<double>(q); }

inline Rational rational_pow(const Rational& q, long e) {
    if (e == 0) return Rational(1);
    if (e < 0) {
        if (q == 0) throw std::domain_error("rational_pow: 0 to negative power");
        return Rational(1) / rational_pow(q, -e);
    }
    Rational r(1), base(q);
    unsigned long n = static_cast<unsigned long>(e);
    while (n) {
        if (n & 1u) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

// Gaussian rational a + b i: the coefficient field for all exact symbolic work.
struct GRat {
    Rational re{0};
    Rational im{0};

    GRat() = default;
    GRat(long v) : re(v) {}                     // NOLINT(google-explicit-constructor)
    GRat(Rational r) : re(std::move(r)) {}      // NOLINT(google-explicit-constructor)
    GRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static GRat i() { return GRat(Rational(0), Rational(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }
    bool is_one() const { return re == 1 && im == 0; }

    GRat operator-() const { return GRat(-re, -im); }
    GRat& operator+=(const GRat& o) { re += o.re; im += o.im; return *this; }
    GRat& operator-=(const GRat& o) { re -= o.re; im -= o.im; return *this; }
    GRat& operator*=(const GRat& o) {
        Rational r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    GRat& operator/=(const GRat& o) {
        Rational n = o.re * o.re + o.im * o.im;
        if (n == 0) throw std::domain_error("GRat: division by zero");
        Rational r = (re * o.re + im * o.im) / n;
        im = (im * o.re - re * o.im) / n;
        re = std::move(r);
        return *this;
    }

    friend GRat operator+(GRat a, const GRat& b) { return a += b; }
    friend GRat operator-(GRat a, const GRat& b) { return a -= b; }
    friend GRat operator*(GRat a, const GRat& b) { return a *= b; }
    friend GRat operator/(GRat a, const GRat& b) { return a /= b; }
    friend bool operator==(const GRat& a, const GRat& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const GRat& a, const GRat& b) { return !(a == b); }
    friend bool operator<(const GRat& a, const GRat& b) {
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    }

    GRat conj() const { return GRat(re, -im); }
    std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }
};

inline GRat grat_pow(const GRat& z, long e) {
    if (e < 0) return GRat(1) / grat_pow(z, -e);
    GRat r(1), base(z);
    unsigned long n = static_cast<unsigned long>(e);
    while (n) {
        if (n & 1u) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

inline std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

// Prints "a", "b*i" or "a+b*i"; wraps fractions so output re-parses in the DSL.
inline std::string to_string(const GRat& z) {
    auto rat = [](const Rational& q) {
        std::string s = to_string(q);
        return s;
    };
    if (z.im == 0) return rat(z.re);
    std::string im_part = (z.im == 1) ? "i" : (z.im == -1 ? "-i" : rat(z.im) + "*i");
    if (z.re == 0) return im_part;
    if (z.im > 0) return rat(z.re) + "+" + im_part;
    return rat(z.re) + im_part;  // im_part already carries '-'
}

inline std::ostream& operator<<(std::ostream& os, const GRat& z) { return os << to_string(z); }

}  // namespace hypoel
