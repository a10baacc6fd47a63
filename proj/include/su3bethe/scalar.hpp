#ifndef SU3BETHE_SCALAR_HPP
#define SU3BETHE_SCALAR_HPP

#include <complex>
#include <cmath>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "su3bethe/errors.hpp"

namespace su3bethe {

// Two scalar backends drive everything: exact rationals (GMP, kept in lowest
// terms with positive denominator) and complex floating point (double by
// default, long double for ill-conditioned limits).
//
// Rational wraps mpq_class eagerly so that arithmetic results are values of
// the same type; gmpxx expression templates would otherwise break template
// argument deduction across the generic kernels.

class Rational {
  public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}
    Rational(long n) : v_(static_cast<signed long>(n)) {}
    Rational(long long n) : v_(static_cast<signed long>(n)) {}
    Rational(long num, long den) : v_(num, den) {
        if (den == 0) throw Error("rational with zero denominator");
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }
    explicit Rational(const std::string& s) {
        try {
            v_ = mpq_class(s);
        } catch (const std::invalid_argument&) {
            throw Error("cannot parse rational: '" + s + "'");
        }
        if (sgn(v_.get_den()) == 0) throw Error("rational with zero denominator: '" + s + "'");
        v_.canonicalize();
    }

    const mpq_class& raw() const { return v_; }
    double get_d() const { return v_.get_d(); }
    std::string get_str() const { return v_.get_str(); }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_), tag{}); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_), tag{}); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_), tag{}); }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (sgn(b.v_) == 0) throw Error("rational division by zero");
        return Rational(mpq_class(a.v_ / b.v_), tag{});
    }
    Rational operator-() const { return Rational(mpq_class(-v_), tag{}); }

    Rational& operator+=(const Rational& b) { v_ += b.v_; return *this; }
    Rational& operator-=(const Rational& b) { v_ -= b.v_; return *this; }
    Rational& operator*=(const Rational& b) { v_ *= b.v_; return *this; }
    Rational& operator/=(const Rational& b) { *this = *this / b; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    friend int sgn(const Rational& a) { return sgn(a.v_); }
    friend Rational abs(const Rational& a) { return Rational(mpq_class(abs(a.v_)), tag{}); }

  private:
    struct tag {};
    Rational(mpq_class v, tag) : v_(std::move(v)) {} // already canonical
    mpq_class v_;
};

using Rat = Rational;
using Cplx = std::complex<double>;
using CplxL = std::complex<long double>;

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rat> {
    static constexpr bool is_exact = true;
    static Rat zero() { return Rat(0); }
    static Rat one() { return Rat(1); }
    static Rat from_int(long n) { return Rat(n); }
    static bool is_zero(const Rat& x) { return sgn(x) == 0; }
    // Magnitude proxy for pivot selection; exact pivoting only needs nonzero-ness.
    static double approx_abs(const Rat& x) { return std::fabs(x.get_d()); }
    static std::string to_string(const Rat& x) { return x.get_str(); }
};

template <class F>
struct complex_scalar_traits {
    static constexpr bool is_exact = false;
    using C = std::complex<F>;
    static C zero() { return C(0); }
    static C one() { return C(1); }
    static C from_int(long n) { return C(static_cast<F>(n)); }
    static bool is_zero(const C& x) { return x.real() == F(0) && x.imag() == F(0); }
    static double approx_abs(const C& x) { return static_cast<double>(std::abs(x)); }
    static std::string to_string(const C& x) {
        std::ostringstream os;
        os.precision(17);
        os << "[" << static_cast<double>(x.real()) << "," << static_cast<double>(x.imag()) << "]";
        return os.str();
    }
};

template <>
struct scalar_traits<Cplx> : complex_scalar_traits<double> {};
template <>
struct scalar_traits<CplxL> : complex_scalar_traits<long double> {};

template <class S>
concept Scalar = requires(S a, S b) {
    { a + b } -> std::convertible_to<S>;
    { a - b } -> std::convertible_to<S>;
    { a * b } -> std::convertible_to<S>;
    { a / b } -> std::convertible_to<S>;
    { scalar_traits<S>::zero() } -> std::convertible_to<S>;
};

template <Scalar S>
bool is_zero(const S& x) { return scalar_traits<S>::is_zero(x); }

template <Scalar S>
S int_to(long n) { return scalar_traits<S>::from_int(n); }

inline Rat parse_rational(const std::string& s) { return Rat(s); }

inline Cplx to_cplx(const Rat& x) { return Cplx(x.get_d(), 0.0); }

inline std::vector<Cplx> to_cplx(const std::vector<Rat>& xs) {
    std::vector<Cplx> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(to_cplx(x));
    return out;
}

} // namespace su3bethe

#endif
