#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace zernike {

// Parses "p", "-p" or "p/q" into an exact rational. Anything else (in
// particular decimal or scientific notation) is rejected.
inline mpq_class parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t slash = std::string::npos;
  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (c == '/') {
      if (slash != std::string::npos || k == 0 || k + 1 == text.size())
        throw std::invalid_argument("malformed rational literal: " + text);
      slash = k;
    } else if (c == '-') {
      if (k != 0 && k != slash + 1)
        throw std::invalid_argument("malformed rational literal: " + text);
    } else if (c < '0' || c > '9') {
      throw std::invalid_argument("rational literal must be p or p/q, got: " + text);
    }
  }
  mpq_class value(text);
  if (value.get_den() == 0) throw std::invalid_argument("zero denominator in: " + text);
  value.canonicalize();
  return value;
}

// Complex number with exact rational real and imaginary parts. GMP keeps
// each component in lowest terms with positive denominator.
class GaussianRational {
 public:
  GaussianRational() : re_(0), im_(0) {}
  GaussianRational(int v) : re_(v), im_(0) {}
  GaussianRational(long v) : re_(v), im_(0) {}
  GaussianRational(mpq_class re) : re_(std::move(re)), im_(0) {}
  GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {}

  static GaussianRational i() { return {mpq_class(0), mpq_class(1)}; }

  static GaussianRational rational(long num, long den) {
    if (den == 0) throw std::domain_error("zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return GaussianRational(q);
  }

  // c * i^k, exact.
  static GaussianRational i_power(unsigned k) {
    switch (k % 4) {
      case 0: return GaussianRational(1);
      case 1: return i();
      case 2: return GaussianRational(-1);
      default: return -i();
    }
  }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return re_ == 0 && im_ == 0; }
  bool is_one() const { return re_ == 1 && im_ == 0; }
  bool is_real() const { return im_ == 0; }

  GaussianRational operator-() const {
    return {mpq_class(-re_), mpq_class(-im_)};
  }

  GaussianRational conj() const { return {re_, mpq_class(-im_)}; }

  mpq_class norm() const { return mpq_class(re_ * re_ + im_ * im_); }

  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }

  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }

  GaussianRational& operator*=(const GaussianRational& o) {
    mpq_class re(re_ * o.re_ - im_ * o.im_);
    mpq_class im(re_ * o.im_ + im_ * o.re_);
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }

  GaussianRational& operator/=(const GaussianRational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    const mpq_class n = o.norm();
    mpq_class re((re_ * o.re_ + im_ * o.im_) / n);
    mpq_class im((im_ * o.re_ - re_ * o.im_) / n);
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  GaussianRational pow(unsigned k) const {
    GaussianRational acc(1);
    GaussianRational base = *this;
    while (k > 0) {
      if (k & 1u) acc *= base;
      base *= base;
      k >>= 1u;
    }
    return acc;
  }

  double real_to_double() const {
    if (!is_real()) throw std::domain_error("value is not real");
    return re_.get_d();
  }

  // Plain text form "a/b+c/d*i" with pure-real and pure-imaginary cases
  // collapsed; used by the canonical serializer and reports.
  std::string str() const {
    if (is_zero()) return "0";
    std::string out;
    if (re_ != 0) out += re_.get_str();
    if (im_ != 0) {
      if (im_ == 1) {
        out += out.empty() ? "i" : "+i";
      } else if (im_ == -1) {
        out += "-i";
      } else {
        std::string t = im_.get_str();
        if (!out.empty() && t[0] != '-') out += '+';
        out += t + "*i";
      }
    }
    return out;
  }

  friend std::ostream& operator<<(std::ostream& os, const GaussianRational& v) {
    return os << v.str();
  }

 private:
  mpq_class re_;
  mpq_class im_;
};

inline GaussianRational operator*(long a, const GaussianRational& b) {
  return GaussianRational(a) * b;
}

}  // namespace zernike
