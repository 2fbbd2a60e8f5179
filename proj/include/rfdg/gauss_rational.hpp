#pragma once

#include <array>
#include <complex>
#include <ostream>
#include <string>

#include <gmpxx.h>

#include "rfdg/error.hpp"

namespace rfdg {

// Exact element of Q(i).
class GaussRational {
 public:
  GaussRational() : re_(0), im_(0) {}
  GaussRational(long re) : re_(re), im_(0) {}  // NOLINT: integer literals are scalars
  GaussRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static GaussRational i() { return GaussRational(mpq_class(0), mpq_class(1)); }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }

  GaussRational conj() const { return GaussRational(re_, -im_); }

  GaussRational operator-() const { return GaussRational(-re_, -im_); }

  GaussRational& operator+=(const GaussRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o) {
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class m = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
  }
  GaussRational& operator/=(const GaussRational& o) {
    if (o.is_zero()) throw Error(ErrorCode::InvalidArgument, "division by zero");
    mpq_class norm = o.re_ * o.re_ + o.im_ * o.im_;
    *this *= o.conj();
    re_ /= norm;
    im_ /= norm;
    return *this;
  }

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }

  bool operator==(const GaussRational& o) const { return re_ == o.re_ && im_ == o.im_; }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  // [re_num, re_den, im_num, im_den] as decimal strings.
  std::array<std::string, 4> to_strings() const {
    return {re_.get_num().get_str(), re_.get_den().get_str(), im_.get_num().get_str(), im_.get_den().get_str()};
  }

  static GaussRational from_strings(const std::array<std::string, 4>& parts) {
    try {
      mpz_class rn(parts[0]), rd(parts[1]), in(parts[2]), id(parts[3]);
      if (rd == 0 || id == 0) throw Error(ErrorCode::SchemaViolation, "zero denominator");
      return GaussRational(mpq_class(rn, rd), mpq_class(in, id));
    } catch (const std::invalid_argument&) {
      throw Error(ErrorCode::SchemaViolation, "coefficient parts must be decimal integers");
    }
  }

  friend std::ostream& operator<<(std::ostream& os, const GaussRational& q) {
    os << q.re_;
    if (sgn(q.im_) != 0) os << (sgn(q.im_) > 0 ? "+" : "") << q.im_ << "i";
    return os;
  }

 private:
  mpq_class re_;
  mpq_class im_;
};

}  // namespace rfdg
