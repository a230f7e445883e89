#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "critshuffle/int_dist.hpp"

namespace critshuffle {

// Exact rational with 64-bit numerator and positive denominator, always
// reduced. Arithmetic throws std::overflow_error rather than wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num);  // NOLINT: implicit from integers is intended
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const { return den_ == 1; }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;
  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

using LatticePoint = std::vector<Rational>;

LatticePoint integer_point(std::span<const std::int64_t> coords);
std::vector<double> to_doubles(const LatticePoint& p);

// Sparse law on a rational lattice in a fixed dimension. Zero-probability
// points are dropped, so absence means exact zero mass.
class LatticeDist {
 public:
  using Map = std::map<LatticePoint, double>;

  LatticeDist(std::size_t dim, Map points, double tail_mass = 0.0);
  static LatticeDist point_mass(LatticePoint at);

  std::size_t dim() const { return dim_; }
  const Map& points() const { return points_; }
  double tail_mass() const { return tail_mass_; }
  std::size_t size() const { return points_.size(); }
  double pmf(const LatticePoint& at) const;
  double total() const;

 private:
  std::size_t dim_;
  Map points_;
  double tail_mass_;
};

TVInterval tv_distance(const LatticeDist& a, const LatticeDist& b);

// law of f(X); points mapping to the same image are merged exactly
LatticeDist pushforward(const LatticeDist& a, std::size_t out_dim,
                        const std::function<LatticePoint(const LatticePoint&)>& f);
// law of X + Y for independent X ~ a, Y ~ b
LatticeDist convolve(const LatticeDist& a, const LatticeDist& b);
LatticeDist translate(const LatticeDist& a, const LatticePoint& by);
// independent product, with the IntDist coordinate appended last
LatticeDist product(const LatticeDist& a, const IntDist& b);
// marginal of an integer-valued coordinate
IntDist coordinate_marginal(const LatticeDist& a, std::size_t axis);
LatticeDist from_int_dist(const IntDist& a);

}  // namespace critshuffle
