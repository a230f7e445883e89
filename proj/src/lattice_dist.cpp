#include "critshuffle/lattice_dist.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace critshuffle {

namespace {

__extension__ typedef __int128 i128;

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("Rational: 64-bit overflow");
  return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make_reduced(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(narrow(num), narrow(den));
}

constexpr double kLatticeTol = 1e-10;

}  // namespace

Rational::Rational(std::int64_t num) : num_(num), den_(1) {}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  if (den < 0) {
    num = narrow(-static_cast<i128>(num));
    den = narrow(-static_cast<i128>(den));
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.den_ == 1 && b.den_ == 1) return Rational(narrow(static_cast<i128>(a.num_) + b.num_));
  return make_reduced(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                      static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return make_reduced(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
  return make_reduced(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = narrow(-static_cast<i128>(num_));
  r.den_ = den_;
  return r;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return a.num_ <=> b.num_;
  const i128 lhs = static_cast<i128>(a.num_) * b.den_;
  const i128 rhs = static_cast<i128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

LatticePoint integer_point(std::span<const std::int64_t> coords) {
  LatticePoint p;
  p.reserve(coords.size());
  for (auto c : coords) p.emplace_back(c);
  return p;
}

std::vector<double> to_doubles(const LatticePoint& p) {
  std::vector<double> out;
  out.reserve(p.size());
  for (const auto& r : p) out.push_back(r.to_double());
  return out;
}

LatticeDist::LatticeDist(std::size_t dim, Map points, double tail_mass)
    : dim_(dim), tail_mass_(tail_mass) {
  if (!(tail_mass >= 0.0) || tail_mass > 1.0) throw std::invalid_argument("LatticeDist: tail_mass outside [0,1]");
  double sum = 0.0;
  for (auto& [pt, pr] : points) {
    if (pt.size() != dim) throw std::invalid_argument("LatticeDist: point of wrong dimension");
    if (!(pr >= 0.0) || pr > 1.0 + kLatticeTol) throw std::invalid_argument("LatticeDist: probability outside [0,1]");
    sum += pr;
  }
  if (std::abs(sum + tail_mass - 1.0) > kLatticeTol)
    throw std::invalid_argument("LatticeDist: total + tail_mass differs from 1 by " +
                                std::to_string(sum + tail_mass - 1.0));
  for (auto it = points.begin(); it != points.end();) {
    if (it->second == 0.0)
      it = points.erase(it);
    else
      ++it;
  }
  points_ = std::move(points);
}

LatticeDist LatticeDist::point_mass(LatticePoint at) {
  const std::size_t dim = at.size();
  Map m;
  m.emplace(std::move(at), 1.0);
  return LatticeDist(dim, std::move(m), 0.0);
}

double LatticeDist::pmf(const LatticePoint& at) const {
  auto it = points_.find(at);
  return it == points_.end() ? 0.0 : it->second;
}

double LatticeDist::total() const {
  double s = 0.0;
  for (const auto& kv : points_) s += kv.second;
  return s;
}

TVInterval tv_distance(const LatticeDist& a, const LatticeDist& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("tv_distance: dimension mismatch");
  double s = 0.0;
  auto ia = a.points().begin();
  auto ib = b.points().begin();
  while (ia != a.points().end() || ib != b.points().end()) {
    if (ib == b.points().end() || (ia != a.points().end() && ia->first < ib->first)) {
      s += ia->second;
      ++ia;
    } else if (ia == a.points().end() || ib->first < ia->first) {
      s += ib->second;
      ++ib;
    } else {
      s += std::abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  const double lower = std::min(1.0, 0.5 * s);
  return {lower, std::min(1.0, lower + a.tail_mass() + b.tail_mass())};
}

LatticeDist pushforward(const LatticeDist& a, std::size_t out_dim,
                        const std::function<LatticePoint(const LatticePoint&)>& f) {
  LatticeDist::Map out;
  for (const auto& [pt, pr] : a.points()) out[f(pt)] += pr;
  return LatticeDist(out_dim, std::move(out), a.tail_mass());
}

LatticeDist convolve(const LatticeDist& a, const LatticeDist& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("convolve: dimension mismatch");
  LatticeDist::Map out;
  for (const auto& [pa, wa] : a.points()) {
    for (const auto& [pb, wb] : b.points()) {
      LatticePoint s = pa;
      for (std::size_t i = 0; i < s.size(); ++i) s[i] += pb[i];
      out[std::move(s)] += wa * wb;
    }
  }
  return LatticeDist(a.dim(), std::move(out), std::min(1.0, a.tail_mass() + b.tail_mass()));
}

LatticeDist translate(const LatticeDist& a, const LatticePoint& by) {
  if (by.size() != a.dim()) throw std::invalid_argument("translate: dimension mismatch");
  return pushforward(a, a.dim(), [&](const LatticePoint& p) {
    LatticePoint q = p;
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += by[i];
    return q;
  });
}

LatticeDist product(const LatticeDist& a, const IntDist& b) {
  LatticeDist::Map out;
  for (const auto& [pt, pr] : a.points()) {
    for (std::int64_t k = b.min_support(); k <= b.max_support(); ++k) {
      const double w = pr * b.pmf(k);
      if (w == 0.0) continue;
      LatticePoint q = pt;
      q.emplace_back(k);
      out.emplace(std::move(q), w);
    }
  }
  const double tail = a.tail_mass() + b.tail_mass();
  return LatticeDist(a.dim() + 1, std::move(out), std::min(1.0, tail));
}

IntDist coordinate_marginal(const LatticeDist& a, std::size_t axis) {
  if (axis >= a.dim()) throw std::invalid_argument("coordinate_marginal: axis out of range");
  std::map<std::int64_t, double> acc;
  for (const auto& [pt, pr] : a.points()) {
    if (!pt[axis].is_integer()) throw std::invalid_argument("coordinate_marginal: non-integer coordinate");
    acc[pt[axis].num()] += pr;
  }
  if (acc.empty()) return IntDist(0, {0.0}, 1.0);
  const std::int64_t lo = acc.begin()->first;
  const std::int64_t hi = acc.rbegin()->first;
  std::vector<double> mass(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (const auto& [k, v] : acc) mass[static_cast<std::size_t>(k - lo)] = v;
  return IntDist(lo, std::move(mass), a.tail_mass());
}

LatticeDist from_int_dist(const IntDist& a) {
  LatticeDist::Map m;
  for (std::int64_t k = a.min_support(); k <= a.max_support(); ++k) {
    const double v = a.pmf(k);
    if (v != 0.0) m.emplace(LatticePoint{Rational(k)}, v);
  }
  return LatticeDist(1, std::move(m), a.tail_mass());
}

}  // namespace critshuffle
