#ifndef STOCS_FUTS_HPP
#define STOCS_FUTS_HPP

#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

namespace stocs {

// Finite-support functions from a state space X into the non-negative
// reals, with the pointwise algebra the rate transition semantics is
// built from. Entries are kept canonical: nothing at or below
// kZeroThreshold is ever stored, so structural equality of the support
// coincides with semantic equality.
inline constexpr double kFutsZeroThreshold = 1e-15;

template <typename X, typename Less = std::less<X>>
class ContinuationFn {
 public:
  using Map = std::map<X, double, Less>;

  ContinuationFn() = default;

  static ContinuationFn zero() { return ContinuationFn(); }

  static ContinuationFn point(X d, double gamma) {
    if (gamma < 0.0) throw std::invalid_argument("negative mass in continuation function");
    ContinuationFn f;
    f.add_mass(std::move(d), gamma);
    return f;
  }

  // the characteristic function of d
  static ContinuationFn unit(X d) { return point(std::move(d), 1.0); }

  double at(const X& d) const {
    auto it = entries_.find(d);
    return it == entries_.end() ? 0.0 : it->second;
  }

  void add_mass(X d, double gamma) {
    if (gamma < 0.0) throw std::invalid_argument("negative mass in continuation function");
    if (gamma <= kFutsZeroThreshold) return;
    auto [it, fresh] = entries_.try_emplace(std::move(d), gamma);
    if (!fresh) it->second += gamma;
  }

  bool empty() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }
  const Map& entries() const { return entries_; }

  double total_mass() const {
    double m = 0.0;
    for (const auto& [d, g] : entries_) m += g;
    return m;
  }

  // The same map, asserted to be a probability distribution.
  std::optional<Map> as_distribution(double tol = 1e-9) const {
    if (std::abs(total_mass() - 1.0) > tol) return std::nullopt;
    return entries_;
  }

  ContinuationFn& operator+=(const ContinuationFn& o) {
    for (const auto& [d, g] : o.entries_) add_mass(d, g);
    return *this;
  }

  friend ContinuationFn operator+(ContinuationFn a, const ContinuationFn& b) {
    a += b;
    return a;
  }

  ContinuationFn scaled(double gamma) const {
    if (gamma < 0.0) throw std::invalid_argument("negative scale factor");
    ContinuationFn out;
    for (const auto& [d, g] : entries_) out.add_mass(d, g * gamma);
    return out;
  }

  bool operator==(const ContinuationFn& o) const { return entries_ == o.entries_; }

 private:
  Map entries_;
};

// (F1 (+) F2) maps d1(+)d2 to F1(d1)*F2(d2); the pairing must be injective
// on the supports, which holds for syntactic constructors.
template <typename Z, typename LessZ = std::less<Z>, typename X, typename LX, typename Y,
          typename LY, typename Pair>
ContinuationFn<Z, LessZ> futs_pair(const ContinuationFn<X, LX>& f, const ContinuationFn<Y, LY>& g,
                                   Pair&& combine) {
  ContinuationFn<Z, LessZ> out;
  for (const auto& [d1, g1] : f.entries())
    for (const auto& [d2, g2] : g.entries()) out.add_mass(combine(d1, d2), g1 * g2);
  return out;
}

// Approximate equality for tests: same support, values within a relative
// tolerance.
template <typename X, typename L>
bool approx_equal(const ContinuationFn<X, L>& a, const ContinuationFn<X, L>& b,
                  double rel_tol = 1e-12) {
  if (a.support_size() != b.support_size()) return false;
  L less;
  auto ia = a.entries().begin();
  auto ib = b.entries().begin();
  for (; ia != a.entries().end(); ++ia, ++ib) {
    const auto& [da, ga] = *ia;
    const auto& [db, gb] = *ib;
    if (less(da, db) || less(db, da)) return false;
    double scale = std::max(std::abs(ga), std::abs(gb));
    if (std::abs(ga - gb) > rel_tol * std::max(scale, 1.0)) return false;
  }
  return true;
}

}  // namespace stocs

#endif
