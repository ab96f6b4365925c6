#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace c27 {

/// A bijection of {0, ..., n-1}, stored as its image list.
///
/// Composition follows function notation: `(p * q)(i) == p(q(i))`, so `q`
/// acts first.
class Permutation {
 public:
  using Point = std::uint16_t;

  Permutation() = default;

  /// Identity of the given degree.
  explicit Permutation(std::size_t degree) : images_(degree) {
    if (degree > kMaxDegree) throw std::invalid_argument("Permutation: degree too large");
    std::iota(images_.begin(), images_.end(), Point{0});
  }

  explicit Permutation(std::vector<Point> images) : images_(std::move(images)) {
    validate();
  }

  template <typename Int>
  static Permutation from_images(const std::vector<Int>& images) {
    std::vector<Point> v;
    v.reserve(images.size());
    for (auto x : images) {
      if (x < 0 || static_cast<std::size_t>(x) >= images.size())
        throw std::invalid_argument("Permutation: image out of range");
      v.push_back(static_cast<Point>(x));
    }
    return Permutation(std::move(v));
  }

  /// Builds a permutation from disjoint cycles, e.g. {{0, 1}, {2, 3, 4}}.
  static Permutation from_cycles(std::size_t degree,
                                 std::initializer_list<std::initializer_list<int>> cycles) {
    std::vector<std::vector<int>> cs;
    for (auto c : cycles) cs.emplace_back(c);
    return from_cycles(degree, cs);
  }

  static Permutation from_cycles(std::size_t degree, const std::vector<std::vector<int>>& cycles) {
    Permutation p(degree);
    std::vector<bool> seen(degree, false);
    for (const auto& cycle : cycles) {
      for (std::size_t k = 0; k < cycle.size(); ++k) {
        int a = cycle[k];
        int b = cycle[(k + 1) % cycle.size()];
        if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= degree ||
            static_cast<std::size_t>(b) >= degree)
          throw std::invalid_argument("Permutation: cycle entry out of range");
        if (seen[a]) throw std::invalid_argument("Permutation: cycles are not disjoint");
        seen[a] = true;
        p.images_[a] = static_cast<Point>(b);
      }
    }
    return p;
  }

  std::size_t degree() const noexcept { return images_.size(); }
  Point operator()(std::size_t i) const { return images_[i]; }
  Point operator[](std::size_t i) const { return images_[i]; }
  const std::vector<Point>& images() const noexcept { return images_; }

  Permutation operator*(const Permutation& rhs) const {
    if (rhs.degree() != degree()) throw std::invalid_argument("Permutation: degree mismatch");
    Permutation out;
    out.images_.resize(degree());
    for (std::size_t i = 0; i < degree(); ++i) out.images_[i] = images_[rhs.images_[i]];
    return out;
  }

  Permutation inverse() const {
    Permutation out;
    out.images_.resize(degree());
    for (std::size_t i = 0; i < degree(); ++i) out.images_[images_[i]] = static_cast<Point>(i);
    return out;
  }

  /// g^k for k >= 0.
  Permutation pow(std::size_t k) const {
    Permutation result(degree());
    Permutation base = *this;
    while (k) {
      if (k & 1U) result = result * base;
      base = base * base;
      k >>= 1U;
    }
    return result;
  }

  bool is_identity() const noexcept {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != i) return false;
    return true;
  }

  /// lcm of the cycle lengths.
  std::uint64_t order() const {
    std::vector<bool> seen(degree(), false);
    std::uint64_t result = 1;
    for (std::size_t i = 0; i < degree(); ++i) {
      if (seen[i]) continue;
      std::uint64_t len = 0;
      for (std::size_t j = i; !seen[j]; j = images_[j]) {
        seen[j] = true;
        ++len;
      }
      result = std::lcm(result, len);
    }
    return result;
  }

  bool commutes_with(const Permutation& other) const {
    for (std::size_t i = 0; i < degree(); ++i)
      if (images_[other.images_[i]] != other.images_[images_[i]]) return false;
    return true;
  }

  std::vector<std::vector<int>> cycles() const {
    std::vector<std::vector<int>> out;
    std::vector<bool> seen(degree(), false);
    for (std::size_t i = 0; i < degree(); ++i) {
      if (seen[i] || images_[i] == i) continue;
      std::vector<int> c;
      for (std::size_t j = i; !seen[j]; j = images_[j]) {
        seen[j] = true;
        c.push_back(static_cast<int>(j));
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  std::string to_string() const {
    auto cs = cycles();
    if (cs.empty()) return "()";
    std::string s;
    for (const auto& c : cs) {
      s += '(';
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (k) s += ' ';
        s += std::to_string(c[k]);
      }
      s += ')';
    }
    return s;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) {
    return a.images_ <=> b.images_;
  }

  static constexpr std::size_t kMaxDegree = 65535;

 private:
  void validate() const {
    std::vector<bool> seen(images_.size(), false);
    for (auto x : images_) {
      if (x >= images_.size()) throw std::invalid_argument("Permutation: image out of range");
      if (seen[x]) throw std::invalid_argument("Permutation: images are not a bijection");
      seen[x] = true;
    }
  }

  std::vector<Point> images_;
};

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept {
    // FNV-1a over the image list.
    std::uint64_t h = 1469598103934665603ULL;
    for (auto x : p.images()) {
      h ^= x;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace c27
