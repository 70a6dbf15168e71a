#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "zernike/phase_space.hpp"

namespace zernike {

// Deterministic source of small exact rationals for randomized identity
// testing. Numerators and denominators stay <= 97 so evaluation points are
// cheap and reproducible across platforms.
class RationalSampler {
 public:
  explicit RationalSampler(std::uint64_t seed) : rng_(seed) {}

  mpq_class rational() {
    std::uniform_int_distribution<long> num(-97, 97);
    std::uniform_int_distribution<long> den(1, 97);
    mpq_class q(num(rng_), den(rng_));
    q.canonicalize();
    return q;
  }

  mpq_class nonzero_rational() {
    for (;;) {
      mpq_class q = rational();
      if (q != 0) return q;
    }
  }

  GaussianRational gaussian() { return {rational(), rational()}; }

  GaussianRational real() { return GaussianRational(rational()); }

  GaussianRational nonzero_real() { return GaussianRational(nonzero_rational()); }

  std::array<GaussianRational, 4> phase_point() {
    return {real(), real(), real(), real()};
  }

  std::vector<GaussianRational> real_gammas(int count, bool nonzero = true) {
    std::vector<GaussianRational> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(nonzero ? nonzero_real() : real());
    return out;
  }

  std::uint64_t raw() { return rng_(); }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace zernike
