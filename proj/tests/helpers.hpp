#pragma once

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "birkhoff/estimates.hpp"

namespace testing {

using namespace birkhoff;

inline constexpr double pi = std::numbers::pi;

inline FourierPotential psi_exp(double amp = 1.0) { return FourierPotential::real_type({{1, amp}}); }

inline RandomPotentialSpec random_spec(std::uint64_t seed, RandomPotentialSpec::Decay decay = RandomPotentialSpec::Decay::sobolev,
                                       double amplitude = 1.0) {
  RandomPotentialSpec s;
  s.seed = seed;
  s.decay = decay;
  s.amplitude = amplitude;
  if (decay == RandomPotentialSpec::Decay::abel) s.a = 0.3;
  return s;
}

// a random potential scaled to ||phi||_1 = norm1
inline FourierPotential scaled_random(std::uint64_t seed, double norm1) {
  const FourierPotential raw = random_potential(random_spec(seed));
  return raw.scaled(norm1 / sobolev_norm(raw, 1.0));
}

}  // namespace testing
