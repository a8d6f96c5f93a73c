// Copyright 2026 The psiopt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "psiopt/error.hpp"

namespace psiopt {

bool IsPrime(std::uint64_t n);

// Mixes a base seed with a stream index (splitmix64 finalizer).
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index);

// Smallest prime strictly greater than n.
std::uint64_t NextPrimeAbove(std::uint64_t n);

/// Prime modulus of F_q. Construction rejects composites.
class Prime {
 public:
  explicit Prime(std::uint64_t q);

  std::uint64_t value() const { return q_; }

  friend bool operator==(const Prime&, const Prime&) = default;

 private:
  std::uint64_t q_;
};

/// Canonical residue in [0, q) tagged with its modulus.
class FieldElement {
 public:
  FieldElement(std::uint64_t value, Prime q) : value_(value % q.value()), q_(q) {}

  std::uint64_t value() const { return value_; }
  Prime modulus() const { return q_; }

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

 private:
  std::uint64_t value_;
  Prime q_;
};

FieldElement Add(const FieldElement& a, const FieldElement& b);
FieldElement Sub(const FieldElement& a, const FieldElement& b);
FieldElement Mul(const FieldElement& a, const FieldElement& b);

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) { return Add(a, b); }
inline FieldElement operator-(const FieldElement& a, const FieldElement& b) { return Sub(a, b); }
inline FieldElement operator*(const FieldElement& a, const FieldElement& b) { return Mul(a, b); }

/// Fixed-length vector over F_q. Residues are stored canonically.
class FieldVector {
 public:
  FieldVector(Prime q, std::size_t len) : q_(q), values_(len, 0) {}
  FieldVector(Prime q, std::vector<std::uint64_t> values);

  static FieldVector Zero(Prime q, std::size_t len) { return FieldVector(q, len); }
  // e_j with a 0-based position.
  static FieldVector Basis(Prime q, std::size_t len, std::size_t pos);

  Prime modulus() const { return q_; }
  std::size_t size() const { return values_.size(); }
  std::span<const std::uint64_t> values() const { return values_; }

  FieldElement operator[](std::size_t i) const { return FieldElement(values_.at(i), q_); }
  void Set(std::size_t i, const FieldElement& v);

  bool IsZero() const;

  friend bool operator==(const FieldVector&, const FieldVector&) = default;

 private:
  Prime q_;
  std::vector<std::uint64_t> values_;
};

FieldVector Add(const FieldVector& a, const FieldVector& b);
FieldVector Sub(const FieldVector& a, const FieldVector& b);
FieldElement Dot(const FieldVector& a, const FieldVector& b);

inline FieldVector operator+(const FieldVector& a, const FieldVector& b) { return Add(a, b); }
inline FieldVector operator-(const FieldVector& a, const FieldVector& b) { return Sub(a, b); }

/// Seeded random source. Single owner; every draw advances the stream.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  // Derives an independent stream from a base seed and a fixed label.
  static RandomSource Derive(std::uint64_t seed, std::string_view label);

  FieldElement UniformElement(Prime q);
  std::uint64_t UniformInt(std::uint64_t lo, std::uint64_t hi);

 private:
  std::mt19937_64 engine_;
};

FieldVector SampleUniformVector(RandomSource& rng, Prime q, std::size_t len);

}  // namespace psiopt
