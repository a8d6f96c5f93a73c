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

#include "psiopt/field.hpp"

#include <string>

namespace psiopt {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a; only used to turn stream labels into seed material.
std::uint64_t HashLabel(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void CheckSameModulus(Prime a, Prime b) {
  PSIOPT_ENFORCE(a == b, ErrorCode::kModulusMismatch,
                 "modulus mismatch: " + std::to_string(a.value()) + " vs " +
                     std::to_string(b.value()));
}

void CheckCompatible(const FieldVector& a, const FieldVector& b) {
  CheckSameModulus(a.modulus(), b.modulus());
  PSIOPT_ENFORCE(a.size() == b.size(), ErrorCode::kLengthMismatch,
                 "length mismatch: " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(seed ^ SplitMix64(index));
}

bool IsPrime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t NextPrimeAbove(std::uint64_t n) {
  std::uint64_t c = n + 1;
  while (!IsPrime(c)) ++c;
  return c;
}

Prime::Prime(std::uint64_t q) : q_(q) {
  PSIOPT_ENFORCE(IsPrime(q), ErrorCode::kInvalidArgument,
                 "modulus " + std::to_string(q) + " is not prime");
  // Products of two residues must fit in 64 bits.
  PSIOPT_ENFORCE(q < (1ULL << 32), ErrorCode::kInvalidArgument,
                 "modulus must be below 2^32");
}

FieldElement Add(const FieldElement& a, const FieldElement& b) {
  CheckSameModulus(a.modulus(), b.modulus());
  const std::uint64_t q = a.modulus().value();
  std::uint64_t s = a.value() + b.value();
  if (s >= q) s -= q;
  return FieldElement(s, a.modulus());
}

FieldElement Sub(const FieldElement& a, const FieldElement& b) {
  CheckSameModulus(a.modulus(), b.modulus());
  const std::uint64_t q = a.modulus().value();
  return FieldElement(a.value() >= b.value() ? a.value() - b.value()
                                             : a.value() + q - b.value(),
                      a.modulus());
}

FieldElement Mul(const FieldElement& a, const FieldElement& b) {
  CheckSameModulus(a.modulus(), b.modulus());
  return FieldElement(a.value() * b.value(), a.modulus());
}

FieldVector::FieldVector(Prime q, std::vector<std::uint64_t> values)
    : q_(q), values_(std::move(values)) {
  for (auto& v : values_) v %= q_.value();
}

FieldVector FieldVector::Basis(Prime q, std::size_t len, std::size_t pos) {
  PSIOPT_ENFORCE(pos < len, ErrorCode::kOutOfRange,
                 "basis position " + std::to_string(pos) + " outside length " +
                     std::to_string(len));
  FieldVector v(q, len);
  v.values_[pos] = 1 % q.value();
  return v;
}

void FieldVector::Set(std::size_t i, const FieldElement& v) {
  CheckSameModulus(q_, v.modulus());
  values_.at(i) = v.value();
}

bool FieldVector::IsZero() const {
  for (auto v : values_) {
    if (v != 0) return false;
  }
  return true;
}

FieldVector Add(const FieldVector& a, const FieldVector& b) {
  CheckCompatible(a, b);
  const std::uint64_t q = a.modulus().value();
  std::vector<std::uint64_t> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t s = a.values()[i] + b.values()[i];
    out[i] = s >= q ? s - q : s;
  }
  return FieldVector(a.modulus(), std::move(out));
}

FieldVector Sub(const FieldVector& a, const FieldVector& b) {
  CheckCompatible(a, b);
  const std::uint64_t q = a.modulus().value();
  std::vector<std::uint64_t> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto x = a.values()[i];
    const auto y = b.values()[i];
    out[i] = x >= y ? x - y : x + q - y;
  }
  return FieldVector(a.modulus(), std::move(out));
}

FieldElement Dot(const FieldVector& a, const FieldVector& b) {
  CheckCompatible(a, b);
  const std::uint64_t q = a.modulus().value();
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc = (acc + a.values()[i] * b.values()[i]) % q;
  }
  return FieldElement(acc, a.modulus());
}

RandomSource RandomSource::Derive(std::uint64_t seed, std::string_view label) {
  return RandomSource(SplitMix64(seed ^ SplitMix64(HashLabel(label))));
}

FieldElement RandomSource::UniformElement(Prime q) {
  return FieldElement(UniformInt(0, q.value() - 1), q);
}

std::uint64_t RandomSource::UniformInt(std::uint64_t lo, std::uint64_t hi) {
  std::uniform_int_distribution<std::uint64_t> dist(lo, hi);
  return dist(engine_);
}

FieldVector SampleUniformVector(RandomSource& rng, Prime q, std::size_t len) {
  PSIOPT_ENFORCE(len >= 1, ErrorCode::kInvalidArgument, "vector length must be >= 1");
  std::vector<std::uint64_t> v(len);
  for (auto& x : v) x = rng.UniformInt(0, q.value() - 1);
  return FieldVector(q, std::move(v));
}

}  // namespace psiopt
