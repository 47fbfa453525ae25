// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Portable, counter-based pseudorandom streams.
//
// Every stream is fully described by a 64-bit key. The i-th raw output
// (i = 0, 1, ...) is
//
//   Mix64(key + (i + 1) * 0x9E3779B97F4A7C15)      (mod 2^64)
//
// where Mix64 is the SplitMix64 finalizer:
//
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   z =  z ^ (z >> 31)
//
// Derived quantities are defined on top of raw outputs so that any port can
// reproduce them exactly:
//   Uniform()      (raw >> 11) * 2^-53, in [0, 1)
//   UniformInt(n)  Lemire multiply-shift with rejection on the low word
//   Normal()       Box-Muller, u1 = 1 - Uniform(), u2 = Uniform(); one value
//                  per call, the sine branch is discarded
//   Shuffle        Fisher-Yates from the back, j = UniformInt(i + 1)
// Child streams are keyed by DeriveKey(parent_key, tag), which mixes the
// FNV-1a hash of the tag into the parent key.

#ifndef INTERP_CERT_RANDOM_H_
#define INTERP_CERT_RANDOM_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace interp_cert {

std::uint64_t Mix64(std::uint64_t z);

// Key of the child stream named `tag` under `key`.
std::uint64_t DeriveKey(std::uint64_t key, std::string_view tag);
std::uint64_t DeriveKey(std::uint64_t key, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t key) : key_(key) {}

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t Next();
  double Uniform();
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t UniformInt(std::uint64_t n);
  double Normal();

  // Child stream; does not advance this stream.
  Rng Child(std::string_view tag) const { return Rng(DeriveKey(key_, tag)); }
  Rng Child(std::uint64_t index) const { return Rng(DeriveKey(key_, index)); }

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(UniformInt(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  // First k entries of a Fisher-Yates shuffle of 0..n-1 (partial shuffle from
  // the front: position i swaps with i + UniformInt(n - i)).
  std::vector<int> SampleWithoutReplacement(int n, int k);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace interp_cert

#endif  // INTERP_CERT_RANDOM_H_
