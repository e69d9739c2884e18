// Copyright 2026 The RelEmb Authors.
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


// Little-endian binary helpers shared by the model, classifier and context
// file formats.

#ifndef RELEMB_SRC_BINARY_IO_HPP_
#define RELEMB_SRC_BINARY_IO_HPP_

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "relemb/common.hpp"

namespace relemb::binary {

template <typename U>
U to_little(U v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    U out = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      out = static_cast<U>((out << 8) | ((v >> (8 * i)) & 0xFF));
    }
    return out;
  }
}

inline void write_u32s(std::ostream& out, std::span<const std::uint32_t> values) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size_bytes()));
  } else {
    for (auto v : values) {
      const auto le = to_little(v);
      out.write(reinterpret_cast<const char*>(&le), sizeof(le));
    }
  }
}

inline bool read_u32s(std::istream& in, std::span<std::uint32_t> values) {
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size_bytes()));
  if (!in) return false;
  if constexpr (std::endian::native != std::endian::little) {
    for (auto& v : values) v = to_little(v);
  }
  return true;
}

inline void write_f64s(std::ostream& out, std::span<const double> values) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size_bytes()));
  } else {
    for (double v : values) {
      const auto le = to_little(std::bit_cast<std::uint64_t>(v));
      out.write(reinterpret_cast<const char*>(&le), sizeof(le));
    }
  }
}

inline void read_f64s(std::istream& in, std::span<double> values) {
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size_bytes()));
  if (!in) throw FormatError("binary payload truncated");
  if constexpr (std::endian::native != std::endian::little) {
    for (auto& v : values) {
      v = std::bit_cast<double>(to_little(std::bit_cast<std::uint64_t>(v)));
    }
  }
}

}  // namespace relemb::binary

#endif  // RELEMB_SRC_BINARY_IO_HPP_
