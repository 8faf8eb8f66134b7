/*
 * Copyright 2026 the biertesim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BIERTE_BITSTRING_HPP
#define BIERTE_BITSTRING_HPP

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace bierte {

/// Fixed-width bit vector used as the BIER-TE BitString (BS).
///
/// Bit positions are 1-based starting from the least significant bit, so
/// position 1 is the rightmost character of the binary rendering. Widths run
/// from 1 to 256 bits. Binary operations require equal widths and throw
/// std::invalid_argument otherwise; out-of-range positions throw
/// std::out_of_range. All operations are value-semantic and side-effect free
/// on their arguments.
class BitString {
 public:
  static constexpr unsigned kMaxWidth = 256;

  /// Width-0 sentinel; only assignment and comparison are meaningful.
  BitString() = default;

  explicit BitString(unsigned width);

  /// All bits set.
  static BitString ones(unsigned width);

  /// Construct from a list of 1-based positions.
  static BitString of(unsigned width, std::initializer_list<unsigned> positions);
  static BitString of(unsigned width, const std::vector<unsigned>& positions);

  /// Parse an MSB-left binary rendering ("11010000"); width = string length.
  static BitString parse_binary(std::string_view text);

  unsigned width() const { return width_; }

  bool test(unsigned pos) const;
  void set(unsigned pos);
  void clear(unsigned pos);

  bool any() const;
  bool none() const { return !any(); }
  unsigned count() const;

  BitString operator&(const BitString& other) const;
  BitString operator|(const BitString& other) const;
  /// Bits of *this with every bit of `mask` cleared.
  BitString and_not(const BitString& mask) const;
  BitString complement() const;

  bool operator==(const BitString& other) const = default;

  /// Set positions in strictly ascending order.
  std::vector<unsigned> set_bits() const;

  /// MSB-left binary text, exactly width() characters.
  std::string to_binary() const;
  /// MSB-left hex text, ceil(width/4) digits.
  std::string to_hex() const;
  /// Dump rendering: binary for widths <= 32, 0x-prefixed hex above.
  std::string render() const;

  /// Little-endian byte serialization: byte 0 holds positions 1..8.
  std::vector<std::uint8_t> to_bytes() const;
  static BitString from_bytes(unsigned width, const std::vector<std::uint8_t>& bytes);

 private:
  static constexpr unsigned kWords = kMaxWidth / 64;

  void check_same_width(const BitString& other) const;
  void check_pos(unsigned pos) const;
  void mask_tail();

  unsigned width_ = 0;
  std::array<std::uint64_t, kWords> words_{};
};

}  // namespace bierte

#endif  // BIERTE_BITSTRING_HPP
