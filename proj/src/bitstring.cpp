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

#include "bierte/bitstring.hpp"

#include <bit>
#include <stdexcept>

namespace bierte {

BitString::BitString(unsigned width) : width_(width) {
  if (width < 1 || width > kMaxWidth) {
    throw std::invalid_argument("BitString width must be in [1, 256], got " +
                                std::to_string(width));
  }
}

BitString BitString::ones(unsigned width) {
  BitString bs(width);
  bs.words_.fill(~0ULL);
  bs.mask_tail();
  return bs;
}

BitString BitString::of(unsigned width, std::initializer_list<unsigned> positions) {
  BitString bs(width);
  for (unsigned p : positions) bs.set(p);
  return bs;
}

BitString BitString::of(unsigned width, const std::vector<unsigned>& positions) {
  BitString bs(width);
  for (unsigned p : positions) bs.set(p);
  return bs;
}

BitString BitString::parse_binary(std::string_view text) {
  BitString bs(static_cast<unsigned>(text.size()));
  for (unsigned i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '1') {
      bs.set(static_cast<unsigned>(text.size() - i));
    } else if (c != '0') {
      throw std::invalid_argument("invalid binary BitString text");
    }
  }
  return bs;
}

bool BitString::test(unsigned pos) const {
  check_pos(pos);
  return (words_[(pos - 1) / 64] >> ((pos - 1) % 64)) & 1ULL;
}

void BitString::set(unsigned pos) {
  check_pos(pos);
  words_[(pos - 1) / 64] |= 1ULL << ((pos - 1) % 64);
}

void BitString::clear(unsigned pos) {
  check_pos(pos);
  words_[(pos - 1) / 64] &= ~(1ULL << ((pos - 1) % 64));
}

bool BitString::any() const {
  for (auto w : words_) {
    if (w != 0) return true;
  }
  return false;
}

unsigned BitString::count() const {
  unsigned n = 0;
  for (auto w : words_) n += static_cast<unsigned>(std::popcount(w));
  return n;
}

BitString BitString::operator&(const BitString& other) const {
  check_same_width(other);
  BitString out(width_);
  for (unsigned i = 0; i < kWords; ++i) out.words_[i] = words_[i] & other.words_[i];
  return out;
}

BitString BitString::operator|(const BitString& other) const {
  check_same_width(other);
  BitString out(width_);
  for (unsigned i = 0; i < kWords; ++i) out.words_[i] = words_[i] | other.words_[i];
  return out;
}

BitString BitString::and_not(const BitString& mask) const {
  check_same_width(mask);
  BitString out(width_);
  for (unsigned i = 0; i < kWords; ++i) out.words_[i] = words_[i] & ~mask.words_[i];
  return out;
}

BitString BitString::complement() const {
  if (width_ == 0) throw std::invalid_argument("complement of empty BitString");
  BitString out(width_);
  for (unsigned i = 0; i < kWords; ++i) out.words_[i] = ~words_[i];
  out.mask_tail();
  return out;
}

std::vector<unsigned> BitString::set_bits() const {
  std::vector<unsigned> out;
  out.reserve(count());
  for (unsigned i = 0; i < kWords; ++i) {
    std::uint64_t w = words_[i];
    while (w != 0) {
      unsigned tz = static_cast<unsigned>(std::countr_zero(w));
      out.push_back(i * 64 + tz + 1);
      w &= w - 1;
    }
  }
  return out;
}

std::string BitString::to_binary() const {
  std::string out(width_, '0');
  for (unsigned p = 1; p <= width_; ++p) {
    if (test(p)) out[width_ - p] = '1';
  }
  return out;
}

std::string BitString::to_hex() const {
  static const char* digits = "0123456789abcdef";
  unsigned nibbles = (width_ + 3) / 4;
  std::string out(nibbles, '0');
  for (unsigned i = 0; i < nibbles; ++i) {
    unsigned value = 0;
    for (unsigned b = 0; b < 4; ++b) {
      unsigned pos = i * 4 + b + 1;
      if (pos <= width_ && test(pos)) value |= 1u << b;
    }
    out[nibbles - 1 - i] = digits[value];
  }
  return out;
}

std::string BitString::render() const {
  if (width_ <= 32) return to_binary();
  return "0x" + to_hex();
}

std::vector<std::uint8_t> BitString::to_bytes() const {
  std::vector<std::uint8_t> out((width_ + 7) / 8, 0);
  for (unsigned i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>((words_[i / 8] >> ((i % 8) * 8)) & 0xFF);
  }
  return out;
}

BitString BitString::from_bytes(unsigned width, const std::vector<std::uint8_t>& bytes) {
  BitString bs(width);
  if (bytes.size() != (width + 7u) / 8u) {
    throw std::invalid_argument("byte count does not match BitString width");
  }
  for (unsigned i = 0; i < bytes.size(); ++i) {
    bs.words_[i / 8] |= static_cast<std::uint64_t>(bytes[i]) << ((i % 8) * 8);
  }
  bs.mask_tail();
  return bs;
}

void BitString::check_same_width(const BitString& other) const {
  if (width_ == 0 || width_ != other.width_) {
    throw std::invalid_argument("BitString width mismatch: " + std::to_string(width_) +
                                " vs " + std::to_string(other.width_));
  }
}

void BitString::check_pos(unsigned pos) const {
  if (pos < 1 || pos > width_) {
    throw std::out_of_range("bit position " + std::to_string(pos) +
                            " outside width " + std::to_string(width_));
  }
}

void BitString::mask_tail() {
  for (unsigned i = 0; i < kWords; ++i) {
    unsigned low = i * 64;
    if (width_ <= low) {
      words_[i] = 0;
    } else if (width_ < low + 64) {
      words_[i] &= (~0ULL) >> (low + 64 - width_);
    }
  }
}

}  // namespace bierte
