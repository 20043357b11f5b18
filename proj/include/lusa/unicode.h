// Copyright 2026 The LUSA Authors.
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

#ifndef LUSA_UNICODE_H_
#define LUSA_UNICODE_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace lusa {

class EncodingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Strict UTF-8 decoding; overlong forms, surrogates and truncated sequences
// raise EncodingError with the byte offset of the bad sequence.
std::u32string utf8_decode(std::string_view bytes);
std::string utf8_encode(std::u32string_view text);
void utf8_append(std::string &out, char32_t cp);

// Character classes used by the tokenizer. Code points above ASCII that are
// not known spaces, punctuation or symbols count as letters.
bool is_space(char32_t c);
bool is_digit(char32_t c);
bool is_letter(char32_t c);
bool is_upper(char32_t c);
bool is_lower(char32_t c);
bool is_punctuation(char32_t c);

char32_t to_lower(char32_t c);
std::u32string to_lower(std::u32string_view s);
std::string to_lower_utf8(std::string_view s);

}  // namespace lusa

#endif  // LUSA_UNICODE_H_
