// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "layercomp/base64.hpp"

#include <openssl/evp.h>

#include "layercomp/error.hpp"

namespace layercomp {

std::string base64_encode(std::span<const std::uint8_t> bytes) {
    std::string out((bytes.size() + 2) / 3 * 4 + 1, '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                  static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
    if (text.size() % 4 != 0) {
        throw ValidationError("base64: length " + std::to_string(text.size()) + " is not a multiple of 4");
    }
    // EVP_DecodeBlock tolerates surrounding whitespace and keeps padding bytes; be strict here.
    std::size_t pad = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        const bool alnum = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
        if (c == '=' && i + 2 >= text.size()) {
            ++pad;
            continue;
        }
        if ((!alnum && c != '+' && c != '/') || pad > 0) {
            throw ValidationError("base64: invalid character at offset " + std::to_string(i));
        }
    }
    std::vector<std::uint8_t> out(text.size() / 4 * 3);
    const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                  static_cast<int>(text.size()));
    if (n < 0) {
        throw ValidationError("base64: malformed input");
    }
    out.resize(static_cast<std::size_t>(n) - pad);
    return out;
}

}  // namespace layercomp
