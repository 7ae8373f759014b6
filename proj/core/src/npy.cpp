// Copyright (C) 2026 The hired-engine Authors
// SPDX-License-Identifier: Apache-2.0

#include "hired/npy.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hired/error.hpp"

namespace hired {

static_assert(std::endian::native == std::endian::little, "NPY I/O assumes a little-endian host");

namespace {

constexpr unsigned char kMagic[] = {0x93, 'N', 'U', 'M', 'P', 'Y'};
constexpr std::size_t kMagicSize = sizeof(kMagic);
constexpr std::size_t kHeaderAlignment = 64;

struct HeaderFields {
    std::string descr;
    bool fortran_order = false;
    std::vector<std::uint64_t> shape;
};

// Minimal reader for the Python dict literal NumPy writes into the header:
// {'descr': '<f4', 'fortran_order': False, 'shape': (2, 3, 4), }
class HeaderParser {
public:
    HeaderParser(std::string_view text, const std::string& origin) : m_text(text), m_origin(origin) {}

    HeaderFields parse() {
        HeaderFields fields;
        bool seen_descr = false;
        bool seen_order = false;
        bool seen_shape = false;

        expect('{');
        skip_ws();
        while (peek() != '}') {
            const std::string key = parse_string();
            expect(':');
            if (key == "descr") {
                fields.descr = parse_string();
                seen_descr = true;
            } else if (key == "fortran_order") {
                fields.fortran_order = parse_bool();
                seen_order = true;
            } else if (key == "shape") {
                fields.shape = parse_shape();
                seen_shape = true;
            } else {
                fail("unexpected header key '" + key + "'");
            }
            skip_ws();
            if (peek() == ',') {
                ++m_pos;
                skip_ws();
            } else if (peek() != '}') {
                fail("expected ',' or '}' in header dict");
            }
        }
        ++m_pos;
        skip_ws();
        if (m_pos != m_text.size()) {
            fail("trailing characters after header dict");
        }
        if (!seen_descr || !seen_order || !seen_shape) {
            fail("header dict must contain descr, fortran_order and shape");
        }
        return fields;
    }

private:
    [[noreturn]] void fail(const std::string& reason) const {
        throw Error(ErrorCode::MalformedHeader, m_origin, reason);
    }

    char peek() const {
        if (m_pos >= m_text.size()) {
            fail("header dict ends unexpectedly");
        }
        return m_text[m_pos];
    }

    void skip_ws() {
        while (m_pos < m_text.size() && (m_text[m_pos] == ' ' || m_text[m_pos] == '\t')) {
            ++m_pos;
        }
    }

    void expect(char c) {
        skip_ws();
        if (peek() != c) {
            fail(std::string("expected '") + c + "' in header dict");
        }
        ++m_pos;
        skip_ws();
    }

    std::string parse_string() {
        skip_ws();
        const char quote = peek();
        if (quote != '\'' && quote != '"') {
            fail("expected quoted string in header dict");
        }
        ++m_pos;
        const std::size_t end = m_text.find(quote, m_pos);
        if (end == std::string_view::npos) {
            fail("unterminated string in header dict");
        }
        std::string out(m_text.substr(m_pos, end - m_pos));
        m_pos = end + 1;
        return out;
    }

    bool parse_bool() {
        skip_ws();
        if (m_text.substr(m_pos, 4) == "True") {
            m_pos += 4;
            return true;
        }
        if (m_text.substr(m_pos, 5) == "False") {
            m_pos += 5;
            return false;
        }
        fail("fortran_order must be True or False");
    }

    std::vector<std::uint64_t> parse_shape() {
        std::vector<std::uint64_t> dims;
        expect('(');
        while (peek() != ')') {
            if (peek() < '0' || peek() > '9') {
                fail("shape entries must be nonnegative integers");
            }
            std::uint64_t value = 0;
            while (m_pos < m_text.size() && m_text[m_pos] >= '0' && m_text[m_pos] <= '9') {
                const auto digit = static_cast<std::uint64_t>(m_text[m_pos] - '0');
                if (value > (std::numeric_limits<std::uint64_t>::max() - digit) / 10) {
                    fail("shape entry overflows");
                }
                value = value * 10 + digit;
                ++m_pos;
            }
            dims.push_back(value);
            skip_ws();
            if (peek() == ',') {
                ++m_pos;
                skip_ws();
            } else if (peek() != ')') {
                fail("expected ',' or ')' in shape tuple");
            }
        }
        ++m_pos;
        return dims;
    }

    std::string_view m_text;
    const std::string& m_origin;
    std::size_t m_pos = 0;
};

template <typename T>
T load_le(const unsigned char* p) {
    T value;
    std::memcpy(&value, p, sizeof(T));
    return value;
}

}  // namespace

Tensor3 parse_npy(std::span<const unsigned char> bytes, const std::string& origin) {
    if (bytes.size() < kMagicSize + 2 || std::memcmp(bytes.data(), kMagic, kMagicSize) != 0) {
        throw Error(ErrorCode::MalformedHeader, origin, "missing NPY magic string");
    }
    const unsigned major = bytes[6];
    const unsigned minor = bytes[7];
    if ((major != 1 && major != 2) || minor != 0) {
        throw Error(ErrorCode::MalformedHeader, origin,
                    "unsupported NPY version " + std::to_string(major) + "." + std::to_string(minor));
    }

    std::size_t header_len = 0;
    std::size_t preamble = 0;
    if (major == 1) {
        if (bytes.size() < 10) {
            throw Error(ErrorCode::MalformedHeader, origin, "truncated header length");
        }
        header_len = load_le<std::uint16_t>(bytes.data() + 8);
        preamble = 10;
    } else {
        if (bytes.size() < 12) {
            throw Error(ErrorCode::MalformedHeader, origin, "truncated header length");
        }
        header_len = load_le<std::uint32_t>(bytes.data() + 8);
        preamble = 12;
    }
    if (header_len > bytes.size() - preamble) {
        throw Error(ErrorCode::MalformedHeader, origin, "header length exceeds file size");
    }

    std::string_view header(reinterpret_cast<const char*>(bytes.data() + preamble), header_len);
    while (!header.empty() && (header.back() == '\n' || header.back() == ' ' || header.back() == '\0')) {
        header.remove_suffix(1);
    }
    const HeaderFields fields = HeaderParser(header, origin).parse();

    std::size_t width = 0;
    if (fields.descr == "<f4") {
        width = 4;
    } else if (fields.descr == "<f8") {
        width = 8;
    } else {
        throw Error(ErrorCode::UnsupportedDtype, origin, "dtype '" + fields.descr + "' is not <f4 or <f8");
    }
    if (fields.fortran_order) {
        throw Error(ErrorCode::UnsupportedDtype, origin, "Fortran-order arrays are not supported");
    }
    if (fields.shape.size() != 3) {
        throw Error(ErrorCode::ShapeMismatch, origin,
                    "expected a 3-D array, got " + std::to_string(fields.shape.size()) + " dimensions");
    }

    std::uint64_t count = 1;
    for (const std::uint64_t dim : fields.shape) {
        if (dim != 0 && count > std::numeric_limits<std::uint64_t>::max() / width / dim) {
            throw Error(ErrorCode::ShapeMismatch, origin, "shape is too large");
        }
        count *= dim;
    }
    const std::size_t payload = bytes.size() - preamble - header_len;
    if (payload != count * width) {
        throw Error(ErrorCode::ShapeMismatch, origin,
                    "data holds " + std::to_string(payload) + " bytes, shape needs " + std::to_string(count * width));
    }

    const unsigned char* data = bytes.data() + preamble + header_len;
    std::vector<float> values(count);
    if (width == 4 && count > 0) {
        std::memcpy(values.data(), data, count * 4);
    } else if (width == 8) {
        for (std::size_t i = 0; i < count; ++i) {
            values[i] = static_cast<float>(load_le<double>(data + i * 8));
        }
    }

    Tensor3 tensor({fields.shape[0], fields.shape[1], fields.shape[2]}, std::move(values));
    try {
        tensor.validate_attention();
    } catch (const Error& e) {
        throw Error(e.code(), origin, e.reason());
    }
    return tensor;
}

Tensor3 read_npy(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, path.string(), "cannot open file");
    }
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw Error(ErrorCode::Io, path.string(), "read failed");
    }
    return parse_npy(bytes, path.string());
}

void write_npy(const Tensor3& tensor, const std::filesystem::path& path) {
    const Shape3& s = tensor.shape();
    std::string header = "{'descr': '<f4', 'fortran_order': False, 'shape': (" + std::to_string(s.layers) + ", " +
                         std::to_string(s.heads) + ", " + std::to_string(s.tokens) + "), }";
    // magic(6) + version(2) + length(2) + header + '\n' padded to the alignment
    const std::size_t unpadded = kMagicSize + 4 + header.size() + 1;
    header.append((kHeaderAlignment - unpadded % kHeaderAlignment) % kHeaderAlignment, ' ');
    header.push_back('\n');

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::Io, path.string(), "cannot open file for writing");
    }
    const auto header_len = static_cast<std::uint16_t>(header.size());
    out.write(reinterpret_cast<const char*>(kMagic), kMagicSize);
    out.put(1);
    out.put(0);
    out.put(static_cast<char>(header_len & 0xff));
    out.put(static_cast<char>(header_len >> 8));
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    const auto data = tensor.data();
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size_bytes()));
    if (!out) {
        throw Error(ErrorCode::Io, path.string(), "write failed");
    }
}

}  // namespace hired
