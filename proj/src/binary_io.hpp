#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "sarcd/errors.hpp"

namespace sarcd::detail {

class ByteWriter {
public:
    void magic(const char (&tag)[5]) { bytes_.insert(bytes_.end(), tag, tag + 4); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFFu));
    }
    void f32(double v) { u32(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }

    void write(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + path.string());
        out.write(reinterpret_cast<const char*>(bytes_.data()), static_cast<std::streamsize>(bytes_.size()));
        if (!out) throw Error("write failed for " + path.string());
    }

private:
    std::vector<unsigned char> bytes_;
};

class ByteReader {
public:
    explicit ByteReader(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error("cannot open " + path.string());
        bytes_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }

    void expect_magic(const char (&tag)[5]) {
        need(4);
        if (!std::equal(tag, tag + 4, bytes_.begin() + static_cast<std::ptrdiff_t>(pos_)))
            throw ParseError(std::string("bad magic, expected \"") + tag + "\"", pos_);
        pos_ += 4;
    }
    std::uint32_t u32() {
        need(4);
        const unsigned char* p = bytes_.data() + pos_;
        pos_ += 4;
        return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
               (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
    }
    double f32() { return std::bit_cast<float>(u32()); }
    void expect_end() const {
        if (pos_ != bytes_.size()) throw LengthError("trailing bytes after payload");
    }

private:
    void need(std::size_t n) const {
        if (pos_ + n > bytes_.size()) throw LengthError("file truncated at byte " + std::to_string(pos_));
    }

    std::vector<unsigned char> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace sarcd::detail
