#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gtr {

/// Packed bit string. Bits are stored LSB-first within 64-bit words; unused
/// high bits of the last word are kept zero (an invariant several routines
/// below rely on).
class BitVec {
public:
    BitVec() = default;

    explicit BitVec(std::size_t n, bool value = false)
        : words_((n + 63) / 64, value ? ~0ull : 0ull), size_(n) {
        trim();
    }

    static BitVec from_string(std::string_view s) {
        BitVec v;
        v.reserve(s.size());
        for (char c : s) {
            if (c != '0' && c != '1') throw std::invalid_argument("BitVec: bad character");
            v.push_back(c == '1');
        }
        return v;
    }

    std::string to_string() const {
        std::string s(size_, '0');
        for (std::size_t i = 0; i < size_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

    void reserve(std::size_t n) { words_.reserve((n + 63) / 64); }

    void push_back(bool b) {
        if (size_ % 64 == 0) words_.push_back(0);
        if (b) words_.back() |= 1ull << (size_ % 64);
        ++size_;
    }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

    void set(std::size_t i, bool b) {
        const std::uint64_t m = 1ull << (i & 63);
        if (b) words_[i >> 6] |= m; else words_[i >> 6] &= ~m;
    }

    void flip(std::size_t i) { words_[i >> 6] ^= 1ull << (i & 63); }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    std::span<const std::uint64_t> words() const { return words_; }

    /// Copy of bits [pos, pos+len), re-aligned to bit 0.
    BitVec slice(std::size_t pos, std::size_t len) const {
        if (pos + len > size_) throw std::out_of_range("BitVec::slice");
        BitVec out;
        out.size_ = len;
        out.words_.resize((len + 63) / 64);
        for (std::size_t k = 0; k < out.words_.size(); ++k)
            out.words_[k] = read_word(pos + 64 * k);
        out.trim();
        return out;
    }

    /// 64 bits starting at bit position `pos` (zero-padded past the end).
    std::uint64_t read_word(std::size_t pos) const {
        const std::size_t q = pos >> 6, r = pos & 63;
        if (q >= words_.size()) return 0;
        std::uint64_t w = words_[q] >> r;
        if (r != 0 && q + 1 < words_.size()) w |= words_[q + 1] << (64 - r);
        return w;
    }

    std::size_t count_ones() const {
        std::size_t c = 0;
        for (std::uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    friend bool operator==(const BitVec& a, const BitVec& b) {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }

private:
    void trim() {
        if (size_ % 64 != 0 && !words_.empty())
            words_.back() &= (1ull << (size_ % 64)) - 1;
    }

    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

/// Hamming distance between hay[pos, pos+w) and the first w bits of
/// `pattern` (which must be bit-0 aligned). Word-parallel with popcount;
/// returns early once the running count exceeds `limit` (the exact value is
/// only guaranteed when the result is <= limit).
inline std::size_t hamming_window(const BitVec& hay, std::size_t pos,
                                  const BitVec& pattern, std::size_t w,
                                  std::size_t limit) {
    std::size_t dist = 0;
    const auto pw = pattern.words();
    for (std::size_t done = 0; done < w; done += 64) {
        std::uint64_t x = hay.read_word(pos + done) ^ pw[done >> 6];
        const std::size_t rem = w - done;
        if (rem < 64) x &= (1ull << rem) - 1;
        dist += std::popcount(x);
        if (dist > limit) return dist;
    }
    return dist;
}

/// Plain Hamming distance between two equal-width bit strings.
inline std::size_t hamming(const BitVec& a, const BitVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("hamming: width mismatch");
    return hamming_window(a, 0, b, b.size(), a.size());
}

}  // namespace gtr
