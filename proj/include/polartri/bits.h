#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace polartri {

inline constexpr size_t words_for_bits(size_t bits) { return (bits + 63) / 64; }

// Packed vector over GF(2). Bits past size() are kept zero.
class BitVector {
   public:
    BitVector() = default;
    explicit BitVector(size_t size) : size_(size), words_(words_for_bits(size), 0) {}

    static BitVector from_string(std::string_view bits);  // "0110..."

    size_t size() const { return size_; }
    bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i, bool v) {
        uint64_t m = uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= m;
        } else {
            words_[i >> 6] &= ~m;
        }
    }
    void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }

    size_t popcount() const;
    bool parity() const { return popcount() & 1; }
    bool any() const;

    BitVector& operator^=(const BitVector& other);
    BitVector& operator&=(const BitVector& other);
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
    friend bool operator==(const BitVector& a, const BitVector& b) = default;

    std::span<uint64_t> words() { return words_; }
    std::span<const uint64_t> words() const { return words_; }
    std::string str() const;

   private:
    size_t size_ = 0;
    std::vector<uint64_t> words_;
};

// Dense row-major matrix over GF(2); every row starts on a word boundary.
class BitMatrix {
   public:
    BitMatrix() = default;
    BitMatrix(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), stride_(words_for_bits(cols)), data_(rows * stride_, 0) {}

    static BitMatrix from_rows(const std::vector<BitVector>& rows, size_t cols);
    static BitMatrix from_strings(const std::vector<std::string>& rows);
    static BitMatrix identity(size_t n);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    size_t stride() const { return stride_; }
    bool empty() const { return rows_ == 0; }

    bool get(size_t r, size_t c) const { return (data_[r * stride_ + (c >> 6)] >> (c & 63)) & 1; }
    void set(size_t r, size_t c, bool v) {
        uint64_t& w = data_[r * stride_ + (c >> 6)];
        uint64_t m = uint64_t{1} << (c & 63);
        w = v ? (w | m) : (w & ~m);
    }

    std::span<uint64_t> row(size_t r) { return {data_.data() + r * stride_, stride_}; }
    std::span<const uint64_t> row(size_t r) const { return {data_.data() + r * stride_, stride_}; }
    BitVector row_vector(size_t r) const;
    size_t row_weight(size_t r) const;

    void xor_row_into(size_t src, size_t dst);
    void swap_rows(size_t a, size_t b);
    void append_row(std::span<const uint64_t> words);
    void append_row(const BitVector& v) { append_row(v.words()); }

    // Gaussian elimination to reduced row echelon form; zero rows are dropped.
    // Returns the pivot column of each surviving row.
    std::vector<size_t> rref_in_place();
    size_t rank() const;

    BitMatrix transpose() const;
    BitMatrix select_rows(std::span<const size_t> rows) const;
    // Drops the listed columns, keeping the remaining ones in order.
    BitMatrix remove_columns(std::span<const uint32_t> cols) const;
    BitMatrix select_columns(std::span<const uint32_t> cols) const;
    // this * other^T over GF(2).
    BitMatrix mul_transpose(const BitMatrix& other) const;
    bool is_zero() const;

    friend bool operator==(const BitMatrix& a, const BitMatrix& b) = default;

    // Row-major, each row ceil(cols/8) bytes, bit j of a row in byte j/8 at position j%8.
    std::vector<uint8_t> packed_bytes() const;
    static BitMatrix from_packed_bytes(size_t rows, size_t cols, std::span<const uint8_t> bytes);

    std::string str() const;

   private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    size_t stride_ = 0;
    std::vector<uint64_t> data_;
};

inline size_t and_popcount(std::span<const uint64_t> a, std::span<const uint64_t> b) {
    size_t n = 0;
    for (size_t i = 0; i < a.size(); ++i) n += std::popcount(a[i] & b[i]);
    return n;
}

// True iff the row spaces coincide.
bool same_row_space(const BitMatrix& a, const BitMatrix& b);

}  // namespace polartri
