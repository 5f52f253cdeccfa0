#include "polartri/bits.h"

#include <algorithm>
#include <stdexcept>

namespace polartri {

BitVector BitVector::from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            v.set(i, true);
        } else if (bits[i] != '0') {
            throw std::invalid_argument("bit string may only contain '0' and '1'");
        }
    }
    return v;
}

size_t BitVector::popcount() const {
    size_t n = 0;
    for (uint64_t w : words_) n += std::popcount(w);
    return n;
}

bool BitVector::any() const {
    return std::any_of(words_.begin(), words_.end(), [](uint64_t w) { return w != 0; });
}

BitVector& BitVector::operator^=(const BitVector& other) {
    if (other.size_ != size_) throw std::invalid_argument("BitVector length mismatch");
    for (size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
}

BitVector& BitVector::operator&=(const BitVector& other) {
    if (other.size_ != size_) throw std::invalid_argument("BitVector length mismatch");
    for (size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
}

std::string BitVector::str() const {
    std::string s(size_, '0');
    for (size_t i = 0; i < size_; ++i) {
        if (get(i)) s[i] = '1';
    }
    return s;
}

BitMatrix BitMatrix::from_rows(const std::vector<BitVector>& rows, size_t cols) {
    BitMatrix m(0, cols);
    for (const auto& r : rows) {
        if (r.size() != cols) throw std::invalid_argument("row length mismatch");
        m.append_row(r);
    }
    return m;
}

BitMatrix BitMatrix::from_strings(const std::vector<std::string>& rows) {
    size_t cols = rows.empty() ? 0 : rows[0].size();
    std::vector<BitVector> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(BitVector::from_string(r));
    return from_rows(v, cols);
}

BitMatrix BitMatrix::identity(size_t n) {
    BitMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

BitVector BitMatrix::row_vector(size_t r) const {
    BitVector v(cols_);
    auto src = row(r);
    std::copy(src.begin(), src.end(), v.words().begin());
    return v;
}

size_t BitMatrix::row_weight(size_t r) const {
    size_t n = 0;
    for (uint64_t w : row(r)) n += std::popcount(w);
    return n;
}

void BitMatrix::xor_row_into(size_t src, size_t dst) {
    const uint64_t* s = data_.data() + src * stride_;
    uint64_t* d = data_.data() + dst * stride_;
    for (size_t i = 0; i < stride_; ++i) d[i] ^= s[i];
}

void BitMatrix::swap_rows(size_t a, size_t b) {
    if (a == b) return;
    std::swap_ranges(data_.begin() + a * stride_, data_.begin() + (a + 1) * stride_,
                     data_.begin() + b * stride_);
}

void BitMatrix::append_row(std::span<const uint64_t> words) {
    if (words.size() != stride_) throw std::invalid_argument("row word count mismatch");
    data_.insert(data_.end(), words.begin(), words.end());
    ++rows_;
}

std::vector<size_t> BitMatrix::rref_in_place() {
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t c = 0; c < cols_ && r < rows_; ++c) {
        size_t w = c >> 6;
        uint64_t m = uint64_t{1} << (c & 63);
        size_t p = r;
        while (p < rows_ && !(data_[p * stride_ + w] & m)) ++p;
        if (p == rows_) continue;
        swap_rows(p, r);
        const uint64_t* pr = data_.data() + r * stride_;
        // The pivot row is zero left of column c, so only words >= w change.
        for (size_t i = 0; i < rows_; ++i) {
            if (i == r) continue;
            uint64_t* d = data_.data() + i * stride_;
            if (d[w] & m) {
                for (size_t k = w; k < stride_; ++k) d[k] ^= pr[k];
            }
        }
        pivots.push_back(c);
        ++r;
    }
    rows_ = r;
    data_.resize(rows_ * stride_);
    return pivots;
}

size_t BitMatrix::rank() const {
    BitMatrix copy = *this;
    return copy.rref_in_place().size();
}

BitMatrix BitMatrix::transpose() const {
    BitMatrix t(cols_, rows_);
    for (size_t r = 0; r < rows_; ++r) {
        auto src = row(r);
        for (size_t w = 0; w < stride_; ++w) {
            uint64_t bits = src[w];
            while (bits) {
                size_t c = (w << 6) + std::countr_zero(bits);
                t.set(c, r, true);
                bits &= bits - 1;
            }
        }
    }
    return t;
}

BitMatrix BitMatrix::select_rows(std::span<const size_t> rows) const {
    BitMatrix out(0, cols_);
    for (size_t r : rows) out.append_row(row(r));
    return out;
}

BitMatrix BitMatrix::remove_columns(std::span<const uint32_t> cols) const {
    std::vector<uint8_t> drop(cols_, 0);
    for (uint32_t c : cols) {
        if (c >= cols_) throw std::out_of_range("column index out of range");
        drop[c] = 1;
    }
    std::vector<uint32_t> keep;
    keep.reserve(cols_);
    for (uint32_t c = 0; c < cols_; ++c) {
        if (!drop[c]) keep.push_back(c);
    }
    return select_columns(keep);
}

BitMatrix BitMatrix::select_columns(std::span<const uint32_t> cols) const {
    BitMatrix out(rows_, cols.size());
    for (size_t r = 0; r < rows_; ++r) {
        for (size_t j = 0; j < cols.size(); ++j) {
            if (get(r, cols[j])) out.set(r, j, true);
        }
    }
    return out;
}

BitMatrix BitMatrix::mul_transpose(const BitMatrix& other) const {
    if (other.cols_ != cols_) throw std::invalid_argument("mul_transpose: column mismatch");
    BitMatrix out(rows_, other.rows_);
    for (size_t i = 0; i < rows_; ++i) {
        for (size_t j = 0; j < other.rows_; ++j) {
            if (and_popcount(row(i), other.row(j)) & 1) out.set(i, j, true);
        }
    }
    return out;
}

bool BitMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](uint64_t w) { return w == 0; });
}

std::vector<uint8_t> BitMatrix::packed_bytes() const {
    size_t row_bytes = (cols_ + 7) / 8;
    std::vector<uint8_t> out(rows_ * row_bytes, 0);
    for (size_t r = 0; r < rows_; ++r) {
        auto src = row(r);
        for (size_t b = 0; b < row_bytes; ++b) {
            out[r * row_bytes + b] = static_cast<uint8_t>(src[b >> 3] >> ((b & 7) * 8));
        }
    }
    return out;
}

BitMatrix BitMatrix::from_packed_bytes(size_t rows, size_t cols, std::span<const uint8_t> bytes) {
    size_t row_bytes = (cols + 7) / 8;
    if (bytes.size() != rows * row_bytes) throw std::invalid_argument("packed matrix size mismatch");
    BitMatrix m(rows, cols);
    for (size_t r = 0; r < rows; ++r) {
        auto dst = m.row(r);
        for (size_t b = 0; b < row_bytes; ++b) {
            dst[b >> 3] |= uint64_t{bytes[r * row_bytes + b]} << ((b & 7) * 8);
        }
        if (cols & 63) {
            uint64_t tail = (uint64_t{1} << (cols & 63)) - 1;
            if (dst[m.stride_ - 1] & ~tail) throw std::invalid_argument("packed matrix has bits past the last column");
        }
    }
    return m;
}

std::string BitMatrix::str() const {
    std::string s;
    for (size_t r = 0; r < rows_; ++r) {
        s += row_vector(r).str();
        s += '\n';
    }
    return s;
}

bool same_row_space(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.cols()) return false;
    BitMatrix ra = a;
    BitMatrix rb = b;
    ra.rref_in_place();
    rb.rref_in_place();
    return ra == rb;
}

}  // namespace polartri
