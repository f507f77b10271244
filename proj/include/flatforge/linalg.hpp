#pragma once

#include <bit>
#include <cstdint>
#include <iterator>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"

namespace flatforge {

// Dense matrix over GF(p), row-major residues.
class MatGF {
public:
    MatGF() = default;
    MatGF(int p, std::size_t rows, std::size_t cols)
        : p_(p), rows_(rows), cols_(cols), entries_(rows * cols, 0) {
        field(p);
    }

    static MatGF identity(int p, std::size_t n) {
        MatGF m(p, n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
        return m;
    }

    // Columns must share p and dimension; `rows` is needed when `cols` is empty.
    static MatGF from_columns(int p, std::size_t rows, const std::vector<VecGF>& cols) {
        MatGF m(p, rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].p != p || cols[j].dim() != rows) throw std::invalid_argument("column shape mismatch");
            for (std::size_t i = 0; i < rows; ++i) m.set(i, j, cols[j][i]);
        }
        return m;
    }

    static MatGF from_rows(int p, const std::vector<std::vector<int>>& rows) {
        const std::size_t c = rows.empty() ? 0 : rows.front().size();
        MatGF m(p, rows.size(), c);
        const auto& f = field(p);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != c) throw std::invalid_argument("ragged rows");
            for (std::size_t j = 0; j < c; ++j) m.set(i, j, f.reduce(rows[i][j]));
        }
        return m;
    }

    int p() const { return p_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Residue at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, Residue v) { entries_[i * cols_ + j] = field(p_).reduce(v); }
    const std::vector<Residue>& entries() const { return entries_; }

    VecGF column(std::size_t j) const {
        VecGF v(p_, std::vector<Residue>(rows_, 0));
        for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
        return v;
    }

    VecGF row(std::size_t i) const {
        return VecGF(p_, std::vector<Residue>(entries_.begin() + static_cast<long>(i * cols_),
                                              entries_.begin() + static_cast<long>((i + 1) * cols_)));
    }

    bool operator==(const MatGF&) const = default;

private:
    int p_ = 2;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Residue> entries_;
};

inline MatGF operator*(const MatGF& a, const MatGF& b) {
    if (a.p() != b.p() || a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
    const auto& f = field(a.p());
    MatGF out(a.p(), a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Residue aik = a.at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out.set(i, j, f.add(out.at(i, j), f.mul(aik, b.at(k, j))));
            }
        }
    }
    return out;
}

inline VecGF operator*(const MatGF& a, const VecGF& v) {
    if (a.p() != v.p || a.cols() != v.dim()) throw std::invalid_argument("matrix-vector shape mismatch");
    const auto& f = field(a.p());
    VecGF out(a.p(), std::vector<Residue>(a.rows(), 0));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Residue s = 0;
        for (std::size_t j = 0; j < a.cols(); ++j) s = f.add(s, f.mul(a.at(i, j), v[j]));
        out[i] = s;
    }
    return out;
}

struct RrefResult {
    MatGF matrix;
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
};

namespace detail {

inline RrefResult rref_binary(const MatGF& m) {
    const std::size_t words = (m.cols() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> rows(m.rows(), std::vector<std::uint64_t>(words, 0));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m.at(i, j)) rows[i][j / 64] |= std::uint64_t{1} << (j % 64);
        }
    }
    RrefResult out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        const std::uint64_t bit = std::uint64_t{1} << (c % 64);
        const std::size_t w = c / 64;
        std::size_t piv = r;
        while (piv < m.rows() && !(rows[piv][w] & bit)) ++piv;
        if (piv == m.rows()) continue;
        std::swap(rows[piv], rows[r]);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i != r && (rows[i][w] & bit)) {
                for (std::size_t k = 0; k < words; ++k) rows[i][k] ^= rows[r][k];
            }
        }
        out.pivots.push_back(c);
        ++r;
    }
    out.rank = r;
    out.matrix = MatGF(2, m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out.matrix.set(i, j, (rows[i][j / 64] >> (j % 64)) & 1U);
        }
    }
    return out;
}

inline RrefResult rref_general(const MatGF& m) {
    const auto& f = field(m.p());
    std::vector<std::vector<Residue>> rows(m.rows(), std::vector<Residue>(m.cols(), 0));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m.at(i, j);
    }
    RrefResult out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && rows[piv][c] == 0) ++piv;
        if (piv == m.rows()) continue;
        std::swap(rows[piv], rows[r]);
        const Residue s = f.inv(rows[r][c]);
        for (auto& x : rows[r]) x = f.mul(x, s);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const Residue factor = rows[i][c];
            if (i == r || factor == 0) continue;
            for (std::size_t k = 0; k < m.cols(); ++k) {
                rows[i][k] = f.sub(rows[i][k], f.mul(factor, rows[r][k]));
            }
        }
        out.pivots.push_back(c);
        ++r;
    }
    out.rank = r;
    out.matrix = MatGF(m.p(), m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) out.matrix.set(i, j, rows[i][j]);
    }
    return out;
}

}  // namespace detail

// GF(2) rows are packed into 64-bit words during elimination.
inline RrefResult rref(const MatGF& m) {
    return m.p() == 2 ? detail::rref_binary(m) : detail::rref_general(m);
}

inline std::size_t rank(const MatGF& m) { return rref(m).rank; }

// Coefficients c with basis_mat * c = v, or nullopt when v is outside the column span.
// Shape mismatches throw std::invalid_argument.
inline std::optional<VecGF> in_span(const MatGF& basis_mat, const VecGF& v) {
    if (basis_mat.p() != v.p) throw std::invalid_argument("in_span: prime mismatch");
    if (basis_mat.rows() != v.dim()) {
        throw std::invalid_argument("in_span: vector has dimension " + std::to_string(v.dim()) +
                                    ", basis has " + std::to_string(basis_mat.rows()) + " rows");
    }
    MatGF aug(basis_mat.p(), basis_mat.rows(), basis_mat.cols() + 1);
    for (std::size_t i = 0; i < basis_mat.rows(); ++i) {
        for (std::size_t j = 0; j < basis_mat.cols(); ++j) aug.set(i, j, basis_mat.at(i, j));
        aug.set(i, basis_mat.cols(), v[i]);
    }
    const auto red = rref(aug);
    VecGF coeffs(v.p, std::vector<Residue>(basis_mat.cols(), 0));
    for (std::size_t r = 0; r < red.pivots.size(); ++r) {
        if (red.pivots[r] == basis_mat.cols()) return std::nullopt;
        coeffs[red.pivots[r]] = red.matrix.at(r, basis_mat.cols());
    }
    return coeffs;
}

// Inverse of a square matrix, nullopt if singular.
inline std::optional<MatGF> inverse(const MatGF& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: matrix not square");
    const std::size_t n = m.rows();
    MatGF aug(m.p(), n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.set(i, j, m.at(i, j));
        aug.set(i, n + i, 1);
    }
    const auto red = rref(aug);
    if (red.rank < n || (n > 0 && red.pivots[n - 1] != n - 1)) return std::nullopt;
    MatGF inv(m.p(), n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) inv.set(i, j, red.matrix.at(i, n + j));
    }
    return inv;
}

// Unique scalar multiple whose first nonzero coordinate is 1.
inline VecGF canonical_point(const VecGF& v) {
    const auto& f = field(v.p);
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (v[i] != 0) return scale(v, f.inv(v[i]));
    }
    throw std::invalid_argument("canonical_point: zero vector");
}

inline bool parallel(const VecGF& a, const VecGF& b) {
    if (a.is_zero() || b.is_zero()) return false;
    return canonical_point(a) == canonical_point(b);
}

inline std::uint64_t projective_point_count(int dim, int p) {
    std::uint64_t total = 1;
    for (int i = 0; i < dim; ++i) total *= static_cast<std::uint64_t>(p);
    return (total - 1) / static_cast<std::uint64_t>(p - 1);
}

// Canonical nonzero vectors of GF(p)^dim in counting order (coordinate 0 is
// the least significant digit). Used both for projective points and for
// hyperplane functionals.
class ProjectivePoints {
public:
    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = VecGF;
        using difference_type = std::ptrdiff_t;
        using pointer = const VecGF*;
        using reference = const VecGF&;

        iterator() = default;
        iterator(int dim, int p, bool at_end) : p_(p), done_(at_end), cur_(p, std::vector<Residue>(dim, 0)) {
            if (!done_) {
                cur_[0] = 1;
            }
        }

        reference operator*() const { return cur_; }
        pointer operator->() const { return &cur_; }
        iterator& operator++() {
            do {
                if (!increment()) {
                    done_ = true;
                    return *this;
                }
            } while (!canonical());
            return *this;
        }
        void operator++(int) { ++*this; }
        bool operator==(const iterator& o) const { return done_ == o.done_ && (done_ || cur_ == o.cur_); }

    private:
        bool increment() {
            for (auto& d : cur_.coords) {
                if (++d < p_) return true;
                d = 0;
            }
            return false;
        }
        bool canonical() const {
            for (auto d : cur_.coords) {
                if (d != 0) return d == 1;
            }
            return false;
        }

        int p_ = 2;
        bool done_ = true;
        VecGF cur_;
    };

    ProjectivePoints(int dim, int p) : dim_(dim), p_(p) {
        field(p);
        if (dim < 1 || dim > kMaxDim) {
            throw std::invalid_argument("dimension " + std::to_string(dim) + " outside 1.." + std::to_string(kMaxDim));
        }
    }

    iterator begin() const { return iterator(dim_, p_, false); }
    iterator end() const { return iterator(dim_, p_, true); }
    std::uint64_t size() const { return projective_point_count(dim_, p_); }

private:
    int dim_;
    int p_;
};

// One canonical functional per hyperplane of GF(p)^dim.
inline ProjectivePoints hyperplanes_of(int dim, int p) { return ProjectivePoints(dim, p); }

using Packed = std::array<Residue, kMaxDim>;

inline Packed pack(const VecGF& v) {
    if (v.dim() > kMaxDim) throw std::invalid_argument("vector dimension exceeds " + std::to_string(kMaxDim));
    Packed out{};
    for (std::size_t i = 0; i < v.dim(); ++i) out[i] = v[i];
    return out;
}

inline std::uint32_t pack_bits(const VecGF& v) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (v[i] & 1U) m |= std::uint32_t{1} << i;
    }
    return m;
}

// Incrementally built echelon basis of a subspace of GF(p)^dim. Each stored
// row has its pivot (first nonzero coordinate) equal to 1. For p = 2 rows are
// single machine words.
class Span {
public:
    Span(int p, int dim) : f_(&field(p)), dim_(dim) {}

    int p() const { return f_->p(); }
    int dim() const { return dim_; }
    int rank() const { return rank_; }

    bool insert_bits(std::uint32_t v) {
        v = reduce_bits(v);
        if (v == 0) return false;
        const int piv = std::countr_zero(v);
        bits_[static_cast<std::size_t>(piv)] = v;
        pivot_mask_ |= std::uint32_t{1} << piv;
        ++rank_;
        return true;
    }
    bool contains_bits(std::uint32_t v) const { return reduce_bits(v) == 0; }
    std::uint32_t reduce_bits(std::uint32_t v) const {
        std::uint32_t pend = pivot_mask_;
        while (pend) {
            const int j = std::countr_zero(pend);
            pend &= pend - 1;
            if ((v >> j) & 1U) v ^= bits_[static_cast<std::size_t>(j)];
        }
        return v;
    }

    bool insert(const Packed& v) {
        if (f_->p() == 2) return insert_bits(to_bits(v));
        Packed r = reduce(v);
        int piv = first_nonzero(r);
        if (piv < 0) return false;
        const Residue s = f_->inv(r[static_cast<std::size_t>(piv)]);
        for (int i = piv; i < dim_; ++i) r[static_cast<std::size_t>(i)] = f_->mul(r[static_cast<std::size_t>(i)], s);
        rows_[static_cast<std::size_t>(piv)] = r;
        pivot_mask_ |= std::uint32_t{1} << piv;
        ++rank_;
        return true;
    }
    bool contains(const Packed& v) const {
        if (f_->p() == 2) return contains_bits(to_bits(v));
        return first_nonzero(reduce(v)) < 0;
    }

    // Linear map whose kernel is this span; result is zero at every pivot position.
    Packed reduce(Packed v) const {
        if (f_->p() == 2) {
            const std::uint32_t r = reduce_bits(to_bits(v));
            Packed out{};
            for (int i = 0; i < dim_; ++i) out[static_cast<std::size_t>(i)] = (r >> i) & 1U;
            return out;
        }
        std::uint32_t pend = pivot_mask_;
        while (pend) {
            const int j = std::countr_zero(pend);
            pend &= pend - 1;
            const Residue c = v[static_cast<std::size_t>(j)];
            if (c == 0) continue;
            const auto& row = rows_[static_cast<std::size_t>(j)];
            for (int i = j; i < dim_; ++i) {
                v[static_cast<std::size_t>(i)] = f_->sub(v[static_cast<std::size_t>(i)], f_->mul(c, row[static_cast<std::size_t>(i)]));
            }
        }
        return v;
    }

    std::uint32_t pivot_mask() const { return pivot_mask_; }

private:
    static std::uint32_t to_bits(const Packed& v) {
        std::uint32_t m = 0;
        for (std::size_t i = 0; i < kMaxDim; ++i) {
            if (v[i]) m |= std::uint32_t{1} << i;
        }
        return m;
    }
    int first_nonzero(const Packed& v) const {
        for (int i = 0; i < dim_; ++i) {
            if (v[static_cast<std::size_t>(i)] != 0) return i;
        }
        return -1;
    }

    const FieldPrime* f_;
    int dim_;
    int rank_ = 0;
    std::uint32_t pivot_mask_ = 0;
    std::array<std::uint32_t, kMaxDim> bits_{};
    std::array<Packed, kMaxDim> rows_{};
};

}  // namespace flatforge
